#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "holoquilt/config.hpp"
#include "holoquilt/image.hpp"
#include "holoquilt/lenmap.hpp"
#include "holoquilt/morph.hpp"
#include "holoquilt/quilt.hpp"

namespace holoquilt {

enum class Stage { kRead, kProcessing, kWrite };

struct TimingReport {
  Stage stage = Stage::kProcessing;
  double cpu_seconds = 0.0;
  double wall_seconds = 0.0;
};

// Measures process CPU time and wall time from construction (or Restart).
class StageTimer {
 public:
  StageTimer() { Restart(); }
  void Restart() {
    cpu_start_ = std::clock();
    wall_start_ = std::chrono::steady_clock::now();
  }
  TimingReport Stop(Stage stage) const;

 private:
  std::clock_t cpu_start_;
  std::chrono::steady_clock::time_point wall_start_;
};

// The three-line block printed per stage, e.g.
//   Processing step
//   Elapsed time (cpu time): 7.657460 s
//   Elapsed time (wall clock): 1.982400 s
std::string FormatTiming(const TimingReport& report);

// PNG files in `dir` (extension match is case-insensitive), sorted by name.
std::vector<std::filesystem::path> ListPngs(const std::filesystem::path& dir);

// n views for a quilt: GenerateViews for n >= 2, the left image alone for a
// single-view quilt.
std::vector<Image> ViewsForQuilt(const Image& left, const Image& right, int n,
                                 const MorphParams& params);

struct FrameResult {
  Image native;
  Image quilt;
  std::vector<TimingReport> timings;
};

// resize -> morph -> quilt -> LUT. `proc_width` x `proc_height` must equal the
// layout's view size and `layout` must equal the table's layout.
FrameResult ProcessFrame(const Image& left, const Image& right, const LutMap& lut,
                         const QuiltLayout& layout, const MorphParams& params,
                         int proc_width, int proc_height);

struct StereoFrame {
  Image left;
  Image right;
};

// Ordered stereo frames read from PNG directories: either one directory of
// side-by-side L|R frames, or separate left and right directories.
class FrameSource {
 public:
  static FrameSource SideBySide(const std::filesystem::path& dir);
  // Throws kCountMismatch when the two directories differ in length.
  static FrameSource Dual(const std::filesystem::path& left_dir,
                          const std::filesystem::path& right_dir);

  std::size_t size() const { return primary_.size(); }
  std::size_t cursor() const { return cursor_; }
  // Loads the next frame, or nullopt at the end.
  std::optional<StereoFrame> Next();

 private:
  std::vector<std::filesystem::path> primary_;
  std::vector<std::filesystem::path> secondary_;  // empty for side-by-side
  std::size_t cursor_ = 0;
};

// Maps a config's source onto frame directories below `frames_root`:
//   file="x.mp4"      -> x.mp4 if it is a directory, else x/ (side-by-side)
//   devNumber=N       -> devN/ (side-by-side)
//   camera0/camera1   -> devN0/ (left) and devN1/ (right)
FrameSource OpenFrameSource(const StreamConfig& config,
                            const std::filesystem::path& frames_root);

struct StreamOptions {
  std::ostream* log = nullptr;  // timing blocks; nullptr disables
  bool pace = true;             // sleep to honour config.fps
};

struct StreamSummary {
  std::size_t frames = 0;
  double mean_wall_seconds = 0.0;
  double max_wall_seconds = 0.0;
};

// Processes every frame in order and writes out_dir/000000.png, 000001.png...
// Frames are never dropped; when processing outpaces config.fps the loop
// sleeps out the rest of the frame period.
StreamSummary RunStream(const StreamConfig& config, FrameSource& source,
                        const LutMap& lut, const QuiltLayout& layout,
                        const MorphParams& params,
                        const std::filesystem::path& out_dir,
                        const StreamOptions& options = {});

struct BenchRow {
  int views = 0;
  double cpu_seconds = 0.0;
  double wall_seconds = 0.0;
};

// Times GenerateViews + AssembleQuilt (one column of n views) for each n.
// With repeats > 1 the fastest wall time is kept.
std::vector<BenchRow> BenchmarkViews(const Image& left, const Image& right,
                                     const MorphParams& params,
                                     const std::vector<int>& view_counts,
                                     int repeats = 1);

// "views,cpu_s,wall_s" followed by one line per row.
void WriteBenchCsv(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace holoquilt
