#include "holoquilt/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <ostream>
#include <thread>

#include "holoquilt/error.hpp"

namespace holoquilt {

namespace fs = std::filesystem;

namespace {

const char* StageTitle(Stage stage) {
  switch (stage) {
    case Stage::kRead: return "Reading files";
    case Stage::kProcessing: return "Processing step";
    case Stage::kWrite: return "Writing file";
  }
  return "";
}

std::string FrameName(std::size_t index) {
  char name[32];
  std::snprintf(name, sizeof(name), "%06zu.png", index);
  return name;
}

}  // namespace

TimingReport StageTimer::Stop(Stage stage) const {
  const std::clock_t cpu_end = std::clock();
  const auto wall_end = std::chrono::steady_clock::now();
  TimingReport r;
  r.stage = stage;
  r.cpu_seconds = std::max(0.0, static_cast<double>(cpu_end - cpu_start_) / CLOCKS_PER_SEC);
  r.wall_seconds = std::chrono::duration<double>(wall_end - wall_start_).count();
  return r;
}

std::string FormatTiming(const TimingReport& report) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%s\nElapsed time (cpu time): %.6f s\nElapsed time (wall clock): %.6f s\n",
                StageTitle(report.stage), report.cpu_seconds, report.wall_seconds);
  return buf;
}

std::vector<fs::path> ListPngs(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::kFileNotFound, dir.string() + " is not a directory",
                dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

std::vector<Image> ViewsForQuilt(const Image& left, const Image& right, int n,
                                 const MorphParams& params) {
  if (n == 1) return {left};
  return GenerateViews(left, right, n, params);
}

FrameResult ProcessFrame(const Image& left, const Image& right, const LutMap& lut,
                         const QuiltLayout& layout, const MorphParams& params,
                         int proc_width, int proc_height) {
  if (!(lut.layout() == layout)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "lookup table was built for a different quilt layout");
  }
  if (proc_width != layout.view_width || proc_height != layout.view_height) {
    throw Error(ErrorKind::kDimensionMismatch,
                "processing size " + std::to_string(proc_width) + "x" +
                    std::to_string(proc_height) + " differs from the quilt view size " +
                    std::to_string(layout.view_width) + "x" +
                    std::to_string(layout.view_height));
  }
  StageTimer timer;
  const Image l = Resize(left, proc_width, proc_height);
  const Image r = Resize(right, proc_width, proc_height);
  Image quilt = AssembleQuilt(ViewsForQuilt(l, r, layout.total_views(), params), layout);
  Image native = ApplyLut(lut, quilt);
  return {std::move(native), std::move(quilt), {timer.Stop(Stage::kProcessing)}};
}

FrameSource FrameSource::SideBySide(const fs::path& dir) {
  FrameSource src;
  src.primary_ = ListPngs(dir);
  return src;
}

FrameSource FrameSource::Dual(const fs::path& left_dir, const fs::path& right_dir) {
  FrameSource src;
  src.primary_ = ListPngs(left_dir);
  src.secondary_ = ListPngs(right_dir);
  if (src.primary_.size() != src.secondary_.size()) {
    throw Error(ErrorKind::kCountMismatch,
                "left stream has " + std::to_string(src.primary_.size()) +
                    " frames, right stream has " +
                    std::to_string(src.secondary_.size()));
  }
  return src;
}

std::optional<StereoFrame> FrameSource::Next() {
  if (cursor_ >= primary_.size()) return std::nullopt;
  const std::size_t i = cursor_++;
  if (secondary_.empty()) {
    auto [left, right] = SplitSideBySide(LoadPng(primary_[i]));
    return StereoFrame{std::move(left), std::move(right)};
  }
  Image left = LoadPng(primary_[i]);
  Image right = LoadPng(secondary_[i]);
  if (!left.SameSize(right)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "frame " + std::to_string(i) + ": left and right sizes differ");
  }
  return StereoFrame{std::move(left), std::move(right)};
}

FrameSource OpenFrameSource(const StreamConfig& config, const fs::path& frames_root) {
  auto device_dir = [&](int dev) { return frames_root / ("dev" + std::to_string(dev)); };
  if (const auto* file = std::get_if<FileSource>(&config.source)) {
    fs::path p = fs::path(file->path);
    if (p.is_relative()) p = frames_root / p;
    std::error_code ec;
    if (!fs::is_directory(p, ec)) {
      fs::path stem_dir = p;
      stem_dir.replace_extension();
      if (fs::is_directory(stem_dir, ec)) p = stem_dir;
    }
    return FrameSource::SideBySide(p);
  }
  if (const auto* single = std::get_if<SingleDevice>(&config.source)) {
    return FrameSource::SideBySide(device_dir(single->dev));
  }
  const auto& dual = std::get<DualDevice>(config.source);
  return FrameSource::Dual(device_dir(dual.dev0), device_dir(dual.dev1));
}

StreamSummary RunStream(const StreamConfig& config, FrameSource& source,
                        const LutMap& lut, const QuiltLayout& layout,
                        const MorphParams& params, const fs::path& out_dir,
                        const StreamOptions& options) {
  if (source.size() == 0) {
    throw Error(ErrorKind::kEmptySource, "frame source holds no frames");
  }
  if (lut.native().width != config.native_width ||
      lut.native().height != config.native_height) {
    throw Error(ErrorKind::kDimensionMismatch,
                "map produces " + std::to_string(lut.native().width) + "x" +
                    std::to_string(lut.native().height) + " native frames, config asks for " +
                    std::to_string(config.native_width) + "x" +
                    std::to_string(config.native_height));
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (!fs::is_directory(out_dir, ec)) {
    throw Error(ErrorKind::kIoFailure, "cannot create output directory " + out_dir.string(),
                out_dir.string());
  }

  const auto period = std::chrono::duration<double>(1.0 / config.fps);
  StreamSummary summary;
  double total_wall = 0.0;
  auto log = [&](const TimingReport& r) {
    if (options.log != nullptr) *options.log << FormatTiming(r);
  };
  auto fail = [&](const Error& e) {
    return Error(ErrorKind::kIoFailure,
                 std::string(e.what()) + " (aborted after " +
                     std::to_string(summary.frames) + " frames)",
                 std::to_string(summary.frames));
  };

  while (true) {
    const auto frame_start = std::chrono::steady_clock::now();
    StageTimer timer;
    std::optional<StereoFrame> frame;
    try {
      frame = source.Next();
    } catch (const Error& e) {
      throw fail(e);
    }
    if (!frame) break;
    const TimingReport read = timer.Stop(Stage::kRead);

    FrameResult result =
        ProcessFrame(frame->left, frame->right, lut, layout, params,
                     config.processing_width, config.processing_height);

    timer.Restart();
    try {
      SavePng(result.native, out_dir / FrameName(summary.frames));
    } catch (const Error& e) {
      throw fail(e);
    }
    const TimingReport write = timer.Stop(Stage::kWrite);

    if (options.log != nullptr) {
      *options.log << "Frame " << summary.frames << "\n";
    }
    log(read);
    for (const auto& t : result.timings) log(t);
    log(write);

    const auto busy = std::chrono::steady_clock::now() - frame_start;
    const double wall = std::chrono::duration<double>(busy).count();
    ++summary.frames;
    total_wall += wall;
    summary.max_wall_seconds = std::max(summary.max_wall_seconds, wall);
    if (options.pace && busy < period) {
      std::this_thread::sleep_for(period - busy);
    }
  }
  summary.mean_wall_seconds = total_wall / static_cast<double>(summary.frames);
  return summary;
}

std::vector<BenchRow> BenchmarkViews(const Image& left, const Image& right,
                                     const MorphParams& params,
                                     const std::vector<int>& view_counts,
                                     int repeats) {
  if (view_counts.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no view counts to benchmark");
  }
  if (repeats < 1) throw Error(ErrorKind::kInvalidArgument, "repeats must be >= 1");
  std::vector<BenchRow> rows;
  for (int n : view_counts) {
    if (n < 2) {
      throw Error(ErrorKind::kInvalidArgument,
                  "benchmark view counts must be >= 2, got " + std::to_string(n));
    }
    const QuiltLayout layout(1, n, left.width(), left.height());
    BenchRow best{n, 0.0, 0.0};
    for (int rep = 0; rep < repeats; ++rep) {
      StageTimer timer;
      const Image quilt = AssembleQuilt(GenerateViews(left, right, n, params), layout);
      const TimingReport t = timer.Stop(Stage::kProcessing);
      if (rep == 0 || t.wall_seconds < best.wall_seconds) {
        best.cpu_seconds = t.cpu_seconds;
        best.wall_seconds = t.wall_seconds;
      }
    }
    rows.push_back(best);
  }
  return rows;
}

void WriteBenchCsv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "views,cpu_s,wall_s\n";
  char line[96];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%d,%.6f,%.6f\n", r.views, r.cpu_seconds,
                  r.wall_seconds);
    out << line;
  }
}

}  // namespace holoquilt
