#include "holoquilt/cli.hpp"

#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "holoquilt/calibration.hpp"
#include "holoquilt/config.hpp"
#include "holoquilt/error.hpp"
#include "holoquilt/lenmap.hpp"
#include "holoquilt/morph.hpp"
#include "holoquilt/pipeline.hpp"
#include "holoquilt/quilt.hpp"

namespace holoquilt {

namespace fs = std::filesystem;

namespace {

struct MorphFlags {
  bool deep = false;
  int subsampling = 1;
  int block_radius = MorphParams{}.block_radius;
  int max_displacement = MorphParams{}.max_displacement;
  double smoothing = MorphParams{}.smoothing_weight;
  int iterations = MorphParams{}.iterations;

  void Register(CLI::App* app) {
    app->add_flag("-d,--deep", deep, "Deepflow mode (variational optical flow)");
    app->add_option("-s,--subsampling", subsampling, "Subsampling factor to speed up morphing")
        ->check(CLI::PositiveNumber);
    app->add_option("--block-radius", block_radius, "Disparity block half-window (px)")
        ->check(CLI::PositiveNumber);
    app->add_option("--max-disp", max_displacement, "Maximum displacement (px)")
        ->check(CLI::PositiveNumber);
    app->add_option("--smoothing", smoothing, "Flow smoothing weight")
        ->check(CLI::PositiveNumber);
    app->add_option("--iterations", iterations, "Flow relaxation sweeps per level")
        ->check(CLI::PositiveNumber);
  }

  MorphParams Params() const {
    MorphParams p;
    p.method = deep ? MorphMethod::kFlow : MorphMethod::kDisparity;
    p.subsampling = subsampling;
    p.block_radius = block_radius;
    p.max_displacement = max_displacement;
    p.smoothing_weight = smoothing;
    p.iterations = iterations;
    p.Validate();
    return p;
  }
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool timing = false;

  void Report(const TimingReport& r) const {
    if (timing) err << FormatTiming(r);
  }
};

std::string Dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

std::string LayoutText(const QuiltLayout& l) {
  return "grid " + Dims(l.cols, l.rows) + " of " + Dims(l.view_width, l.view_height) +
         " views";
}

void RequireSameGrid(QuiltGrid flag, const LutMap& lut) {
  if (!(flag == lut.layout().grid())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "quilt mask " + Dims(flag.cols, flag.rows) + " does not match map " +
                    LayoutText(lut.layout()));
  }
}

// ---- quilt ---------------------------------------------------------------

struct QuiltCmd {
  std::string left, right, mask, output;
  MorphFlags morph;
  bool timing = false;

  void Register(CLI::App* app) {
    app->add_option("-l,--left", left, "Input left image")->required();
    app->add_option("-r,--right", right, "Input right image")->required();
    app->add_option("-m,--mask", mask, "Mask for quilt, COLSxROWS (e.g. 9x5)")->required();
    morph.Register(app);
    app->add_flag("-t,--time", timing, "Show elapsed processing time");
    app->add_option("QUILT_FILE", output, "Output quilt PNG")->required();
  }

  int Run(Context& ctx) const {
    ctx.timing = timing;
    const QuiltGrid grid = ParseGrid(mask);
    const MorphParams params = morph.Params();

    if (timing) ctx.err << "Reading files\n";
    StageTimer timer;
    const Image l = LoadPng(left);
    const Image r = LoadPng(right);
    ctx.Report(timer.Stop(Stage::kRead));

    if (timing && morph.deep) ctx.err << "Deepflow mode enabled\n";
    timer.Restart();
    const QuiltLayout layout(grid, l.width(), l.height());
    const Image quilt =
        AssembleQuilt(ViewsForQuilt(l, r, layout.total_views(), params), layout);
    ctx.Report(timer.Stop(Stage::kProcessing));

    timer.Restart();
    SavePng(quilt, output);
    ctx.Report(timer.Stop(Stage::kWrite));
    return kExitOk;
  }
};

// ---- map -----------------------------------------------------------------

struct MapCmd {
  std::string resolution, quilt, map, calibration;
  bool timing = false;

  void Register(CLI::App* app) {
    app->add_option("-r,--resolution", resolution, "Per-view resolution, ROWSxCOLS")
        ->required();
    app->add_option("-q,--quilt", quilt, "Mask for quilt, COLSxROWS")->required();
    app->add_option("-m,--map", map, "Save map to file")->required();
    app->add_flag("-t,--time", timing, "Show elapsed processing time");
    app->add_option("CALIBRATION_FILE", calibration, "Display calibration JSON")
        ->required();
  }

  int Run(Context& ctx) const {
    ctx.timing = timing;
    const ViewSize view = ParseResolution(resolution);
    const QuiltGrid grid = ParseGrid(quilt);
    const Calibration cal = LoadCalibration(calibration);
    StageTimer timer;
    const QuiltLayout layout(grid, view.width, view.height);
    const NativeSize native{static_cast<int>(cal.screen_w), static_cast<int>(cal.screen_h)};
    const LutMap lut = BuildLut(DeriveMappingParams(cal, grid), layout, native);
    ctx.Report(timer.Stop(Stage::kProcessing));
    timer.Restart();
    SaveMap(lut, map);
    ctx.Report(timer.Stop(Stage::kWrite));
    return kExitOk;
  }
};

// ---- native --------------------------------------------------------------

struct NativeCmd {
  std::string quilt_mask, resolution, map, quilt_file, native_file;
  bool timing = false;

  void Register(CLI::App* app) {
    app->add_option("-q,--quilt", quilt_mask, "Mask for quilt, COLSxROWS")->required();
    app->add_option("-r,--resolution", resolution, "Per-view resolution, ROWSxCOLS")
        ->required();
    app->add_option("-a,--apply", map, "Apply map to given image")->required();
    app->add_flag("-t,--time", timing, "Show elapsed processing time");
    app->add_option("INPUT_QUILT_FILE", quilt_file, "Quilt PNG")->required();
    app->add_option("NATIVE_FILE", native_file, "Output native PNG")->required();
  }

  int Run(Context& ctx) const {
    ctx.timing = timing;
    const ViewSize view = ParseResolution(resolution);
    const QuiltLayout flags(ParseGrid(quilt_mask), view.width, view.height);

    StageTimer timer;
    const LutMap lut = LoadMap(map);
    const Image quilt = LoadPng(quilt_file);
    ctx.Report(timer.Stop(Stage::kRead));

    const QuiltLayout& mapped = lut.layout();
    if (!(flags == mapped) || quilt.width() != mapped.quilt_width() ||
        quilt.height() != mapped.quilt_height()) {
      std::ostringstream msg;
      msg << "quilt geometry mismatch:\n"
          << "  flags: " << LayoutText(flags) << " -> quilt "
          << Dims(flags.quilt_width(), flags.quilt_height()) << "\n"
          << "  map:   " << LayoutText(mapped) << " -> quilt "
          << Dims(mapped.quilt_width(), mapped.quilt_height()) << "\n"
          << "  image: " << quilt_file << " is " << Dims(quilt.width(), quilt.height());
      throw Error(ErrorKind::kDimensionMismatch, msg.str());
    }

    timer.Restart();
    const Image native = ApplyLut(lut, quilt);
    ctx.Report(timer.Stop(Stage::kProcessing));
    timer.Restart();
    SavePng(native, native_file);
    ctx.Report(timer.Stop(Stage::kWrite));
    return kExitOk;
  }
};

// ---- images2native -------------------------------------------------------

struct ImagesToNativeCmd {
  std::string quilt_mask, map, dir, native_file;
  bool timing = false;

  void Register(CLI::App* app) {
    app->add_option("-q,--quilt", quilt_mask, "Mask for quilt, COLSxROWS")->required();
    app->add_option("-m,--map", map, "Path to the map file")->required();
    app->add_flag("-t,--time", timing, "Show elapsed processing time");
    app->add_option("DIR_PATH", dir, "Directory of sorted view PNGs")->required();
    app->add_option("NATIVE_FILE", native_file, "Output native PNG")->required();
  }

  int Run(Context& ctx) const {
    ctx.timing = timing;
    const QuiltGrid grid = ParseGrid(quilt_mask);
    StageTimer timer;
    const LutMap lut = LoadMap(map);
    RequireSameGrid(grid, lut);
    const auto files = ListPngs(dir);
    if (static_cast<int>(files.size()) != grid.total_views()) {
      throw Error(ErrorKind::kCountMismatch,
                  "expected " + std::to_string(grid.total_views()) + " views, found " +
                      std::to_string(files.size()));
    }
    std::vector<Image> views;
    views.reserve(files.size());
    for (const auto& f : files) {
      views.push_back(LoadPng(f));
      if (!views.back().SameSize(views.front())) {
        throw Error(ErrorKind::kDimensionMismatch,
                    "mixed view sizes: " + f.filename().string() + " is " +
                        Dims(views.back().width(), views.back().height()) + ", " +
                        files.front().filename().string() + " is " +
                        Dims(views.front().width(), views.front().height()));
      }
    }
    ctx.Report(timer.Stop(Stage::kRead));

    timer.Restart();
    const QuiltLayout layout(grid, views.front().width(), views.front().height());
    if (!(layout == lut.layout())) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "views form a " + LayoutText(layout) + ", map expects " +
                      LayoutText(lut.layout()));
    }
    const Image native = ApplyLut(lut, AssembleQuilt(views, layout));
    ctx.Report(timer.Stop(Stage::kProcessing));
    timer.Restart();
    SavePng(native, native_file);
    ctx.Report(timer.Stop(Stage::kWrite));
    return kExitOk;
  }
};

// ---- display -------------------------------------------------------------

struct DisplayCmd {
  std::string left, right, map, quilt_mask, output;
  MorphFlags morph;
  int screen = 0;
  bool timing = false;
  CLI::Option* screen_opt = nullptr;

  void Register(CLI::App* app) {
    app->add_option("-l,--left", left, "Input left image")->required();
    app->add_option("-r,--right", right, "Input right image")->required();
    app->add_option("-m,--map", map, "Map quilt to native")->required();
    app->add_option("-q,--quilt", quilt_mask, "Mask for quilt, COLSxROWS")->required();
    morph.Register(app);
    screen_opt = app->add_option("--screen", screen, "Screen number (ignored, headless)");
    app->add_option("-o,--output", output, "Output native PNG")->required();
    app->add_flag("-t,--time", timing, "Show elapsed processing time");
  }

  int Run(Context& ctx) const {
    ctx.timing = timing;
    if (screen_opt->count() > 0) ctx.err << "warning: headless build: --screen ignored\n";
    const QuiltGrid grid = ParseGrid(quilt_mask);
    const MorphParams params = morph.Params();

    StageTimer timer;
    const LutMap lut = LoadMap(map);
    RequireSameGrid(grid, lut);
    const Image l = LoadPng(left);
    const Image r = LoadPng(right);
    ctx.Report(timer.Stop(Stage::kRead));

    const QuiltLayout& layout = lut.layout();
    const FrameResult result =
        ProcessFrame(l, r, lut, layout, params, layout.view_width, layout.view_height);
    for (const auto& t : result.timings) ctx.Report(t);

    timer.Restart();
    SavePng(result.native, output);
    ctx.Report(timer.Stop(Stage::kWrite));
    return kExitOk;
  }
};

// ---- stream --------------------------------------------------------------

struct StreamCmd {
  std::string config, map, quilt_mask, output, frames_root;
  MorphFlags morph;
  int screen = 0;
  bool no_pace = false;
  CLI::Option* screen_opt = nullptr;

  void Register(CLI::App* app) {
    app->add_option("-c,--config", config, "Config file path (.ini)")->required();
    app->add_option("-m,--map", map, "Map quilt to native")->required();
    app->add_option("-q,--quilt", quilt_mask, "Mask for quilt, COLSxROWS")->required();
    morph.Register(app);
    screen_opt = app->add_option("--screen", screen, "Screen number (ignored, headless)");
    app->add_option("-o,--output", output, "Directory for numbered native PNGs")
        ->required();
    app->add_option("--frames-root", frames_root,
                    "Directory holding frame folders (default: config's directory)");
    app->add_flag("--no-pace", no_pace, "Do not sleep to honour the configured fps");
  }

  int Run(Context& ctx) const {
    if (screen_opt->count() > 0) ctx.err << "warning: headless build: --screen ignored\n";
    std::vector<std::string> warnings;
    const StreamConfig cfg = LoadStreamConfig(config, &warnings);
    for (const auto& w : warnings) ctx.err << "warning: " << w << "\n";
    const QuiltGrid grid = ParseGrid(quilt_mask);
    const MorphParams params = morph.Params();
    const LutMap lut = LoadMap(map);
    RequireSameGrid(grid, lut);

    const fs::path root =
        frames_root.empty() ? fs::absolute(config).parent_path() : fs::path(frames_root);
    FrameSource source = OpenFrameSource(cfg, root);
    StreamOptions options;
    options.log = &ctx.err;
    options.pace = !no_pace;
    const StreamSummary s =
        RunStream(cfg, source, lut, lut.layout(), params, output, options);
    char line[128];
    std::snprintf(line, sizeof(line),
                  "frames=%zu mean_wall=%.6f s max_wall=%.6f s\n", s.frames,
                  s.mean_wall_seconds, s.max_wall_seconds);
    ctx.err << line;
    return kExitOk;
  }
};

// ---- bench ---------------------------------------------------------------

struct BenchCmd {
  std::string left, right, resolution;
  MorphFlags morph;
  int from = 2, to = 48, step = 1, repeats = 1;

  void Register(CLI::App* app) {
    app->add_option("-l,--left", left, "Input left image")->required();
    app->add_option("-r,--right", right, "Input right image")->required();
    morph.Register(app);
    app->add_option("--resolution", resolution,
                    "Resize inputs to ROWSxCOLS before timing");
    app->add_option("--from", from, "First view count")->check(CLI::Range(2, 1 << 16));
    app->add_option("--to", to, "Last view count")->check(CLI::Range(2, 1 << 16));
    app->add_option("--step", step, "View count increment")->check(CLI::PositiveNumber);
    app->add_option("--repeats", repeats, "Runs per view count (fastest kept)")
        ->check(CLI::PositiveNumber);
  }

  int Run(Context& ctx) const {
    if (to < from) throw Error(ErrorKind::kInvalidArgument, "--to must be >= --from");
    const MorphParams params = morph.Params();
    Image l = LoadPng(left);
    Image r = LoadPng(right);
    if (!resolution.empty()) {
      const ViewSize v = ParseResolution(resolution);
      l = Resize(l, v.width, v.height);
      r = Resize(r, v.width, v.height);
    }
    std::vector<int> counts;
    for (int n = from; n <= to; n += step) counts.push_back(n);
    WriteBenchCsv(BenchmarkViews(l, r, params, counts, repeats), ctx.out);
    return kExitOk;
  }
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stereo pair -> multi-view quilt -> lenticular native image toolchain",
               "holoquilt"};
  app.require_subcommand(1);

  QuiltCmd quilt;
  MapCmd map;
  NativeCmd native;
  ImagesToNativeCmd images;
  DisplayCmd display;
  StreamCmd stream;
  BenchCmd bench;
  quilt.Register(app.add_subcommand("quilt", "Morph a stereo pair into a quilt"));
  map.Register(app.add_subcommand("map", "Build a .map lookup table from a calibration"));
  native.Register(app.add_subcommand("native", "Apply a .map to a quilt"));
  images.Register(
      app.add_subcommand("images2native", "Build a native image from a folder of views"));
  display.Register(app.add_subcommand(
      "display", "Stereo pair -> native image in one step (headless display)"));
  stream.Register(app.add_subcommand("stream", "Process a stereo frame sequence"));
  bench.Register(app.add_subcommand("bench", "Time view generation against view count"));

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("holoquilt");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  Context ctx{out, err};
  try {
    if (app.got_subcommand("quilt")) return quilt.Run(ctx);
    if (app.got_subcommand("map")) return map.Run(ctx);
    if (app.got_subcommand("native")) return native.Run(ctx);
    if (app.got_subcommand("images2native")) return images.Run(ctx);
    if (app.got_subcommand("display")) return display.Run(ctx);
    if (app.got_subcommand("stream")) return stream.Run(ctx);
    if (app.got_subcommand("bench")) return bench.Run(ctx);
  } catch (const Error& e) {
    err << "error [" << ToString(e.kind()) << "]: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace holoquilt
