#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "holoquilt/cli.hpp"
#include "holoquilt/lenmap.hpp"
#include "holoquilt/morph.hpp"
#include "holoquilt/quilt.hpp"
#include "test_support.hpp"

using namespace holoquilt;
using namespace holoquilt::testing;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run Cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = RunCli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

// A stereo pair and a small-panel calibration under one temp directory.
struct Fixture {
  TempDir dir;
  std::string left = (dir / "left.png").string();
  std::string right = (dir / "right.png").string();
  std::string calibration = (dir / "visual.json").string();

  Fixture() {
    const Image scene = TexturedImage(96, 48, 21);
    SavePng(scene, left);
    SavePng(ShiftWrap(scene, 3, 0), right);
    Calibration cal = DeviceCalibration();
    cal.screen_w = 160;
    cal.screen_h = 100;
    WriteText(calibration, SerializeCalibration(cal));
  }

  std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("help exits 0") {
  const Run top = Cli({"--help"});
  CHECK(top.code == kExitOk);
  CHECK(top.out.find("quilt") != std::string::npos);
  CHECK(top.out.find("images2native") != std::string::npos);
  for (const char* cmd : {"quilt", "map", "native", "images2native", "display", "stream", "bench"}) {
    CAPTURE(cmd);
    const Run r = Cli({cmd, "--help"});
    CHECK(r.code == kExitOk);
    CHECK_FALSE(r.out.empty());
  }
  CHECK(Cli({"quilt", "--help"}).out.find("--mask") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(Cli({}).code == kExitUsage);
  CHECK(Cli({"frobnicate"}).code == kExitUsage);
  const Run r = Cli({"quilt", "-l", "a.png", "-m", "9x5", "out.png"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("right") != std::string::npos);
  CHECK(Cli({"bench", "-l", "a", "-r", "b", "--from", "1"}).code == kExitUsage);
}

TEST_CASE("runtime errors exit 1 with the error kind") {
  Fixture f;
  WriteText(f("broken.json"), "{\"pitch\": ");
  const Run bad_json = Cli({"map", "-r", "16x32", "-q", "4x2", "-m", f("x.map"), f("broken.json")});
  CHECK(bad_json.code == kExitFailure);
  CHECK(bad_json.err.find("malformed-json") != std::string::npos);

  const Run missing = Cli({"quilt", "-l", f("nope.png"), "-r", f.right, "-m", "2x1", f("q.png")});
  CHECK(missing.code == kExitFailure);
  CHECK(missing.err.find("file-not-found") != std::string::npos);

  const Run bad_mask = Cli({"quilt", "-l", f.left, "-r", f.right, "-m", "9by5", f("q.png")});
  CHECK(bad_mask.code == kExitFailure);
}

TEST_CASE("quilt, map and native chained like the command-line workflow") {
  Fixture f;
  const Run q = Cli({"quilt", "-l", f.left, "-r", f.right, "-m", "4x2", "-t", f("quilt.png")});
  REQUIRE(q.code == kExitOk);
  CHECK(q.err.find("Reading files\nElapsed time (cpu time): ") != std::string::npos);
  CHECK(q.err.find("Processing step\nElapsed time (cpu time): ") != std::string::npos);
  CHECK(q.err.find("Writing file\nElapsed time (cpu time): ") != std::string::npos);
  const Image quilt = LoadPng(f("quilt.png"));
  CHECK(quilt.width() == 4 * 96);
  CHECK(quilt.height() == 2 * 48);
  const auto expected =
      AssembleQuilt(GenerateViews(LoadPng(f.left), LoadPng(f.right), 8, MorphParams{}),
                    QuiltLayout(4, 2, 96, 48));
  CHECK(quilt == expected);

  const Run deep = Cli({"quilt", "-l", f.left, "-r", f.right, "-m", "4x2", "-d", "-s", "2", "-t",
                        f("deep.png")});
  CHECK(deep.code == kExitOk);
  CHECK(deep.err.find("Deepflow mode enabled") != std::string::npos);

  REQUIRE(Cli({"map", "-r", "48x96", "-q", "4x2", "-m", f("panel.map"), f.calibration}).code ==
          kExitOk);
  const LutMap lut = LoadMap(f("panel.map"));
  CHECK(lut.native() == NativeSize{160, 100});
  CHECK(lut.layout() == QuiltLayout(4, 2, 96, 48));

  REQUIRE(Cli({"native", "-q", "4x2", "-r", "48x96", "-a", f("panel.map"), f("quilt.png"),
               f("native.png")})
              .code == kExitOk);
  CHECK(LoadPng(f("native.png")) == ApplyLut(lut, quilt));

  const Run mismatch = Cli({"native", "-q", "9x5", "-r", "48x96", "-a", f("panel.map"),
                            f("quilt.png"), f("n2.png")});
  CHECK(mismatch.code == kExitFailure);
  CHECK(mismatch.err.find("flags") != std::string::npos);
  CHECK(mismatch.err.find("map") != std::string::npos);
  CHECK(mismatch.err.find("image") != std::string::npos);
}

TEST_CASE("display equals quilt followed by native") {
  Fixture f;
  REQUIRE(Cli({"map", "-r", "48x96", "-q", "4x2", "-m", f("panel.map"), f.calibration}).code ==
          kExitOk);
  REQUIRE(Cli({"quilt", "-l", f.left, "-r", f.right, "-m", "4x2", f("quilt.png")}).code == kExitOk);
  REQUIRE(Cli({"native", "-q", "4x2", "-r", "48x96", "-a", f("panel.map"), f("quilt.png"),
               f("native.png")})
              .code == kExitOk);
  const Run d = Cli({"display", "-l", f.left, "-r", f.right, "-m", f("panel.map"), "-q", "4x2",
                     "--screen", "1", "-o", f("display.png")});
  REQUIRE(d.code == kExitOk);
  CHECK(d.err.find("headless build: --screen ignored") != std::string::npos);
  CHECK(LoadPng(f("display.png")) == LoadPng(f("native.png")));
}

TEST_CASE("images2native") {
  Fixture f;
  REQUIRE(Cli({"map", "-r", "10x16", "-q", "9x5", "-m", f("v.map"), f.calibration}).code ==
          kExitOk);
  std::filesystem::create_directories(f.dir / "views");
  std::vector<Image> views;
  for (int k = 0; k < 45; ++k) {
    views.push_back(RandomImage(16, 10, k));
    char name[32];
    std::snprintf(name, sizeof name, "view_%02d.png", k);
    if (k < 44) SavePng(views.back(), f.dir / "views" / name);
  }
  const Run short_dir =
      Cli({"images2native", "-q", "9x5", "-m", f("v.map"), f("views"), f("n.png")});
  CHECK(short_dir.code == kExitFailure);
  CHECK(short_dir.err.find("expected 45 views, found 44") != std::string::npos);

  SavePng(views[44], f.dir / "views" / "view_44.png");
  REQUIRE(Cli({"images2native", "-q", "9x5", "-m", f("v.map"), f("views"), f("n.png")}).code ==
          kExitOk);
  const LutMap lut = LoadMap(f("v.map"));
  CHECK(LoadPng(f("n.png")) == ApplyLut(lut, AssembleQuilt(views, lut.layout())));

  SavePng(RandomImage(17, 10, 1), f.dir / "views" / "view_44.png");
  const Run mixed = Cli({"images2native", "-q", "9x5", "-m", f("v.map"), f("views"), f("n.png")});
  CHECK(mixed.code == kExitFailure);
  CHECK(mixed.err.find("mixed view sizes") != std::string::npos);
}

TEST_CASE("stream subcommand") {
  Fixture f;
  REQUIRE(Cli({"map", "-r", "16x32", "-q", "4x2", "-m", f("s.map"), f.calibration}).code ==
          kExitOk);
  std::filesystem::create_directories(f.dir / "dev2");
  const Image scene = TexturedImage(64, 32, 4);
  for (int i = 0; i < 2; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%03d.png", i);
    SavePng(ConcatHorizontal(ShiftWrap(scene, i, 0), ShiftWrap(scene, i + 2, 0)),
            f.dir / "dev2" / name);
  }
  std::string ini = kSingleCamIni;
  ini.replace(ini.find("width=256"), 9, "width=32");
  ini.replace(ini.find("height=128"), 10, "height=16");
  ini.replace(ini.find("width=2560"), 10, "width=160");
  ini.replace(ini.find("height=1600"), 11, "height=100");
  ini += "gain=3\n";
  WriteText(f("cam.ini"), ini);
  const Run r = Cli({"stream", "-c", f("cam.ini"), "-m", f("s.map"), "-q", "4x2", "-o", f("out"),
                     "--no-pace", "--screen", "0"});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("frames=2") != std::string::npos);
  CHECK(r.err.find("gain") != std::string::npos);
  CHECK(r.err.find("Frame 1\n") != std::string::npos);
  CHECK(std::filesystem::exists(f.dir / "out" / "000001.png"));
}

TEST_CASE("bench subcommand writes csv") {
  Fixture f;
  const Run r = Cli({"bench", "-l", f.left, "-r", f.right, "--from", "2", "--to", "4",
                     "--resolution", "24x48"});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "views,cpu_s,wall_s");
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.rfind(std::to_string(2 + rows) + ",", 0) == 0);
    ++rows;
  }
  CHECK(rows == 3);
}
