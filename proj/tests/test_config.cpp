#include <string>

#include "doctest.h"
#include "holoquilt/config.hpp"
#include "holoquilt/error.hpp"
#include "test_support.hpp"

using namespace holoquilt;
using namespace holoquilt::testing;

namespace {

Error Caught(const std::string& text) {
  try {
    ParseStreamConfig(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a config error");
  return Error(ErrorKind::kInvalidArgument, "");
}

void CheckCommonFields(const StreamConfig& c) {
  CHECK(c.camera_width == 320);
  CHECK(c.camera_height == 180);
  CHECK(c.fps == 8);
  CHECK(c.processing_width == 256);
  CHECK(c.processing_height == 128);
  CHECK(c.native_width == 2560);
  CHECK(c.native_height == 1600);
}

}  // namespace

TEST_CASE("file source listing") {
  const StreamConfig c = ParseStreamConfig(kYoutubeIni);
  CheckCommonFields(c);
  REQUIRE(std::holds_alternative<FileSource>(c.source));
  CHECK(std::get<FileSource>(c.source).path == "video_rescaled.mp4");
}

TEST_CASE("single side-by-side camera listing") {
  const StreamConfig c = ParseStreamConfig(kSingleCamIni);
  CheckCommonFields(c);
  CHECK(c.source == StreamSource(SingleDevice{2}));
}

TEST_CASE("two camera listing") {
  const StreamConfig c = ParseStreamConfig(kTwoCamIni);
  CheckCommonFields(c);
  CHECK(c.source == StreamSource(DualDevice{2, 4}));
}

TEST_CASE("missing native section") {
  std::string text = kSingleCamIni;
  text.erase(text.find("[native]"));
  const Error e = Caught(text);
  CHECK(e.kind() == ErrorKind::kMissingSection);
  CHECK(e.detail() == "native");
}

TEST_CASE("missing field") {
  std::string text = kSingleCamIni;
  text.erase(text.find("fps=8\n"), 6);
  const Error e = Caught(text);
  CHECK(e.kind() == ErrorKind::kMissingField);
}

TEST_CASE("camera0 and camera1 conflict with a camera devNumber") {
  std::string text = kTwoCamIni;
  text.insert(text.find("width=320"), "devNumber=3\n");
  CHECK(Caught(text).kind() == ErrorKind::kConflictingSources);
}

TEST_CASE("only one of camera0 and camera1") {
  std::string text = kTwoCamIni;
  text.erase(text.find("[camera1]"), std::string("[camera1]\ndevNumber=4\n").size());
  CHECK_THROWS_AS(ParseStreamConfig(text), Error);
}

TEST_CASE("file source without a file key") {
  std::string text = kYoutubeIni;
  text.erase(text.find("file="), std::string("file=\"video_rescaled.mp4\"\n").size());
  CHECK_THROWS_AS(ParseStreamConfig(text), Error);
}

TEST_CASE("syntax errors carry the line number") {
  std::string text = kSingleCamIni;
  text.insert(text.find("[processing]"), "this line is broken\n");
  const Error e = Caught(text);
  CHECK(e.kind() == ErrorKind::kSyntaxError);
  CHECK(e.detail() == "6");
  CHECK(Caught("[camera\nwidth=1\n").kind() == ErrorKind::kSyntaxError);
}

TEST_CASE("non-positive sizes are rejected") {
  std::string text = kSingleCamIni;
  text.replace(text.find("fps=8"), 5, "fps=0");
  CHECK_THROWS_AS(ParseStreamConfig(text), Error);
  text = kSingleCamIni;
  text.replace(text.find("width=2560"), 10, "width=abc");
  CHECK_THROWS_AS(ParseStreamConfig(text), Error);
}

TEST_CASE("section order, whitespace and comments do not matter") {
  const std::string shuffled = R"(; reordered copy of the single camera file
[native]
height = 1600
width = 2560

# processing resolution
[processing]
height=128
width=256
[camera]
fps=8
  ; indented comment
height=180
width=320
devNumber=2
)";
  CHECK(ParseStreamConfig(shuffled) == ParseStreamConfig(kSingleCamIni));
}

TEST_CASE("unknown keys warn but parse") {
  std::string text = kSingleCamIni;
  text.insert(text.find("[processing]"), "exposure=12\n");
  std::vector<std::string> warnings;
  CHECK(ParseStreamConfig(text, &warnings) == ParseStreamConfig(kSingleCamIni));
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("exposure") != std::string::npos);
}

TEST_CASE("serialize then parse is the identity") {
  for (const char* text : {kYoutubeIni, kSingleCamIni, kTwoCamIni}) {
    const StreamConfig c = ParseStreamConfig(text);
    CHECK(ParseStreamConfig(SerializeStreamConfig(c)) == c);
  }
  StreamConfig odd;
  odd.camera_width = 1;
  odd.camera_height = 2;
  odd.fps = 60;
  odd.source = FileSource{"dir with spaces/clip name.mp4"};
  odd.processing_width = 3;
  odd.processing_height = 4;
  odd.native_width = 5;
  odd.native_height = 6;
  CHECK(ParseStreamConfig(SerializeStreamConfig(odd)) == odd);
}

TEST_CASE("load from disk") {
  TempDir dir;
  CHECK_THROWS_AS(LoadStreamConfig((dir / "missing.ini").string()), Error);
  {
    std::FILE* f = std::fopen((dir / "cam.ini").c_str(), "w");
    std::fputs(kTwoCamIni, f);
    std::fclose(f);
  }
  CHECK(LoadStreamConfig((dir / "cam.ini").string()) == ParseStreamConfig(kTwoCamIni));
}
