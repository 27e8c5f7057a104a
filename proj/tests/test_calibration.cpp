#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "holoquilt/calibration.hpp"
#include "holoquilt/error.hpp"
#include "test_support.hpp"

using namespace holoquilt;
using holoquilt::testing::DeviceCalibration;
using holoquilt::testing::kDeviceCalibrationJson;

namespace {

std::string Without(std::string json, const std::string& key) {
  const auto start = json.find("\"" + key + "\"");
  REQUIRE(start != std::string::npos);
  const auto end = json.find('}', start);
  // Also drop the following comma.
  json.erase(start, end - start + 2);
  return json;
}

Error Caught(const std::string& json) {
  try {
    ParseCalibration(json);
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a calibration error");
  return Error(ErrorKind::kInvalidArgument, "");
}

}  // namespace

TEST_CASE("device calibration listing parses to the shipped values") {
  const Calibration cal = DeviceCalibration();
  CHECK(cal.config_version == "1.0");
  CHECK(cal.serial == "LKG-2K-02491");
  CHECK(cal.pitch == 47.56159591674805);
  CHECK(cal.slope == -5.5113043785095219);
  CHECK(cal.center == -0.09782609343528748);
  CHECK(cal.view_cone == 40.0);
  CHECK(cal.inv_view == 1.0);
  CHECK(cal.vertical_angle == 0.0);
  CHECK(cal.dpi == 338.0);
  CHECK(cal.screen_w == 2560.0);
  CHECK(cal.screen_h == 1600.0);
  CHECK(cal.flip_image_x == 0.0);
  CHECK(cal.flip_image_y == 0.0);
  CHECK(cal.flip_subp == 0.0);
}

TEST_CASE("calibration errors") {
  const std::string json = kDeviceCalibrationJson;

  const Error missing = Caught(Without(json, "pitch"));
  CHECK(missing.kind() == ErrorKind::kMissingField);
  CHECK(missing.detail() == "pitch");

  std::string zero_w = json;
  zero_w.replace(zero_w.find("2560.0"), 6, "0");
  const Error invalid = Caught(zero_w);
  CHECK(invalid.kind() == ErrorKind::kInvariantViolation);
  CHECK(invalid.detail() == "screenW");

  CHECK(Caught("{\"configVersion\":").kind() == ErrorKind::kMalformedJson);
  CHECK(Caught("[1,2]").kind() == ErrorKind::kMalformedJson);

  std::string flip = json;
  const std::string subp = "\"flipSubp\":{\"value\":0.0}";
  flip.replace(flip.find(subp), subp.size(), "\"flipSubp\":{\"value\":0.5}");
  CHECK(Caught(flip).detail() == "flipSubp");

  std::string flat_slope = json;
  flat_slope.replace(flat_slope.find("-5.5113043785095219"), 19, "0");
  CHECK(Caught(flat_slope).detail() == "slope");
}

TEST_CASE("bare numbers and unknown keys are accepted") {
  const std::string json =
      R"({"configVersion":"1.0","serial":"X","pitch":50,"slope":-5,"center":0.1,)"
      R"("viewCone":40,"invView":0,"verticalAngle":0,"dpi":300,"screenW":1536,)"
      R"("screenH":2048,"flipImageX":0,"flipImageY":1,"flipSubp":0,"extra":{"value":3}})";
  const Calibration cal = ParseCalibration(json);
  CHECK(cal.pitch == 50.0);
  CHECK(cal.dpi == 300.0);
  CHECK(cal.flip_image_y == 1.0);
}

TEST_CASE("serialize then parse is the identity") {
  CHECK(ParseCalibration(SerializeCalibration(DeviceCalibration())) == DeviceCalibration());

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> real(0.01, 1000.0);
  std::bernoulli_distribution coin;
  for (int trial = 0; trial < 50; ++trial) {
    Calibration cal;
    cal.config_version = "1." + std::to_string(trial);
    cal.serial = "SER-" + std::to_string(rng());
    cal.pitch = real(rng);
    cal.slope = coin(rng) ? real(rng) : -real(rng);
    cal.center = real(rng) - 500.0;
    cal.view_cone = real(rng);
    cal.inv_view = coin(rng) ? 1.0 : 0.0;
    cal.vertical_angle = real(rng) - 500.0;
    cal.dpi = real(rng);
    cal.screen_w = std::floor(real(rng)) + 1;
    cal.screen_h = std::floor(real(rng)) + 1;
    cal.flip_image_x = coin(rng) ? 1.0 : 0.0;
    cal.flip_image_y = coin(rng) ? 1.0 : 0.0;
    cal.flip_subp = coin(rng) ? 1.0 : 0.0;
    CHECK(ParseCalibration(SerializeCalibration(cal)) == cal);
  }
}

TEST_CASE("serialized form uses the wrapped schema in device key order") {
  const std::string out = SerializeCalibration(DeviceCalibration());
  CHECK(out.rfind(R"({"configVersion":"1.0","serial":"LKG-2K-02491","pitch":{"value":47.56159591674805},)", 0) == 0);
  CHECK(out.find(R"("DPI":{"value":338.0})") != std::string::npos);
}

TEST_CASE("mapping parameters from the device calibration") {
  const MappingParams p = DeriveMappingParams(DeviceCalibration(), QuiltGrid{9, 5});
  CHECK(p.total_views == 45);
  // Golden values from a 40-digit evaluation of the derivation formulas.
  CHECK(p.pitch == doctest::Approx(354.44254031251868).epsilon(1e-14));
  CHECK(p.tan_alpha == doctest::Approx(-0.11340328116100623).epsilon(1e-14));
  CHECK(p.lens_period_px() == doctest::Approx(7.2226093339213731).epsilon(1e-14));
  CHECK(p.offset == -0.09782609343528748);
  CHECK(p.inverted_views);
  CHECK_FALSE(p.flip_x);
  CHECK_FALSE(p.flip_y);
  CHECK_FALSE(p.flip_subpixel);
}

TEST_CASE("slope sign flip with flipImageX toggled leaves tan_alpha unchanged") {
  Calibration cal = DeviceCalibration();
  const double before = DeriveMappingParams(cal, {4, 2}).tan_alpha;
  cal.slope = -cal.slope;
  cal.flip_image_x = 1.0;
  CHECK(DeriveMappingParams(cal, {4, 2}).tan_alpha == before);
}

TEST_CASE("total views is the product of the grid for all grids") {
  const Calibration cal = DeviceCalibration();
  for (int cols = 1; cols <= 12; ++cols) {
    for (int rows = 1; rows <= 12; ++rows) {
      CHECK(DeriveMappingParams(cal, {cols, rows}).total_views == cols * rows);
    }
  }
}
