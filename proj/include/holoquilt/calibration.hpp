#pragma once

#include <string>
#include <string_view>

#include "holoquilt/quilt.hpp"

namespace holoquilt {

// Per-device lenticular calibration, as shipped in the display's JSON file.
// Flag fields keep the file's real-valued encoding (0.0 or 1.0).
struct Calibration {
  std::string config_version;
  std::string serial;
  double pitch = 0.0;   // lenses per inch
  double slope = 0.0;   // lens slant, run over rise
  double center = 0.0;  // phase offset of the lens pattern, in lens periods
  double view_cone = 0.0;
  double inv_view = 0.0;
  double vertical_angle = 0.0;
  double dpi = 0.0;
  double screen_w = 0.0;
  double screen_h = 0.0;
  double flip_image_x = 0.0;
  double flip_image_y = 0.0;
  double flip_subp = 0.0;

  friend bool operator==(const Calibration&, const Calibration&) = default;
};

// Numeric fields may be wrapped ({"value": x}) or bare. Unknown keys are
// ignored. Throws kMalformedJson, kMissingField or kInvariantViolation with
// the field name as detail.
Calibration ParseCalibration(std::string_view json_text);
Calibration LoadCalibration(const std::string& path);

// Emits the wrapped-value schema, keys in the device's order.
std::string SerializeCalibration(const Calibration& cal);

// Geometry that drives the subpixel-to-view assignment.
struct MappingParams {
  // Lens pitch scaled to the whole panel width: pitch * (screenW / dpi) *
  // cos(atan(1 / |slope|)), i.e. the number of lens periods across screenW.
  double pitch = 1.0;
  double tan_alpha = 0.0;
  // Phase subtracted from every subpixel, in lens periods.
  double offset = 0.0;
  int total_views = 1;
  // Panel width in pixels; with `pitch` it fixes the lens period.
  double screen_width = 1.0;
  bool flip_x = false;
  bool flip_y = false;
  bool flip_subpixel = false;
  bool inverted_views = false;

  double lens_period_px() const { return screen_width / pitch; }
};

MappingParams DeriveMappingParams(const Calibration& cal, QuiltGrid grid);

}  // namespace holoquilt
