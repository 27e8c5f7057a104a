#include "holoquilt/calibration.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "holoquilt/error.hpp"
#include "json.hpp"

namespace holoquilt {

namespace {

using nlohmann::json;

const json* FindKey(const json& root, std::initializer_list<const char*> names) {
  for (const char* name : names) {
    auto it = root.find(name);
    if (it != root.end()) return &*it;
  }
  return nullptr;
}

double ReadNumber(const json& root, std::initializer_list<const char*> names) {
  const std::string field = *names.begin();
  const json* node = FindKey(root, names);
  if (node == nullptr) {
    throw Error(ErrorKind::kMissingField, "calibration is missing '" + field + "'",
                field);
  }
  if (node->is_object()) {
    auto it = node->find("value");
    if (it == node->end()) {
      throw Error(ErrorKind::kMissingField,
                  "calibration field '" + field + "' has no \"value\"", field);
    }
    node = &*it;
  }
  if (!node->is_number()) {
    throw Error(ErrorKind::kMalformedJson,
                "calibration field '" + field + "' is not a number", field);
  }
  return node->get<double>();
}

std::string ReadString(const json& root, const char* name) {
  auto it = root.find(name);
  if (it == root.end()) {
    throw Error(ErrorKind::kMissingField,
                std::string("calibration is missing '") + name + "'", name);
  }
  if (!it->is_string()) {
    throw Error(ErrorKind::kMalformedJson,
                std::string("calibration field '") + name + "' is not a string",
                name);
  }
  return it->get<std::string>();
}

void Require(bool ok, const char* field, const char* rule) {
  if (!ok) {
    throw Error(ErrorKind::kInvariantViolation,
                std::string("calibration field '") + field + "' must be " + rule,
                field);
  }
}

bool IsFlag(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

Calibration ParseCalibration(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kMalformedJson,
                std::string("calibration is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) {
    throw Error(ErrorKind::kMalformedJson, "calibration root must be an object");
  }

  Calibration cal;
  cal.config_version = ReadString(root, "configVersion");
  cal.serial = ReadString(root, "serial");
  cal.pitch = ReadNumber(root, {"pitch"});
  cal.slope = ReadNumber(root, {"slope"});
  cal.center = ReadNumber(root, {"center"});
  cal.view_cone = ReadNumber(root, {"viewCone"});
  cal.inv_view = ReadNumber(root, {"invView"});
  cal.vertical_angle = ReadNumber(root, {"verticalAngle"});
  // Devices write "DPI"; lower case is accepted for hand-written files.
  cal.dpi = ReadNumber(root, {"DPI", "dpi"});
  cal.screen_w = ReadNumber(root, {"screenW"});
  cal.screen_h = ReadNumber(root, {"screenH"});
  cal.flip_image_x = ReadNumber(root, {"flipImageX"});
  cal.flip_image_y = ReadNumber(root, {"flipImageY"});
  cal.flip_subp = ReadNumber(root, {"flipSubp"});

  Require(cal.screen_w > 0, "screenW", "> 0");
  Require(cal.screen_h > 0, "screenH", "> 0");
  Require(cal.dpi > 0, "DPI", "> 0");
  Require(cal.pitch > 0, "pitch", "> 0");
  Require(cal.slope != 0, "slope", "non-zero");
  Require(IsFlag(cal.inv_view), "invView", "0 or 1");
  Require(IsFlag(cal.flip_image_x), "flipImageX", "0 or 1");
  Require(IsFlag(cal.flip_image_y), "flipImageY", "0 or 1");
  Require(IsFlag(cal.flip_subp), "flipSubp", "0 or 1");
  return cal;
}

Calibration LoadCalibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kFileNotFound, "cannot open calibration " + path, path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return ParseCalibration(text.str());
}

std::string SerializeCalibration(const Calibration& cal) {
  nlohmann::ordered_json root;
  auto wrap = [](double v) { return nlohmann::ordered_json{{"value", v}}; };
  root["configVersion"] = cal.config_version;
  root["serial"] = cal.serial;
  root["pitch"] = wrap(cal.pitch);
  root["slope"] = wrap(cal.slope);
  root["center"] = wrap(cal.center);
  root["viewCone"] = wrap(cal.view_cone);
  root["invView"] = wrap(cal.inv_view);
  root["verticalAngle"] = wrap(cal.vertical_angle);
  root["DPI"] = wrap(cal.dpi);
  root["screenW"] = wrap(cal.screen_w);
  root["screenH"] = wrap(cal.screen_h);
  root["flipImageX"] = wrap(cal.flip_image_x);
  root["flipImageY"] = wrap(cal.flip_image_y);
  root["flipSubp"] = wrap(cal.flip_subp);
  return root.dump();
}

MappingParams DeriveMappingParams(const Calibration& cal, QuiltGrid grid) {
  MappingParams p;
  p.pitch = cal.pitch * (cal.screen_w / cal.dpi) *
            std::cos(std::atan(1.0 / std::abs(cal.slope)));
  p.tan_alpha = cal.screen_h / (cal.screen_w * cal.slope);
  if (cal.flip_image_x == 1.0) p.tan_alpha = -p.tan_alpha;
  p.offset = cal.center;
  p.total_views = grid.total_views();
  p.screen_width = cal.screen_w;
  p.flip_x = cal.flip_image_x == 1.0;
  p.flip_y = cal.flip_image_y == 1.0;
  p.flip_subpixel = cal.flip_subp == 1.0;
  p.inverted_views = cal.inv_view == 1.0;
  return p;
}

}  // namespace holoquilt
