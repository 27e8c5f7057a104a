#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace holoquilt {

// One side-by-side stereo stream identified by a device number.
struct SingleDevice {
  int dev = 0;
  friend bool operator==(const SingleDevice&, const SingleDevice&) = default;
};

// Separate left ([camera0]) and right ([camera1]) streams.
struct DualDevice {
  int dev0 = 0;
  int dev1 = 0;
  friend bool operator==(const DualDevice&, const DualDevice&) = default;
};

// Pre-recorded side-by-side stream.
struct FileSource {
  std::string path;
  friend bool operator==(const FileSource&, const FileSource&) = default;
};

using StreamSource = std::variant<SingleDevice, DualDevice, FileSource>;

struct StreamConfig {
  int camera_width = 0;
  int camera_height = 0;
  int fps = 0;
  StreamSource source;
  int processing_width = 0;
  int processing_height = 0;
  int native_width = 0;
  int native_height = 0;

  friend bool operator==(const StreamConfig&, const StreamConfig&) = default;
};

// Parses the streaming INI format:
//
//   [camera]      width, height, fps, and either devNumber >= 0 (single
//                 side-by-side device) or devNumber = -1 with file="..."
//   [camera0]     devNumber  } both present: separate left/right devices
//   [camera1]     devNumber  }
//   [processing]  width, height
//   [native]      width, height
//
// Unknown keys are reported through `warnings` (when non-null) and skipped.
StreamConfig ParseStreamConfig(std::string_view ini_text,
                               std::vector<std::string>* warnings = nullptr);
StreamConfig LoadStreamConfig(const std::string& path,
                              std::vector<std::string>* warnings = nullptr);

// Canonical writer; ParseStreamConfig(SerializeStreamConfig(c)) == c.
std::string SerializeStreamConfig(const StreamConfig& config);

}  // namespace holoquilt
