#include "holoquilt/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "holoquilt/error.hpp"

namespace holoquilt {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};
using Section = std::map<std::string, Entry>;
using Document = std::map<std::string, Section>;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Error SyntaxError(int line, const std::string& what) {
  return Error(ErrorKind::kSyntaxError,
               "config line " + std::to_string(line) + ": " + what,
               std::to_string(line));
}

Document Tokenize(std::string_view text) {
  Document doc;
  Section* current = nullptr;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    const auto raw = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    const auto line = Trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw SyntaxError(line_no, "malformed section header");
      }
      current = &doc[std::string(Trim(line.substr(1, line.size() - 2)))];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw SyntaxError(line_no, "expected key=value");
    if (current == nullptr) throw SyntaxError(line_no, "key outside of any section");
    const auto key = Trim(line.substr(0, eq));
    auto value = Trim(line.substr(eq + 1));
    if (key.empty()) throw SyntaxError(line_no, "empty key");
    if (!value.empty() && value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') {
        throw SyntaxError(line_no, "unterminated quoted value");
      }
      value = value.substr(1, value.size() - 2);
    }
    (*current)[std::string(key)] = {std::string(value), line_no};
  }
  return doc;
}

class Reader {
 public:
  Reader(const Document& doc, std::vector<std::string>* warnings)
      : doc_(doc), warnings_(warnings) {}

  const Section& Require(const std::string& name) const {
    auto it = doc_.find(name);
    if (it == doc_.end()) {
      throw Error(ErrorKind::kMissingSection,
                  "config is missing section [" + name + "]", name);
    }
    return it->second;
  }

  bool Has(const std::string& name) const { return doc_.count(name) != 0; }

  static std::optional<int> OptionalInt(const Section& sec, const std::string& section,
                                        const std::string& key) {
    auto it = sec.find(key);
    if (it == sec.end()) return std::nullopt;
    const std::string& s = it->second.value;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw SyntaxError(it->second.line,
                        "[" + section + "] " + key + " is not an integer: '" + s + "'");
    }
    return value;
  }

  static int RequiredInt(const Section& sec, const std::string& section,
                         const std::string& key) {
    auto v = OptionalInt(sec, section, key);
    if (!v) {
      throw Error(ErrorKind::kMissingField,
                  "config section [" + section + "] is missing '" + key + "'",
                  section + "." + key);
    }
    return *v;
  }

  void WarnUnknown(std::initializer_list<std::pair<const char*, std::vector<std::string>>>
                       known) const {
    if (warnings_ == nullptr) return;
    for (const auto& [name, section] : doc_) {
      const std::vector<std::string>* keys = nullptr;
      for (const auto& k : known) {
        if (name == k.first) keys = &k.second;
      }
      if (keys == nullptr) {
        warnings_->push_back("unknown config section [" + name + "] ignored");
        continue;
      }
      for (const auto& [key, entry] : section) {
        if (std::find(keys->begin(), keys->end(), key) == keys->end()) {
          warnings_->push_back("config line " + std::to_string(entry.line) +
                               ": unknown key '" + key + "' in [" + name +
                               "] ignored");
        }
      }
    }
  }

 private:
  const Document& doc_;
  std::vector<std::string>* warnings_;
};

void RequirePositive(int value, const std::string& field) {
  if (value < 1) {
    throw Error(ErrorKind::kInvariantViolation,
                "config value " + field + " must be >= 1, got " + std::to_string(value),
                field);
  }
}

}  // namespace

StreamConfig ParseStreamConfig(std::string_view ini_text,
                               std::vector<std::string>* warnings) {
  const Document doc = Tokenize(ini_text);
  Reader reader(doc, warnings);
  const Section& camera = reader.Require("camera");
  const Section& processing = reader.Require("processing");
  const Section& native = reader.Require("native");

  StreamConfig cfg;
  cfg.camera_width = Reader::RequiredInt(camera, "camera", "width");
  cfg.camera_height = Reader::RequiredInt(camera, "camera", "height");
  cfg.fps = Reader::RequiredInt(camera, "camera", "fps");
  cfg.processing_width = Reader::RequiredInt(processing, "processing", "width");
  cfg.processing_height = Reader::RequiredInt(processing, "processing", "height");
  cfg.native_width = Reader::RequiredInt(native, "native", "width");
  cfg.native_height = Reader::RequiredInt(native, "native", "height");
  RequirePositive(cfg.camera_width, "camera.width");
  RequirePositive(cfg.camera_height, "camera.height");
  RequirePositive(cfg.fps, "camera.fps");
  RequirePositive(cfg.processing_width, "processing.width");
  RequirePositive(cfg.processing_height, "processing.height");
  RequirePositive(cfg.native_width, "native.width");
  RequirePositive(cfg.native_height, "native.height");

  const auto dev = Reader::OptionalInt(camera, "camera", "devNumber");
  const auto file_it = camera.find("file");
  const bool has_file = file_it != camera.end();
  const bool has_cam0 = reader.Has("camera0");
  const bool has_cam1 = reader.Has("camera1");

  if (has_cam0 || has_cam1) {
    if (has_file || (dev && *dev >= 0)) {
      throw Error(ErrorKind::kConflictingSources,
                  "[camera0]/[camera1] cannot be combined with a [camera] "
                  "file or device");
    }
    if (!(has_cam0 && has_cam1)) {
      throw Error(ErrorKind::kInvariantViolation,
                  "two-camera input needs both [camera0] and [camera1]",
                  has_cam0 ? "camera1" : "camera0");
    }
    DualDevice dual;
    dual.dev0 = Reader::RequiredInt(reader.Require("camera0"), "camera0", "devNumber");
    dual.dev1 = Reader::RequiredInt(reader.Require("camera1"), "camera1", "devNumber");
    if (dual.dev0 < 0 || dual.dev1 < 0) {
      throw Error(ErrorKind::kInvariantViolation,
                  "camera0/camera1 devNumber must be >= 0", "devNumber");
    }
    cfg.source = dual;
  } else {
    if (!dev) {
      throw Error(ErrorKind::kMissingField,
                  "config section [camera] is missing 'devNumber'", "camera.devNumber");
    }
    if (*dev == -1) {
      if (!has_file || file_it->second.value.empty()) {
        throw Error(ErrorKind::kInvariantViolation,
                    "devNumber=-1 requires a file= entry in [camera]", "file");
      }
      cfg.source = FileSource{file_it->second.value};
    } else if (*dev >= 0) {
      if (has_file) {
        throw Error(ErrorKind::kConflictingSources,
                    "[camera] names both a device and a file");
      }
      cfg.source = SingleDevice{*dev};
    } else {
      throw Error(ErrorKind::kInvariantViolation,
                  "devNumber must be -1 or a device index >= 0", "devNumber");
    }
  }

  reader.WarnUnknown({{"camera", {"devNumber", "width", "height", "fps", "file"}},
                      {"camera0", {"devNumber"}},
                      {"camera1", {"devNumber"}},
                      {"processing", {"width", "height"}},
                      {"native", {"width", "height"}}});
  return cfg;
}

StreamConfig LoadStreamConfig(const std::string& path,
                              std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kFileNotFound, "cannot open config " + path, path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseStreamConfig(text.str(), warnings);
}

std::string SerializeStreamConfig(const StreamConfig& config) {
  std::ostringstream out;
  out << "[camera]\n";
  if (const auto* single = std::get_if<SingleDevice>(&config.source)) {
    out << "devNumber=" << single->dev << "\n";
  } else if (std::holds_alternative<FileSource>(config.source)) {
    out << "devNumber=-1\n";
  }
  out << "width=" << config.camera_width << "\n"
      << "height=" << config.camera_height << "\n"
      << "fps=" << config.fps << "\n";
  if (const auto* file = std::get_if<FileSource>(&config.source)) {
    out << "file=\"" << file->path << "\"\n";
  }
  if (const auto* dual = std::get_if<DualDevice>(&config.source)) {
    out << "[camera0]\ndevNumber=" << dual->dev0 << "\n"
        << "[camera1]\ndevNumber=" << dual->dev1 << "\n";
  }
  out << "[processing]\n"
      << "width=" << config.processing_width << "\n"
      << "height=" << config.processing_height << "\n"
      << "[native]\n"
      << "width=" << config.native_width << "\n"
      << "height=" << config.native_height << "\n";
  return out.str();
}

}  // namespace holoquilt
