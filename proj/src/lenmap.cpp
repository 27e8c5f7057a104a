#include "holoquilt/lenmap.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "holoquilt/error.hpp"

namespace holoquilt {

namespace {

constexpr std::array<char, 4> kMagic = {'M', 'R', 'P', 'H'};
constexpr std::size_t kHeaderBytes = 4 + 2 + 4 + 4 + 2 + 2 + 4 + 4;

std::uint64_t QuiltSamples(const QuiltLayout& layout) {
  return static_cast<std::uint64_t>(layout.quilt_width()) * layout.quilt_height() *
         Image::kChannels;
}

std::uint64_t NativeSamples(NativeSize native) {
  return static_cast<std::uint64_t>(native.width) * native.height * Image::kChannels;
}

void CheckNative(NativeSize native) {
  if (native.width < 1 || native.height < 1) {
    throw Error(ErrorKind::kInvalidArgument, "native dimensions must be >= 1");
  }
}

class ByteWriter {
 public:
  void U16(std::uint16_t v) { Bytes(v, 2); }
  void U32(std::uint32_t v) { Bytes(v, 4); }
  void Raw(std::span<const char> s) { out_.insert(out_.end(), s.begin(), s.end()); }
  const std::vector<char>& bytes() const { return out_; }
  void Reserve(std::size_t n) { out_.reserve(n); }

 private:
  void Bytes(std::uint32_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::vector<char> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const unsigned char> in) : in_(in) {}

  std::uint16_t U16() { return static_cast<std::uint16_t>(Bytes(2)); }
  std::uint32_t U32() { return Bytes(4); }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::uint32_t Bytes(int n) {
    if (remaining() < static_cast<std::size_t>(n)) {
      throw Error(ErrorKind::kTruncatedFile, "map file ends inside its header");
    }
    std::uint32_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint32_t>(in_[pos_ + i]) << (8 * i);
    pos_ += n;
    return v;
  }
  std::span<const unsigned char> in_;
  std::size_t pos_ = 0;
};

}  // namespace

int ViewIndex(SubpixelCoord sub, const MappingParams& params, NativeSize native) {
  const int x = params.flip_x ? native.width - 1 - sub.x : sub.x;
  const int y = params.flip_y ? native.height - 1 - sub.y : sub.y;
  const int c = params.flip_subpixel ? 2 - sub.c : sub.c;
  const double i = 3.0 * x + c;
  const double period = 3.0 * params.lens_period_px();
  const double a = (i - 3.0 * y * params.tan_alpha) / period - params.offset;
  const double phase = a - std::floor(a);
  const int n = params.total_views;
  int view = std::min(static_cast<int>(std::floor(phase * n)), n - 1);
  view = std::max(view, 0);
  return params.inverted_views ? n - 1 - view : view;
}

LutMap::LutMap(NativeSize native, QuiltLayout layout,
               std::vector<std::uint32_t> entries)
    : native_(native), layout_(layout), entries_(std::move(entries)) {
  CheckNative(native_);
  if (entries_.size() != NativeSamples(native_)) {
    throw Error(ErrorKind::kCountMismatch,
                "lookup table holds " + std::to_string(entries_.size()) +
                    " entries, native size needs " +
                    std::to_string(NativeSamples(native_)));
  }
  const std::uint64_t limit = QuiltSamples(layout_);
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    if (entries_[k] >= limit) {
      throw Error(ErrorKind::kEntryOutOfRange,
                  "lookup entry " + std::to_string(k) + " = " +
                      std::to_string(entries_[k]) + " exceeds quilt size " +
                      std::to_string(limit),
                  std::to_string(k));
    }
    if (entries_[k] % Image::kChannels != k % Image::kChannels) {
      throw Error(ErrorKind::kInvariantViolation,
                  "lookup entry " + std::to_string(k) + " crosses colour channels",
                  std::to_string(k));
    }
  }
}

LutMap BuildLut(const MappingParams& params, const QuiltLayout& layout,
                NativeSize native) {
  CheckNative(native);
  if (params.total_views != layout.total_views()) {
    throw Error(ErrorKind::kInvalidArgument,
                "mapping is for " + std::to_string(params.total_views) +
                    " views, layout has " + std::to_string(layout.total_views()));
  }
  if (QuiltSamples(layout) > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorKind::kInvalidArgument,
                "quilt too large for 32-bit lookup entries");
  }

  const std::uint32_t quilt_w = static_cast<std::uint32_t>(layout.quilt_width());
  std::vector<std::uint32_t> src_col(native.width);
  for (int x = 0; x < native.width; ++x) {
    src_col[x] = static_cast<std::uint32_t>(
        static_cast<std::int64_t>(x) * layout.view_width / native.width);
  }
  // Per view: sample offset of the tile's top-left corner.
  std::vector<std::uint32_t> tile_origin(layout.total_views());
  for (int v = 0; v < layout.total_views(); ++v) {
    const std::uint32_t qx = layout.TileColumn(v) * layout.view_width;
    const std::uint32_t qy = layout.TileRow(v) * layout.view_height;
    tile_origin[v] = (qy * quilt_w + qx) * Image::kChannels;
  }

  std::vector<std::uint32_t> entries(NativeSamples(native));
  std::size_t k = 0;
  for (int y = 0; y < native.height; ++y) {
    const std::uint32_t row = static_cast<std::uint32_t>(
        static_cast<std::int64_t>(y) * layout.view_height / native.height);
    const std::uint32_t row_offset = row * quilt_w * Image::kChannels;
    for (int x = 0; x < native.width; ++x) {
      for (int c = 0; c < Image::kChannels; ++c, ++k) {
        const int view = ViewIndex({x, y, c}, params, native);
        entries[k] = tile_origin[view] + row_offset + src_col[x] * Image::kChannels + c;
      }
    }
  }
  return LutMap(native, layout, std::move(entries));
}

Image ApplyLut(const LutMap& lut, const Image& quilt) {
  const QuiltLayout& layout = lut.layout();
  if (quilt.width() != layout.quilt_width() ||
      quilt.height() != layout.quilt_height()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "quilt is " + std::to_string(quilt.width()) + "x" +
                    std::to_string(quilt.height()) + ", map expects " +
                    std::to_string(layout.quilt_width()) + "x" +
                    std::to_string(layout.quilt_height()));
  }
  Image native(lut.native().width, lut.native().height);
  const std::uint8_t* src = quilt.data().data();
  std::uint8_t* dst = native.mutable_data().data();
  const auto entries = lut.entries();
  const std::size_t n = entries.size();
  for (std::size_t k = 0; k < n; ++k) dst[k] = src[entries[k]];
  return native;
}

void SaveMap(const LutMap& lut, const std::filesystem::path& path) {
  const QuiltLayout& layout = lut.layout();
  if (layout.cols > 0xffff || layout.rows > 0xffff) {
    throw Error(ErrorKind::kInvalidArgument, "quilt grid too large for map header");
  }
  ByteWriter w;
  w.Reserve(kHeaderBytes + lut.entries().size() * 4);
  w.Raw(kMagic);
  w.U16(kMapFormatVersion);
  w.U32(static_cast<std::uint32_t>(lut.native().width));
  w.U32(static_cast<std::uint32_t>(lut.native().height));
  w.U16(static_cast<std::uint16_t>(layout.cols));
  w.U16(static_cast<std::uint16_t>(layout.rows));
  w.U32(static_cast<std::uint32_t>(layout.view_width));
  w.U32(static_cast<std::uint32_t>(layout.view_height));
  for (std::uint32_t e : lut.entries()) w.U32(e);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIoFailure, "cannot write " + path.string(), path.string());
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw Error(ErrorKind::kIoFailure, "failed writing " + path.string(), path.string());
}

LutMap LoadMap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kFileNotFound, "cannot open map " + path.string(),
                path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::kIoFailure, "failed reading " + path.string());

  if (bytes.size() < kMagic.size() ||
      std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorKind::kBadMagic, path.string() + " is not a map file");
  }
  ByteReader r(std::span<const unsigned char>(bytes).subspan(kMagic.size()));
  const std::uint16_t version = r.U16();
  if (version != kMapFormatVersion) {
    throw Error(ErrorKind::kVersionMismatch,
                "map format version " + std::to_string(version) +
                    " is not supported (expected " +
                    std::to_string(kMapFormatVersion) + ")");
  }
  const std::uint32_t native_w = r.U32();
  const std::uint32_t native_h = r.U32();
  const std::uint16_t cols = r.U16();
  const std::uint16_t rows = r.U16();
  const std::uint32_t view_w = r.U32();
  const std::uint32_t view_h = r.U32();
  constexpr std::uint32_t kIntMax = std::numeric_limits<int>::max();
  if (native_w == 0 || native_h == 0 || cols == 0 || rows == 0 || view_w == 0 ||
      view_h == 0 || native_w > kIntMax || native_h > kIntMax ||
      view_w > kIntMax || view_h > kIntMax) {
    throw Error(ErrorKind::kInvariantViolation, "map header has invalid dimensions");
  }
  const NativeSize native{static_cast<int>(native_w), static_cast<int>(native_h)};
  const QuiltLayout layout(cols, rows, static_cast<int>(view_w),
                           static_cast<int>(view_h));

  const std::uint64_t count = NativeSamples(native);
  if (r.remaining() < count * 4) {
    throw Error(ErrorKind::kTruncatedFile,
                path.string() + " holds " + std::to_string(r.remaining() / 4) +
                    " entries, header promises " + std::to_string(count));
  }
  if (r.remaining() > count * 4) {
    throw Error(ErrorKind::kInvariantViolation,
                path.string() + " has trailing bytes after its entries");
  }
  std::vector<std::uint32_t> entries(count);
  for (auto& e : entries) e = r.U32();
  return LutMap(native, layout, std::move(entries));
}

}  // namespace holoquilt
