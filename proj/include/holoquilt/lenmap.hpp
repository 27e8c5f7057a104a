#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "holoquilt/calibration.hpp"
#include "holoquilt/image.hpp"
#include "holoquilt/quilt.hpp"

namespace holoquilt {

struct NativeSize {
  int width = 1;
  int height = 1;
  friend bool operator==(const NativeSize&, const NativeSize&) = default;
};

// One colour channel of one panel pixel.
struct SubpixelCoord {
  int x = 0;
  int y = 0;
  int c = 0;  // 0 = R, 1 = G, 2 = B
};

// View number in [0, total_views) that the lens sheet shows through `sub`.
//
// With x and y mirrored per the flip flags, the horizontal subpixel position
// is i = 3x + c (3x + 2 - c when subpixel order is flipped) and
//
//   phase = fract((i - 3 y tan_alpha) / (3 lens_period_px) - offset)
//   view  = min(floor(phase * total_views), total_views - 1)
//
// reversed to total_views - 1 - view for inverted displays.
int ViewIndex(SubpixelCoord sub, const MappingParams& params, NativeSize native);

// Precomputed native-subpixel -> quilt-sample gather table.
class LutMap {
 public:
  // Validates entry count, range and channel agreement.
  LutMap(NativeSize native, QuiltLayout layout, std::vector<std::uint32_t> entries);

  NativeSize native() const { return native_; }
  const QuiltLayout& layout() const { return layout_; }
  std::span<const std::uint32_t> entries() const { return entries_; }

  friend bool operator==(const LutMap&, const LutMap&) = default;

 private:
  NativeSize native_;
  QuiltLayout layout_;
  std::vector<std::uint32_t> entries_;
};

// Each native pixel (x, y) samples its view at (floor(x * vw / W),
// floor(y * vh / H)); the view itself is found with ViewIndex per channel.
LutMap BuildLut(const MappingParams& params, const QuiltLayout& layout,
                NativeSize native);

// Pure gather: out[k] = quilt[entries[k]]. Throws kDimensionMismatch when the
// quilt does not match the table's layout.
Image ApplyLut(const LutMap& lut, const Image& quilt);

// Binary ".map" file, little-endian:
//   "MRPH" | u16 version | u32 native_w | u32 native_h | u16 cols | u16 rows |
//   u32 view_w | u32 view_h | u32 entries[native_w * native_h * 3]
inline constexpr std::uint16_t kMapFormatVersion = 1;

void SaveMap(const LutMap& lut, const std::filesystem::path& path);
LutMap LoadMap(const std::filesystem::path& path);

}  // namespace holoquilt
