#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace holoquilt {

struct PixelCoord {
  int x = 0;
  int y = 0;
};

// 8-bit RGB raster, row-major, origin top-left, y downward.
class Image {
 public:
  static constexpr int kChannels = 3;

  // Zero-filled image. Throws kInvalidArgument unless width, height >= 1.
  Image(int width, int height);
  // Takes ownership of `data`; its size must be width * height * 3.
  Image(int width, int height, std::vector<std::uint8_t> data);
  // Every pixel set to (r, g, b).
  static Image Filled(int width, int height, std::uint8_t r, std::uint8_t g,
                      std::uint8_t b);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t sample_count() const { return data_.size(); }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> mutable_data() { return data_; }

  std::size_t SampleIndex(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }
  std::uint8_t at(int x, int y, int c) const { return data_[SampleIndex(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c) { return data_[SampleIndex(x, y, c)]; }

  bool SameSize(const Image& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

// Reads 8-bit gray, gray+alpha, RGB, RGBA or palette PNGs; alpha is dropped
// and gray is expanded. 16-bit files are rejected with kUnsupportedBitDepth.
Image LoadPng(const std::filesystem::path& path);

// Writes an 8-bit RGB PNG.
void SavePng(const Image& image, const std::filesystem::path& path);

// Bilinear resampling with pixel-centre alignment and round-half-up output.
Image Resize(const Image& image, int new_width, int new_height);

// Splits an L|R side-by-side frame into its two halves.
std::pair<Image, Image> SplitSideBySide(const Image& image);

// Inverse of SplitSideBySide; heights must agree.
Image ConcatHorizontal(const Image& left, const Image& right);

// Rounded 0.299 R + 0.587 G + 0.114 B, one byte per pixel.
std::vector<std::uint8_t> ToGray(const Image& image);

}  // namespace holoquilt
