#include "holoquilt/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>

#include "holoquilt/error.hpp"

namespace holoquilt {

namespace {

void CheckDims(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "image dimensions must be >= 1, got " + std::to_string(width) +
                    "x" + std::to_string(height));
  }
}

std::uint8_t RoundHalfUp(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

enum class DecodeStatus { kOk, kCorrupt, kSixteenBit };

struct Decoded {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  std::vector<std::uint8_t> rgb;
  std::vector<png_bytep> rows;
  std::string message;
};

void OnPngError(png_structp png, png_const_charp msg) {
  auto* out = static_cast<Decoded*>(png_get_error_ptr(png));
  if (out != nullptr) out->message = msg;
  png_longjmp(png, 1);
}

void OnPngWarning(png_structp, png_const_charp) {}

// libpng reports errors through longjmp; nothing with a destructor lives in
// this frame between setjmp and the decode calls.
DecodeStatus DecodeRgb8(std::FILE* file, Decoded* out) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, out, OnPngError, OnPngWarning);
  if (png == nullptr) return DecodeStatus::kCorrupt;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return DecodeStatus::kCorrupt;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return DecodeStatus::kCorrupt;
  }
  png_init_io(png, file);
  png_read_info(png, info);

  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth > 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    return DecodeStatus::kSixteenBit;
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);

  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  if (png_get_rowbytes(png, info) != out->width * 3u) {
    png_destroy_read_struct(&png, &info, nullptr);
    return DecodeStatus::kCorrupt;
  }
  out->rgb.resize(static_cast<std::size_t>(out->width) * out->height * 3);
  out->rows.resize(out->height);
  for (png_uint_32 y = 0; y < out->height; ++y) {
    out->rows[y] = out->rgb.data() + static_cast<std::size_t>(y) * out->width * 3;
  }
  png_read_image(png, out->rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return DecodeStatus::kOk;
}

bool EncodeRgb8(std::FILE* file, const Image& image,
                std::vector<png_bytep>* rows) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, OnPngError, OnPngWarning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  // Level 1 keeps 2560x1600 frames fast to write; the files stay lossless.
  png_set_compression_level(png, 1);
  png_set_IHDR(png, info, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows->data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

Image::Image(int width, int height) : width_(width), height_(height) {
  CheckDims(width, height);
  data_.assign(static_cast<std::size_t>(width) * height * kChannels, 0);
}

Image::Image(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  CheckDims(width, height);
  if (data_.size() != static_cast<std::size_t>(width) * height * kChannels) {
    throw Error(ErrorKind::kInvalidArgument,
                "sample buffer holds " + std::to_string(data_.size()) +
                    " bytes, expected width*height*3");
  }
}

Image Image::Filled(int width, int height, std::uint8_t r, std::uint8_t g,
                    std::uint8_t b) {
  Image image(width, height);
  auto samples = image.mutable_data();
  for (std::size_t i = 0; i < samples.size(); i += kChannels) {
    samples[i] = r;
    samples[i + 1] = g;
    samples[i + 2] = b;
  }
  return image;
}

Image LoadPng(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) {
    throw Error(ErrorKind::kFileNotFound, "cannot open " + path.string(),
                path.string());
  }
  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 ||
      png_sig_cmp(signature, 0, 8) != 0) {
    throw Error(ErrorKind::kDecodeFailure, path.string() + " is not a PNG file",
                path.string());
  }
  std::rewind(file.get());

  Decoded decoded;
  switch (DecodeRgb8(file.get(), &decoded)) {
    case DecodeStatus::kOk:
      break;
    case DecodeStatus::kSixteenBit:
      throw Error(ErrorKind::kUnsupportedBitDepth,
                  path.string() + ": only 8-bit PNGs are supported",
                  path.string());
    case DecodeStatus::kCorrupt:
      throw Error(ErrorKind::kDecodeFailure,
                  path.string() + ": " +
                      (decoded.message.empty() ? "decode failed" : decoded.message),
                  path.string());
  }
  return Image(static_cast<int>(decoded.width), static_cast<int>(decoded.height),
               std::move(decoded.rgb));
}

void SavePng(const Image& image, const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) {
    throw Error(ErrorKind::kIoFailure, "cannot write " + path.string(),
                path.string());
  }
  // libpng takes non-const row pointers even for writing.
  auto* base = const_cast<std::uint8_t*>(image.data().data());
  std::vector<png_bytep> rows(image.height());
  for (int y = 0; y < image.height(); ++y) {
    rows[y] = base + static_cast<std::size_t>(y) * image.width() * Image::kChannels;
  }
  if (!EncodeRgb8(file.get(), image, &rows) || std::fflush(file.get()) != 0) {
    throw Error(ErrorKind::kIoFailure, "failed writing " + path.string(),
                path.string());
  }
}

Image Resize(const Image& image, int new_width, int new_height) {
  CheckDims(new_width, new_height);
  if (new_width == image.width() && new_height == image.height()) return image;

  struct Tap {
    int i0, i1;
    double w1;
  };
  auto taps = [](int src, int dst) {
    std::vector<Tap> out(dst);
    const double scale = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
      double s = std::clamp((i + 0.5) * scale - 0.5, 0.0, src - 1.0);
      int i0 = static_cast<int>(std::floor(s));
      int i1 = std::min(i0 + 1, src - 1);
      out[i] = {i0, i1, s - i0};
    }
    return out;
  };
  const auto xs = taps(image.width(), new_width);
  const auto ys = taps(image.height(), new_height);

  Image out(new_width, new_height);
  for (int y = 0; y < new_height; ++y) {
    const Tap& ty = ys[y];
    for (int x = 0; x < new_width; ++x) {
      const Tap& tx = xs[x];
      for (int c = 0; c < Image::kChannels; ++c) {
        double top = (1.0 - tx.w1) * image.at(tx.i0, ty.i0, c) +
                     tx.w1 * image.at(tx.i1, ty.i0, c);
        double bottom = (1.0 - tx.w1) * image.at(tx.i0, ty.i1, c) +
                        tx.w1 * image.at(tx.i1, ty.i1, c);
        out.at(x, y, c) = RoundHalfUp((1.0 - ty.w1) * top + ty.w1 * bottom);
      }
    }
  }
  return out;
}

std::pair<Image, Image> SplitSideBySide(const Image& image) {
  if (image.width() % 2 != 0) {
    throw Error(ErrorKind::kOddWidth,
                "side-by-side frame width " + std::to_string(image.width()) +
                    " is odd");
  }
  const int half = image.width() / 2;
  Image left(half, image.height());
  Image right(half, image.height());
  const std::size_t row_bytes = static_cast<std::size_t>(half) * Image::kChannels;
  auto src = image.data();
  for (int y = 0; y < image.height(); ++y) {
    auto row = src.subspan(image.SampleIndex(0, y, 0), 2 * row_bytes);
    std::copy_n(row.begin(), row_bytes,
                left.mutable_data().begin() + left.SampleIndex(0, y, 0));
    std::copy_n(row.begin() + row_bytes, row_bytes,
                right.mutable_data().begin() + right.SampleIndex(0, y, 0));
  }
  return {std::move(left), std::move(right)};
}

Image ConcatHorizontal(const Image& left, const Image& right) {
  if (left.height() != right.height()) {
    throw Error(ErrorKind::kDimensionMismatch, "cannot concatenate images of "
                                               "different heights");
  }
  Image out(left.width() + right.width(), left.height());
  const std::size_t lbytes = static_cast<std::size_t>(left.width()) * Image::kChannels;
  const std::size_t rbytes = static_cast<std::size_t>(right.width()) * Image::kChannels;
  for (int y = 0; y < left.height(); ++y) {
    auto dst = out.mutable_data().begin() + out.SampleIndex(0, y, 0);
    std::copy_n(left.data().begin() + left.SampleIndex(0, y, 0), lbytes, dst);
    std::copy_n(right.data().begin() + right.SampleIndex(0, y, 0), rbytes,
                dst + lbytes);
  }
  return out;
}

std::vector<std::uint8_t> ToGray(const Image& image) {
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(image.width()) *
                                 image.height());
  auto src = image.data();
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = RoundHalfUp(0.299 * src[3 * i] + 0.587 * src[3 * i + 1] +
                          0.114 * src[3 * i + 2]);
  }
  return gray;
}

}  // namespace holoquilt
