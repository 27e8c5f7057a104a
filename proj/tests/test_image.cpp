#include <png.h>

#include <cstdio>

#include "doctest.h"
#include "holoquilt/error.hpp"
#include "holoquilt/image.hpp"
#include "test_support.hpp"

using namespace holoquilt;
using holoquilt::testing::RandomImage;
using holoquilt::testing::TempDir;

namespace {

// Writes a PNG with libpng's simplified API in an arbitrary format, so the
// loader is exercised on inputs it did not produce itself.
void WriteRawPng(const std::filesystem::path& path, int w, int h, png_uint_32 format,
                 const std::vector<std::uint8_t>& pixels) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = w;
  image.height = h;
  image.format = format;
  REQUIRE(png_image_write_to_file(&image, path.c_str(), 0, pixels.data(), 0, nullptr));
}

ErrorKind KindOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::kInvalidArgument;
}

}  // namespace

TEST_CASE("image invariants") {
  CHECK_THROWS_AS(Image(0, 4), Error);
  CHECK_THROWS_AS(Image(2, 2, std::vector<std::uint8_t>(11)), Error);
  Image img(2, 3);
  CHECK(img.sample_count() == 18);
  img.at(1, 2, 2) = 7;
  CHECK(img.data()[img.SampleIndex(1, 2, 2)] == 7);
}

TEST_CASE("load 1x1 white png") {
  TempDir dir;
  WriteRawPng(dir / "white.png", 1, 1, PNG_FORMAT_RGB, {255, 255, 255});
  const Image img = LoadPng(dir / "white.png");
  CHECK(img == Image(1, 1, {255, 255, 255}));
}

TEST_CASE("load coerces gray and rgba to rgb") {
  TempDir dir;
  WriteRawPng(dir / "gray.png", 2, 1, PNG_FORMAT_GRAY, {10, 200});
  CHECK(LoadPng(dir / "gray.png") == Image(2, 1, {10, 10, 10, 200, 200, 200}));

  WriteRawPng(dir / "rgba.png", 2, 1, PNG_FORMAT_RGBA, {1, 2, 3, 0, 4, 5, 6, 128});
  CHECK(LoadPng(dir / "rgba.png") == Image(2, 1, {1, 2, 3, 4, 5, 6}));
}

TEST_CASE("load errors") {
  TempDir dir;
  CHECK(KindOf([&] { LoadPng(dir / "missing.png"); }) == ErrorKind::kFileNotFound);

  {
    std::FILE* f = std::fopen((dir / "junk.png").c_str(), "wb");
    std::fputs("definitely not a png", f);
    std::fclose(f);
  }
  CHECK(KindOf([&] { LoadPng(dir / "junk.png"); }) == ErrorKind::kDecodeFailure);

  // 16-bit: simplified API writes linear 16-bit samples for *_LINEAR formats.
  std::vector<std::uint16_t> deep = {0, 65535, 1000};
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = 1;
  image.height = 1;
  image.format = PNG_FORMAT_LINEAR_RGB;
  REQUIRE(png_image_write_to_file(&image, (dir / "deep.png").c_str(), 0, deep.data(), 0,
                                  nullptr));
  CHECK(KindOf([&] { LoadPng(dir / "deep.png"); }) == ErrorKind::kUnsupportedBitDepth);
}

TEST_CASE("png round trip is the identity on random rasters") {
  TempDir dir;
  for (std::uint32_t seed = 0; seed < 12; ++seed) {
    const int w = 1 + static_cast<int>(seed * 7 % 23);
    const int h = 1 + static_cast<int>(seed * 5 % 17);
    const Image img = RandomImage(w, h, seed);
    SavePng(img, dir / "rt.png");
    CHECK(LoadPng(dir / "rt.png") == img);
  }
}

TEST_CASE("save to a missing directory is an io failure") {
  TempDir dir;
  CHECK(KindOf([&] { SavePng(Image(1, 1), dir / "no" / "such" / "x.png"); }) ==
        ErrorKind::kIoFailure);
}

TEST_CASE("resize") {
  SUBCASE("same size is bit-identical") {
    const Image img = RandomImage(9, 5, 3);
    CHECK(Resize(img, 9, 5) == img);
  }
  SUBCASE("2x2 checkerboard to 1x1 averages with round-half-up") {
    const Image board(2, 2, {0, 0, 0, 255, 255, 255, 255, 255, 255, 0, 0, 0});
    const Image one = Resize(board, 1, 1);
    // (0 + 255 + 255 + 0) / 4 = 127.5 -> 128
    CHECK(one == Image(1, 1, {128, 128, 128}));
  }
  SUBCASE("output dims are exact") {
    const Image frame = RandomImage(320, 180, 1);
    const Image out = Resize(frame, 256, 128);
    CHECK(out.width() == 256);
    CHECK(out.height() == 128);
  }
  SUBCASE("up then down is exact on constants") {
    for (int v : {0, 17, 128, 255}) {
      const Image c = Image::Filled(7, 5, v, 255 - v, v / 2);
      CHECK(Resize(Resize(c, 14, 10), 7, 5) == c);
    }
  }
  CHECK_THROWS_AS(Resize(Image(2, 2), 0, 1), Error);
}

TEST_CASE("split side by side") {
  const Image row(4, 1, {1, 1, 1, 2, 2, 2, 3, 3, 3, 4, 4, 4});
  auto [l, r] = SplitSideBySide(row);
  CHECK(l == Image(2, 1, {1, 1, 1, 2, 2, 2}));
  CHECK(r == Image(2, 1, {3, 3, 3, 4, 4, 4}));

  CHECK(KindOf([] { SplitSideBySide(Image(3, 1)); }) == ErrorKind::kOddWidth);

  const Image capture = RandomImage(2560, 960, 5);
  auto [cl, cr] = SplitSideBySide(capture);
  CHECK(cl.width() == 1280);
  CHECK(cr.height() == 960);
  CHECK(ConcatHorizontal(cl, cr) == capture);
}

TEST_CASE("split then concatenate is the identity") {
  for (std::uint32_t seed = 1; seed < 10; ++seed) {
    const Image img = RandomImage(2 * static_cast<int>(seed), 1 + static_cast<int>(seed % 4), seed);
    auto [l, r] = SplitSideBySide(img);
    CHECK(ConcatHorizontal(l, r) == img);
  }
}

TEST_CASE("grayscale weights") {
  const Image px(3, 1, {255, 0, 0, 0, 255, 0, 0, 0, 255});
  const auto g = ToGray(px);
  CHECK(g[0] == 76);   // 76.245
  CHECK(g[1] == 150);  // 149.685
  CHECK(g[2] == 29);   // 29.07
}
