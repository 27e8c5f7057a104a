#include "holoquilt/quilt.hpp"

#include <algorithm>
#include <charconv>
#include <string>
#include <utility>

#include "holoquilt/error.hpp"

namespace holoquilt {

namespace {

std::pair<int, int> ParsePair(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorKind::kParseError,
                 "expected INTxINT with both values >= 1, got '" +
                     std::string(text) + "'",
                 std::string(text));
  };
  const auto sep = text.find_first_of("xX");
  if (sep == std::string_view::npos) throw fail();
  auto parse_int = [&](std::string_view part) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (part.empty() || ec != std::errc() || ptr != part.data() + part.size() ||
        value < 1) {
      throw fail();
    }
    return value;
  };
  return {parse_int(text.substr(0, sep)), parse_int(text.substr(sep + 1))};
}

}  // namespace

QuiltLayout::QuiltLayout(int cols, int rows, int view_width, int view_height)
    : cols(cols), rows(rows), view_width(view_width), view_height(view_height) {
  if (cols < 1 || rows < 1 || view_width < 1 || view_height < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "quilt layout fields must all be >= 1");
  }
}

QuiltGrid ParseGrid(std::string_view text) {
  auto [cols, rows] = ParsePair(text);
  return {cols, rows};
}

ViewSize ParseResolution(std::string_view text) {
  auto [rows, cols] = ParsePair(text);
  return {cols, rows};
}

Image AssembleQuilt(const std::vector<Image>& views, const QuiltLayout& layout) {
  if (static_cast<int>(views.size()) != layout.total_views()) {
    throw Error(ErrorKind::kCountMismatch,
                "expected " + std::to_string(layout.total_views()) +
                    " views, got " + std::to_string(views.size()));
  }
  Image quilt(layout.quilt_width(), layout.quilt_height());
  const std::size_t row_bytes =
      static_cast<std::size_t>(layout.view_width) * Image::kChannels;
  for (int k = 0; k < layout.total_views(); ++k) {
    const Image& view = views[k];
    if (view.width() != layout.view_width || view.height() != layout.view_height) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "view " + std::to_string(k) + " is " +
                      std::to_string(view.width()) + "x" +
                      std::to_string(view.height()) + ", layout expects " +
                      std::to_string(layout.view_width) + "x" +
                      std::to_string(layout.view_height),
                  std::to_string(k));
    }
    const int x0 = layout.TileColumn(k) * layout.view_width;
    const int y0 = layout.TileRow(k) * layout.view_height;
    for (int y = 0; y < layout.view_height; ++y) {
      std::copy_n(view.data().begin() + view.SampleIndex(0, y, 0), row_bytes,
                  quilt.mutable_data().begin() + quilt.SampleIndex(x0, y0 + y, 0));
    }
  }
  return quilt;
}

std::vector<Image> SplitQuilt(const Image& quilt, const QuiltLayout& layout) {
  if (quilt.width() != layout.quilt_width() ||
      quilt.height() != layout.quilt_height()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "quilt is " + std::to_string(quilt.width()) + "x" +
                    std::to_string(quilt.height()) + ", layout needs " +
                    std::to_string(layout.quilt_width()) + "x" +
                    std::to_string(layout.quilt_height()));
  }
  std::vector<Image> views;
  views.reserve(layout.total_views());
  const std::size_t row_bytes =
      static_cast<std::size_t>(layout.view_width) * Image::kChannels;
  for (int k = 0; k < layout.total_views(); ++k) {
    Image view(layout.view_width, layout.view_height);
    const int x0 = layout.TileColumn(k) * layout.view_width;
    const int y0 = layout.TileRow(k) * layout.view_height;
    for (int y = 0; y < layout.view_height; ++y) {
      std::copy_n(quilt.data().begin() + quilt.SampleIndex(x0, y0 + y, 0),
                  row_bytes,
                  view.mutable_data().begin() + view.SampleIndex(0, y, 0));
    }
    views.push_back(std::move(view));
  }
  return views;
}

}  // namespace holoquilt
