#pragma once

#include <string_view>
#include <vector>

#include "holoquilt/image.hpp"

namespace holoquilt {

// Grid dimensions of a quilt mask. "AxB" on the command line means A columns
// by B rows, so "9x5" is nine views across and five down.
struct QuiltGrid {
  int cols = 1;
  int rows = 1;

  int total_views() const { return cols * rows; }
  friend bool operator==(const QuiltGrid&, const QuiltGrid&) = default;
};

struct QuiltLayout {
  int cols = 1;
  int rows = 1;
  int view_width = 1;
  int view_height = 1;

  QuiltLayout() = default;
  // Throws kInvalidArgument unless every field is >= 1.
  QuiltLayout(int cols, int rows, int view_width, int view_height);
  QuiltLayout(QuiltGrid grid, int view_width, int view_height)
      : QuiltLayout(grid.cols, grid.rows, view_width, view_height) {}

  int total_views() const { return cols * rows; }
  int quilt_width() const { return cols * view_width; }
  int quilt_height() const { return rows * view_height; }
  QuiltGrid grid() const { return {cols, rows}; }

  // Tile position of view k. Views fill rows left to right starting from the
  // bottom row, so view 0 is bottom-left and the last view is top-right.
  int TileColumn(int view) const { return view % cols; }
  int TileRow(int view) const { return rows - 1 - view / cols; }

  friend bool operator==(const QuiltLayout&, const QuiltLayout&) = default;
};

// Parses "AxB" ('x' or 'X' separator, both >= 1). Throws kParseError.
QuiltGrid ParseGrid(std::string_view text);

// Parses a "ROWSxCOLS" per-view resolution into (width, height).
struct ViewSize {
  int width = 1;
  int height = 1;
  friend bool operator==(const ViewSize&, const ViewSize&) = default;
};
ViewSize ParseResolution(std::string_view text);

Image AssembleQuilt(const std::vector<Image>& views, const QuiltLayout& layout);
std::vector<Image> SplitQuilt(const Image& quilt, const QuiltLayout& layout);

}  // namespace holoquilt
