#include "holoquilt/morph.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "holoquilt/error.hpp"

namespace holoquilt {

namespace {

// Single-channel float raster used for matching and flow.
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<float> v;

  Plane() = default;
  Plane(int w, int h, float fill = 0.0f)
      : width(w), height(h), v(static_cast<std::size_t>(w) * h, fill) {}

  float& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
  float at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
  float clamped(int x, int y) const {
    return at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1));
  }
  // Bilinear with border replication.
  float Sample(float x, float y) const {
    x = std::clamp(x, 0.0f, static_cast<float>(width - 1));
    y = std::clamp(y, 0.0f, static_cast<float>(height - 1));
    const int x0 = static_cast<int>(x);
    const int y0 = static_cast<int>(y);
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const float fx = x - x0;
    const float fy = y - y0;
    const float top = at(x0, y0) + fx * (at(x1, y0) - at(x0, y0));
    const float bottom = at(x0, y1) + fx * (at(x1, y1) - at(x0, y1));
    return top + fy * (bottom - top);
  }
};

Plane GrayPlane(const Image& image) {
  const auto gray = ToGray(image);
  Plane p(image.width(), image.height());
  std::copy(gray.begin(), gray.end(), p.v.begin());
  return p;
}

// Pixel-centre aligned bilinear resampling, same convention as Resize().
Plane ResizePlane(const Plane& src, int w, int h) {
  if (w == src.width && h == src.height) return src;
  Plane out(w, h);
  const float sx = static_cast<float>(src.width) / w;
  const float sy = static_cast<float>(src.height) / h;
  for (int y = 0; y < h; ++y) {
    const float fy = (y + 0.5f) * sy - 0.5f;
    for (int x = 0; x < w; ++x) {
      out.at(x, y) = src.Sample((x + 0.5f) * sx - 0.5f, fy);
    }
  }
  return out;
}

// Factor-2 reduction by averaging 2x2 blocks (odd trailing rows/columns are
// folded into the last output pixel).
Plane Halve(const Plane& src) {
  const int w = std::max(1, src.width / 2);
  const int h = std::max(1, src.height / 2);
  Plane out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(x, y) = 0.25f * (src.clamped(2 * x, 2 * y) + src.clamped(2 * x + 1, 2 * y) +
                              src.clamped(2 * x, 2 * y + 1) +
                              src.clamped(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

// Separable [1 2 1] / 4 blur with clamped borders.
Plane Smooth121(const Plane& src) {
  Plane tmp(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      tmp.at(x, y) = 0.25f * (src.clamped(x - 1, y) + 2.0f * src.at(x, y) + src.clamped(x + 1, y));
    }
  }
  Plane out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      out.at(x, y) = 0.25f * (tmp.clamped(x, y - 1) + 2.0f * tmp.at(x, y) + tmp.clamped(x, y + 1));
    }
  }
  return out;
}

void CheckPair(const Image& left, const Image& right) {
  if (!left.SameSize(right)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "stereo pair sizes differ: " + std::to_string(left.width()) + "x" +
                    std::to_string(left.height()) + " vs " +
                    std::to_string(right.width()) + "x" +
                    std::to_string(right.height()));
  }
}

int Reduced(int size, int factor) { return std::max(1, size / factor); }

float Median9(std::array<float, 9> w) {
  std::nth_element(w.begin(), w.begin() + 4, w.end());
  return w[4];
}

Plane Median3x3(const Plane& src) {
  Plane out(src.width, src.height);
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      std::array<float, 9> w;
      int i = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) w[i++] = src.clamped(x + dx, y + dy);
      }
      out.at(x, y) = Median9(w);
    }
  }
  return out;
}

// Upsamples a field component computed at reduced scale and rescales its
// values by `factor`, then bounds it by the configured maximum.
std::vector<float> ToFullScale(const Plane& component, int width, int height,
                               float factor, float limit) {
  Plane full = ResizePlane(component, width, height);
  for (float& d : full.v) d = std::clamp(d * factor, -limit, limit);
  return std::move(full.v);
}

// Sum over the (2r+1)^2 window with replicated borders, separable.
void BoxSum(const Plane& src, int r, Plane* tmp, Plane* out) {
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float s = 0.0f;
      for (int k = -r; k <= r; ++k) s += src.clamped(x, y + k);
      tmp->at(x, y) = s;
    }
  }
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      float s = 0.0f;
      for (int k = -r; k <= r; ++k) s += tmp->clamped(x + k, y);
      out->at(x, y) = s;
    }
  }
}

std::uint8_t RoundHalfUp(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

// Bilinear sample of one channel; exact at integer positions and on
// constant neighbourhoods.
double SampleChannel(const Image& img, double x, double y, int c) {
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  const double a = img.at(x0, y0, c);
  const double b = img.at(x1, y0, c);
  const double top = a + fx * (b - a);
  const double d = img.at(x0, y1, c);
  const double e = img.at(x1, y1, c);
  const double bottom = d + fx * (e - d);
  return top + fy * (bottom - top);
}

bool Inside(const Image& img, double x, double y) {
  return x >= 0.0 && y >= 0.0 && x <= img.width() - 1.0 && y <= img.height() - 1.0;
}

}  // namespace

void MorphParams::Validate() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorKind::kInvalidArgument, "morph parameter " + what, what);
  };
  if (subsampling < 1) fail("subsampling must be >= 1");
  if (block_radius < 1) fail("block_radius must be >= 1");
  if (iterations < 1) fail("iterations must be >= 1");
  if (max_displacement < 1) fail("max_displacement must be >= 1");
  if (!(smoothing_weight > 0.0)) fail("smoothing_weight must be > 0");
}

CorrespondenceField ComputeDisparity(const Image& left, const Image& right,
                                     const MorphParams& params) {
  params.Validate();
  CheckPair(left, right);
  const int s = params.subsampling;
  const int w = Reduced(left.width(), s);
  const int h = Reduced(left.height(), s);
  const int r = params.block_radius;
  if (w < 2 * r + 1 || h < 2 * r + 1) {
    throw Error(ErrorKind::kDegenerateImage,
                "matching image " + std::to_string(w) + "x" + std::to_string(h) +
                    " is smaller than the " + std::to_string(2 * r + 1) +
                    " px block window");
  }
  const Plane gl = ResizePlane(GrayPlane(left), w, h);
  const Plane gr = ResizePlane(GrayPlane(right), w, h);
  const int max_d = (params.max_displacement + s - 1) / s;

  Plane best_cost(w, h, std::numeric_limits<float>::infinity());
  Plane best_d(w, h, 0.0f);
  Plane diff(w, h), tmp(w, h), cost(w, h);
  // Candidates in order 0, +1, -1, +2, -2, ...; a strict improvement is
  // required to replace an earlier one, so ties favour small shifts.
  for (int step = 0; step <= 2 * max_d; ++step) {
    const int d = (step % 2 == 1) ? (step + 1) / 2 : -(step / 2);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        diff.at(x, y) = std::abs(gl.at(x, y) - gr.clamped(x - d, y));
      }
    }
    BoxSum(diff, r, &tmp, &cost);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (x - d < 0 || x - d >= w) continue;
        if (cost.at(x, y) < best_cost.at(x, y)) {
          best_cost.at(x, y) = cost.at(x, y);
          best_d.at(x, y) = static_cast<float>(d);
        }
      }
    }
  }

  const Plane filtered = Median3x3(best_d);
  CorrespondenceField field;
  field.width = left.width();
  field.height = left.height();
  field.mode = MorphMethod::kDisparity;
  field.dx = ToFullScale(filtered, left.width(), left.height(), static_cast<float>(s),
                         static_cast<float>(params.max_displacement));
  field.dy.assign(field.dx.size(), 0.0f);
  return field;
}

constexpr int kWarpsPerLevel = 3;

CorrespondenceField ComputeFlow(const Image& left, const Image& right,
                                const MorphParams& params) {
  params.Validate();
  CheckPair(left, right);
  const int s = params.subsampling;
  const int w = Reduced(left.width(), s);
  const int h = Reduced(left.height(), s);

  std::vector<Plane> pyr_l{ResizePlane(GrayPlane(left), w, h)};
  std::vector<Plane> pyr_r{ResizePlane(GrayPlane(right), w, h)};
  constexpr int kMinSide = 16;
  while (std::min(pyr_l.back().width, pyr_l.back().height) / 2 >= kMinSide) {
    pyr_l.push_back(Halve(pyr_l.back()));
    pyr_r.push_back(Halve(pyr_r.back()));
  }
  for (auto& p : pyr_l) p = Smooth121(p);
  for (auto& p : pyr_r) p = Smooth121(p);

  const float lambda = static_cast<float>(params.smoothing_weight);
  Plane u, v;
  for (int level = static_cast<int>(pyr_l.size()) - 1; level >= 0; --level) {
    const Plane& pl = pyr_l[level];
    const Plane& pr = pyr_r[level];
    const int lw = pl.width;
    const int lh = pl.height;
    if (u.v.empty()) {
      u = Plane(lw, lh);
      v = Plane(lw, lh);
    } else {
      const float fx = static_cast<float>(lw) / u.width;
      const float fy = static_cast<float>(lh) / u.height;
      u = ResizePlane(u, lw, lh);
      v = ResizePlane(v, lw, lh);
      for (float& a : u.v) a *= fx;
      for (float& a : v.v) a *= fy;
    }

    for (int warp = 0; warp < kWarpsPerLevel; ++warp) {
      // Linearise right(p - d) around the current estimate d0.
      Plane warped(lw, lh);
      for (int y = 0; y < lh; ++y) {
        for (int x = 0; x < lw; ++x) {
          warped.at(x, y) = pr.Sample(x - u.at(x, y), y - v.at(x, y));
        }
      }
      Plane ix(lw, lh), iy(lw, lh), it(lw, lh);
      for (int y = 0; y < lh; ++y) {
        for (int x = 0; x < lw; ++x) {
          const float gx = 0.25f * (warped.clamped(x + 1, y) - warped.clamped(x - 1, y) +
                                    pl.clamped(x + 1, y) - pl.clamped(x - 1, y));
          const float gy = 0.25f * (warped.clamped(x, y + 1) - warped.clamped(x, y - 1) +
                                    pl.clamped(x, y + 1) - pl.clamped(x, y - 1));
          // right(p - d0 - delta) ~ warped - grad . delta
          ix.at(x, y) = -gx;
          iy.at(x, y) = -gy;
          it.at(x, y) = warped.at(x, y) - pl.at(x, y);
        }
      }

      const Plane u0 = u;
      const Plane v0 = v;
      Plane next_u(lw, lh), next_v(lw, lh);
      for (int iter = 0; iter < params.iterations; ++iter) {
        for (int y = 0; y < lh; ++y) {
          for (int x = 0; x < lw; ++x) {
            const float avg_u = 0.25f * (u.clamped(x - 1, y) + u.clamped(x + 1, y) +
                                         u.clamped(x, y - 1) + u.clamped(x, y + 1));
            const float avg_v = 0.25f * (v.clamped(x - 1, y) + v.clamped(x + 1, y) +
                                         v.clamped(x, y - 1) + v.clamped(x, y + 1));
            const float du = avg_u - u0.at(x, y);
            const float dv = avg_v - v0.at(x, y);
            const float gx = ix.at(x, y);
            const float gy = iy.at(x, y);
            const float k =
                (gx * du + gy * dv + it.at(x, y)) / (lambda + gx * gx + gy * gy);
            next_u.at(x, y) = avg_u - gx * k;
            next_v.at(x, y) = avg_v - gy * k;
          }
        }
        std::swap(u, next_u);
        std::swap(v, next_v);
      }
      u = Median3x3(u);
      v = Median3x3(v);
    }
  }

  CorrespondenceField field;
  field.width = left.width();
  field.height = left.height();
  field.mode = MorphMethod::kFlow;
  const float fx = static_cast<float>(left.width()) / w;
  const float fy = static_cast<float>(left.height()) / h;
  const float limit = static_cast<float>(params.max_displacement);
  field.dx = ToFullScale(u, left.width(), left.height(), fx, limit);
  field.dy = ToFullScale(v, left.width(), left.height(), fy, limit);
  return field;
}

CorrespondenceField ComputeField(const Image& left, const Image& right,
                                 const MorphParams& params) {
  return params.method == MorphMethod::kFlow ? ComputeFlow(left, right, params)
                                             : ComputeDisparity(left, right, params);
}

Image SynthesizeView(const Image& left, const Image& right,
                     const CorrespondenceField& field, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw Error(ErrorKind::kTOutOfRange,
                "interpolation parameter t = " + std::to_string(t) +
                    " is outside [0, 1]");
  }
  CheckPair(left, right);
  if (field.width != left.width() || field.height != left.height()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "correspondence field does not match the image size");
  }
  const double max_x = left.width() - 1.0;
  const double max_y = left.height() - 1.0;
  Image out(left.width(), left.height());
  for (int y = 0; y < left.height(); ++y) {
    for (int x = 0; x < left.width(); ++x) {
      const double dx = field.dx_at(x, y);
      const double dy = field.dy_at(x, y);
      double lx = x + t * dx, ly = y + t * dy;
      double rx = x - (1.0 - t) * dx, ry = y - (1.0 - t) * dy;
      const bool left_ok = Inside(left, lx, ly);
      const bool right_ok = Inside(right, rx, ry);
      double wl = 1.0 - t, wr = t;
      if (left_ok && !right_ok) {
        wl = 1.0, wr = 0.0;
      } else if (!left_ok && right_ok) {
        wl = 0.0, wr = 1.0;
      } else if (!left_ok && !right_ok) {
        lx = std::clamp(lx, 0.0, max_x), ly = std::clamp(ly, 0.0, max_y);
        rx = std::clamp(rx, 0.0, max_x), ry = std::clamp(ry, 0.0, max_y);
      }
      for (int c = 0; c < Image::kChannels; ++c) {
        const double a = wl == 0.0 ? 0.0 : SampleChannel(left, lx, ly, c);
        const double b = wr == 0.0 ? 0.0 : SampleChannel(right, rx, ry, c);
        out.at(x, y, c) = RoundHalfUp(wl * a + wr * b);
      }
    }
  }
  return out;
}

std::vector<Image> GenerateViews(const Image& left, const Image& right, int n,
                                 const MorphParams& params) {
  if (n < 2) {
    throw Error(ErrorKind::kInvalidArgument,
                "need at least 2 views, got " + std::to_string(n));
  }
  const CorrespondenceField field = ComputeField(left, right, params);
  std::vector<Image> views;
  views.reserve(n);
  for (int k = 0; k < n; ++k) {
    views.push_back(SynthesizeView(left, right, field, static_cast<double>(k) / (n - 1)));
  }
  return views;
}

}  // namespace holoquilt
