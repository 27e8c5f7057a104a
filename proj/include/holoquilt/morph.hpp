#pragma once

#include <vector>

#include "holoquilt/image.hpp"

namespace holoquilt {

enum class MorphMethod {
  kDisparity,  // horizontal block matching along rows
  kFlow,       // coarse-to-fine variational optical flow (the "-d" backend)
};

// Dense correspondence from the left image to the right image:
//   left(x, y) ~ right(x - dx, y - dy)
// so content that sits further left in the right view has positive dx.
struct CorrespondenceField {
  int width = 0;
  int height = 0;
  MorphMethod mode = MorphMethod::kDisparity;
  std::vector<float> dx;
  std::vector<float> dy;  // all zero in disparity mode

  float dx_at(int x, int y) const { return dx[static_cast<std::size_t>(y) * width + x]; }
  float dy_at(int x, int y) const { return dy[static_cast<std::size_t>(y) * width + x]; }
};

struct MorphParams {
  MorphMethod method = MorphMethod::kDisparity;
  int subsampling = 1;
  int block_radius = 4;
  int max_displacement = 32;
  double smoothing_weight = 15.0;
  int iterations = 64;

  // Throws kInvalidArgument if a field is out of range.
  void Validate() const;
};

// SAD block matching on the grayscale pair at 1/subsampling scale, searched
// over [-max_displacement, max_displacement] on the same row, then 3x3
// median filtered and scaled back up.
CorrespondenceField ComputeDisparity(const Image& left, const Image& right,
                                     const MorphParams& params);

// Pyramidal Horn-Schunck flow: factor-2 pyramid down to a 16 px minimum
// side, each level pre-blurred with [1 2 1]. Per level: three warps, each
// followed by `iterations` Jacobi sweeps and a 3x3 median on the field.
CorrespondenceField ComputeFlow(const Image& left, const Image& right,
                                const MorphParams& params);

// Dispatches on params.method.
CorrespondenceField ComputeField(const Image& left, const Image& right,
                                 const MorphParams& params);

// Intermediate view at t in [0, 1]: left sampled at p + t*d, right sampled at
// p - (1-t)*d, cross-dissolved with weights (1-t, t). Where one sample falls
// outside the frame the other is used alone; where both do, both are clamped
// to the nearest edge pixel. t = 0 and t = 1 reproduce the inputs exactly.
Image SynthesizeView(const Image& left, const Image& right,
                     const CorrespondenceField& field, double t);

// n >= 2 views at t_k = k / (n - 1); the field is computed once.
std::vector<Image> GenerateViews(const Image& left, const Image& right, int n,
                                 const MorphParams& params);

}  // namespace holoquilt
