/*
Copyright 2026 The cmden Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <vector>

#include "cmden/geometry.hpp"
#include "cmden/grid.hpp"

namespace cmden::imaging {

/// An image resampled through a coordinate field. Pixels with validity 0
/// carry value 0 and contribute zero loss and zero gradient downstream.
struct SampledView {
  ImageGrid image;
  ImageGrid validity;  // 1 where in-bounds and geometrically valid
};

/// Differentiable bilinear lookup of `source` at per-pixel coordinates
/// (u, v). Coordinates outside [0, W-1] x [0, H-1] or with coord_valid == 0
/// yield validity 0. Throws on shape mismatch.
SampledView bilinear_sample(const ImageGrid& source, const ImageGrid& u, const ImageGrid& v,
                            const ImageGrid& coord_valid);

/// Accumulates d(loss)/du and d(loss)/dv from cotangents on the sampled
/// values. Invalid pixels contribute nothing.
void bilinear_sample_adjoint(const ImageGrid& source, const ImageGrid& u, const ImageGrid& v,
                             const ImageGrid& coord_valid, const ImageGrid& value_bar,
                             ImageGrid* u_bar, ImageGrid* v_bar);

/// View synthesis: warp target pixels into the source view and sample it.
/// Validity is the conjunction of the geometric and in-bounds checks.
SampledView synthesize_view(const ImageGrid& source, const ImageGrid& target_depth,
                            const geometry::PoseSE3& pose, const geometry::CameraIntrinsics& K);

/// Align-corners bilinear enlargement. Throws if the target is smaller than
/// the source in either dimension.
ImageGrid upsample_bilinear(const ImageGrid& image, int target_h, int target_w);

/// Transpose of upsample_bilinear as a linear map: scatters cotangents on
/// the enlarged grid back onto a source_h x source_w grid.
ImageGrid upsample_bilinear_adjoint(const ImageGrid& out_bar, int source_h, int source_w);

/// Forward differences, zero-padded on the last column/row so the outputs
/// keep the input shape. Throws if either dimension is 1.
void spatial_gradients(const ImageGrid& image, ImageGrid* dx, ImageGrid* dy);

/// Box-filter mean over window x window neighborhoods with reflection
/// padding (borders mirrored without repeating the edge sample).
ImageGrid box_filter_reflect(const ImageGrid& image, int window);

/// Scatter transpose of box_filter_reflect.
ImageGrid box_filter_reflect_adjoint(const ImageGrid& out_bar, int window);

/// Windowed first and second moments for a pair of equally shaped grids.
/// Variances are population variances over the window.
struct LocalStats {
  ImageGrid mu_a, mu_b;
  ImageGrid var_a, var_b;
  ImageGrid cov_ab;
};

LocalStats local_mean_var(const ImageGrid& a, const ImageGrid& b, int window);

}  // namespace cmden::imaging
