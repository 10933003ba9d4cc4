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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "cmden/grid.hpp"

namespace cmden::geometry {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Transformed points with z at or below this are treated as behind the
/// camera: the pixel is flagged invalid and contributes no gradient.
constexpr double kZEps = 1e-6;

/// Pinhole camera. Pixel centers sit on integer coordinates, x in [0, W-1],
/// homogeneous convention p = (x, y, 1).
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  CameraIntrinsics() = default;
  CameraIntrinsics(double fx_, double fy_, double cx_, double cy_, int w, int h);

  Mat3 matrix() const;
  Mat3 inverse_matrix() const;
};

Mat3 so3_hat(const Vec3& w);
Mat3 so3_exp(const Vec3& w);
Vec3 so3_log(const Mat3& rotation);
/// Right Jacobian of SO(3): exp((w + d)^) ~= exp(w^) * exp((Jr(w) d)^).
Mat3 so3_right_jacobian(const Vec3& w);

/// Rigid transform with its generating 6-vector (axis-angle, translation).
/// rotation = so3_exp(params.head(3)), translation = params.tail(3).
struct PoseSE3 {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  Vec6 params = Vec6::Zero();

  static PoseSE3 identity();
  static PoseSE3 exp6(const Vec6& params);
  static PoseSE3 from_rt(const Mat3& rotation, const Vec3& translation);

  PoseSE3 inverse() const;
  Vec3 apply(const Vec3& point) const { return rotation * point + translation; }
};

/// Pipeline order: compose(a, b) applies a first, then b.
PoseSE3 compose(const PoseSE3& a, const PoseSE3& b);

/// Inverse-depth parameterization D = 1 / (a*sigma + b) with
/// a = 1/min_depth - 1/max_depth and b = 1/max_depth, so sigma = 1 maps to
/// min_depth and sigma = 0 to max_depth.
struct DepthMapping {
  double min_depth = 0.1;
  double max_depth = 100.0;

  DepthMapping() = default;
  DepthMapping(double min_d, double max_d);

  double a() const { return 1.0 / min_depth - 1.0 / max_depth; }
  double b() const { return 1.0 / max_depth; }
  double depth(double sigma) const { return 1.0 / (a() * sigma + b()); }
  double sigma_for_depth(double d) const { return (1.0 / d - b()) / a(); }
};

/// Elementwise D = 1/(a*sigma + b). Throws on non-finite or out-of-range
/// sigma. Bounds are met by construction, no clamping happens.
ImageGrid sigma_to_depth(const ImageGrid& sigma, double min_depth, double max_depth);

/// Elementwise dD/dsigma = -a * D^2 for the same mapping.
ImageGrid sigma_to_depth_dsigma(const ImageGrid& sigma, double min_depth, double max_depth);

/// H x W field of inverse-depth parameters plus its mapping.
struct DepthField {
  ImageGrid sigma;  // values in [0, 1], channels == 1
  DepthMapping mapping;

  ImageGrid depth() const { return sigma_to_depth(sigma, mapping.min_depth, mapping.max_depth); }
};

/// Per-pixel source coordinates of the target pixels under (depth, pose, K),
/// i.e. p_s ~ K * T * D(p_t) * K^-1 * p_t with perspective division after the
/// transform. Caches the transformed camera points for the adjoint.
struct WarpField {
  ImageGrid u;      // source x coordinate per target pixel
  ImageGrid v;      // source y coordinate per target pixel
  ImageGrid valid;  // 1 where transformed z > kZEps, else 0 (u = v = 0 there)
  ImageGrid qx, qy, qz;  // transformed camera-frame points
};

WarpField warp_coordinates(const ImageGrid& depth, const PoseSE3& pose, const CameraIntrinsics& K);

/// Reverse-mode step for warp_coordinates: accumulates d(loss)/d(depth) and
/// d(loss)/d(pose params) from cotangents on the output coordinates.
/// Invalid pixels contribute nothing.
void warp_coordinates_adjoint(const WarpField& warp, const ImageGrid& depth, const PoseSE3& pose,
                              const CameraIntrinsics& K, const ImageGrid& u_bar,
                              const ImageGrid& v_bar, ImageGrid* depth_bar, Vec6* pose_bar);

}  // namespace cmden::geometry
