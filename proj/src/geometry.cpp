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
#include "cmden/geometry.hpp"

#include <cmath>

#include "cmden/parallel.hpp"

namespace cmden::geometry {

namespace {

// Small-angle series kick in below this; the closed forms lose digits to
// cancellation well before 1e-8.
constexpr double kSmallAngle = 1e-4;

void check_finite6(const Vec6& p, const char* where) {
  for (int i = 0; i < 6; ++i) {
    if (!std::isfinite(p[i])) throw std::invalid_argument(std::string(where) + ": non-finite parameter");
  }
}

}  // namespace

CameraIntrinsics::CameraIntrinsics(double fx_, double fy_, double cx_, double cy_, int w, int h)
    : fx(fx_), fy(fy_), cx(cx_), cy(cy_), width(w), height(h) {
  if (!(fx > 0.0) || !(fy > 0.0)) throw std::invalid_argument("CameraIntrinsics: focal lengths must be positive");
  if (width <= 0 || height <= 0) throw std::invalid_argument("CameraIntrinsics: image size must be positive");
  if (cx < 0.0 || cx >= width || cy < 0.0 || cy >= height) {
    throw std::invalid_argument("CameraIntrinsics: principal point outside the image");
  }
}

Mat3 CameraIntrinsics::matrix() const {
  Mat3 k = Mat3::Identity();
  k(0, 0) = fx;
  k(1, 1) = fy;
  k(0, 2) = cx;
  k(1, 2) = cy;
  return k;
}

Mat3 CameraIntrinsics::inverse_matrix() const {
  Mat3 k = Mat3::Identity();
  k(0, 0) = 1.0 / fx;
  k(1, 1) = 1.0 / fy;
  k(0, 2) = -cx / fx;
  k(1, 2) = -cy / fy;
  return k;
}

Mat3 so3_hat(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
  return m;
}

Mat3 so3_exp(const Vec3& w) {
  const double theta2 = w.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 hat = so3_hat(w);
  double c1;  // sin(t)/t
  double c2;  // (1-cos(t))/t^2
  if (theta < kSmallAngle) {
    c1 = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    c2 = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
  } else {
    c1 = std::sin(theta) / theta;
    c2 = (1.0 - std::cos(theta)) / theta2;
  }
  return Mat3::Identity() + c1 * hat + c2 * hat * hat;
}

Vec3 so3_log(const Mat3& r) {
  const double trace = r.trace();
  const double cos_theta = std::min(1.0, std::max(-1.0, (trace - 1.0) * 0.5));
  const double theta = std::acos(cos_theta);
  Vec3 axis_sin(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  if (theta < kSmallAngle) {
    // axis_sin = 2 sin(t) * axis; 1/(2 sinc(t)) ~ 0.5 + t^2/12
    return (0.5 + theta * theta / 12.0) * axis_sin;
  }
  if (theta > M_PI - 1e-6) {
    // Near pi the skew part vanishes; recover the axis from the symmetric part.
    Mat3 s = 0.5 * (r + Mat3::Identity());
    Vec3 axis(std::sqrt(std::max(0.0, s(0, 0))), std::sqrt(std::max(0.0, s(1, 1))),
              std::sqrt(std::max(0.0, s(2, 2))));
    int k = 0;
    if (axis.y() > axis.x()) k = 1;
    if (axis.z() > axis[k]) k = 2;
    if (axis[k] < 1e-12) return Vec3::Zero();
    // Fix signs against the off-diagonal terms.
    if (k == 0) {
      axis.y() = std::copysign(axis.y(), s(0, 1));
      axis.z() = std::copysign(axis.z(), s(0, 2));
    } else if (k == 1) {
      axis.x() = std::copysign(axis.x(), s(0, 1));
      axis.z() = std::copysign(axis.z(), s(1, 2));
    } else {
      axis.x() = std::copysign(axis.x(), s(0, 2));
      axis.y() = std::copysign(axis.y(), s(1, 2));
    }
    axis.normalize();
    if (axis_sin.dot(axis) < 0.0) axis = -axis;
    return theta * axis;
  }
  return (theta / (2.0 * std::sin(theta))) * axis_sin;
}

Mat3 so3_right_jacobian(const Vec3& w) {
  const double theta2 = w.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 hat = so3_hat(w);
  double c2;  // (1-cos(t))/t^2
  double c3;  // (t-sin(t))/t^3
  if (theta < kSmallAngle) {
    c2 = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    c3 = 1.0 / 6.0 - theta2 / 120.0 + theta2 * theta2 / 5040.0;
  } else {
    c2 = (1.0 - std::cos(theta)) / theta2;
    c3 = (theta - std::sin(theta)) / (theta2 * theta);
  }
  return Mat3::Identity() - c2 * hat + c3 * hat * hat;
}

PoseSE3 PoseSE3::identity() { return PoseSE3{}; }

PoseSE3 PoseSE3::exp6(const Vec6& params) {
  check_finite6(params, "PoseSE3::exp6");
  PoseSE3 p;
  p.params = params;
  p.rotation = so3_exp(params.head<3>());
  p.translation = params.tail<3>();
  return p;
}

PoseSE3 PoseSE3::from_rt(const Mat3& rotation, const Vec3& translation) {
  PoseSE3 p;
  p.rotation = rotation;
  p.translation = translation;
  p.params.head<3>() = so3_log(rotation);
  p.params.tail<3>() = translation;
  return p;
}

PoseSE3 PoseSE3::inverse() const {
  return from_rt(rotation.transpose(), -(rotation.transpose() * translation));
}

PoseSE3 compose(const PoseSE3& a, const PoseSE3& b) {
  return PoseSE3::from_rt(b.rotation * a.rotation, b.rotation * a.translation + b.translation);
}

DepthMapping::DepthMapping(double min_d, double max_d) : min_depth(min_d), max_depth(max_d) {
  if (!(min_depth > 0.0) || !(min_depth < max_depth)) {
    throw std::invalid_argument("DepthMapping: require 0 < min_depth < max_depth");
  }
}

ImageGrid sigma_to_depth(const ImageGrid& sigma, double min_depth, double max_depth) {
  const DepthMapping m(min_depth, max_depth);
  ImageGrid out(sigma.height, sigma.width, sigma.channels);
  for (std::size_t i = 0; i < sigma.data.size(); ++i) {
    const double s = sigma.data[i];
    if (!std::isfinite(s)) throw std::invalid_argument("sigma_to_depth: non-finite sigma");
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("sigma_to_depth: sigma outside [0, 1]");
    out.data[i] = 1.0 / (m.a() * s + m.b());
  }
  return out;
}

ImageGrid sigma_to_depth_dsigma(const ImageGrid& sigma, double min_depth, double max_depth) {
  const DepthMapping m(min_depth, max_depth);
  ImageGrid out(sigma.height, sigma.width, sigma.channels);
  for (std::size_t i = 0; i < sigma.data.size(); ++i) {
    const double d = 1.0 / (m.a() * sigma.data[i] + m.b());
    out.data[i] = -m.a() * d * d;
  }
  return out;
}

WarpField warp_coordinates(const ImageGrid& depth, const PoseSE3& pose, const CameraIntrinsics& K) {
  if (depth.channels != 1) throw std::invalid_argument("warp_coordinates: depth must be single channel");
  require_finite(depth, "warp_coordinates");
  check_finite6(pose.params, "warp_coordinates");

  const int h = depth.height;
  const int w = depth.width;
  WarpField out{ImageGrid::zeros(h, w), ImageGrid::zeros(h, w), ImageGrid::zeros(h, w),
                ImageGrid::zeros(h, w), ImageGrid::zeros(h, w), ImageGrid::zeros(h, w)};

  const Mat3 r = pose.rotation;
  const Vec3 t = pose.translation;
  const double ifx = 1.0 / K.fx, ify = 1.0 / K.fy;

  parallel_rows(0, h, [&](int y) {
    const double ry = (y - K.cy) * ify;
    for (int x = 0; x < w; ++x) {
      // Ray through the pixel, then m = R * K^-1 * p.
      const Vec3 ray((x - K.cx) * ifx, ry, 1.0);
      const Vec3 m = r * ray;
      const double d = depth.at(y, x);
      const Vec3 q = d * m + t;
      out.qx.at(y, x) = q.x();
      out.qy.at(y, x) = q.y();
      out.qz.at(y, x) = q.z();
      if (q.z() > kZEps) {
        out.u.at(y, x) = K.fx * q.x() / q.z() + K.cx;
        out.v.at(y, x) = K.fy * q.y() / q.z() + K.cy;
        out.valid.at(y, x) = 1.0;
      }
    }
  });
  return out;
}

void warp_coordinates_adjoint(const WarpField& warp, const ImageGrid& depth, const PoseSE3& pose,
                              const CameraIntrinsics& K, const ImageGrid& u_bar,
                              const ImageGrid& v_bar, ImageGrid* depth_bar, Vec6* pose_bar) {
  require_same_shape(u_bar, depth, "warp_coordinates_adjoint");
  require_same_shape(v_bar, depth, "warp_coordinates_adjoint");

  const int h = depth.height;
  const int w = depth.width;
  const Mat3 r = pose.rotation;
  const Vec3 t = pose.translation;
  const Mat3 jr = so3_right_jacobian(pose.params.head<3>());
  const double ifx = 1.0 / K.fx, ify = 1.0 / K.fy;

  // Per-row partials, merged in row order afterwards for determinism.
  std::vector<Vec3> omega_rows(h, Vec3::Zero());
  std::vector<Vec3> trans_rows(h, Vec3::Zero());

  parallel_rows(0, h, [&](int y) {
    Vec3 omega_acc = Vec3::Zero();
    Vec3 trans_acc = Vec3::Zero();
    const double ry = (y - K.cy) * ify;
    for (int x = 0; x < w; ++x) {
      if (warp.valid.at(y, x) == 0.0) continue;
      const double ub = u_bar.at(y, x);
      const double vb = v_bar.at(y, x);
      if (ub == 0.0 && vb == 0.0) continue;

      const double qx = warp.qx.at(y, x);
      const double qy = warp.qy.at(y, x);
      const double qz = warp.qz.at(y, x);
      const double iz = 1.0 / qz;

      // u = fx*qx/qz + cx, v = fy*qy/qz + cy.
      Vec3 q_bar(K.fx * iz * ub, K.fy * iz * vb,
                 -(K.fx * qx * ub + K.fy * qy * vb) * iz * iz);

      const Vec3 ray((x - K.cx) * ifx, ry, 1.0);
      const double d = depth.at(y, x);
      const Vec3 m = (Vec3(qx, qy, qz) - t) / d;  // R * ray
      if (depth_bar != nullptr) depth_bar->at(y, x) += q_bar.dot(m);
      if (pose_bar != nullptr) {
        // q = R(omega) * (d * ray) + t; d(R x)/d(omega) = -R * hat(x) * Jr.
        const Vec3 x_cam = d * ray;
        omega_acc += jr.transpose() * x_cam.cross(r.transpose() * q_bar);
        trans_acc += q_bar;
      }
    }
    omega_rows[y] = omega_acc;
    trans_rows[y] = trans_acc;
  });

  if (pose_bar != nullptr) {
    for (int y = 0; y < h; ++y) {
      pose_bar->head<3>() += omega_rows[y];
      pose_bar->tail<3>() += trans_rows[y];
    }
  }
}

}  // namespace cmden::geometry
