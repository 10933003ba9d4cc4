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
#include "cmden/imaging.hpp"

#include <algorithm>
#include <cmath>

#include "cmden/parallel.hpp"

namespace cmden::imaging {

namespace {

// Mirror an index into [0, n) without repeating the edge sample.
inline int reflect_index(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * n - 2 - i;
  }
  return i;
}

// Cell base and fraction for sampling at coordinate c in [0, n-1]. The base
// is clamped to n-2 so the weight stays in [0, 1] and c = n-1 lands exactly
// on the last sample.
inline void sample_cell(double c, int n, int* base, double* frac) {
  int b = static_cast<int>(std::floor(c));
  if (b > n - 2) b = n - 2;
  if (b < 0) b = 0;
  *base = b;
  *frac = c - b;
}

}  // namespace

SampledView bilinear_sample(const ImageGrid& source, const ImageGrid& u, const ImageGrid& v,
                            const ImageGrid& coord_valid) {
  require_same_shape(u, v, "bilinear_sample");
  require_same_shape(u, coord_valid, "bilinear_sample");
  if (u.channels != 1) throw std::invalid_argument("bilinear_sample: coordinate grids must be single channel");
  if (u.height != source.height || u.width != source.width) {
    throw std::invalid_argument("bilinear_sample: coordinate grid size must match the source image");
  }

  const int h = source.height, w = source.width, ch = source.channels;
  SampledView out{ImageGrid::zeros(h, w, ch), ImageGrid::zeros(h, w)};

  parallel_rows(0, h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      if (coord_valid.at(y, x) == 0.0) continue;
      const double su = u.at(y, x);
      const double sv = v.at(y, x);
      if (!(su >= 0.0 && su <= w - 1 && sv >= 0.0 && sv <= h - 1)) continue;
      int x0, y0;
      double fx, fy;
      sample_cell(su, w, &x0, &fx);
      sample_cell(sv, h, &y0, &fy);
      const double w00 = (1.0 - fx) * (1.0 - fy);
      const double w10 = fx * (1.0 - fy);
      const double w01 = (1.0 - fx) * fy;
      const double w11 = fx * fy;
      for (int c = 0; c < ch; ++c) {
        out.image.at(y, x, c) = w00 * source.at(y0, x0, c) + w10 * source.at(y0, x0 + 1, c) +
                                w01 * source.at(y0 + 1, x0, c) + w11 * source.at(y0 + 1, x0 + 1, c);
      }
      out.validity.at(y, x) = 1.0;
    }
  });
  return out;
}

void bilinear_sample_adjoint(const ImageGrid& source, const ImageGrid& u, const ImageGrid& v,
                             const ImageGrid& coord_valid, const ImageGrid& value_bar,
                             ImageGrid* u_bar, ImageGrid* v_bar) {
  if (value_bar.height != source.height || value_bar.width != source.width ||
      value_bar.channels != source.channels) {
    throw std::invalid_argument("bilinear_sample_adjoint: cotangent shape mismatch");
  }
  const int h = source.height, w = source.width, ch = source.channels;

  parallel_rows(0, h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      if (coord_valid.at(y, x) == 0.0) continue;
      const double su = u.at(y, x);
      const double sv = v.at(y, x);
      if (!(su >= 0.0 && su <= w - 1 && sv >= 0.0 && sv <= h - 1)) continue;
      int x0, y0;
      double fx, fy;
      sample_cell(su, w, &x0, &fx);
      sample_cell(sv, h, &y0, &fy);
      double du = 0.0, dv = 0.0;
      for (int c = 0; c < ch; ++c) {
        const double g = value_bar.at(y, x, c);
        if (g == 0.0) continue;
        const double s00 = source.at(y0, x0, c);
        const double s10 = source.at(y0, x0 + 1, c);
        const double s01 = source.at(y0 + 1, x0, c);
        const double s11 = source.at(y0 + 1, x0 + 1, c);
        du += g * ((1.0 - fy) * (s10 - s00) + fy * (s11 - s01));
        dv += g * ((1.0 - fx) * (s01 - s00) + fx * (s11 - s10));
      }
      if (u_bar != nullptr) u_bar->at(y, x) += du;
      if (v_bar != nullptr) v_bar->at(y, x) += dv;
    }
  });
}

SampledView synthesize_view(const ImageGrid& source, const ImageGrid& target_depth,
                            const geometry::PoseSE3& pose, const geometry::CameraIntrinsics& K) {
  const geometry::WarpField warp = geometry::warp_coordinates(target_depth, pose, K);
  return bilinear_sample(source, warp.u, warp.v, warp.valid);
}

ImageGrid upsample_bilinear(const ImageGrid& image, int target_h, int target_w) {
  if (target_h < image.height || target_w < image.width) {
    throw std::invalid_argument("upsample_bilinear: target size smaller than source");
  }
  if (target_h == image.height && target_w == image.width) return image;

  const int sh = image.height, sw = image.width, ch = image.channels;
  ImageGrid out(target_h, target_w, ch);
  const double sy = target_h > 1 ? static_cast<double>(sh - 1) / (target_h - 1) : 0.0;
  const double sx = target_w > 1 ? static_cast<double>(sw - 1) / (target_w - 1) : 0.0;

  parallel_rows(0, target_h, [&](int y) {
    int y0;
    double fy;
    sample_cell(y * sy, sh, &y0, &fy);
    for (int x = 0; x < target_w; ++x) {
      int x0;
      double fx;
      sample_cell(x * sx, sw, &x0, &fx);
      const double w00 = (1.0 - fx) * (1.0 - fy);
      const double w10 = fx * (1.0 - fy);
      const double w01 = (1.0 - fx) * fy;
      const double w11 = fx * fy;
      for (int c = 0; c < ch; ++c) {
        out.at(y, x, c) = w00 * image.at(y0, x0, c) + w10 * image.at(y0, x0 + 1, c) +
                          w01 * image.at(y0 + 1, x0, c) + w11 * image.at(y0 + 1, x0 + 1, c);
      }
    }
  });
  return out;
}

ImageGrid upsample_bilinear_adjoint(const ImageGrid& out_bar, int source_h, int source_w) {
  if (out_bar.height < source_h || out_bar.width < source_w) {
    throw std::invalid_argument("upsample_bilinear_adjoint: cotangent smaller than source");
  }
  if (out_bar.height == source_h && out_bar.width == source_w) return out_bar;

  const int th = out_bar.height, tw = out_bar.width, ch = out_bar.channels;
  ImageGrid in_bar(source_h, source_w, ch);
  const double sy = th > 1 ? static_cast<double>(source_h - 1) / (th - 1) : 0.0;
  const double sx = tw > 1 ? static_cast<double>(source_w - 1) / (tw - 1) : 0.0;

  for (int y = 0; y < th; ++y) {
    int y0;
    double fy;
    sample_cell(y * sy, source_h, &y0, &fy);
    for (int x = 0; x < tw; ++x) {
      int x0;
      double fx;
      sample_cell(x * sx, source_w, &x0, &fx);
      for (int c = 0; c < ch; ++c) {
        const double g = out_bar.at(y, x, c);
        if (g == 0.0) continue;
        in_bar.at(y0, x0, c) += g * (1.0 - fx) * (1.0 - fy);
        in_bar.at(y0, x0 + 1, c) += g * fx * (1.0 - fy);
        in_bar.at(y0 + 1, x0, c) += g * (1.0 - fx) * fy;
        in_bar.at(y0 + 1, x0 + 1, c) += g * fx * fy;
      }
    }
  }
  return in_bar;
}

void spatial_gradients(const ImageGrid& image, ImageGrid* dx, ImageGrid* dy) {
  if (image.height < 2 || image.width < 2) {
    throw std::invalid_argument("spatial_gradients: both dimensions must be at least 2");
  }
  const int h = image.height, w = image.width, ch = image.channels;
  if (dx != nullptr) {
    *dx = ImageGrid::zeros(h, w, ch);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w - 1; ++x)
        for (int c = 0; c < ch; ++c) dx->at(y, x, c) = image.at(y, x + 1, c) - image.at(y, x, c);
  }
  if (dy != nullptr) {
    *dy = ImageGrid::zeros(h, w, ch);
    for (int y = 0; y < h - 1; ++y)
      for (int x = 0; x < w; ++x)
        for (int c = 0; c < ch; ++c) dy->at(y, x, c) = image.at(y + 1, x, c) - image.at(y, x, c);
  }
}

ImageGrid box_filter_reflect(const ImageGrid& image, int window) {
  if (window < 1 || window % 2 == 0) {
    throw std::invalid_argument("box_filter_reflect: window must be odd and >= 1");
  }
  if (image.height < 2 || image.width < 2) {
    throw std::invalid_argument("box_filter_reflect: both dimensions must be at least 2");
  }
  const int h = image.height, w = image.width, ch = image.channels;
  const int r = window / 2;
  const double inv = 1.0 / (window * window);
  ImageGrid out(h, w, ch);

  parallel_rows(0, h, [&](int y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        double s = 0.0;
        for (int dy = -r; dy <= r; ++dy) {
          const int yy = reflect_index(y + dy, h);
          for (int dx = -r; dx <= r; ++dx) {
            s += image.at(yy, reflect_index(x + dx, w), c);
          }
        }
        out.at(y, x, c) = s * inv;
      }
    }
  });
  return out;
}

ImageGrid box_filter_reflect_adjoint(const ImageGrid& out_bar, int window) {
  if (window < 1 || window % 2 == 0) {
    throw std::invalid_argument("box_filter_reflect_adjoint: window must be odd and >= 1");
  }
  const int h = out_bar.height, w = out_bar.width, ch = out_bar.channels;
  const int r = window / 2;
  const double inv = 1.0 / (window * window);
  ImageGrid in_bar = ImageGrid::zeros(h, w, ch);

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        const double g = out_bar.at(y, x, c) * inv;
        if (g == 0.0) continue;
        for (int dy = -r; dy <= r; ++dy) {
          const int yy = reflect_index(y + dy, h);
          for (int dx = -r; dx <= r; ++dx) {
            in_bar.at(yy, reflect_index(x + dx, w), c) += g;
          }
        }
      }
    }
  }
  return in_bar;
}

LocalStats local_mean_var(const ImageGrid& a, const ImageGrid& b, int window) {
  require_same_shape(a, b, "local_mean_var");
  const int h = a.height, w = a.width, ch = a.channels;

  ImageGrid aa(h, w, ch), bb(h, w, ch), ab(h, w, ch);
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    aa.data[i] = a.data[i] * a.data[i];
    bb.data[i] = b.data[i] * b.data[i];
    ab.data[i] = a.data[i] * b.data[i];
  }

  LocalStats s;
  s.mu_a = box_filter_reflect(a, window);
  s.mu_b = box_filter_reflect(b, window);
  s.var_a = box_filter_reflect(aa, window);
  s.var_b = box_filter_reflect(bb, window);
  s.cov_ab = box_filter_reflect(ab, window);
  for (std::size_t i = 0; i < s.var_a.data.size(); ++i) {
    s.var_a.data[i] -= s.mu_a.data[i] * s.mu_a.data[i];
    s.var_b.data[i] -= s.mu_b.data[i] * s.mu_b.data[i];
    s.cov_ab.data[i] -= s.mu_a.data[i] * s.mu_b.data[i];
  }
  return s;
}

}  // namespace cmden::imaging
