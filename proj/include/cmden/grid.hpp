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

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmden {

/// Row-major H x W x C grid of doubles. Images keep intensities in [0, 1];
/// the same container carries depth maps, per-pixel loss maps and 0/1 masks
/// (all with channels == 1).
struct ImageGrid {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<double> data;

  ImageGrid() = default;
  ImageGrid(int h, int w, int c, double fill = 0.0) : height(h), width(w), channels(c) {
    if (h <= 0 || w <= 0 || c <= 0) {
      throw std::invalid_argument("ImageGrid: dimensions must be positive");
    }
    data.assign(static_cast<std::size_t>(h) * w * c, fill);
  }

  static ImageGrid zeros(int h, int w, int c = 1) { return ImageGrid(h, w, c, 0.0); }
  static ImageGrid constant(int h, int w, int c, double value) { return ImageGrid(h, w, c, value); }

  std::size_t index(int y, int x, int c = 0) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double& at(int y, int x, int c = 0) { return data[index(y, x, c)]; }
  double at(int y, int x, int c = 0) const { return data[index(y, x, c)]; }

  std::size_t size() const { return data.size(); }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height) * width; }

  bool same_shape(const ImageGrid& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }

  bool all_finite() const {
    for (double v : data) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  double min_value() const {
    double m = data.empty() ? 0.0 : data[0];
    for (double v : data) m = std::min(m, v);
    return m;
  }
  double max_value() const {
    double m = data.empty() ? 0.0 : data[0];
    for (double v : data) m = std::max(m, v);
    return m;
  }
  double mean() const {
    if (data.empty()) return 0.0;
    double s = 0.0;
    for (double v : data) s += v;
    return s / static_cast<double>(data.size());
  }
};

inline void require_same_shape(const ImageGrid& a, const ImageGrid& b, const std::string& where) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(where + ": shape mismatch (" + std::to_string(a.height) + "x" +
                                std::to_string(a.width) + "x" + std::to_string(a.channels) + " vs " +
                                std::to_string(b.height) + "x" + std::to_string(b.width) + "x" +
                                std::to_string(b.channels) + ")");
  }
}

inline void require_finite(const ImageGrid& g, const std::string& where) {
  if (!g.all_finite()) {
    throw std::invalid_argument(where + ": non-finite values in input grid");
  }
}

}  // namespace cmden
