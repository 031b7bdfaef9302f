// Copyright 2026 The isinet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ISINET_FLOW_HPP_
#define ISINET_FLOW_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "isinet/errors.hpp"
#include "isinet/mask.hpp"

namespace isinet {

// Dense backward flow for one frame pair: u is the horizontal (column)
// displacement, v the vertical (row) displacement, both row-major.
// A pixel p of the later frame originates at p + (u(p), v(p)) in the
// earlier frame.
struct FlowField {
  int height = 0;
  int width = 0;
  std::vector<float> u;
  std::vector<float> v;

  static FlowField zero(int height, int width) {
    FlowField f;
    f.height = height;
    f.width = width;
    f.u.assign(static_cast<std::size_t>(height) * width, 0.0f);
    f.v.assign(static_cast<std::size_t>(height) * width, 0.0f);
    return f;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }

  friend bool operator==(const FlowField&, const FlowField&) = default;
};

namespace detail {

inline void check_flow(const FlowField& flow) {
  if (flow.height <= 0 || flow.width <= 0) {
    throw ShapeError("flow dimensions must be positive, got " +
                     std::to_string(flow.height) + "x" +
                     std::to_string(flow.width));
  }
  if (flow.u.size() != flow.size() || flow.v.size() != flow.size()) {
    throw ShapeError("flow component size does not match dimensions");
  }
  for (float x : flow.u) {
    if (!std::isfinite(x)) throw DataError("flow contains non-finite u value");
  }
  for (float x : flow.v) {
    if (!std::isfinite(x)) throw DataError("flow contains non-finite v value");
  }
}

// Bilinear sample of a 0/1 grid at real coordinates; outside the image the
// grid reads as 0.
inline double sample_bilinear(const std::vector<std::uint8_t>& grid, int height,
                              int width, double x, double y) {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double ax = x - fx;
  const double ay = y - fy;
  auto at = [&](int yy, int xx) -> double {
    if (yy < 0 || yy >= height || xx < 0 || xx >= width) return 0.0;
    return grid[static_cast<std::size_t>(yy) * width + xx];
  };
  return (1.0 - ay) * ((1.0 - ax) * at(y0, x0) + ax * at(y0, x0 + 1)) +
         ay * ((1.0 - ax) * at(y0 + 1, x0) + ax * at(y0 + 1, x0 + 1));
}

inline std::vector<std::uint8_t> warp_grid(
    const std::vector<std::uint8_t>& grid, const FlowField& flow) {
  const int h = flow.height;
  const int w = flow.width;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(h) * w, 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * w + c;
      const double sx = c + static_cast<double>(flow.u[idx]);
      const double sy = r + static_cast<double>(flow.v[idx]);
      if (sample_bilinear(grid, h, w, sx, sy) >= 0.5) out[idx] = 1;
    }
  }
  return out;
}

}  // namespace detail

// Backward-warps a mask one step: output pixel p is foreground iff the
// bilinear sample of the input mask at p + (u(p), v(p)) is >= 0.5. Samples
// outside the image contribute 0, so support never leaks in from the border.
inline BinaryMask warp(const BinaryMask& mask, const FlowField& flow) {
  detail::check_flow(flow);
  if (mask.height() != flow.height || mask.width() != flow.width) {
    throw ShapeError("warp: mask is " + std::to_string(mask.height()) + "x" +
                     std::to_string(mask.width()) + " but flow is " +
                     std::to_string(flow.height) + "x" +
                     std::to_string(flow.width));
  }
  return BinaryMask::from_pixels(mask.height(), mask.width(),
                                 detail::warp_grid(mask.to_pixels(), flow));
}

// Applies warp once per flow field, oldest step first. An empty list
// returns the input unchanged.
inline BinaryMask compose_warp(const BinaryMask& mask,
                               std::span<const FlowField> flows) {
  BinaryMask out = mask;
  for (const FlowField& f : flows) out = warp(out, f);
  return out;
}

}  // namespace isinet

#endif  // ISINET_FLOW_HPP_
