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

#ifndef ISINET_LABEL_GRID_HPP_
#define ISINET_LABEL_GRID_HPP_

#include <cstdint>
#include <vector>

namespace isinet {

// Dense per-pixel class ids, row-major; 0 is background.
struct LabelGrid {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> values;

  static LabelGrid background(int height, int width) {
    LabelGrid g;
    g.height = height;
    g.width = width;
    g.values.assign(static_cast<std::size_t>(height) * width, 0);
    return g;
  }

  std::uint8_t at(int row, int col) const {
    return values[static_cast<std::size_t>(row) * width + col];
  }
  std::uint8_t& at(int row, int col) {
    return values[static_cast<std::size_t>(row) * width + col];
  }

  friend bool operator==(const LabelGrid&, const LabelGrid&) = default;
};

}  // namespace isinet

#endif  // ISINET_LABEL_GRID_HPP_
