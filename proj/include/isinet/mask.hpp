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

#ifndef ISINET_MASK_HPP_
#define ISINET_MASK_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isinet/errors.hpp"

namespace isinet {

// A binary instance mask backed by uncompressed run-length encoding.
//
// Runs are stored column-major (column 0 top to bottom, then column 1, ...)
// as alternating background/foreground lengths, starting with the background
// run, which may be zero. The stored form is canonical: apart from a possible
// leading zero, every run length is positive, so masks covering the same
// pixel set always compare equal.
//
// Instances are immutable values; all operations on them are pure functions
// and safe to call concurrently.
class BinaryMask {
 public:
  // Builds a mask from explicit run lengths. Throws FormatError if the runs
  // do not sum to height*width.
  BinaryMask(int height, int width, std::vector<std::uint32_t> counts)
      : height_(height), width_(width) {
    check_dims(height, width);
    std::uint64_t total = 0;
    for (std::uint32_t c : counts) total += c;
    const std::uint64_t expected =
        static_cast<std::uint64_t>(height) * static_cast<std::uint64_t>(width);
    if (total != expected) {
      throw FormatError("rle counts sum to " + std::to_string(total) +
                        ", expected " + std::to_string(expected));
    }
    counts_ = canonicalize(std::move(counts));
  }

  // Encodes a dense row-major grid (nonzero = foreground).
  static BinaryMask from_pixels(int height, int width,
                                std::span<const std::uint8_t> grid) {
    check_dims(height, width);
    const std::size_t n =
        static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
    if (grid.size() != n) {
      throw ShapeError("pixel grid has " + std::to_string(grid.size()) +
                       " cells, expected " + std::to_string(n));
    }
    std::vector<std::uint32_t> counts;
    bool current = false;  // scanning starts in background
    std::uint32_t run = 0;
    for (int c = 0; c < width; ++c) {
      for (int r = 0; r < height; ++r) {
        const bool fg = grid[static_cast<std::size_t>(r) * width + c] != 0;
        if (fg == current) {
          ++run;
        } else {
          counts.push_back(run);
          current = fg;
          run = 1;
        }
      }
    }
    counts.push_back(run);
    return BinaryMask(height, width, std::move(counts), canonical_tag{});
  }

  // Decodes to a dense row-major 0/1 grid.
  std::vector<std::uint8_t> to_pixels() const {
    std::vector<std::uint8_t> grid(
        static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_), 0);
    std::uint64_t pos = 0;  // column-major linear index
    bool fg = false;
    for (std::uint32_t run : counts_) {
      if (fg) {
        for (std::uint64_t k = pos; k < pos + run; ++k) {
          const int r = static_cast<int>(k % height_);
          const int c = static_cast<int>(k / height_);
          grid[static_cast<std::size_t>(r) * width_ + c] = 1;
        }
      }
      pos += run;
      fg = !fg;
    }
    return grid;
  }

  int height() const { return height_; }
  int width() const { return width_; }
  const std::vector<std::uint32_t>& counts() const { return counts_; }

  // Foreground pixel count (sum of odd-indexed runs).
  std::uint64_t area() const {
    std::uint64_t a = 0;
    for (std::size_t i = 1; i < counts_.size(); i += 2) a += counts_[i];
    return a;
  }

  bool empty() const { return area() == 0; }

  // Foreground intervals [begin, end) in column-major linear pixel order.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    std::uint64_t pos = 0;
    bool fg = false;
    for (std::uint32_t run : counts_) {
      if (fg && run > 0) out.emplace_back(pos, pos + run);
      pos += run;
      fg = !fg;
    }
    return out;
  }

  friend bool operator==(const BinaryMask& a, const BinaryMask& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ &&
           a.counts_ == b.counts_;
  }

 private:
  struct canonical_tag {};
  BinaryMask(int height, int width, std::vector<std::uint32_t> counts,
             canonical_tag)
      : height_(height), width_(width), counts_(std::move(counts)) {}

  static void check_dims(int height, int width) {
    if (height <= 0 || width <= 0) {
      throw ShapeError("mask dimensions must be positive, got " +
                       std::to_string(height) + "x" + std::to_string(width));
    }
  }

  // Merges zero-length runs so equal pixel sets have equal encodings.
  // Only the leading background run may stay zero.
  static std::vector<std::uint32_t> canonicalize(
      std::vector<std::uint32_t> counts) {
    std::vector<std::uint32_t> out;
    out.reserve(counts.size());
    bool phase_fg = false;
    for (std::uint32_t run : counts) {
      if (out.empty()) {
        out.push_back(run);  // first slot is background by convention
      } else if ((out.size() % 2 == 0) == phase_fg) {
        out.back() += run;  // same phase as the open slot
      } else if (run > 0) {
        out.push_back(run);
      }
      // a zero run in a new phase opens no slot; the following run of the
      // previous phase merges back into the open slot
      phase_fg = !phase_fg;
    }
    return out;
  }

  int height_;
  int width_;
  std::vector<std::uint32_t> counts_;
};

// Intersection over union of two masks of identical dimensions.
// Runs directly on the RLE intervals; the union-empty case is 0.
inline double iou(const BinaryMask& a, const BinaryMask& b) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw ShapeError("iou: mask dimensions differ (" +
                     std::to_string(a.height()) + "x" +
                     std::to_string(a.width()) + " vs " +
                     std::to_string(b.height()) + "x" +
                     std::to_string(b.width()) + ")");
  }
  const auto ia = a.intervals();
  const auto ib = b.intervals();
  std::uint64_t inter = 0;
  std::size_t i = 0, j = 0;
  while (i < ia.size() && j < ib.size()) {
    const std::uint64_t lo = std::max(ia[i].first, ib[j].first);
    const std::uint64_t hi = std::min(ia[i].second, ib[j].second);
    if (hi > lo) inter += hi - lo;
    if (ia[i].second < ib[j].second)
      ++i;
    else
      ++j;
  }
  const std::uint64_t uni = a.area() + b.area() - inter;
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace isinet

#endif  // ISINET_MASK_HPP_
