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

#ifndef ISINET_TEMPORAL_HPP_
#define ISINET_TEMPORAL_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "isinet/detections.hpp"
#include "isinet/errors.hpp"
#include "isinet/flow.hpp"
#include "isinet/mask.hpp"

namespace isinet {

enum class AssignmentStrategy {
  // Class maximizing the sum of confidence scores of the window entries
  // that predict it.
  kWeightedMode,
  // Class of the single highest-scoring window entry.
  kMax,
};

inline std::string to_string(AssignmentStrategy strategy) {
  return strategy == AssignmentStrategy::kWeightedMode ? "weighted_mode"
                                                       : "max";
}

// Parameters of the temporal pass. The defaults are the final
// configuration for the EndoVis 2017 profile; the 2018 profile raises the
// IoU threshold to 0.5.
struct TemporalConfig {
  int window_f = 6;              // number of previous frames considered
  double iou_threshold = 0.0;    // pairs need IoU strictly above this
  AssignmentStrategy strategy = AssignmentStrategy::kWeightedMode;
};

// One vote-carrying window entry.
struct WindowEntry {
  int frame_index = 0;
  std::size_t candidate_index = 0;  // position within its frame
  int class_id = 0;
  double score = 0.0;
};

// A current-frame candidate together with its matched counterparts from
// the previous frames: the voting unit of the class reassignment.
// Predecessors are in strictly ascending frame order with at most one
// entry per previous frame.
struct InstanceWindow {
  WindowEntry current;
  std::vector<WindowEntry> predecessors;
};

namespace detail {

inline void check_temporal_config(const TemporalConfig& config) {
  if (config.window_f < 0) {
    throw ConfigError("temporal: window_f must be >= 0");
  }
  if (!(config.iou_threshold >= 0.0 && config.iou_threshold <= 1.0)) {
    throw ConfigError("temporal: iou_threshold must be in [0, 1]");
  }
}

// Stable argmax over a row/column of the IoU table: strictly greater wins,
// so the earliest candidate in file order takes ties.
inline std::size_t argmax_row(const std::vector<double>& table,
                              std::size_t cols, std::size_t row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < cols; ++j) {
    if (table[row * cols + j] > table[row * cols + best]) best = j;
  }
  return best;
}

inline std::size_t argmax_col(const std::vector<double>& table,
                              std::size_t cols, std::size_t rows,
                              std::size_t col) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows; ++i) {
    if (table[i * cols + col] > table[best * cols + col]) best = i;
  }
  return best;
}

}  // namespace detail

// Builds the per-candidate windows for one frame.
//
// `previous` holds up to window_f frames immediately preceding `current`,
// contiguous and ascending. `flows` is aligned with `previous`: flows[i]
// is the backward flow that advances frame previous[i] one warp step
// toward the current frame, so previous[i] reaches current-frame
// coordinates through compose_warp over flows[i..].
//
// For each previous frame independently, a current candidate c and a
// warped previous candidate p are paired iff each is the other's
// highest-IoU partner in that frame pair and iou(c, p) is strictly above
// the threshold. Every current candidate yields a window, possibly with no
// predecessors.
inline std::vector<InstanceWindow> match_window(
    const FrameDetections& current, std::span<const FrameDetections> previous,
    std::span<const FlowField> flows, const TemporalConfig& config) {
  detail::check_temporal_config(config);
  if (previous.size() > static_cast<std::size_t>(config.window_f)) {
    throw ContractError("match_window: " + std::to_string(previous.size()) +
                        " previous frames exceed window_f = " +
                        std::to_string(config.window_f));
  }
  if (flows.size() != previous.size()) {
    throw ContractError("match_window: " + std::to_string(previous.size()) +
                        " previous frames but " + std::to_string(flows.size()) +
                        " flows");
  }
  for (std::size_t i = 0; i < previous.size(); ++i) {
    const int expected =
        current.frame_index - static_cast<int>(previous.size() - i);
    if (previous[i].frame_index != expected) {
      throw ContractError(
          "match_window: previous frames must be contiguous and ascending; "
          "slot " +
          std::to_string(i) + " holds frame " +
          std::to_string(previous[i].frame_index) + ", expected " +
          std::to_string(expected));
    }
  }

  std::vector<InstanceWindow> windows;
  windows.reserve(current.candidates.size());
  for (std::size_t c = 0; c < current.candidates.size(); ++c) {
    const Candidate& cand = current.candidates[c];
    windows.push_back(InstanceWindow{
        WindowEntry{current.frame_index, c, cand.class_id, cand.score}, {}});
  }
  if (current.candidates.empty()) return windows;

  const std::size_t n_cur = current.candidates.size();
  for (std::size_t i = 0; i < previous.size(); ++i) {
    const FrameDetections& prev = previous[i];
    const std::size_t n_prev = prev.candidates.size();
    if (n_prev == 0) continue;

    std::vector<BinaryMask> warped;
    warped.reserve(n_prev);
    for (const Candidate& p : prev.candidates) {
      warped.push_back(compose_warp(p.mask, flows.subspan(i)));
    }

    // ious[c * n_prev + p]
    std::vector<double> ious(n_cur * n_prev);
    for (std::size_t c = 0; c < n_cur; ++c) {
      for (std::size_t p = 0; p < n_prev; ++p) {
        ious[c * n_prev + p] = iou(current.candidates[c].mask, warped[p]);
      }
    }

    for (std::size_t c = 0; c < n_cur; ++c) {
      const std::size_t p = detail::argmax_row(ious, n_prev, c);
      if (detail::argmax_col(ious, n_prev, n_cur, p) != c) continue;
      if (!(ious[c * n_prev + p] > config.iou_threshold)) continue;
      const Candidate& matched = prev.candidates[p];
      windows[c].predecessors.push_back(WindowEntry{
          prev.frame_index, p, matched.class_id, matched.score});
    }
  }
  return windows;
}

// Picks the window's class under the given strategy.
//
// weighted_mode takes the class with the largest sum of scores over all
// entries (predecessors plus current); max takes the class of the single
// highest-scoring entry. Ties fall to the class of the most recent entry
// among the tied ones, then to the smaller class id. Score sums accumulate
// in window order (oldest predecessor first, current last), which pins the
// floating-point result.
inline int assign_class(const InstanceWindow& window,
                        AssignmentStrategy strategy) {
  if (strategy == AssignmentStrategy::kMax) {
    const WindowEntry* best = nullptr;
    auto consider = [&](const WindowEntry& e) {
      if (best == nullptr || e.score > best->score ||
          (e.score == best->score &&
           (e.frame_index > best->frame_index ||
            (e.frame_index == best->frame_index &&
             e.class_id < best->class_id)))) {
        best = &e;
      }
    };
    for (const WindowEntry& e : window.predecessors) consider(e);
    consider(window.current);
    return best->class_id;
  }

  struct ClassTally {
    int class_id;
    int last_frame;
    double score_sum;
  };
  // windows are small; a fixed-capacity tally keeps this allocation-free.
  // 256 distinct classes needs a window no vocabulary can produce.
  constexpr std::size_t kMaxDistinct = 256;
  ClassTally tally[kMaxDistinct];
  std::size_t n_tally = 0;
  auto visit = [&](const WindowEntry& e) {
    std::size_t slot = 0;
    while (slot < n_tally && tally[slot].class_id != e.class_id) ++slot;
    if (slot == n_tally) {
      if (n_tally == kMaxDistinct) {
        throw ContractError(
            "assign_class: window has too many distinct classes");
      }
      tally[n_tally++] = ClassTally{e.class_id, e.frame_index, e.score};
    } else {
      // entries arrive oldest first, so e is the most recent sighting
      tally[slot].score_sum += e.score;
      tally[slot].last_frame = e.frame_index;
    }
  };
  for (const WindowEntry& e : window.predecessors) visit(e);
  visit(window.current);

  std::size_t best = 0;
  for (std::size_t i = 1; i < n_tally; ++i) {
    const ClassTally& a = tally[i];
    const ClassTally& b = tally[best];
    if (a.score_sum > b.score_sum ||
        (a.score_sum == b.score_sum &&
         (a.last_frame > b.last_frame ||
          (a.last_frame == b.last_frame && a.class_id < b.class_id)))) {
      best = i;
    }
  }
  return tally[best].class_id;
}

// Runs the matching and assignment steps over a whole sequence, frame by
// frame. At frame t the window draws on up to window_f previous frames
// with their already-corrected class labels and their original scores and
// masks. Only class labels change; masks, scores and candidate counts pass
// through untouched. flows[t] must be the backward flow from frames[t+1]
// to frames[t], so flows.size() == frames.size() - 1.
inline std::vector<FrameDetections> correct_sequence(
    std::vector<FrameDetections> frames, std::span<const FlowField> flows,
    const TemporalConfig& config) {
  detail::check_temporal_config(config);
  if (!frames.empty() && flows.size() != frames.size() - 1) {
    throw ContractError("correct_sequence: " + std::to_string(frames.size()) +
                        " frames need " + std::to_string(frames.size() - 1) +
                        " flows, got " + std::to_string(flows.size()));
  }
  for (std::size_t t = 1; t < frames.size(); ++t) {
    if (frames[t].frame_index != frames[t - 1].frame_index + 1) {
      throw ContractError(
          "correct_sequence: frame indices must be consecutive; got " +
          std::to_string(frames[t - 1].frame_index) + " then " +
          std::to_string(frames[t].frame_index));
    }
  }

  for (std::size_t t = 0; t < frames.size(); ++t) {
    const std::size_t k =
        std::min(static_cast<std::size_t>(config.window_f), t);
    const std::span<const FrameDetections> previous(frames.data() + (t - k), k);
    const std::vector<InstanceWindow> windows =
        match_window(frames[t], previous, flows.subspan(t - k, k), config);
    std::vector<int> new_classes(frames[t].candidates.size());
    for (const InstanceWindow& w : windows) {
      new_classes[w.current.candidate_index] = assign_class(w, config.strategy);
    }
    for (std::size_t c = 0; c < frames[t].candidates.size(); ++c) {
      frames[t].candidates[c].class_id = new_classes[c];
    }
  }
  return frames;
}

}  // namespace isinet

#endif  // ISINET_TEMPORAL_HPP_
