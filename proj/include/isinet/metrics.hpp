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

#ifndef ISINET_METRICS_HPP_
#define ISINET_METRICS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "isinet/detections.hpp"
#include "isinet/errors.hpp"
#include "isinet/label_grid.hpp"

namespace isinet {

// One evaluation frame: a predicted label map and its reference label map.
// Both grids must share dimensions; dimensions may vary across frames.
struct EvalFrame {
  LabelGrid prediction;
  LabelGrid groundtruth;
};

// Intersection over union of the pixels labelled class_id in both grids.
// Undefined (nullopt) when the class is absent from both.
inline std::optional<double> frame_class_iou(const LabelGrid& prediction,
                                             const LabelGrid& groundtruth,
                                             int class_id) {
  if (prediction.height != groundtruth.height ||
      prediction.width != groundtruth.width) {
    throw ShapeError("frame_class_iou: label map dimensions differ");
  }
  std::int64_t inter = 0;
  std::int64_t uni = 0;
  const std::size_t n = prediction.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool p = prediction.values[i] == class_id;
    const bool g = groundtruth.values[i] == class_id;
    inter += p && g;
    uni += p || g;
  }
  if (uni == 0) return std::nullopt;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace detail {

// Per-frame pixel counts for classes 0..num_classes.
struct FrameCounts {
  std::vector<std::int64_t> inter;
  std::vector<std::int64_t> pred;
  std::vector<std::int64_t> gt;
};

inline FrameCounts count_frame(const EvalFrame& frame, int num_classes) {
  const LabelGrid& p = frame.prediction;
  const LabelGrid& g = frame.groundtruth;
  if (p.height != g.height || p.width != g.width) {
    throw ShapeError("metrics: prediction and groundtruth dimensions differ");
  }
  FrameCounts counts;
  counts.inter.assign(static_cast<std::size_t>(num_classes) + 1, 0);
  counts.pred.assign(static_cast<std::size_t>(num_classes) + 1, 0);
  counts.gt.assign(static_cast<std::size_t>(num_classes) + 1, 0);
  const std::size_t n = p.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t pv = p.values[i];
    const std::uint8_t gv = g.values[i];
    if (pv > num_classes) {
      throw DataError("metrics: prediction label exceeds num_classes");
    }
    if (gv > num_classes) {
      throw DataError("metrics: groundtruth label exceeds num_classes");
    }
    ++counts.pred[pv];
    ++counts.gt[gv];
    if (pv == gv) ++counts.inter[pv];
  }
  return counts;
}

inline std::optional<double> counts_iou(const FrameCounts& counts, int c) {
  const std::int64_t inter = counts.inter[static_cast<std::size_t>(c)];
  const std::int64_t uni = counts.pred[static_cast<std::size_t>(c)] +
                           counts.gt[static_cast<std::size_t>(c)] - inter;
  if (uni == 0) return std::nullopt;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace detail

// Mean over frames of the per-frame mean IoU across classes 1..num_classes,
// skipping classes absent from both maps. Frames where every class is absent
// from both maps do not contribute. Throws NoDataError if no frame remains.
inline double mean_iou(std::span<const EvalFrame> frames, int num_classes) {
  if (num_classes < 1) throw ConfigError("mean_iou: num_classes must be >= 1");
  double frame_sum = 0.0;
  int frames_counted = 0;
  for (const EvalFrame& frame : frames) {
    const detail::FrameCounts counts = detail::count_frame(frame, num_classes);
    double class_sum = 0.0;
    int classes_counted = 0;
    for (int c = 1; c <= num_classes; ++c) {
      if (const auto v = detail::counts_iou(counts, c)) {
        class_sum += *v;
        ++classes_counted;
      }
    }
    if (classes_counted == 0) continue;
    frame_sum += class_sum / classes_counted;
    ++frames_counted;
  }
  if (frames_counted == 0) {
    throw NoDataError("mean_iou: no frame has any class to evaluate");
  }
  return frame_sum / frames_counted;
}

// Like mean_iou, but each frame averages only over the classes present in
// that frame's groundtruth. Frames whose groundtruth is all background are
// skipped. Throws NoDataError if no frame remains.
inline double challenge_iou(std::span<const EvalFrame> frames,
                            int num_classes) {
  if (num_classes < 1) {
    throw ConfigError("challenge_iou: num_classes must be >= 1");
  }
  double frame_sum = 0.0;
  int frames_counted = 0;
  for (const EvalFrame& frame : frames) {
    const detail::FrameCounts counts = detail::count_frame(frame, num_classes);
    double class_sum = 0.0;
    int classes_counted = 0;
    for (int c = 1; c <= num_classes; ++c) {
      if (counts.gt[static_cast<std::size_t>(c)] == 0) continue;
      class_sum += *detail::counts_iou(counts, c);
      ++classes_counted;
    }
    if (classes_counted == 0) continue;
    frame_sum += class_sum / classes_counted;
    ++frames_counted;
  }
  if (frames_counted == 0) {
    throw NoDataError("challenge_iou: no frame has groundtruth classes");
  }
  return frame_sum / frames_counted;
}

// Per-class mean over the frames where the class IoU is defined. Classes
// absent from every frame are omitted from the result.
inline std::map<int, double> per_class_iou(std::span<const EvalFrame> frames,
                                           int num_classes) {
  if (num_classes < 1) {
    throw ConfigError("per_class_iou: num_classes must be >= 1");
  }
  std::vector<double> sums(static_cast<std::size_t>(num_classes) + 1, 0.0);
  std::vector<int> defined(static_cast<std::size_t>(num_classes) + 1, 0);
  for (const EvalFrame& frame : frames) {
    const detail::FrameCounts counts = detail::count_frame(frame, num_classes);
    for (int c = 1; c <= num_classes; ++c) {
      if (const auto v = detail::counts_iou(counts, c)) {
        sums[static_cast<std::size_t>(c)] += *v;
        ++defined[static_cast<std::size_t>(c)];
      }
    }
  }
  std::map<int, double> result;
  for (int c = 1; c <= num_classes; ++c) {
    if (defined[static_cast<std::size_t>(c)] > 0) {
      result[c] = sums[static_cast<std::size_t>(c)] /
                  defined[static_cast<std::size_t>(c)];
    }
  }
  return result;
}

// Mean of per_class_iou over the classes it reports. Throws NoDataError when
// every class is absent from every frame.
inline double mean_class_iou(std::span<const EvalFrame> frames,
                             int num_classes) {
  const std::map<int, double> per_class = per_class_iou(frames, num_classes);
  if (per_class.empty()) {
    throw NoDataError("mean_class_iou: no class appears in any frame");
  }
  double sum = 0.0;
  for (const auto& [c, v] : per_class) sum += v;
  return sum / static_cast<double>(per_class.size());
}

// Flattens instance candidates into a semantic label map. Each pixel takes
// the class of the highest-scoring candidate covering it; earlier candidates
// win score ties. Background stays 0.
inline LabelGrid render_semantic(const FrameDetections& frame, int height,
                                 int width) {
  LabelGrid grid = LabelGrid::background(height, width);
  std::vector<double> best(grid.values.size(), -1.0);
  for (const Candidate& candidate : frame.candidates) {
    if (candidate.mask.height() != height || candidate.mask.width() != width) {
      throw ShapeError("render_semantic: candidate mask dimensions differ");
    }
    if (candidate.class_id < 1 || candidate.class_id > 255) {
      throw DataError("render_semantic: class id does not fit a label map");
    }
    const auto label = static_cast<std::uint8_t>(candidate.class_id);
    for (const auto& [begin, end] : candidate.mask.intervals()) {
      for (std::uint64_t linear = begin; linear < end; ++linear) {
        // masks are column-major, grids row-major
        const std::uint64_t col = linear / static_cast<std::uint64_t>(height);
        const std::uint64_t row = linear % static_cast<std::uint64_t>(height);
        const std::size_t at = static_cast<std::size_t>(row) *
                                   static_cast<std::size_t>(width) +
                               col;
        if (candidate.score > best[at]) {
          best[at] = candidate.score;
          grid.values[at] = label;
        }
      }
    }
  }
  return grid;
}

// Renders every frame of a sequence and pairs it with its groundtruth
// label map. The two lists must describe the same frames.
inline std::vector<EvalFrame> pair_with_groundtruth(
    const SequenceDetections& detections,
    std::span<const LabelGrid> groundtruth) {
  if (detections.frames.size() != groundtruth.size()) {
    throw ContractError(
        "pair_with_groundtruth: frame and label map counts differ");
  }
  std::vector<EvalFrame> pairs;
  pairs.reserve(groundtruth.size());
  for (std::size_t i = 0; i < groundtruth.size(); ++i) {
    pairs.push_back(EvalFrame{
        render_semantic(detections.frames[i], detections.height,
                        detections.width),
        groundtruth[i]});
  }
  return pairs;
}

// Summary of every segmentation metric over one evaluation set.
struct MetricReport {
  double challenge_iou = 0.0;
  double iou = 0.0;
  std::map<int, double> per_class_iou;
  double mean_class_iou = 0.0;
  int frames_evaluated = 0;
};

// Computes every metric in one pass over the frames. Field for field equal
// to the standalone functions above. frames_evaluated counts the frames that
// contributed to iou (at least one class defined).
inline MetricReport compute_report(std::span<const EvalFrame> frames,
                                   int num_classes) {
  if (num_classes < 1) {
    throw ConfigError("compute_report: num_classes must be >= 1");
  }
  double iou_sum = 0.0;
  int iou_frames = 0;
  double challenge_sum = 0.0;
  int challenge_frames = 0;
  std::vector<double> class_sums(static_cast<std::size_t>(num_classes) + 1,
                                 0.0);
  std::vector<int> class_defined(static_cast<std::size_t>(num_classes) + 1, 0);
  for (const EvalFrame& frame : frames) {
    const detail::FrameCounts counts = detail::count_frame(frame, num_classes);
    double frame_sum = 0.0;
    int frame_classes = 0;
    double present_sum = 0.0;
    int present_classes = 0;
    for (int c = 1; c <= num_classes; ++c) {
      const auto v = detail::counts_iou(counts, c);
      if (!v) continue;
      frame_sum += *v;
      ++frame_classes;
      class_sums[static_cast<std::size_t>(c)] += *v;
      ++class_defined[static_cast<std::size_t>(c)];
      if (counts.gt[static_cast<std::size_t>(c)] > 0) {
        present_sum += *v;
        ++present_classes;
      }
    }
    if (frame_classes > 0) {
      iou_sum += frame_sum / frame_classes;
      ++iou_frames;
    }
    if (present_classes > 0) {
      challenge_sum += present_sum / present_classes;
      ++challenge_frames;
    }
  }
  if (challenge_frames == 0) {
    throw NoDataError("compute_report: no frame has groundtruth classes");
  }
  if (iou_frames == 0) {
    throw NoDataError("compute_report: no frame has any class to evaluate");
  }
  MetricReport report;
  report.challenge_iou = challenge_sum / challenge_frames;
  report.iou = iou_sum / iou_frames;
  for (int c = 1; c <= num_classes; ++c) {
    if (class_defined[static_cast<std::size_t>(c)] > 0) {
      report.per_class_iou[c] = class_sums[static_cast<std::size_t>(c)] /
                                class_defined[static_cast<std::size_t>(c)];
    }
  }
  double sum = 0.0;
  for (const auto& [c, v] : report.per_class_iou) sum += v;
  report.mean_class_iou =
      sum / static_cast<double>(report.per_class_iou.size());
  report.frames_evaluated = iou_frames;
  return report;
}

}  // namespace isinet

#endif  // ISINET_METRICS_HPP_
