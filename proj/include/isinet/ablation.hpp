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

#ifndef ISINET_ABLATION_HPP_
#define ISINET_ABLATION_HPP_

#include <algorithm>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isinet/detections.hpp"
#include "isinet/errors.hpp"
#include "isinet/flow.hpp"
#include "isinet/label_grid.hpp"
#include "isinet/metrics.hpp"
#include "isinet/temporal.hpp"
#include "isinet/vocabulary.hpp"

namespace isinet {

// One sequence with everything needed to correct and evaluate it.
struct SequenceSample {
  SequenceDetections detections;
  std::vector<FlowField> flows;
  std::vector<LabelGrid> groundtruth;
};

// Cartesian parameter grid for the sweep.
struct AblationGrid {
  std::vector<double> iou_thresholds;
  std::vector<int> window_sizes;
  std::vector<AssignmentStrategy> strategies;
};

struct AblationRow {
  double iou_threshold = 0.0;
  int window_f = 0;
  AssignmentStrategy strategy = AssignmentStrategy::kWeightedMode;
  std::map<int, double> per_class_iou;
  double mean_class_iou = 0.0;
};

// Runs the correction pass for every grid cell over every sample, evaluates
// the pooled frames, and returns one row per cell. Rows iterate the grid
// with iou_thresholds outermost, then window_sizes, then strategies.
inline std::vector<AblationRow> ablate(std::span<const SequenceSample> samples,
                                       const AblationGrid& grid,
                                       int num_classes) {
  if (grid.iou_thresholds.empty() || grid.window_sizes.empty() ||
      grid.strategies.empty()) {
    throw ConfigError("ablate: every grid axis needs at least one value");
  }
  std::vector<AblationRow> rows;
  rows.reserve(grid.iou_thresholds.size() * grid.window_sizes.size() *
               grid.strategies.size());
  for (const double threshold : grid.iou_thresholds) {
    for (const int window : grid.window_sizes) {
      for (const AssignmentStrategy strategy : grid.strategies) {
        const TemporalConfig config{window, threshold, strategy};
        std::vector<EvalFrame> pairs;
        for (const SequenceSample& sample : samples) {
          SequenceDetections corrected = sample.detections;
          corrected.frames = correct_sequence(std::move(corrected.frames),
                                              sample.flows, config);
          std::vector<EvalFrame> sequence_pairs =
              pair_with_groundtruth(corrected, sample.groundtruth);
          for (EvalFrame& pair : sequence_pairs) {
            pairs.push_back(std::move(pair));
          }
        }
        AblationRow row;
        row.iou_threshold = threshold;
        row.window_f = window;
        row.strategy = strategy;
        row.per_class_iou = per_class_iou(pairs, num_classes);
        row.mean_class_iou = mean_class_iou(pairs, num_classes);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

inline nlohmann::ordered_json ablation_json(std::span<const AblationRow> rows,
                                            const ClassVocabulary& vocabulary) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const AblationRow& row : rows) {
    nlohmann::ordered_json cell;
    cell["iou_threshold"] = row.iou_threshold;
    cell["frames"] = row.window_f;
    cell["strategy"] = to_string(row.strategy);
    nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
    for (const auto& [class_id, value] : row.per_class_iou) {
      per_class[vocabulary.name(class_id)] = value;
    }
    cell["per_class_iou"] = per_class;
    cell["mean_class_iou"] = row.mean_class_iou;
    out.push_back(std::move(cell));
  }
  return out;
}

// Aligned text table, one row per grid cell: threshold, window, strategy,
// one column per vocabulary class, mean class IoU.
inline std::string ablation_table(std::span<const AblationRow> rows,
                                  const ClassVocabulary& vocabulary) {
  std::vector<std::string> headers = {"U", "frames", "strategy"};
  for (int c = 1; c <= vocabulary.num_classes(); ++c) {
    headers.push_back(vocabulary.name(c));
  }
  headers.push_back("mean class IoU");

  auto format_value = [](double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return std::string(buffer);
  };
  std::vector<std::vector<std::string>> cells;
  for (const AblationRow& row : rows) {
    std::vector<std::string> line;
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", row.iou_threshold);
    line.emplace_back(buffer);
    line.push_back(std::to_string(row.window_f));
    line.emplace_back(to_string(row.strategy));
    for (int c = 1; c <= vocabulary.num_classes(); ++c) {
      const auto it = row.per_class_iou.find(c);
      line.push_back(it == row.per_class_iou.end() ? std::string("-")
                                                   : format_value(it->second));
    }
    line.push_back(format_value(row.mean_class_iou));
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> widths(headers.size());
  for (std::size_t i = 0; i < headers.size(); ++i) {
    widths[i] = headers[i].size();
    for (const auto& line : cells) {
      widths[i] = std::max(widths[i], line[i].size());
    }
  }
  std::string out;
  auto append_row = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) out += "  ";
      out += line[i] + std::string(widths[i] - line[i].size(), ' ');
    }
    out += "\n";
  };
  append_row(headers);
  for (const auto& line : cells) append_row(line);
  return out;
}

}  // namespace isinet

#endif  // ISINET_ABLATION_HPP_
