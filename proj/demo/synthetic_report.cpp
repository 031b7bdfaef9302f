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

// Generates a noisy synthetic sequence, corrects it, and prints the metric
// table before and after correction.

#include <iostream>

#include <isinet/isinet.hpp>

int main() {
  isinet::SynthConfig config;
  config.sequence = "demo";
  config.frames = 30;
  config.height = 64;
  config.width = 64;
  config.num_classes = 7;
  config.seed = 7;
  config.noise.flip_probability = 0.3;
  config.noise.correct_score_lo = config.noise.correct_score_hi = 0.9;
  config.noise.flipped_score_lo = config.noise.flipped_score_hi = 0.9;
  config.objects = {
      isinet::SynthObject{isinet::SynthShape::kRectangle, 2, 10, 8, 4, 8, 1, 0},
      isinet::SynthObject{isinet::SynthShape::kEllipse, 5, 12, 10, 46, 40, -1, 0},
  };

  const isinet::SynthDataset dataset = isinet::generate(config);
  const isinet::ClassVocabulary vocab =
      isinet::synthetic_vocabulary(config.num_classes);

  const auto evaluate = [&](const isinet::SequenceDetections& detections) {
    const std::vector<isinet::EvalFrame> pairs =
        isinet::pair_with_groundtruth(detections, dataset.label_maps);
    return isinet::compute_report(pairs, config.num_classes);
  };

  std::cout << "uncorrected:\n"
            << isinet::report_table(evaluate(dataset.predictions), vocab);

  isinet::SequenceDetections corrected = dataset.predictions;
  corrected.frames = isinet::correct_sequence(
      std::move(corrected.frames), dataset.flows, isinet::TemporalConfig{});
  std::cout << "\ncorrected:\n"
            << isinet::report_table(evaluate(corrected), vocab);
  return 0;
}
