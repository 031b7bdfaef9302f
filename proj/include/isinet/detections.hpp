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

#ifndef ISINET_DETECTIONS_HPP_
#define ISINET_DETECTIONS_HPP_

#include <optional>
#include <string>
#include <vector>

#include "isinet/mask.hpp"

namespace isinet {

// One detector output for one frame: an instance mask with a confidence
// score and a class prediction. instance_id is only present in
// ground-truth files.
struct Candidate {
  BinaryMask mask;
  double score = 0.0;
  int class_id = 0;
  std::optional<int> instance_id;
};

// All candidates of one frame, in file order. File order is preserved by
// every pass in the library; downstream tie-breaking depends on it.
struct FrameDetections {
  int frame_index = 0;
  std::vector<Candidate> candidates;
};

// A whole sequence worth of detections plus the frame geometry every mask
// in it shares.
struct SequenceDetections {
  std::string sequence;
  int height = 0;
  int width = 0;
  std::vector<FrameDetections> frames;
};

// Candidates at or below this confidence are dropped on ingestion unless
// the caller overrides the threshold.
inline constexpr double kDefaultScoreThreshold = 0.75;

}  // namespace isinet

#endif  // ISINET_DETECTIONS_HPP_
