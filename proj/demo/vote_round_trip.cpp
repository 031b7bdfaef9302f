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

// Minimal in-memory walkthrough: a static object is detected in 5 frames,
// the middle detection carries the wrong class, and the windowed vote
// repairs it.

#include <iostream>
#include <vector>

#include <isinet/isinet.hpp>

int main() {
  const int height = 8;
  const int width = 8;
  std::vector<std::uint8_t> pixels(height * width, 0);
  for (int r = 2; r < 6; ++r) {
    for (int c = 2; c < 6; ++c) pixels[r * width + c] = 1;
  }
  const isinet::BinaryMask mask =
      isinet::BinaryMask::from_pixels(height, width, pixels);

  std::vector<isinet::FrameDetections> frames;
  const std::vector<int> classes = {1, 1, 3, 1, 1};
  for (int t = 0; t < 5; ++t) {
    isinet::FrameDetections frame;
    frame.frame_index = t;
    frame.candidates.push_back(
        isinet::Candidate{mask, 0.9, classes[t], std::nullopt});
    frames.push_back(std::move(frame));
  }
  const std::vector<isinet::FlowField> flows(
      4, isinet::FlowField::zero(height, width));

  std::cout << "input classes:    ";
  for (const auto& f : frames) std::cout << f.candidates[0].class_id << " ";
  std::cout << "\n";

  const std::vector<isinet::FrameDetections> corrected =
      isinet::correct_sequence(frames, flows, isinet::TemporalConfig{});

  std::cout << "corrected classes: ";
  for (const auto& f : corrected) std::cout << f.candidates[0].class_id << " ";
  std::cout << "\n";
  return 0;
}
