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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <isinet/errors.hpp>
#include <isinet/label_grid.hpp>
#include <isinet/mask.hpp>
#include <isinet/metrics.hpp>

#include "test_util.hpp"

using isinet::BinaryMask;
using isinet::Candidate;
using isinet::EvalFrame;
using isinet::FrameDetections;
using isinet::LabelGrid;
using isinet::MetricReport;

namespace {

EvalFrame eval_frame(int height, int width,
                     const std::vector<std::uint8_t>& pred,
                     const std::vector<std::uint8_t>& gt) {
  return EvalFrame{testutil::grid_of(height, width, pred),
                   testutil::grid_of(height, width, gt)};
}

}  // namespace

TEST_CASE("per-frame class IoU counts shared and disputed pixels") {
  SECTION("identical non-empty maps score 1") {
    const LabelGrid grid = testutil::grid_of(2, 2, {1, 1, 0, 0});
    CHECK(isinet::frame_class_iou(grid, grid, 1) == 1.0);
  }
  SECTION("a class absent from both sides is undefined") {
    const LabelGrid grid = testutil::grid_of(2, 2, {1, 1, 0, 0});
    CHECK_FALSE(isinet::frame_class_iou(grid, grid, 2).has_value());
  }
  SECTION("half-covered object with two stray pixels lands on one third") {
    // gt holds 4 class-2 pixels; pred covers 2 of them plus 2 others
    const LabelGrid gt = testutil::grid_of(3, 4, {2, 2, 2, 2,  //
                                                  0, 0, 0, 0,  //
                                                  0, 0, 0, 0});
    const LabelGrid pred = testutil::grid_of(3, 4, {0, 0, 2, 2,  //
                                                    2, 2, 0, 0,  //
                                                    0, 0, 0, 0});
    const auto value = isinet::frame_class_iou(pred, gt, 2);
    REQUIRE(value.has_value());
    CHECK(*value == Catch::Approx(1.0 / 3.0).margin(1e-15));
  }
  SECTION("dimension mismatch") {
    const LabelGrid a = LabelGrid::background(2, 2);
    const LabelGrid b = LabelGrid::background(2, 3);
    CHECK_THROWS_AS(isinet::frame_class_iou(a, b, 1), isinet::ShapeError);
  }
}

TEST_CASE("frame IoU averages the defined classes, then the frames") {
  // class 1 perfect, class 2 half right: frame scores (1.0 + 0.5) / 2
  const EvalFrame mixed = eval_frame(2, 4,
                                     {1, 1, 0, 2,  //
                                      0, 0, 0, 0},
                                     {1, 1, 2, 2,  //
                                      0, 0, 0, 0});
  SECTION("one frame") {
    const std::vector<EvalFrame> frames = {mixed};
    CHECK(isinet::mean_iou(frames, 2) == Catch::Approx(0.75).margin(1e-15));
  }
  SECTION("perfect frames") {
    const EvalFrame perfect = eval_frame(2, 2, {1, 2, 0, 0}, {1, 2, 0, 0});
    const std::vector<EvalFrame> frames = {perfect, perfect};
    CHECK(isinet::mean_iou(frames, 2) == 1.0);
  }
  SECTION("two frames at 0.75 and 0.25 average to 0.5") {
    const EvalFrame quarter = eval_frame(2, 4,
                                         {1, 1, 1, 1,  //
                                          0, 0, 0, 0},
                                         {1, 0, 0, 0,  //
                                          0, 0, 0, 0});
    const std::vector<EvalFrame> frames = {mixed, quarter};
    CHECK(isinet::mean_iou(frames, 2) == Catch::Approx(0.5).margin(1e-15));
  }
  SECTION("background-only frames do not dilute the mean") {
    const EvalFrame blank = eval_frame(2, 2, {0, 0, 0, 0}, {0, 0, 0, 0});
    const std::vector<EvalFrame> frames = {mixed, blank};
    CHECK(isinet::mean_iou(frames, 2) == Catch::Approx(0.75).margin(1e-15));
  }
  SECTION("nothing to evaluate") {
    const EvalFrame blank = eval_frame(2, 2, {0, 0, 0, 0}, {0, 0, 0, 0});
    const std::vector<EvalFrame> frames = {blank};
    CHECK_THROWS_AS(isinet::mean_iou(frames, 2), isinet::NoDataError);
  }
  SECTION("config bounds") {
    const std::vector<EvalFrame> frames = {mixed};
    CHECK_THROWS_AS(isinet::mean_iou(frames, 0), isinet::ConfigError);
  }
}

TEST_CASE("challenge IoU only scores classes the groundtruth contains") {
  // class 1 predicted perfectly, plus a spurious class-2 blob
  const EvalFrame spurious = eval_frame(2, 4,
                                        {1, 1, 0, 2,  //
                                         0, 0, 0, 2},
                                        {1, 1, 0, 0,  //
                                         0, 0, 0, 0});
  SECTION("the spurious class is invisible to the challenge metric") {
    const std::vector<EvalFrame> frames = {spurious};
    CHECK(isinet::challenge_iou(frames, 2) == 1.0);
    // the unrestricted average still pays for the blob
    CHECK(isinet::mean_iou(frames, 2) == Catch::Approx(0.5).margin(1e-15));
  }
  SECTION("empty prediction scores zero") {
    const EvalFrame miss = eval_frame(2, 2, {0, 0, 0, 0}, {1, 1, 0, 0});
    const std::vector<EvalFrame> frames = {miss};
    CHECK(isinet::challenge_iou(frames, 2) == 0.0);
  }
  SECTION("identity scores one") {
    const EvalFrame perfect = eval_frame(2, 2, {2, 1, 0, 1}, {2, 1, 0, 1});
    const std::vector<EvalFrame> frames = {perfect};
    CHECK(isinet::challenge_iou(frames, 2) == 1.0);
  }
  SECTION("frames with background-only groundtruth are skipped") {
    const EvalFrame noise_only = eval_frame(2, 2, {1, 1, 0, 0}, {0, 0, 0, 0});
    const std::vector<EvalFrame> frames = {noise_only};
    CHECK_THROWS_AS(isinet::challenge_iou(frames, 2), isinet::NoDataError);
  }
}

TEST_CASE("per-class table averages each class over its defined frames") {
  SECTION("hit and miss average to a half") {
    const EvalFrame hit = eval_frame(1, 2, {1, 0}, {1, 0});
    const EvalFrame miss = eval_frame(1, 2, {0, 1}, {1, 0});
    const std::vector<EvalFrame> frames = {hit, miss};
    const std::map<int, double> table = isinet::per_class_iou(frames, 3);
    REQUIRE(table.size() == 1);
    CHECK(table.at(1) == Catch::Approx(0.5).margin(1e-15));
  }
  SECTION("single perfect class") {
    const EvalFrame perfect = eval_frame(1, 2, {3, 0}, {3, 0});
    const std::vector<EvalFrame> frames = {perfect, perfect};
    const std::map<int, double> table = isinet::per_class_iou(frames, 4);
    REQUIRE(table.size() == 1);
    CHECK(table.at(3) == 1.0);
    CHECK(isinet::mean_class_iou(frames, 4) == 1.0);
  }
  SECTION("classes at 0.4 and 0.6 mean to 0.5") {
    const EvalFrame frame = eval_frame(2, 5,
                                       {1, 1, 1, 1, 1,  //
                                        2, 2, 2, 2, 2},
                                       {1, 1, 0, 0, 0,  //
                                        2, 2, 2, 0, 0});
    const std::vector<EvalFrame> frames = {frame};
    const std::map<int, double> table = isinet::per_class_iou(frames, 5);
    REQUIRE(table.size() == 2);
    CHECK(table.at(1) == Catch::Approx(0.4).margin(1e-15));
    CHECK(table.at(2) == Catch::Approx(0.6).margin(1e-15));
    CHECK(isinet::mean_class_iou(frames, 5) ==
          Catch::Approx(0.5).margin(1e-15));
  }
  SECTION("no class anywhere") {
    const EvalFrame blank = eval_frame(1, 2, {0, 0}, {0, 0});
    const std::vector<EvalFrame> frames = {blank};
    CHECK(isinet::per_class_iou(frames, 2).empty());
    CHECK_THROWS_AS(isinet::mean_class_iou(frames, 2), isinet::NoDataError);
  }
}

TEST_CASE("semantic rendering lets the highest score claim each pixel") {
  const int h = 3, w = 3;
  SECTION("no candidates render background") {
    const LabelGrid grid = isinet::render_semantic(FrameDetections{}, h, w);
    CHECK(grid.values == std::vector<std::uint8_t>(9, 0));
  }
  SECTION("overlap goes to the stronger candidate") {
    FrameDetections frame;
    frame.candidates = {
        Candidate{testutil::mask_of(h, w, {{0, 0}, {0, 1}}), 0.9, 1,
                  std::nullopt},
        Candidate{testutil::mask_of(h, w, {{0, 1}, {0, 2}}), 0.8, 2,
                  std::nullopt}};
    const LabelGrid grid = isinet::render_semantic(frame, h, w);
    CHECK(grid.values == std::vector<std::uint8_t>{1, 1, 2,  //
                                                   0, 0, 0,  //
                                                   0, 0, 0});
  }
  SECTION("score ties keep the earlier candidate") {
    FrameDetections frame;
    frame.candidates = {
        Candidate{testutil::mask_of(h, w, {{1, 1}}), 0.8, 3, std::nullopt},
        Candidate{testutil::mask_of(h, w, {{1, 1}}), 0.8, 4, std::nullopt}};
    const LabelGrid grid = isinet::render_semantic(frame, h, w);
    CHECK(grid.values[4] == 3);
  }
  SECTION("disjoint candidates union their labels") {
    FrameDetections frame;
    frame.candidates = {
        Candidate{testutil::mask_of(h, w, {{0, 0}}), 0.9, 1, std::nullopt},
        Candidate{testutil::mask_of(h, w, {{2, 2}}), 0.4, 2, std::nullopt}};
    const LabelGrid grid = isinet::render_semantic(frame, h, w);
    CHECK(grid.values == std::vector<std::uint8_t>{1, 0, 0,  //
                                                   0, 0, 0,  //
                                                   0, 0, 2});
  }
  SECTION("pixel layout survives the column-major to row-major hop") {
    testutil::Rng rng(99);
    const std::vector<std::uint8_t> pixels =
        testutil::random_pixels(rng, 5, 7, 0.4);
    FrameDetections frame;
    frame.candidates = {Candidate{BinaryMask::from_pixels(5, 7, pixels), 0.9,
                                  6, std::nullopt}};
    const LabelGrid grid = isinet::render_semantic(frame, 5, 7);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      CHECK(grid.values[i] == (pixels[i] ? 6 : 0));
    }
  }
  SECTION("bad inputs") {
    FrameDetections frame;
    frame.candidates = {
        Candidate{testutil::mask_of(2, 2, {{0, 0}}), 0.9, 1, std::nullopt}};
    CHECK_THROWS_AS(isinet::render_semantic(frame, h, w),
                    isinet::ShapeError);
    frame.candidates[0] = Candidate{testutil::mask_of(h, w, {{0, 0}}), 0.9,
                                    256, std::nullopt};
    CHECK_THROWS_AS(isinet::render_semantic(frame, h, w), isinet::DataError);
    frame.candidates[0].class_id = 0;
    CHECK_THROWS_AS(isinet::render_semantic(frame, h, w), isinet::DataError);
  }
}

TEST_CASE("pairing renders each frame against its groundtruth map") {
  isinet::SequenceDetections detections;
  detections.sequence = "seq_1";
  detections.height = 2;
  detections.width = 2;
  FrameDetections frame;
  frame.frame_index = 0;
  frame.candidates = {
      Candidate{testutil::mask_of(2, 2, {{0, 0}}), 0.9, 1, std::nullopt}};
  detections.frames = {frame};
  const std::vector<LabelGrid> gt = {testutil::grid_of(2, 2, {1, 0, 0, 0})};

  const std::vector<EvalFrame> pairs =
      isinet::pair_with_groundtruth(detections, gt);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].prediction.values == gt[0].values);

  const std::vector<LabelGrid> extra = {gt[0], gt[0]};
  CHECK_THROWS_AS(isinet::pair_with_groundtruth(detections, extra),
                  isinet::ContractError);
}

namespace {

// Brute-force reference: every metric recomputed from per-pixel sets with
// none of the library's counting shortcuts.
struct Reference {
  double challenge = 0.0;
  double frame_mean = 0.0;
  std::map<int, double> per_class;
  double mean_class = 0.0;
  int frames_evaluated = 0;
};

std::optional<double> reference_class_iou(const EvalFrame& frame, int c) {
  std::int64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < frame.prediction.values.size(); ++i) {
    const bool p = frame.prediction.values[i] == c;
    const bool g = frame.groundtruth.values[i] == c;
    if (p && g) ++inter;
    if (p || g) ++uni;
  }
  if (uni == 0) return std::nullopt;
  return double(inter) / double(uni);
}

Reference reference_metrics(const std::vector<EvalFrame>& frames,
                            int num_classes) {
  Reference ref;
  double frame_mean_sum = 0.0;
  int scored_frames = 0;
  double ch_sum = 0.0;
  int ch_frames = 0;
  std::map<int, std::vector<double>> samples;
  for (const EvalFrame& frame : frames) {
    double fsum = 0.0;
    int fcount = 0;
    double csum = 0.0;
    int ccount = 0;
    for (int c = 1; c <= num_classes; ++c) {
      const auto v = reference_class_iou(frame, c);
      const bool in_gt =
          std::count(frame.groundtruth.values.begin(),
                     frame.groundtruth.values.end(), c) > 0;
      if (v) {
        fsum += *v;
        ++fcount;
        samples[c].push_back(*v);
      }
      if (in_gt) {
        REQUIRE(v.has_value());  // gt presence implies a defined IoU
        csum += *v;
        ++ccount;
      }
    }
    if (fcount > 0) {
      frame_mean_sum += fsum / fcount;
      ++scored_frames;
    }
    if (ccount > 0) {
      ch_sum += csum / ccount;
      ++ch_frames;
    }
  }
  ref.frame_mean = frame_mean_sum / scored_frames;
  ref.challenge = ch_sum / ch_frames;
  ref.frames_evaluated = scored_frames;
  double total = 0.0;
  for (const auto& [c, values] : samples) {
    double s = 0.0;
    for (double v : values) s += v;
    ref.per_class[c] = s / double(values.size());
    total += ref.per_class[c];
  }
  ref.mean_class = total / double(ref.per_class.size());
  return ref;
}

std::vector<std::uint8_t> random_labels(testutil::Rng& rng, int n,
                                        int num_classes) {
  // skewed toward background so some classes go missing per frame
  std::uniform_int_distribution<int> label(-num_classes, num_classes);
  std::vector<std::uint8_t> values(static_cast<std::size_t>(n));
  for (auto& v : values) {
    const int l = label(rng);
    v = static_cast<std::uint8_t>(l > 0 ? l : 0);
  }
  return values;
}

}  // namespace

TEST_CASE("all metrics agree with a per-pixel reference on random grids") {
  testutil::Rng rng(20260401);
  const int num_classes = 4;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<EvalFrame> frames;
    std::uniform_int_distribution<int> n_frames(1, 6);
    const int n = n_frames(rng);
    for (int t = 0; t < n; ++t) {
      frames.push_back(eval_frame(16, 16,
                                  random_labels(rng, 256, num_classes),
                                  random_labels(rng, 256, num_classes)));
    }
    bool has_gt = false;
    for (const EvalFrame& f : frames) {
      for (std::uint8_t v : f.groundtruth.values) has_gt = has_gt || v != 0;
    }
    if (!has_gt) continue;

    const Reference ref = reference_metrics(frames, num_classes);
    CHECK(isinet::mean_iou(frames, num_classes) ==
          Catch::Approx(ref.frame_mean).margin(1e-9));
    CHECK(isinet::challenge_iou(frames, num_classes) ==
          Catch::Approx(ref.challenge).margin(1e-9));
    const std::map<int, double> table =
        isinet::per_class_iou(frames, num_classes);
    REQUIRE(table.size() == ref.per_class.size());
    for (const auto& [c, v] : ref.per_class) {
      CHECK(table.at(c) == Catch::Approx(v).margin(1e-9));
    }
    CHECK(isinet::mean_class_iou(frames, num_classes) ==
          Catch::Approx(ref.mean_class).margin(1e-9));
  }
}

TEST_CASE("metrics stay within the unit interval and reward identity") {
  testutil::Rng rng(777);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<EvalFrame> frames;
    for (int t = 0; t < 3; ++t) {
      frames.push_back(
          eval_frame(8, 8, random_labels(rng, 64, 3), random_labels(rng, 64, 3)));
    }
    bool has_fg = false;
    for (const EvalFrame& f : frames) {
      for (std::uint8_t v : f.groundtruth.values) has_fg = has_fg || v != 0;
      for (std::uint8_t v : f.prediction.values) has_fg = has_fg || v != 0;
    }
    if (!has_fg) continue;

    const double frame_mean = isinet::mean_iou(frames, 3);
    CHECK(frame_mean >= 0.0);
    CHECK(frame_mean <= 1.0);
    for (const auto& [c, v] : isinet::per_class_iou(frames, 3)) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }

    std::vector<EvalFrame> self;
    bool self_has_fg = false;
    for (const EvalFrame& f : frames) {
      self.push_back(EvalFrame{f.groundtruth, f.groundtruth});
      for (std::uint8_t v : f.groundtruth.values) {
        self_has_fg = self_has_fg || v != 0;
      }
    }
    if (self_has_fg) {
      CHECK(isinet::mean_iou(self, 3) == 1.0);
      CHECK(isinet::challenge_iou(self, 3) == 1.0);
      CHECK(isinet::mean_class_iou(self, 3) == 1.0);
    }
  }
}

TEST_CASE("frame order does not change any metric") {
  testutil::Rng rng(31337);
  std::vector<EvalFrame> frames;
  for (int t = 0; t < 5; ++t) {
    frames.push_back(
        eval_frame(8, 8, random_labels(rng, 64, 3), random_labels(rng, 64, 3)));
  }
  std::vector<EvalFrame> shuffled = frames;
  std::reverse(shuffled.begin(), shuffled.end());

  CHECK(isinet::mean_iou(frames, 3) ==
        Catch::Approx(isinet::mean_iou(shuffled, 3)).margin(1e-12));
  CHECK(isinet::challenge_iou(frames, 3) ==
        Catch::Approx(isinet::challenge_iou(shuffled, 3)).margin(1e-12));
  CHECK(isinet::mean_class_iou(frames, 3) ==
        Catch::Approx(isinet::mean_class_iou(shuffled, 3)).margin(1e-12));
}

TEST_CASE("the one-pass report matches the standalone metrics exactly") {
  testutil::Rng rng(515151);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<EvalFrame> frames;
    for (int t = 0; t < 4; ++t) {
      frames.push_back(
          eval_frame(8, 8, random_labels(rng, 64, 3), random_labels(rng, 64, 3)));
    }
    bool has_gt = false;
    for (const EvalFrame& f : frames) {
      for (std::uint8_t v : f.groundtruth.values) has_gt = has_gt || v != 0;
    }
    if (!has_gt) continue;

    const MetricReport report = isinet::compute_report(frames, 3);
    CHECK(report.iou == isinet::mean_iou(frames, 3));
    CHECK(report.challenge_iou == isinet::challenge_iou(frames, 3));
    CHECK(report.per_class_iou == isinet::per_class_iou(frames, 3));
    CHECK(report.mean_class_iou == isinet::mean_class_iou(frames, 3));

    double mean = 0.0;
    for (const auto& [c, v] : report.per_class_iou) mean += v;
    mean /= double(report.per_class_iou.size());
    CHECK(report.mean_class_iou == Catch::Approx(mean).margin(1e-12));
    CHECK(report.frames_evaluated >= 1);
    CHECK(report.frames_evaluated <= 4);
  }
}

TEST_CASE("labels beyond the vocabulary are rejected") {
  const EvalFrame bad = eval_frame(1, 2, {5, 0}, {1, 0});
  const std::vector<EvalFrame> frames = {bad};
  CHECK_THROWS_AS(isinet::mean_iou(frames, 3), isinet::DataError);
  CHECK_THROWS_AS(isinet::compute_report(frames, 3), isinet::DataError);
}
