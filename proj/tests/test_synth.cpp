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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

#include <isinet/detections_io.hpp>
#include <isinet/errors.hpp>
#include <isinet/flo_io.hpp>
#include <isinet/flow.hpp>
#include <isinet/label_map_io.hpp>
#include <isinet/metrics.hpp>
#include <isinet/synth.hpp>
#include <isinet/vocabulary.hpp>

#include "test_util.hpp"

using isinet::Candidate;
using isinet::FrameDetections;
using isinet::SequenceDetections;
using isinet::SynthConfig;
using isinet::SynthDataset;
using isinet::SynthObject;
using isinet::SynthShape;

namespace {

SynthObject rect(int class_id, int width, int height, int x, int y, int vx,
                 int vy) {
  return SynthObject{SynthShape::kRectangle, class_id, width, height,
                     x,                      y,        vx,    vy};
}

SynthObject ellipse(int class_id, int width, int height, int x, int y, int vx,
                    int vy) {
  return SynthObject{SynthShape::kEllipse, class_id, width, height,
                     x,                    y,        vx,    vy};
}

bool same_frames(const SequenceDetections& a, const SequenceDetections& b) {
  if (a.height != b.height || a.width != b.width ||
      a.frames.size() != b.frames.size()) {
    return false;
  }
  for (std::size_t t = 0; t < a.frames.size(); ++t) {
    const FrameDetections& fa = a.frames[t];
    const FrameDetections& fb = b.frames[t];
    if (fa.frame_index != fb.frame_index ||
        fa.candidates.size() != fb.candidates.size()) {
      return false;
    }
    for (std::size_t i = 0; i < fa.candidates.size(); ++i) {
      const Candidate& ca = fa.candidates[i];
      const Candidate& cb = fb.candidates[i];
      if (!(ca.mask == cb.mask) || ca.score != cb.score ||
          ca.class_id != cb.class_id || ca.instance_id != cb.instance_id) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("zero objects produce empty frames, zero flow, background maps") {
  SynthConfig config;
  config.frames = 3;
  config.height = 6;
  config.width = 7;
  config.num_classes = 2;
  const SynthDataset data = isinet::generate(config);

  REQUIRE(data.predictions.frames.size() == 3);
  REQUIRE(data.groundtruth.frames.size() == 3);
  for (const FrameDetections& frame : data.predictions.frames) {
    CHECK(frame.candidates.empty());
  }
  REQUIRE(data.flows.size() == 2);
  for (const isinet::FlowField& flow : data.flows) {
    CHECK(flow == isinet::FlowField::zero(6, 7));
  }
  REQUIRE(data.label_maps.size() == 3);
  for (const isinet::LabelGrid& map : data.label_maps) {
    CHECK(map.values == std::vector<std::uint8_t>(42, 0));
  }
}

TEST_CASE("a static object with pinned scores reproduces the groundtruth") {
  SynthConfig config;
  config.frames = 4;
  config.height = 8;
  config.width = 8;
  config.num_classes = 3;
  config.objects = {rect(3, 3, 2, 2, 3, 0, 0)};
  config.noise.flip_probability = 0.0;
  config.noise.correct_score_lo = 1.0;
  config.noise.correct_score_hi = 1.0;

  const SynthDataset data = isinet::generate(config);
  CHECK(same_frames(data.predictions, data.groundtruth));
  for (const isinet::FlowField& flow : data.flows) {
    CHECK(flow == isinet::FlowField::zero(8, 8));
  }
}

TEST_CASE("emitted flows reproduce each object's next mask exactly") {
  SECTION("single rectangle, unit velocity") {
    SynthConfig config;
    config.frames = 3;
    config.height = 10;
    config.width = 12;
    config.num_classes = 1;
    config.objects = {rect(1, 3, 3, 2, 2, 1, 0)};
    const SynthDataset data = isinet::generate(config);
    const auto& gt = data.groundtruth.frames;
    CHECK(isinet::compose_warp(gt[0].candidates[0].mask, data.flows) ==
          gt[2].candidates[0].mask);
  }
  SECTION("mixed shapes and velocities") {
    SynthConfig config;
    config.frames = 6;
    config.height = 32;
    config.width = 40;
    config.num_classes = 3;
    config.objects = {rect(1, 5, 4, 3, 3, 2, 1),
                      ellipse(2, 7, 5, 20, 8, -1, 1),
                      rect(3, 4, 4, 30, 20, 0, -2)};
    const SynthDataset data = isinet::generate(config);
    const auto& gt = data.groundtruth.frames;
    const std::span<const isinet::FlowField> flows(data.flows);

    for (std::size_t t = 1; t < gt.size(); ++t) {
      for (std::size_t i = 0; i < config.objects.size(); ++i) {
        CHECK(isinet::warp(gt[t - 1].candidates[i].mask, data.flows[t - 1]) ==
              gt[t].candidates[i].mask);
        CHECK(isinet::compose_warp(gt[0].candidates[i].mask, flows.first(t)) ==
              gt[t].candidates[i].mask);
      }
    }
    for (std::size_t t = 0; t < gt.size(); ++t) {
      const isinet::LabelGrid rendered =
          isinet::render_semantic(gt[t], config.height, config.width);
      CHECK(rendered.values == data.label_maps[t].values);
    }
  }
}

TEST_CASE("the flip rate lands on the configured probability") {
  SynthConfig config;
  config.frames = 5001;
  config.height = 16;
  config.width = 16;
  config.num_classes = 5;
  config.seed = 7;
  config.objects = {rect(1, 3, 3, 2, 2, 0, 0), rect(4, 3, 3, 9, 9, 0, 0)};
  config.noise.flip_probability = 0.3;
  config.noise.correct_score_lo = 0.9;
  config.noise.correct_score_hi = 1.0;
  config.noise.flipped_score_lo = 0.8;
  config.noise.flipped_score_hi = 0.85;

  const SynthDataset data = isinet::generate(config);
  std::int64_t flips = 0;
  std::int64_t total = 0;
  for (std::size_t t = 0; t < data.predictions.frames.size(); ++t) {
    const auto& noisy = data.predictions.frames[t].candidates;
    const auto& truth = data.groundtruth.frames[t].candidates;
    REQUIRE(noisy.size() == truth.size());
    for (std::size_t i = 0; i < noisy.size(); ++i) {
      ++total;
      CHECK(noisy[i].class_id >= 1);
      CHECK(noisy[i].class_id <= config.num_classes);
      if (noisy[i].class_id != truth[i].class_id) {
        ++flips;
        CHECK(noisy[i].score >= 0.8);
        CHECK(noisy[i].score <= 0.85);
      } else {
        CHECK(noisy[i].score >= 0.9);
        CHECK(noisy[i].score <= 1.0);
      }
    }
  }
  REQUIRE(total >= 10000);
  const double rate = static_cast<double>(flips) / static_cast<double>(total);
  CHECK(rate >= 0.28);
  CHECK(rate <= 0.32);
}

TEST_CASE("generation is a pure function of the config") {
  SynthConfig config;
  config.frames = 20;
  config.height = 20;
  config.width = 32;
  config.num_classes = 4;
  config.seed = 123456;
  config.objects = {rect(2, 4, 3, 2, 2, 1, 0), ellipse(3, 5, 5, 14, 10, 0, 0)};
  config.noise.flip_probability = 0.5;

  const SynthDataset a = isinet::generate(config);
  const SynthDataset b = isinet::generate(config);
  CHECK(same_frames(a.predictions, b.predictions));
  CHECK(same_frames(a.groundtruth, b.groundtruth));
  REQUIRE(a.flows.size() == b.flows.size());
  for (std::size_t i = 0; i < a.flows.size(); ++i) {
    CHECK(a.flows[i] == b.flows[i]);
  }
  for (std::size_t i = 0; i < a.label_maps.size(); ++i) {
    CHECK(a.label_maps[i].values == b.label_maps[i].values);
  }

  config.seed = 654321;
  const SynthDataset c = isinet::generate(config);
  CHECK_FALSE(same_frames(a.predictions, c.predictions));
  CHECK(same_frames(a.groundtruth, c.groundtruth));
}

TEST_CASE("impossible object layouts are rejected") {
  SynthConfig config;
  config.frames = 2;
  config.height = 12;
  config.width = 12;
  config.num_classes = 2;

  SECTION("overlap within a frame") {
    config.objects = {rect(1, 4, 4, 2, 2, 0, 0), rect(2, 4, 4, 4, 4, 0, 0)};
    CHECK_THROWS_AS(isinet::generate(config), isinet::ConfigError);
  }
  SECTION("objects swapping places between frames") {
    config.height = 5;
    config.width = 8;
    config.objects = {rect(1, 1, 1, 2, 2, 2, 0), rect(2, 1, 1, 4, 2, -2, 0)};
    CHECK_THROWS_AS(isinet::generate(config), isinet::ConfigError);
  }
  SECTION("an entering object back-projecting onto a neighbour") {
    config.height = 5;
    config.width = 12;
    config.objects = {rect(1, 1, 1, 4, 2, 0, 0), rect(2, 1, 1, 7, 2, 3, 0)};
    CHECK_THROWS_AS(isinet::generate(config), isinet::ConfigError);
  }
  SECTION("leaving the one-pixel border margin") {
    config.objects = {rect(1, 2, 2, 1, 1, -1, 0)};
    CHECK_THROWS_AS(isinet::generate(config), isinet::ConfigError);
  }
  SECTION("flips need somewhere to flip to") {
    config.num_classes = 1;
    config.objects = {rect(1, 2, 2, 2, 2, 0, 0)};
    config.noise.flip_probability = 0.1;
    CHECK_THROWS_AS(isinet::generate(config), isinet::ConfigError);
  }
  SECTION("malformed knobs") {
    config.noise.flip_probability = 1.5;
    CHECK_THROWS_AS(isinet::generate(config), isinet::ConfigError);
    config.noise.flip_probability = 0.0;
    config.noise.correct_score_lo = 0.9;
    config.noise.correct_score_hi = 0.5;
    CHECK_THROWS_AS(isinet::generate(config), isinet::ConfigError);
    config.noise.correct_score_hi = 1.0;
    config.frames = 0;
    CHECK_THROWS_AS(isinet::generate(config), isinet::ConfigError);
    config.frames = 2;
    config.objects = {rect(0, 2, 2, 2, 2, 0, 0)};
    CHECK_THROWS_AS(isinet::generate(config), isinet::ConfigError);
  }
}

TEST_CASE("configs parse from json") {
  const nlohmann::json j = {
      {"sequence", "seq_x"},
      {"frames", 4},
      {"height", 24},
      {"width", 30},
      {"num_classes", 3},
      {"seed", 99},
      {"noise",
       {{"flip_probability", 0.25},
        {"correct_score", {0.9, 1.0}},
        {"flipped_score", {0.8, 0.9}}}},
      {"objects",
       {{{"shape", "rectangle"},
         {"class_id", 2},
         {"width", 4},
         {"height", 3},
         {"start_x", 5},
         {"start_y", 6},
         {"vx", 1},
         {"vy", 0}}}}};

  const SynthConfig config = isinet::parse_synth_config(j);
  CHECK(config.sequence == "seq_x");
  CHECK(config.frames == 4);
  CHECK(config.height == 24);
  CHECK(config.width == 30);
  CHECK(config.num_classes == 3);
  CHECK(config.seed == 99);
  CHECK(config.noise.flip_probability == 0.25);
  CHECK(config.noise.correct_score_lo == 0.9);
  CHECK(config.noise.flipped_score_hi == 0.9);
  REQUIRE(config.objects.size() == 1);
  CHECK(config.objects[0].shape == SynthShape::kRectangle);
  CHECK(config.objects[0].class_id == 2);
  CHECK(config.objects[0].vx == 1);

  SECTION("missing keys and unknown shapes are format errors") {
    nlohmann::json missing = j;
    missing.erase("frames");
    CHECK_THROWS_AS(isinet::parse_synth_config(missing), isinet::FormatError);
    nlohmann::json shape = j;
    shape["objects"][0]["shape"] = "triangle";
    CHECK_THROWS_AS(isinet::parse_synth_config(shape), isinet::FormatError);
  }
  SECTION("file round trip") {
    testutil::TempDir dir;
    testutil::write_bytes(dir.file("config.json"), j.dump(2) + "\n");
    const SynthConfig loaded = isinet::read_synth_config(dir.file("config.json"));
    CHECK(loaded.sequence == "seq_x");
    CHECK(loaded.objects.size() == 1);
    CHECK_THROWS_AS(isinet::read_synth_config(dir.file("absent.json")),
                    isinet::FormatError);
    testutil::write_bytes(dir.file("bad.json"), "{ not json");
    CHECK_THROWS_AS(isinet::read_synth_config(dir.file("bad.json")),
                    isinet::FormatError);
  }
}

TEST_CASE("datasets land on disk in the batch layout") {
  SynthConfig config;
  config.sequence = "seq_demo";
  config.frames = 3;
  config.height = 10;
  config.width = 12;
  config.num_classes = 2;
  config.seed = 5;
  config.objects = {rect(1, 3, 3, 2, 2, 1, 0)};
  config.noise.flip_probability = 0.4;
  const SynthDataset data = isinet::generate(config);

  testutil::TempDir dir;
  isinet::write_dataset(data, config.num_classes, dir.path());

  namespace fs = std::filesystem;
  CHECK(fs::exists(dir.path() / "vocabulary.txt"));
  CHECK(fs::exists(dir.path() / "detections" / "seq_demo.json"));
  CHECK(fs::exists(dir.path() / "groundtruth" / "seq_demo.json"));
  CHECK(fs::exists(dir.path() / "flow" / "seq_demo" / "000001.flo"));
  CHECK(fs::exists(dir.path() / "flow" / "seq_demo" / "000002.flo"));
  CHECK(fs::exists(dir.path() / "labels" / "seq_demo" / "000000.pgm"));
  CHECK(fs::exists(dir.path() / "labels" / "seq_demo" / "000002.pgm"));

  const isinet::ClassVocabulary vocab =
      isinet::read_vocabulary(dir.path() / "vocabulary.txt");
  CHECK(vocab.names() == std::vector<std::string>{"class_1", "class_2"});

  const SequenceDetections loaded = isinet::read_detections(
      dir.path() / "detections" / "seq_demo.json", vocab);
  CHECK(loaded.sequence == "seq_demo");
  CHECK(same_frames(loaded, data.predictions));

  for (std::size_t i = 0; i < data.flows.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "%06zu.flo", i + 1);
    CHECK(isinet::read_flo(dir.path() / "flow" / "seq_demo" / name) ==
          data.flows[i]);
  }
  for (std::size_t i = 0; i < data.label_maps.size(); ++i) {
    char name[16];
    std::snprintf(name, sizeof(name), "%06zu.pgm", i);
    const isinet::LabelGrid grid = isinet::read_label_map(
        dir.path() / "labels" / "seq_demo" / name, vocab);
    CHECK(grid.values == data.label_maps[i].values);
  }
}
