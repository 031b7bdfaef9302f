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

#ifndef ISINET_SYNTH_HPP_
#define ISINET_SYNTH_HPP_

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isinet/detections.hpp"
#include "isinet/detections_io.hpp"
#include "isinet/errors.hpp"
#include "isinet/flo_io.hpp"
#include "isinet/flow.hpp"
#include "isinet/label_grid.hpp"
#include "isinet/label_map_io.hpp"
#include "isinet/mask.hpp"
#include "isinet/vocabulary.hpp"

namespace isinet {

enum class SynthShape { kRectangle, kEllipse };

// One moving object. The bounding box starts at (start_x, start_y) and
// translates by (vx, vy) pixels per frame.
struct SynthObject {
  SynthShape shape = SynthShape::kRectangle;
  int class_id = 1;
  int width = 1;
  int height = 1;
  int start_x = 0;
  int start_y = 0;
  int vx = 0;
  int vy = 0;
};

// Detector-noise model. Each object-frame flips to a uniformly random wrong
// class with flip_probability; scores are drawn uniformly from the range
// matching the outcome.
struct NoiseModel {
  double flip_probability = 0.0;
  double correct_score_lo = 0.8;
  double correct_score_hi = 1.0;
  double flipped_score_lo = 0.8;
  double flipped_score_hi = 1.0;
};

struct SynthConfig {
  std::string sequence = "synthetic";
  int frames = 1;
  int height = 1;
  int width = 1;
  int num_classes = 1;
  std::vector<SynthObject> objects;
  NoiseModel noise;
  std::uint64_t seed = 0;
};

// Everything one generated sequence provides: noisy predictions, perfect
// groundtruth detections (score 1.0, stable instance ids), backward flows
// (flows[t-1] maps frame t to frame t-1), and semantic label maps.
struct SynthDataset {
  SequenceDetections predictions;
  SequenceDetections groundtruth;
  std::vector<FlowField> flows;
  std::vector<LabelGrid> label_maps;
};

namespace detail {

// Frozen sampler set: outputs must stay byte-identical across platforms and
// releases, so no std distributions are used.
inline double unit_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [lo, hi], unbiased via rejection.
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = (UINT64_MAX / range) * range;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return lo + static_cast<int>(draw % range);
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_real(rng);
}

inline int box_x(const SynthObject& object, int frame) {
  return object.start_x + frame * object.vx;
}

inline int box_y(const SynthObject& object, int frame) {
  return object.start_y + frame * object.vy;
}

// Writes the object's frame-`frame` support into a row-major grid with the
// given value, adding onto what is present (callers detect overlap as >1).
// The box is clipped to the grid, which only matters for virtual frames
// outside the validated range.
inline void paint_object(std::vector<std::uint8_t>& grid, int grid_width,
                         const SynthObject& object, int frame,
                         std::uint8_t value) {
  const int grid_height =
      static_cast<int>(grid.size()) / std::max(grid_width, 1);
  const int x = box_x(object, frame);
  const int y = box_y(object, frame);
  const double cx = x + (object.width - 1) / 2.0;
  const double cy = y + (object.height - 1) / 2.0;
  const double rx = object.width / 2.0;
  const double ry = object.height / 2.0;
  const int r_end = std::min(y + object.height, grid_height);
  const int c_end = std::min(x + object.width, grid_width);
  for (int r = std::max(y, 0); r < r_end; ++r) {
    for (int c = std::max(x, 0); c < c_end; ++c) {
      if (object.shape == SynthShape::kEllipse) {
        const double dx = (c - cx) / rx;
        const double dy = (r - cy) / ry;
        if (dx * dx + dy * dy > 1.0) continue;
      }
      grid[static_cast<std::size_t>(r) * grid_width + c] =
          static_cast<std::uint8_t>(grid[static_cast<std::size_t>(r) *
                                             grid_width +
                                         c] +
                                    value);
    }
  }
}

inline void validate_synth_config(const SynthConfig& config) {
  if (config.frames < 1) throw ConfigError("synth: frames must be >= 1");
  if (config.height < 1 || config.width < 1) {
    throw ConfigError("synth: dimensions must be positive");
  }
  if (config.num_classes < 1 || config.num_classes > 255) {
    throw ConfigError("synth: num_classes must be in [1, 255]");
  }
  const NoiseModel& noise = config.noise;
  if (!(noise.flip_probability >= 0.0 && noise.flip_probability <= 1.0)) {
    throw ConfigError("synth: flip_probability must be in [0, 1]");
  }
  if (noise.flip_probability > 0.0 && config.num_classes < 2) {
    throw ConfigError("synth: class flips need at least 2 classes");
  }
  for (const auto& [lo, hi] : {std::pair{noise.correct_score_lo,
                                         noise.correct_score_hi},
                               std::pair{noise.flipped_score_lo,
                                         noise.flipped_score_hi}}) {
    if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) {
      throw ConfigError("synth: score range must satisfy 0 <= lo <= hi <= 1");
    }
  }
  for (std::size_t i = 0; i < config.objects.size(); ++i) {
    const SynthObject& object = config.objects[i];
    if (object.width < 1 || object.height < 1) {
      throw ConfigError("synth: object " + std::to_string(i) +
                        " has an empty bounding box");
    }
    if (object.class_id < 1 || object.class_id > config.num_classes) {
      throw ConfigError("synth: object " + std::to_string(i) +
                        " class id outside [1, num_classes]");
    }
    for (int t = 0; t < config.frames; ++t) {
      const int x = box_x(object, t);
      const int y = box_y(object, t);
      if (x < 1 || y < 1 || x + object.width > config.width - 1 ||
          y + object.height > config.height - 1) {
        throw ConfigError("synth: object " + std::to_string(i) +
                          " leaves the 1 px frame margin at frame " +
                          std::to_string(t));
      }
    }
  }
}

}  // namespace detail

// Vocabulary for synthetic data: class_1 .. class_K.
inline ClassVocabulary synthetic_vocabulary(int num_classes) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(num_classes));
  for (int c = 1; c <= num_classes; ++c) {
    names.push_back("class_" + std::to_string(c));
  }
  return ClassVocabulary(std::move(names));
}

// Generates one sequence. Per frame the objects' supports must be disjoint,
// and across each consecutive frame pair the union of an object's old and
// new supports must not touch any other object's; both violations raise
// ConfigError. Flow for frame pair (t, t-1) is (-vx, -vy) over that union
// per object and 0 elsewhere, which makes backward warping reproduce the
// previous mask exactly for integer velocities.
//
// Draw order under the seed is frozen: per frame, per object, (1) one flip
// draw, (2) if flipped, wrong-class draws by rejection, (3) one score draw.
inline SynthDataset generate(const SynthConfig& config) {
  detail::validate_synth_config(config);
  const int frames = config.frames;
  const int height = config.height;
  const int width = config.width;
  const std::size_t n_objects = config.objects.size();
  const std::size_t n_pixels =
      static_cast<std::size_t>(height) * static_cast<std::size_t>(width);

  // per frame, per object dense supports plus RLE masks
  std::vector<std::vector<std::vector<std::uint8_t>>> supports(
      static_cast<std::size_t>(frames));
  std::vector<std::vector<BinaryMask>> masks(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    std::vector<std::uint8_t> occupancy(n_pixels, 0);
    for (std::size_t i = 0; i < n_objects; ++i) {
      std::vector<std::uint8_t> support(n_pixels, 0);
      detail::paint_object(support, width, config.objects[i], t, 1);
      detail::paint_object(occupancy, width, config.objects[i], t, 1);
      masks[static_cast<std::size_t>(t)].push_back(
          BinaryMask::from_pixels(height, width, support));
      supports[static_cast<std::size_t>(t)].push_back(std::move(support));
    }
    for (const std::uint8_t v : occupancy) {
      if (v > 1) {
        throw ConfigError("synth: objects overlap in frame " +
                          std::to_string(t));
      }
    }
  }

  SynthDataset dataset;
  dataset.flows.reserve(frames > 0 ? static_cast<std::size_t>(frames - 1) : 0);
  for (int t = 1; t < frames; ++t) {
    FlowField flow = FlowField::zero(height, width);
    std::vector<std::uint8_t> occupancy(n_pixels, 0);
    for (std::size_t i = 0; i < n_objects; ++i) {
      const SynthObject& object = config.objects[i];
      const auto u = static_cast<float>(-object.vx);
      const auto v = static_cast<float>(-object.vy);
      // Pixels of the first motion region back-project to where the object
      // sat before frame 0. That virtual support must stay clear of other
      // objects or warping their frame-0 masks picks up stray pixels; later
      // pairs get this for free from the preceding pair's disjointness.
      std::vector<std::uint8_t> entering;
      if (t == 1 && (object.vx != 0 || object.vy != 0)) {
        entering.assign(n_pixels, 0);
        detail::paint_object(entering, width, object, -1, 1);
      }
      for (std::size_t p = 0; p < n_pixels; ++p) {
        const std::uint8_t covered =
            supports[static_cast<std::size_t>(t)][i][p] |
            supports[static_cast<std::size_t>(t - 1)][i][p];
        if (covered) {
          flow.u[p] = u;
          flow.v[p] = v;
        }
        const std::uint8_t claimed =
            covered | (entering.empty() ? std::uint8_t{0} : entering[p]);
        if (claimed) occupancy[p] = static_cast<std::uint8_t>(occupancy[p] + 1);
      }
    }
    for (const std::uint8_t v : occupancy) {
      if (v > 1) {
        throw ConfigError("synth: object motions cross between frames " +
                          std::to_string(t - 1) + " and " + std::to_string(t));
      }
    }
    dataset.flows.push_back(std::move(flow));
  }

  dataset.label_maps.reserve(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    LabelGrid grid = LabelGrid::background(height, width);
    for (std::size_t i = 0; i < n_objects; ++i) {
      detail::paint_object(grid.values, width, config.objects[i], t,
                           static_cast<std::uint8_t>(
                               config.objects[i].class_id));
    }
    dataset.label_maps.push_back(std::move(grid));
  }

  dataset.groundtruth.sequence = config.sequence;
  dataset.groundtruth.height = height;
  dataset.groundtruth.width = width;
  dataset.predictions.sequence = config.sequence;
  dataset.predictions.height = height;
  dataset.predictions.width = width;

  std::mt19937_64 rng(config.seed);
  for (int t = 0; t < frames; ++t) {
    FrameDetections truth;
    truth.frame_index = t;
    FrameDetections noisy;
    noisy.frame_index = t;
    for (std::size_t i = 0; i < n_objects; ++i) {
      const SynthObject& object = config.objects[i];
      const BinaryMask& mask = masks[static_cast<std::size_t>(t)][i];
      truth.candidates.push_back(
          Candidate{mask, 1.0, object.class_id, static_cast<int>(i) + 1});

      const bool flipped =
          detail::unit_real(rng) < config.noise.flip_probability;
      int label = object.class_id;
      if (flipped) {
        do {
          label = detail::uniform_int(rng, 1, config.num_classes);
        } while (label == object.class_id);
      }
      const double score =
          flipped ? detail::uniform_range(rng, config.noise.flipped_score_lo,
                                          config.noise.flipped_score_hi)
                  : detail::uniform_range(rng, config.noise.correct_score_lo,
                                          config.noise.correct_score_hi);
      noisy.candidates.push_back(
          Candidate{mask, score, label, static_cast<int>(i) + 1});
    }
    dataset.groundtruth.frames.push_back(std::move(truth));
    dataset.predictions.frames.push_back(std::move(noisy));
  }
  return dataset;
}

inline SynthConfig parse_synth_config(const nlohmann::json& j) {
  try {
    SynthConfig config;
    config.sequence = j.value("sequence", std::string("synthetic"));
    config.frames = j.at("frames").get<int>();
    config.height = j.at("height").get<int>();
    config.width = j.at("width").get<int>();
    config.num_classes = j.at("num_classes").get<int>();
    config.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("noise")) {
      const nlohmann::json& n = j.at("noise");
      config.noise.flip_probability = n.value("flip_probability", 0.0);
      if (n.contains("correct_score")) {
        config.noise.correct_score_lo = n.at("correct_score").at(0).get<double>();
        config.noise.correct_score_hi = n.at("correct_score").at(1).get<double>();
      }
      if (n.contains("flipped_score")) {
        config.noise.flipped_score_lo = n.at("flipped_score").at(0).get<double>();
        config.noise.flipped_score_hi = n.at("flipped_score").at(1).get<double>();
      }
    }
    for (const nlohmann::json& jo : j.value("objects", nlohmann::json::array())) {
      SynthObject object;
      const std::string shape = jo.at("shape").get<std::string>();
      if (shape == "rectangle") {
        object.shape = SynthShape::kRectangle;
      } else if (shape == "ellipse") {
        object.shape = SynthShape::kEllipse;
      } else {
        throw FormatError("synth config: unknown shape \"" + shape + "\"");
      }
      object.class_id = jo.at("class_id").get<int>();
      object.width = jo.at("width").get<int>();
      object.height = jo.at("height").get<int>();
      object.start_x = jo.at("start_x").get<int>();
      object.start_y = jo.at("start_y").get<int>();
      object.vx = jo.at("vx").get<int>();
      object.vy = jo.at("vy").get<int>();
      config.objects.push_back(object);
    }
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("synth config: ") + e.what());
  }
}

inline SynthConfig read_synth_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open synth config " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("synth config " + path.string() + ": " + e.what());
  }
  return parse_synth_config(j);
}

// Lays a dataset out in the directory structure the batch commands read:
//   root/vocabulary.txt
//   root/detections/<sequence>.json        noisy predictions
//   root/groundtruth/<sequence>.json       perfect detections
//   root/flow/<sequence>/%06d.flo          numbered by the later frame
//   root/labels/<sequence>/%06d.pgm
inline void write_dataset(const SynthDataset& dataset, int num_classes,
                          const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  const std::string& sequence = dataset.predictions.sequence;
  fs::create_directories(root / "detections");
  fs::create_directories(root / "groundtruth");
  fs::create_directories(root / "flow" / sequence);
  fs::create_directories(root / "labels" / sequence);
  write_vocabulary(synthetic_vocabulary(num_classes),
                   root / "vocabulary.txt");
  write_detections(dataset.predictions,
                   root / "detections" / (sequence + ".json"));
  write_detections(dataset.groundtruth,
                   root / "groundtruth" / (sequence + ".json"));
  char name[32];
  for (std::size_t i = 0; i < dataset.flows.size(); ++i) {
    std::snprintf(name, sizeof(name), "%06zu.flo", i + 1);
    write_flo(dataset.flows[i], root / "flow" / sequence / name);
  }
  for (std::size_t i = 0; i < dataset.label_maps.size(); ++i) {
    std::snprintf(name, sizeof(name), "%06zu.pgm", i);
    write_label_map(dataset.label_maps[i], root / "labels" / sequence / name);
  }
}

}  // namespace isinet

#endif  // ISINET_SYNTH_HPP_
