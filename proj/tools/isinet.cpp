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

// Batch front end: correct, evaluate, simulate and ablate over datasets laid
// out as
//   <root>/detections/<sequence>.json
//   <root>/flow/<sequence>/<frame>.flo     (named by the later frame)
//   <root>/labels/<sequence>/<frame>.pgm
//   <root>/vocabulary.txt                  (optional)
//
// Exit codes: 0 success, 1 usage error, 2 data or format error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <isinet/isinet.hpp>

namespace fs = std::filesystem;

namespace {

struct DatasetOptions {
  std::string input;
  std::string detections_dir;  // empty: <input>/detections
  std::string output;
  std::vector<std::string> sequences;  // empty: all
  std::string vocab;                   // name, path, or empty for auto
  std::string profile = "endovis2017";
  double score_threshold = isinet::kDefaultScoreThreshold;
};

std::size_t worker_count() {
  if (const char* env = std::getenv("ISINET_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || parsed < 1) {
      throw isinet::ConfigError(
          "ISINET_THREADS must be a positive integer, got \"" +
          std::string(env) + "\"");
    }
    return static_cast<std::size_t>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Runs fn(0..n_tasks-1) on a fixed-size pool. Tasks own disjoint output
// slots, so results are position-stable no matter the schedule.
template <typename Fn>
void parallel_for(std::size_t n_tasks, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), n_tasks);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n_tasks) return;
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string frame_file(int frame_index, const char* extension) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%06d.%s", frame_index, extension);
  return buffer;
}

isinet::ClassVocabulary resolve_vocabulary(const DatasetOptions& options) {
  if (options.vocab == "endovis2017") return isinet::endovis2017_vocabulary();
  if (options.vocab == "endovis2018") return isinet::endovis2018_vocabulary();
  if (!options.vocab.empty()) return isinet::read_vocabulary(options.vocab);
  if (options.profile == "endovis2018") {
    return isinet::endovis2018_vocabulary();
  }
  const fs::path bundled = fs::path(options.input) / "vocabulary.txt";
  if (fs::exists(bundled)) return isinet::read_vocabulary(bundled);
  return isinet::endovis2017_vocabulary();
}

fs::path detections_dir(const DatasetOptions& options) {
  return options.detections_dir.empty()
             ? fs::path(options.input) / "detections"
             : fs::path(options.detections_dir);
}

std::vector<std::string> discover_sequences(const DatasetOptions& options) {
  const fs::path dir = detections_dir(options);
  if (!fs::is_directory(dir)) {
    throw isinet::FormatError("no detections directory: " + dir.string());
  }
  std::vector<std::string> names;
  if (!options.sequences.empty()) {
    for (const std::string& name : options.sequences) {
      const fs::path file = dir / (name + ".json");
      if (!fs::exists(file)) {
        throw isinet::FormatError("no detections file: " + file.string());
      }
      names.push_back(name);
    }
    return names;
  }
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      names.push_back(entry.path().stem().string());
    }
  }
  std::sort(names.begin(), names.end());
  if (names.empty()) {
    throw isinet::FormatError("no detection files under " + dir.string());
  }
  return names;
}

isinet::SequenceDetections load_sequence(const DatasetOptions& options,
                                         const std::string& name,
                                         const isinet::ClassVocabulary& vocab) {
  return isinet::read_detections(detections_dir(options) / (name + ".json"),
                                 vocab, options.score_threshold);
}

std::vector<isinet::FlowField> load_flows(
    const DatasetOptions& options, const isinet::SequenceDetections& sequence) {
  std::vector<isinet::FlowField> flows;
  if (sequence.frames.empty()) return flows;
  const fs::path dir = fs::path(options.input) / "flow" / sequence.sequence;
  flows.reserve(sequence.frames.size() - 1);
  for (std::size_t i = 1; i < sequence.frames.size(); ++i) {
    const fs::path file = dir / frame_file(sequence.frames[i].frame_index, "flo");
    isinet::FlowField flow = isinet::read_flo(file);
    if (flow.height != sequence.height || flow.width != sequence.width) {
      throw isinet::ShapeError("flow dimensions do not match sequence \"" +
                               sequence.sequence + "\": " + file.string());
    }
    flows.push_back(std::move(flow));
  }
  return flows;
}

std::vector<isinet::LabelGrid> load_labels(
    const DatasetOptions& options, const isinet::SequenceDetections& sequence,
    const isinet::ClassVocabulary& vocab) {
  std::vector<isinet::LabelGrid> labels;
  const fs::path dir = fs::path(options.input) / "labels" / sequence.sequence;
  labels.reserve(sequence.frames.size());
  for (const isinet::FrameDetections& frame : sequence.frames) {
    const fs::path file = dir / frame_file(frame.frame_index, "pgm");
    isinet::LabelGrid grid = isinet::read_label_map(file, vocab);
    if (grid.height != sequence.height || grid.width != sequence.width) {
      throw isinet::ShapeError("label map dimensions do not match sequence \"" +
                               sequence.sequence + "\": " + file.string());
    }
    labels.push_back(std::move(grid));
  }
  return labels;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw isinet::FormatError("cannot open output file: " + path.string());
  }
  out << text;
  if (!out) throw isinet::FormatError("write failed: " + path.string());
}

// Manifest directories are checked before any sequence work starts; missing
// individual files still surface later with the exact file name.
void require_directory(const fs::path& dir, const std::string& what) {
  if (!fs::is_directory(dir)) {
    throw isinet::FormatError("no " + what + " directory: " + dir.string());
  }
}

isinet::TemporalConfig temporal_from_flags(const CLI::App& sub, int frames,
                                           double threshold,
                                           const std::string& strategy,
                                           const std::string& profile) {
  isinet::TemporalConfig config;
  config.window_f = frames;
  config.iou_threshold = threshold;
  if (profile == "endovis2018" && sub.count("--iou-threshold") == 0) {
    config.iou_threshold = 0.5;
  }
  config.strategy = strategy == "max" ? isinet::AssignmentStrategy::kMax
                                      : isinet::AssignmentStrategy::kWeightedMode;
  return config;
}

int cmd_correct(const DatasetOptions& options,
                const isinet::TemporalConfig& config) {
  const isinet::ClassVocabulary vocab = resolve_vocabulary(options);
  const std::vector<std::string> names = discover_sequences(options);
  require_directory(fs::path(options.input) / "flow", "flow");
  const fs::path out_dir = fs::path(options.output) / "detections";
  fs::create_directories(out_dir);
  parallel_for(names.size(), [&](std::size_t i) {
    isinet::SequenceDetections sequence =
        load_sequence(options, names[i], vocab);
    const std::vector<isinet::FlowField> flows = load_flows(options, sequence);
    sequence.frames =
        isinet::correct_sequence(std::move(sequence.frames), flows, config);
    isinet::write_detections(sequence, out_dir / (names[i] + ".json"));
  });
  return 0;
}

int cmd_evaluate(const DatasetOptions& options) {
  const isinet::ClassVocabulary vocab = resolve_vocabulary(options);
  const std::vector<std::string> names = discover_sequences(options);
  require_directory(fs::path(options.input) / "labels", "labels");
  std::vector<std::vector<isinet::EvalFrame>> per_sequence(names.size());
  parallel_for(names.size(), [&](std::size_t i) {
    const isinet::SequenceDetections sequence =
        load_sequence(options, names[i], vocab);
    const std::vector<isinet::LabelGrid> labels =
        load_labels(options, sequence, vocab);
    per_sequence[i] = isinet::pair_with_groundtruth(sequence, labels);
  });
  std::vector<isinet::EvalFrame> pairs;
  for (std::vector<isinet::EvalFrame>& chunk : per_sequence) {
    for (isinet::EvalFrame& pair : chunk) pairs.push_back(std::move(pair));
  }
  const isinet::MetricReport report =
      isinet::compute_report(pairs, vocab.num_classes());
  const std::string table = isinet::report_table(report, vocab);
  fs::create_directories(options.output);
  write_text(fs::path(options.output) / "report.json",
             isinet::report_json(report, vocab).dump(2) + "\n");
  write_text(fs::path(options.output) / "report.txt", table);
  std::cout << table;
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& output) {
  const isinet::SynthConfig config = isinet::read_synth_config(config_path);
  const isinet::SynthDataset dataset = isinet::generate(config);
  isinet::write_dataset(dataset, config.num_classes, output);
  return 0;
}

int cmd_ablate(const DatasetOptions& options, const isinet::AblationGrid& grid) {
  const isinet::ClassVocabulary vocab = resolve_vocabulary(options);
  const std::vector<std::string> names = discover_sequences(options);
  require_directory(fs::path(options.input) / "flow", "flow");
  require_directory(fs::path(options.input) / "labels", "labels");
  std::vector<isinet::SequenceSample> samples(names.size());
  parallel_for(names.size(), [&](std::size_t i) {
    isinet::SequenceSample sample;
    sample.detections = load_sequence(options, names[i], vocab);
    sample.flows = load_flows(options, sample.detections);
    sample.groundtruth = load_labels(options, sample.detections, vocab);
    samples[i] = std::move(sample);
  });
  const std::vector<isinet::AblationRow> rows =
      isinet::ablate(samples, grid, vocab.num_classes());
  const std::string table = isinet::ablation_table(rows, vocab);
  fs::create_directories(options.output);
  write_text(fs::path(options.output) / "ablation.json",
             isinet::ablation_json(rows, vocab).dump(2) + "\n");
  write_text(fs::path(options.output) / "ablation.txt", table);
  std::cout << table;
  return 0;
}

void add_dataset_flags(CLI::App* sub, DatasetOptions* options,
                       bool with_detections_override) {
  sub->add_option("--input", options->input, "dataset root directory")
      ->required();
  sub->add_option("--output", options->output, "output directory")->required();
  if (with_detections_override) {
    sub->add_option("--detections-dir", options->detections_dir,
                    "directory of detection files (default <input>/detections)");
  }
  sub->add_option("--sequences", options->sequences,
                  "sequence names to process (default all)")
      ->delimiter(',');
  sub->add_option("--vocab", options->vocab,
                  "endovis2017, endovis2018 or a vocabulary file path");
  sub->add_option("--profile", options->profile,
                  "dataset profile; endovis2018 raises the IoU threshold "
                  "default to 0.5")
      ->check(CLI::IsMember({"endovis2017", "endovis2018"}));
  sub->add_option("--score-threshold", options->score_threshold,
                  "drop candidates with score <= this (default 0.75)")
      ->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "temporal consistency for surgical instrument instance segmentation"};
  app.require_subcommand(1);

  DatasetOptions correct_options;
  int correct_frames = 6;
  double correct_threshold = 0.0;
  std::string correct_strategy = "weighted_mode";
  CLI::App* correct =
      app.add_subcommand("correct", "rewrite class labels using the "
                                    "flow-matched frame window");
  add_dataset_flags(correct, &correct_options, false);
  correct->add_option("--frames", correct_frames,
                      "previous frames per window (default 6)")
      ->check(CLI::NonNegativeNumber);
  correct->add_option("--iou-threshold", correct_threshold,
                      "matches need IoU strictly above this (default 0; "
                      "profile endovis2018: 0.5)")
      ->check(CLI::Range(0.0, 1.0));
  correct->add_option("--assignment", correct_strategy,
                      "class vote: weighted_mode or max")
      ->check(CLI::IsMember({"weighted_mode", "max"}));

  DatasetOptions evaluate_options;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "render semantic maps and score them against groundtruth");
  add_dataset_flags(evaluate, &evaluate_options, true);

  std::string simulate_config;
  std::string simulate_output;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "generate a synthetic dataset from a JSON config");
  simulate->add_option("--config", simulate_config, "synth config JSON file")
      ->required();
  simulate->add_option("--output", simulate_output, "output dataset root")
      ->required();

  DatasetOptions ablate_options;
  std::vector<double> ablate_thresholds{0.0};
  std::vector<int> ablate_frames{6};
  std::vector<std::string> ablate_strategies{"weighted_mode"};
  CLI::App* ablate = app.add_subcommand(
      "ablate", "sweep the temporal parameters and score every cell");
  add_dataset_flags(ablate, &ablate_options, true);
  ablate->add_option("--thresholds", ablate_thresholds,
                     "IoU threshold grid values (default 0)")
      ->delimiter(',');
  ablate->add_option("--frames", ablate_frames,
                     "window size grid values (default 6)")
      ->delimiter(',');
  ablate->add_option("--strategies", ablate_strategies,
                     "strategy grid values (default weighted_mode)")
      ->delimiter(',')
      ->check(CLI::IsMember({"weighted_mode", "max"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (correct->parsed()) {
      return cmd_correct(
          correct_options,
          temporal_from_flags(*correct, correct_frames, correct_threshold,
                              correct_strategy, correct_options.profile));
    }
    if (evaluate->parsed()) return cmd_evaluate(evaluate_options);
    if (simulate->parsed()) return cmd_simulate(simulate_config, simulate_output);
    if (ablate->parsed()) {
      isinet::AblationGrid grid;
      grid.iou_thresholds = ablate_thresholds;
      grid.window_sizes = ablate_frames;
      for (const std::string& s : ablate_strategies) {
        grid.strategies.push_back(s == "max"
                                      ? isinet::AssignmentStrategy::kMax
                                      : isinet::AssignmentStrategy::kWeightedMode);
      }
      return cmd_ablate(ablate_options, grid);
    }
  } catch (const isinet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
