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

#ifndef ISINET_DETECTIONS_IO_HPP_
#define ISINET_DETECTIONS_IO_HPP_

#include <algorithm>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "isinet/detections.hpp"
#include "isinet/errors.hpp"
#include "isinet/vocabulary.hpp"

namespace isinet {

// Parses a detection file and applies the confidence filter: candidates
// with score <= score_threshold are dropped ("above" is strict, so the
// default keeps only scores > 0.75). Frames come back sorted by ascending
// frame_index with within-frame candidate order preserved. Malformed
// documents are rejected, never repaired.
inline SequenceDetections read_detections(
    const std::string& path, const ClassVocabulary& vocab,
    double score_threshold = kDefaultScoreThreshold) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open detection file: " + path);
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("detection file " + path + " is not valid JSON: " +
                      e.what());
  }

  SequenceDetections seq;
  try {
    seq.sequence = doc.at("sequence").get<std::string>();
    seq.height = doc.at("height").get<int>();
    seq.width = doc.at("width").get<int>();
    if (seq.height <= 0 || seq.width <= 0) {
      throw FormatError("detection file " + path + " has non-positive size");
    }
    for (const auto& frame_doc : doc.at("frames")) {
      FrameDetections frame;
      frame.frame_index = frame_doc.at("frame_index").get<int>();
      if (frame.frame_index < 0) {
        throw FormatError("negative frame_index in " + path);
      }
      for (const auto& cand_doc : frame_doc.at("candidates")) {
        const int class_id = cand_doc.at("class_id").get<int>();
        if (!vocab.contains(class_id)) {
          throw VocabularyError("detection file " + path +
                                " uses unknown class id " +
                                std::to_string(class_id));
        }
        const double score = cand_doc.at("score").get<double>();
        if (!(score >= 0.0 && score <= 1.0)) {
          throw DataError("detection file " + path + " has score " +
                          std::to_string(score) + " outside [0,1]");
        }
        std::vector<std::uint32_t> counts;
        for (const auto& c : cand_doc.at("rle").at("counts")) {
          const std::int64_t v = c.get<std::int64_t>();
          if (v < 0) throw FormatError("negative rle count in " + path);
          counts.push_back(static_cast<std::uint32_t>(v));
        }
        Candidate cand{BinaryMask(seq.height, seq.width, std::move(counts)),
                       score, class_id, std::nullopt};
        if (cand_doc.contains("instance_id")) {
          cand.instance_id = cand_doc.at("instance_id").get<int>();
        }
        if (score <= score_threshold) continue;
        frame.candidates.push_back(std::move(cand));
      }
      seq.frames.push_back(std::move(frame));
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("detection file " + path + " does not match the schema: " +
                      e.what());
  }

  std::stable_sort(seq.frames.begin(), seq.frames.end(),
                   [](const FrameDetections& a, const FrameDetections& b) {
                     return a.frame_index < b.frame_index;
                   });
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    if (seq.frames[i].frame_index == seq.frames[i - 1].frame_index) {
      throw FormatError("duplicate frame_index " +
                        std::to_string(seq.frames[i].frame_index) + " in " +
                        path);
    }
  }
  return seq;
}

inline nlohmann::ordered_json detections_to_json(const SequenceDetections& seq) {
  nlohmann::ordered_json doc;
  doc["sequence"] = seq.sequence;
  doc["height"] = seq.height;
  doc["width"] = seq.width;
  doc["frames"] = nlohmann::ordered_json::array();
  for (const FrameDetections& frame : seq.frames) {
    nlohmann::ordered_json frame_doc;
    frame_doc["frame_index"] = frame.frame_index;
    frame_doc["candidates"] = nlohmann::ordered_json::array();
    for (const Candidate& cand : frame.candidates) {
      nlohmann::ordered_json cand_doc;
      cand_doc["class_id"] = cand.class_id;
      cand_doc["score"] = cand.score;
      if (cand.instance_id) cand_doc["instance_id"] = *cand.instance_id;
      cand_doc["rle"]["counts"] = cand.mask.counts();
      frame_doc["candidates"].push_back(std::move(cand_doc));
    }
    doc["frames"].push_back(std::move(frame_doc));
  }
  return doc;
}

// Writes the schema read_detections reads. Output bytes are a pure
// function of the sequence value, so reruns are byte-identical.
inline void write_detections(const SequenceDetections& seq,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open detection file for write: " + path);
  out << detections_to_json(seq).dump(2) << '\n';
  if (!out) throw FormatError("failed writing detection file: " + path);
}

}  // namespace isinet

#endif  // ISINET_DETECTIONS_IO_HPP_
