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

#ifndef ISINET_VOCABULARY_HPP_
#define ISINET_VOCABULARY_HPP_

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "isinet/errors.hpp"

namespace isinet {

// Instrument class vocabulary. Ids are dense 1..K with unique names;
// id 0 is always the background and never listed.
class ClassVocabulary {
 public:
  // Builds from names in id order (names[0] gets id 1).
  explicit ClassVocabulary(std::vector<std::string> names)
      : names_(std::move(names)) {
    if (names_.empty()) throw FormatError("vocabulary has no classes");
    std::set<std::string> seen;
    for (const std::string& n : names_) {
      if (n.empty()) throw FormatError("vocabulary contains an empty name");
      if (!seen.insert(n).second) {
        throw FormatError("duplicate vocabulary name: " + n);
      }
    }
  }

  int num_classes() const { return static_cast<int>(names_.size()); }

  bool contains(int class_id) const {
    return class_id >= 1 && class_id <= num_classes();
  }

  const std::string& name(int class_id) const {
    if (!contains(class_id)) {
      throw VocabularyError("class id " + std::to_string(class_id) +
                            " is not in the vocabulary");
    }
    return names_[static_cast<std::size_t>(class_id) - 1];
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

// EndoVis 2017 instrument types, in the standard reporting order.
inline ClassVocabulary endovis2017_vocabulary() {
  return ClassVocabulary({
      "Bipolar Forceps",
      "Prograsp Forceps",
      "Large Needle Driver",
      "Vessel Sealer",
      "Grasping Retractor",
      "Monopolar Curved Scissors",
      "Ultrasound Probe",
  });
}

// EndoVis 2018 instrument types (the seven evaluated classes).
inline ClassVocabulary endovis2018_vocabulary() {
  return ClassVocabulary({
      "Bipolar Forceps",
      "Prograsp Forceps",
      "Large Needle Driver",
      "Monopolar Curved Scissors",
      "Ultrasound Probe",
      "Suction Instrument",
      "Clip Applier",
  });
}

// Parses a vocabulary file of lines "id name". Ids must come out dense
// 1..K; the name is everything after the first space and may itself
// contain spaces. Blank lines are ignored.
inline ClassVocabulary read_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open vocabulary file: " + path);
  std::vector<std::pair<int, std::string>> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ls(line);
    int id = 0;
    if (!(ls >> id)) {
      throw FormatError("vocabulary line does not start with an id: " + line);
    }
    std::string name;
    std::getline(ls, name);
    const std::size_t start = name.find_first_not_of(" \t");
    if (start == std::string::npos) {
      throw FormatError("vocabulary entry " + std::to_string(id) +
                        " has no name");
    }
    name = name.substr(start);
    entries.emplace_back(id, name);
  }
  std::vector<std::string> names(entries.size());
  for (const auto& [id, name] : entries) {
    if (id < 1 || id > static_cast<int>(entries.size()) ||
        !names[static_cast<std::size_t>(id) - 1].empty()) {
      throw FormatError("vocabulary ids must be dense 1.." +
                        std::to_string(entries.size()) + "; offending id " +
                        std::to_string(id));
    }
    names[static_cast<std::size_t>(id) - 1] = name;
  }
  return ClassVocabulary(std::move(names));
}

// Writes the "id name" line format read_vocabulary understands.
inline void write_vocabulary(const ClassVocabulary& vocab,
                             const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open vocabulary file for write: " + path);
  for (int id = 1; id <= vocab.num_classes(); ++id) {
    out << id << ' ' << vocab.name(id) << '\n';
  }
}

}  // namespace isinet

#endif  // ISINET_VOCABULARY_HPP_
