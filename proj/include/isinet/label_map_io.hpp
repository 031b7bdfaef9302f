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

#ifndef ISINET_LABEL_MAP_IO_HPP_
#define ISINET_LABEL_MAP_IO_HPP_

#include <cctype>
#include <fstream>
#include <string>

#include "isinet/errors.hpp"
#include "isinet/label_grid.hpp"
#include "isinet/vocabulary.hpp"

namespace isinet {

namespace detail {

// Reads the next PGM header token, skipping whitespace and # comments.
inline std::string next_pgm_token(std::istream& in, const std::string& path) {
  std::string token;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!token.empty()) break;
      continue;
    }
    token.push_back(static_cast<char>(ch));
  }
  if (token.empty()) throw FormatError("truncated pgm header in " + path);
  return token;
}

inline int parse_pgm_int(std::istream& in, const std::string& path) {
  const std::string token = next_pgm_token(in, path);
  try {
    std::size_t used = 0;
    const int value = std::stoi(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw FormatError("bad pgm header field '" + token + "' in " + path);
  }
}

}  // namespace detail

// Reads an 8-bit binary portable graymap (P5) as a label grid. Pixel value
// is the class id; anything outside {0} plus the vocabulary ids is a
// DataError.
inline LabelGrid read_label_map(const std::string& path,
                                const ClassVocabulary& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open label map: " + path);
  const std::string magic = detail::next_pgm_token(in, path);
  if (magic != "P5") throw FormatError("not a binary pgm (P5): " + path);
  const int width = detail::parse_pgm_int(in, path);
  const int height = detail::parse_pgm_int(in, path);
  const int maxval = detail::parse_pgm_int(in, path);
  if (width <= 0 || height <= 0) {
    throw FormatError("bad pgm dimensions in " + path);
  }
  if (maxval != 255) {
    throw FormatError("label maps must use maxval 255, got " +
                      std::to_string(maxval) + " in " + path);
  }
  // the single whitespace byte after maxval was consumed by the tokenizer
  LabelGrid grid;
  grid.height = height;
  grid.width = width;
  grid.values.resize(static_cast<std::size_t>(height) * width);
  in.read(reinterpret_cast<char*>(grid.values.data()),
          static_cast<std::streamsize>(grid.values.size()));
  if (static_cast<std::size_t>(in.gcount()) != grid.values.size()) {
    throw FormatError("truncated pgm payload in " + path);
  }
  in.peek();
  if (!in.eof()) throw FormatError("trailing bytes after pgm payload in " + path);

  for (std::uint8_t value : grid.values) {
    if (value != 0 && !vocab.contains(value)) {
      throw DataError("label map " + path + " contains pixel value " +
                      std::to_string(static_cast<int>(value)) +
                      " outside the vocabulary");
    }
  }
  return grid;
}

// Writes the P5 graymap read_label_map reads; round trips are lossless.
inline void write_label_map(const LabelGrid& grid, const std::string& path) {
  if (grid.height <= 0 || grid.width <= 0 ||
      grid.values.size() !=
          static_cast<std::size_t>(grid.height) * grid.width) {
    throw ShapeError("label grid dimensions are inconsistent");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open label map for write: " + path);
  out << "P5\n" << grid.width << ' ' << grid.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(grid.values.data()),
            static_cast<std::streamsize>(grid.values.size()));
  if (!out) throw FormatError("failed writing label map: " + path);
}

}  // namespace isinet

#endif  // ISINET_LABEL_MAP_IO_HPP_
