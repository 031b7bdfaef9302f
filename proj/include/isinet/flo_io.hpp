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

#ifndef ISINET_FLO_IO_HPP_
#define ISINET_FLO_IO_HPP_

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "isinet/errors.hpp"
#include "isinet/flow.hpp"

namespace isinet {

// Magic tag of the Middlebury .flo format; its little-endian bytes spell
// "PIEH".
inline constexpr float kFloMagic = 202021.25f;

static_assert(std::endian::native == std::endian::little,
              "flo codec assumes a little-endian host");

// Reads a Middlebury .flo file: float32 magic, int32 width, int32 height,
// then height*width interleaved (u, v) float32 records in row-major order.
// Rejects bad magic, truncated or oversized payloads (FormatError) and
// non-finite values (DataError).
inline FlowField read_flo(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open flow file: " + path);

  float magic = 0.0f;
  in.read(reinterpret_cast<char*>(&magic), sizeof(magic));
  if (!in || magic != kFloMagic) {
    throw FormatError("bad flo magic tag in " + path);
  }
  std::int32_t width = 0, height = 0;
  in.read(reinterpret_cast<char*>(&width), sizeof(width));
  in.read(reinterpret_cast<char*>(&height), sizeof(height));
  if (!in || width <= 0 || height <= 0) {
    throw FormatError("bad flo dimensions in " + path);
  }

  FlowField flow;
  flow.height = height;
  flow.width = width;
  const std::size_t n = flow.size();
  flow.u.resize(n);
  flow.v.resize(n);
  std::vector<float> record(2);
  for (std::size_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(record.data()), 2 * sizeof(float));
    if (!in) throw FormatError("truncated flo payload in " + path);
    flow.u[i] = record[0];
    flow.v[i] = record[1];
  }
  in.peek();
  if (!in.eof()) throw FormatError("trailing bytes after flo payload in " + path);

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(flow.u[i]) || !std::isfinite(flow.v[i])) {
      throw DataError("non-finite flow value in " + path);
    }
  }
  return flow;
}

// Writes the format read_flo reads; round trips are bit-exact.
inline void write_flo(const FlowField& flow, const std::string& path) {
  detail::check_flow(flow);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open flow file for write: " + path);
  const float magic = kFloMagic;
  const std::int32_t width = flow.width;
  const std::int32_t height = flow.height;
  out.write(reinterpret_cast<const char*>(&magic), sizeof(magic));
  out.write(reinterpret_cast<const char*>(&width), sizeof(width));
  out.write(reinterpret_cast<const char*>(&height), sizeof(height));
  const std::size_t n = flow.size();
  for (std::size_t i = 0; i < n; ++i) {
    const float record[2] = {flow.u[i], flow.v[i]};
    out.write(reinterpret_cast<const char*>(record), sizeof(record));
  }
  if (!out) throw FormatError("failed writing flow file: " + path);
}

}  // namespace isinet

#endif  // ISINET_FLO_IO_HPP_
