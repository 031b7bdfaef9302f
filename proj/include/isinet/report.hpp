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

#ifndef ISINET_REPORT_HPP_
#define ISINET_REPORT_HPP_

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isinet/metrics.hpp"
#include "isinet/vocabulary.hpp"

namespace isinet {

namespace detail {

inline std::string format_metric(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", value);
  return buffer;
}

}  // namespace detail

inline nlohmann::ordered_json report_json(const MetricReport& report,
                                          const ClassVocabulary& vocabulary) {
  nlohmann::ordered_json out;
  out["challenge_iou"] = report.challenge_iou;
  out["iou"] = report.iou;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::object();
  for (const auto& [class_id, value] : report.per_class_iou) {
    per_class[vocabulary.name(class_id)] = value;
  }
  out["per_class_iou"] = per_class;
  out["mean_class_iou"] = report.mean_class_iou;
  out["frames_evaluated"] = report.frames_evaluated;
  return out;
}

// Two-row aligned table: challenge IoU, IoU, one column per vocabulary
// class, mean class IoU. Classes absent from the report print "-".
inline std::string report_table(const MetricReport& report,
                                const ClassVocabulary& vocabulary) {
  std::vector<std::string> headers = {"challenge IoU", "IoU"};
  std::vector<std::string> values = {detail::format_metric(report.challenge_iou),
                                     detail::format_metric(report.iou)};
  for (int c = 1; c <= vocabulary.num_classes(); ++c) {
    headers.push_back(vocabulary.name(c));
    const auto it = report.per_class_iou.find(c);
    values.push_back(it == report.per_class_iou.end()
                         ? std::string("-")
                         : detail::format_metric(it->second));
  }
  headers.push_back("mean class IoU");
  values.push_back(detail::format_metric(report.mean_class_iou));

  std::string header_row;
  std::string value_row;
  for (std::size_t i = 0; i < headers.size(); ++i) {
    const std::size_t width = std::max(headers[i].size(), values[i].size());
    if (i > 0) {
      header_row += "  ";
      value_row += "  ";
    }
    header_row += headers[i] + std::string(width - headers[i].size(), ' ');
    value_row += values[i] + std::string(width - values[i].size(), ' ');
  }
  return header_row + "\n" + value_row + "\n";
}

}  // namespace isinet

#endif  // ISINET_REPORT_HPP_
