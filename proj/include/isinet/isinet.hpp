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

#ifndef ISINET_ISINET_HPP_
#define ISINET_ISINET_HPP_

#include "isinet/ablation.hpp"
#include "isinet/detections.hpp"
#include "isinet/detections_io.hpp"
#include "isinet/errors.hpp"
#include "isinet/flo_io.hpp"
#include "isinet/flow.hpp"
#include "isinet/label_grid.hpp"
#include "isinet/label_map_io.hpp"
#include "isinet/mask.hpp"
#include "isinet/metrics.hpp"
#include "isinet/report.hpp"
#include "isinet/synth.hpp"
#include "isinet/temporal.hpp"
#include "isinet/vocabulary.hpp"

#endif  // ISINET_ISINET_HPP_
