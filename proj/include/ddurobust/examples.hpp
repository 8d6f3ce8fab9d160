// Copyright 2026 The ddurobust Authors
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

#pragma once

#include "ddurobust/model.hpp"

namespace ddurobust {

/// Bundled desk-scale reproduction cases, addressed by their historical ids
/// (8 through 13).  All share a two-sided band recourse
///     u1 <= y1 + y2 - 2 <= u2,   y in [0, 2]^2,
/// and differ in first-stage dimension, uncertainty spec, and costs:
///   8  - 2-D first stage on [0,1]^2, rhs-dependent 6-row uncertainty set,
///        second-stage cost (1, 0).
///   9  - case 8 with the first uncertainty row relaxed to  u1 <= x1 + x2,
///        which makes every reachable scenario dispatchable.
///   10 - separable spec u = xi + x over a hexagonal base set, X = [-3,3]^2,
///        no costs (pure feasibility geometry).
///   11 - 1-D first stage on [0.8, 2.2], 11-row rhs-dependent set, no costs;
///        its robust-feasible region is a union of two intervals.
///   12 - case 11 plus first-stage cost |x - 1.5|.
///   13 - case 12 with the band made first-stage-adaptive (rows 5 and 6 gain
///        a -0.5 x term), shifting the feasible region boundary to 4/3.
TsroProblem bundled_case(int id);

}  // namespace ddurobust
