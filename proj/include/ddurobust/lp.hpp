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

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ddurobust/linalg.hpp"

namespace ddurobust {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Minimize, Maximize };

struct LpRow {
  Vector a;
  Relation rel = Relation::LessEq;
  double rhs = 0.0;
};

/// Dense linear program over variables with optional bounds:
///     opt  objective . x   s.t.   rows,   lower <= x <= upper.
/// Unspecified bounds default to (-inf, +inf).
struct LpProblem {
  Sense sense = Sense::Minimize;
  Vector objective;
  std::vector<LpRow> rows;
  Vector lower;  // empty => all -inf
  Vector upper;  // empty => all +inf

  explicit LpProblem(int n = 0)
      : objective(Vector::Zero(n)),
        lower(Vector::Constant(n, -kInf)),
        upper(Vector::Constant(n, kInf)) {}

  int n() const { return static_cast<int>(objective.size()); }
  void add_row(Vector a, Relation rel, double rhs) {
    rows.push_back(LpRow{std::move(a), rel, rhs});
  }
};

/// Optimal primal/dual pair.  Multiplier conventions (verified by tests):
///   Minimize: obj = b.row_duals + lower.lower_duals - upper.upper_duals,
///     row_duals <= 0 on LessEq rows, >= 0 on GreaterEq rows, free on Equal.
///   Maximize: obj = b.row_duals - lower.lower_duals + upper.upper_duals,
///     row_duals >= 0 on LessEq rows, <= 0 on GreaterEq rows, free on Equal.
/// lower_duals/upper_duals are always reported >= 0.
struct LpOptimal {
  Vector x;
  double objective = 0.0;
  Vector row_duals;
  Vector lower_duals;
  Vector upper_duals;
  double dual_objective = 0.0;
};

/// Infeasibility certificate:
///   row_mult >= 0 on LessEq rows, <= 0 on GreaterEq rows, free on Equal,
///   lower_mult, upper_mult >= 0, and
///     sum_i row_mult_i a_i - lower_mult + upper_mult = 0,
///     sum_i row_mult_i rhs_i - lower_mult.l + upper_mult.u < 0.
struct LpInfeasible {
  Vector row_mult;
  Vector lower_mult;
  Vector upper_mult;
  double certificate_value = 0.0;  // the strictly negative combination
};

/// Feasible improving ray: x + t*direction stays feasible for all t >= 0 and
/// the objective improves without bound along it.
struct LpUnbounded {
  Vector direction;
};

using LpOutcome = std::variant<LpOptimal, LpInfeasible, LpUnbounded>;

struct SimplexError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic two-phase dense simplex (Bland's rule in both phases, ties
/// broken by lowest index).  Intended for desk-scale instances; trades speed
/// for reproducibility and exact multiplier bookkeeping.
LpOutcome solve(const LpProblem& p);

inline bool is_optimal(const LpOutcome& o) {
  return std::holds_alternative<LpOptimal>(o);
}
inline const LpOptimal& get_optimal(const LpOutcome& o) {
  if (!is_optimal(o)) throw SimplexError("LP outcome is not optimal");
  return std::get<LpOptimal>(o);
}

}  // namespace ddurobust
