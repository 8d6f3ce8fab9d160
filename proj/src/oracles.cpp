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

#include "ddurobust/oracles.hpp"

#include <cmath>
#include <sstream>

namespace ddurobust {

FeasibilityVerdict feasibility_oracle(const TsroProblem& p, const Vector& x) {
  FeasibilityVerdict v;
  const Polyhedron U = instantiate_ddus(p, x);
  if (is_empty(U).empty()) {
    v.empty_ddus = true;
    return v;
  }
  const VertexSet vs = vertices(U);
  bool first = true;
  for (const auto& u : vs.points) {  // lexicographic order from enumeration
    Vector xi;
    const double r = slack_value(p, x, u, &xi);
    if (first || r > v.violation + 1e-12) {
      v.violation = r;
      v.worst_u = u;
      v.dual_xi = xi;
      first = false;
    }
  }
  return v;
}

OptimalityVerdict optimality_oracle(const TsroProblem& p, const Vector& x) {
  OptimalityVerdict v;
  const Polyhedron U = instantiate_ddus(p, x);
  if (is_empty(U).empty()) {
    v.empty_ddus = true;
    return v;
  }
  const VertexSet vs = vertices(U);
  bool first = true;
  for (const auto& u : vs.points) {
    Vector pi, y;
    const double val = recourse_value(p, x, u, &pi, &y);
    if (first || val > v.value + 1e-12) {
      v.value = val;
      v.worst_u = u;
      v.dual_pi = pi;
      v.inner_y = y;
      first = false;
    }
  }
  return v;
}

SurrogateVerdict surrogate_verdict(const TsroProblem& p, const Vector& x,
                                   bool with_value) {
  SurrogateVerdict out;
  if (is_empty(instantiate_ddus(p, x)).empty()) {
    out.empty_ddus = true;
    out.feasible = true;
    return out;
  }
  const Polyhedron Xi = xi_support(p);
  const VertexSet xv = vertices(Xi);
  double worst = 0.0;
  for (const auto& xi : xv.points) {
    const Vector u = coupling_argmax(p, xi, x);
    worst = std::max(worst, slack_value(p, x, u));
  }
  out.violation = worst;
  out.feasible = worst <= kOracleTol;
  if (out.feasible && with_value) {
    const Polyhedron Pi = pi_support(p);
    const VertexSet pv = basic_points(Pi);
    if (pv.points.empty())
      throw ModelError("cost multiplier support has no basic point");
    double best = -kInf;
    for (const auto& pi : pv.points) {
      const Vector u = coupling_argmax(p, pi, x);
      best = std::max(best, recourse_value(p, x, u));
    }
    out.value = best;
  }
  return out;
}

CrosscheckReport crosscheck_equivalence(const TsroProblem& p,
                                        const std::vector<Vector>& xs,
                                        double tol, bool compare_values) {
  CrosscheckReport rep;
  for (const auto& x : xs) {
    ++rep.checked;
    const FeasibilityVerdict direct = feasibility_oracle(p, x);
    const SurrogateVerdict surr = surrogate_verdict(
        p, x, compare_values && !direct.empty_ddus);
    const bool direct_ok = direct.empty_ddus || direct.violation <= kOracleTol;
    if (direct_ok) ++rep.members;
    if (direct_ok != surr.feasible) {
      std::ostringstream os;
      os << "membership disagrees: scenario side "
         << (direct_ok ? "feasible" : "violated") << " (violation "
         << direct.violation << "), multiplier side "
         << (surr.feasible ? "feasible" : "violated") << " (violation "
         << surr.violation << ")";
      rep.mismatches.push_back({x, os.str()});
      continue;
    }
    if (direct_ok && !direct.empty_ddus && compare_values) {
      const OptimalityVerdict sv = optimality_oracle(p, x);
      if (!surr.value.has_value()) {
        rep.mismatches.push_back({x, "multiplier side produced no value"});
        continue;
      }
      ++rep.value_compared;
      if (std::abs(sv.value - *surr.value) > tol) {
        std::ostringstream os;
        os << "worst-case cost disagrees: scenario side " << sv.value
           << ", multiplier side " << *surr.value;
        rep.mismatches.push_back({x, os.str()});
      }
    }
  }
  return rep;
}

}  // namespace ddurobust
