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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ddurobust/lp.hpp"

using namespace ddurobust;

namespace {

// Checks every documented invariant of an Optimal outcome against p.
void check_optimal_invariants(const LpProblem& p, const LpOptimal& o,
                              double tol = 1e-7) {
  const double scale = 1.0 + std::abs(o.objective);
  // Primal feasibility.
  for (size_t i = 0; i < p.rows.size(); ++i) {
    const double lhs = p.rows[i].a.dot(o.x);
    switch (p.rows[i].rel) {
      case Relation::LessEq: CHECK(lhs <= p.rows[i].rhs + tol * scale); break;
      case Relation::GreaterEq: CHECK(lhs >= p.rows[i].rhs - tol * scale); break;
      case Relation::Equal: CHECK(std::abs(lhs - p.rows[i].rhs) <= tol * scale); break;
    }
  }
  for (int j = 0; j < p.n(); ++j) {
    if (p.lower.size() == p.n() && std::isfinite(p.lower[j]))
      CHECK(o.x[j] >= p.lower[j] - tol * scale);
    if (p.upper.size() == p.n() && std::isfinite(p.upper[j]))
      CHECK(o.x[j] <= p.upper[j] + tol * scale);
  }
  // Dual signs.
  const bool maxi = p.sense == Sense::Maximize;
  for (size_t i = 0; i < p.rows.size(); ++i) {
    const double d = o.row_duals[i];
    if (p.rows[i].rel == Relation::LessEq) CHECK((maxi ? d >= -tol : d <= tol));
    if (p.rows[i].rel == Relation::GreaterEq) CHECK((maxi ? d <= tol : d >= -tol));
  }
  for (int j = 0; j < p.n(); ++j) {
    CHECK(o.lower_duals[j] >= -tol);
    CHECK(o.upper_duals[j] >= -tol);
  }
  // Strong duality through the reported multipliers.
  CHECK(std::abs(o.objective - o.dual_objective) <= tol * scale);
  // Stationarity: c = A^T lambda + bound multipliers.
  Vector station = Vector::Zero(p.n());
  for (size_t i = 0; i < p.rows.size(); ++i)
    station += o.row_duals[i] * p.rows[i].a;
  for (int j = 0; j < p.n(); ++j) {
    const double sl = maxi ? -1.0 : 1.0;
    station[j] += sl * (o.lower_duals[j] - o.upper_duals[j]);
  }
  for (int j = 0; j < p.n(); ++j)
    CHECK(std::abs(station[j] - p.objective[j]) <= 1e-6 * scale);
}

void check_infeasible_certificate(const LpProblem& p, const LpInfeasible& c,
                                  double tol = 1e-7) {
  Vector combo = Vector::Zero(p.n());
  double value = 0.0;
  for (size_t i = 0; i < p.rows.size(); ++i) {
    const double w = c.row_mult[i];
    if (p.rows[i].rel == Relation::LessEq) CHECK(w >= -tol);
    if (p.rows[i].rel == Relation::GreaterEq) CHECK(w <= tol);
    combo += w * p.rows[i].a;
    value += w * p.rows[i].rhs;
  }
  for (int j = 0; j < p.n(); ++j) {
    CHECK(c.lower_mult[j] >= -tol);
    CHECK(c.upper_mult[j] >= -tol);
    combo[j] += c.upper_mult[j] - c.lower_mult[j];
    if (c.lower_mult[j] > tol) {
      REQUIRE(std::isfinite(p.lower[j]));
      value -= c.lower_mult[j] * p.lower[j];
    }
    if (c.upper_mult[j] > tol) {
      REQUIRE(std::isfinite(p.upper[j]));
      value += c.upper_mult[j] * p.upper[j];
    }
  }
  const double scale = 1.0 + std::abs(value);
  for (int j = 0; j < p.n(); ++j) CHECK(std::abs(combo[j]) <= tol * scale);
  CHECK(value < -1e-9);
}

void check_unbounded_ray(const LpProblem& p, const LpUnbounded& u,
                         double tol = 1e-7) {
  const Vector& d = u.direction;
  REQUIRE(d.size() == p.n());
  CHECK(d.lpNorm<Eigen::Infinity>() > tol);
  for (const auto& row : p.rows) {
    const double v = row.a.dot(d);
    if (row.rel == Relation::LessEq) CHECK(v <= tol);
    if (row.rel == Relation::GreaterEq) CHECK(v >= -tol);
    if (row.rel == Relation::Equal) CHECK(std::abs(v) <= tol);
  }
  for (int j = 0; j < p.n(); ++j) {
    if (p.lower.size() == p.n() && std::isfinite(p.lower[j])) CHECK(d[j] >= -tol);
    if (p.upper.size() == p.n() && std::isfinite(p.upper[j])) CHECK(d[j] <= tol);
  }
  const double improve = p.objective.dot(d);
  if (p.sense == Sense::Minimize) CHECK(improve < -1e-9);
  else CHECK(improve > 1e-9);
}

}  // namespace

TEST_CASE("one-variable minimum against a greater-equal row") {
  LpProblem p(1);
  p.objective[0] = 1.0;
  p.add_row(make_vector({1.0}), Relation::GreaterEq, 1.0);
  const auto out = solve(p);
  REQUIRE(is_optimal(out));
  const auto& o = get_optimal(out);
  CHECK(o.x[0] == doctest::Approx(1.0));
  CHECK(o.objective == doctest::Approx(1.0));
  CHECK(o.row_duals[0] == doctest::Approx(1.0));
  check_optimal_invariants(p, o);
}

TEST_CASE("crossed one-variable rows yield a verifiable certificate") {
  LpProblem p(1);
  p.objective[0] = 0.0;
  p.add_row(make_vector({1.0}), Relation::LessEq, 0.0);
  p.add_row(make_vector({1.0}), Relation::GreaterEq, 1.0);
  const auto out = solve(p);
  REQUIRE(std::holds_alternative<LpInfeasible>(out));
  check_infeasible_certificate(p, std::get<LpInfeasible>(out));
}

TEST_CASE("slack relaxation of the band recourse at u=(3,8) costs 1.0") {
  // Variables: y1, y2 (recourse) and s1..s6 (per-row relaxations), all >= 0.
  // Row block is the two-sided band  u1 <= y1 + y2 - 2 <= u2  with y in [0,2]^2,
  // instantiated at u = (3, 8).
  LpProblem p(8);
  p.lower = Vector::Zero(8);
  p.upper = Vector::Constant(8, kInf);
  for (int i = 0; i < 6; ++i) p.objective[2 + i] = 1.0;
  auto row = [&](double by1, double by2, int s, double rhs) {
    Vector a = Vector::Zero(8);
    a[0] = by1;
    a[1] = by2;
    a[2 + s] = -1.0;
    p.add_row(std::move(a), Relation::LessEq, rhs);
  };
  row(-1.0, 0.0, 0, 0.0);
  row(1.0, 0.0, 1, 2.0);
  row(0.0, -1.0, 2, 0.0);
  row(0.0, 1.0, 3, 2.0);
  row(-1.0, -1.0, 4, -5.0);   // u1 - (y1+y2-2) <= s5  at u1 = 3
  row(1.0, 1.0, 5, 10.0);     // (y1+y2-2) - u2 <= s6  at u2 = 8
  const auto out = solve(p);
  REQUIRE(is_optimal(out));
  const auto& o = get_optimal(out);
  CHECK(o.objective == doctest::Approx(1.0));
  // The distance is carried by the lower band edge alone; the multiplier
  // vector is unique here and pins the whole dual extraction path.
  const Vector want = make_vector({0.0, -1.0, 0.0, -1.0, -1.0, 0.0});
  for (int i = 0; i < 6; ++i)
    CHECK(o.row_duals[i] == doctest::Approx(want[i]).epsilon(1e-9));
  check_optimal_invariants(p, o);
}

TEST_CASE("unbounded maximization returns a feasible improving ray") {
  LpProblem p(2);
  p.sense = Sense::Maximize;
  p.objective = make_vector({1.0, 1.0});
  p.add_row(make_vector({1.0, -1.0}), Relation::LessEq, 1.0);
  const auto out = solve(p);
  REQUIRE(std::holds_alternative<LpUnbounded>(out));
  check_unbounded_ray(p, std::get<LpUnbounded>(out));
}

TEST_CASE("degenerate pivoting terminates (classic cycling instance)") {
  LpProblem p(4);
  p.lower = Vector::Zero(4);
  p.objective = make_vector({-0.75, 150.0, -0.02, 6.0});
  p.add_row(make_vector({0.25, -60.0, -0.04, 9.0}), Relation::LessEq, 0.0);
  p.add_row(make_vector({0.5, -90.0, -0.02, 3.0}), Relation::LessEq, 0.0);
  p.add_row(make_vector({0.0, 0.0, 1.0, 0.0}), Relation::LessEq, 1.0);
  const auto out = solve(p);
  REQUIRE(is_optimal(out));
  CHECK(get_optimal(out).objective == doctest::Approx(-0.05));
  check_optimal_invariants(p, get_optimal(out));
}

TEST_CASE("equality rows and mixed bounds keep the dual identity") {
  LpProblem p(3);
  p.sense = Sense::Maximize;
  p.objective = make_vector({2.0, -1.0, 0.5});
  p.lower = make_vector({0.0, -2.0, -kInf});
  p.upper = make_vector({4.0, kInf, 3.0});
  p.add_row(make_vector({1.0, 1.0, 1.0}), Relation::Equal, 2.0);
  p.add_row(make_vector({1.0, -1.0, 0.0}), Relation::LessEq, 3.0);
  const auto out = solve(p);
  REQUIRE(is_optimal(out));
  check_optimal_invariants(p, get_optimal(out));
}

TEST_CASE("random LPs: strong duality, certificates, and rays all verify") {
  std::mt19937 rng(20260822u);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_int_distribution<int> nvar(2, 5), nrow(1, 6), pick(0, 2);
  int optimal_seen = 0, infeasible_seen = 0, unbounded_seen = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int n = nvar(rng);
    const int m = nrow(rng);
    LpProblem p(n);
    p.sense = trial % 2 == 0 ? Sense::Minimize : Sense::Maximize;
    for (int j = 0; j < n; ++j) p.objective[j] = coef(rng);
    for (int j = 0; j < n; ++j) {
      switch (pick(rng)) {
        case 0: p.lower[j] = 0.0; break;
        case 1: p.lower[j] = -std::abs(coef(rng)); break;
        default: break;  // free below
      }
      if (pick(rng) != 2) p.upper[j] = p.lower[j] + (std::isfinite(p.lower[j])
                              ? std::abs(coef(rng)) : 2.0 * std::abs(coef(rng)));
    }
    for (int i = 0; i < m; ++i) {
      Vector a(n);
      for (int j = 0; j < n; ++j) a[j] = coef(rng);
      const Relation rel = pick(rng) == 0 ? Relation::LessEq
                         : pick(rng) == 0 ? Relation::GreaterEq
                                          : (trial % 5 == 0 ? Relation::Equal
                                                            : Relation::LessEq);
      p.add_row(std::move(a), rel, coef(rng));
    }
    const auto out = solve(p);
    if (is_optimal(out)) {
      ++optimal_seen;
      check_optimal_invariants(p, get_optimal(out));
    } else if (std::holds_alternative<LpInfeasible>(out)) {
      ++infeasible_seen;
      check_infeasible_certificate(p, std::get<LpInfeasible>(out));
    } else {
      ++unbounded_seen;
      check_unbounded_ray(p, std::get<LpUnbounded>(out));
    }
  }
  // The generator must exercise every outcome for the sweep to mean anything.
  CHECK(optimal_seen > 100);
  CHECK(infeasible_seen > 20);
  CHECK(unbounded_seen > 20);
}
