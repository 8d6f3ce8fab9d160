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

#include "ddurobust/regions.hpp"

#include <cmath>
#include <random>
#include <string>

namespace ddurobust {

Polyhedron RegionGraph::slice_u(const Vector& x,
                                std::optional<double> alpha) const {
  if (alpha.has_value() != has_alpha)
    throw RegionError(has_alpha ? "slice_u: graph carries a budget coordinate"
                                : "slice_u: graph has no budget coordinate");
  if (x.size() != nx) throw RegionError("slice_u: wrong first-stage size");
  const int off = nx + (has_alpha ? 1 : 0);
  Polyhedron out(nu);
  for (const auto& row : carrier.canonical_rows()) {
    Vector au = row.a.segment(off, nu);
    double rhs = row.rhs - row.a.head(nx).dot(x);
    if (has_alpha) rhs -= row.a[nx] * (*alpha);
    if (au.lpNorm<Eigen::Infinity>() <= 1e-12) {
      if (rhs < -1e-9) out.add_row(Vector::Zero(nu), Relation::LessEq, rhs);
      continue;  // trivially true at this (x, alpha)
    }
    out.add_row(std::move(au), Relation::LessEq, rhs);
  }
  return out;
}

RegionGraph dispatch_graph(const TsroProblem& p, bool with_alpha) {
  p.check_dimensions();
  const int nx = p.nx(), ny = p.ny(), nu = p.nu(), m = p.m();
  const int na = with_alpha ? 1 : 0;
  const int dim = nx + na + nu + ny;
  Polyhedron lifted(dim);
  for (int i = 0; i < m; ++i) {
    Vector row = Vector::Zero(dim);
    row.head(nx) = p.A.row(i).transpose();
    row.segment(nx + na, nu) = p.C.row(i).transpose();
    row.tail(ny) = p.B.row(i).transpose();
    lifted.add_row(std::move(row), Relation::LessEq, p.b[i]);
  }
  for (int j = 0; j < ny; ++j) {
    Vector row = Vector::Zero(dim);
    row[nx + na + nu + j] = -1.0;
    lifted.add_row(std::move(row), Relation::LessEq, 0.0);
  }
  if (with_alpha) {
    Vector row = Vector::Zero(dim);
    row[nx] = -1.0;
    row.tail(ny) = p.c;
    lifted.add_row(std::move(row), Relation::LessEq, 0.0);
  }
  std::vector<int> keep(nx + na + nu);
  for (size_t k = 0; k < keep.size(); ++k) keep[k] = static_cast<int>(k);
  RegionGraph g;
  g.carrier = project(lifted, keep);
  g.nx = nx;
  g.has_alpha = with_alpha;
  g.nu = nu;
  return g;
}

MatchResult matching_check(const TsroProblem& p, const Vector& x,
                           std::optional<double> alpha,
                           const RegionGraph* graph) {
  const Polyhedron ddus = instantiate_ddus(p, x);
  MatchResult r;
  if (is_empty(ddus).empty()) {
    r.matched = true;
    r.vacuous = true;
    return r;
  }
  RegionGraph local;
  if (graph == nullptr) {
    local = dispatch_graph(p, alpha.has_value());
    graph = &local;
  }
  const Polyhedron slice = graph->slice_u(x, alpha);
  const ContainsResult c = contains(slice, ddus, kOracleTol);
  r.matched = c.contained;
  if (!c.contained) r.witness = c.violator;
  return r;
}

MatchResult aux_region_check(const TsroProblem& p, const Vector& x,
                             std::optional<double> alpha,
                             const RegionGraph* graph) {
  MatchResult r;
  if (is_empty(instantiate_ddus(p, x)).empty()) {
    r.matched = true;
    r.vacuous = true;
    return r;
  }
  RegionGraph local;
  if (graph == nullptr) {
    local = dispatch_graph(p, alpha.has_value());
    graph = &local;
  }
  const Polyhedron slice = graph->slice_u(x, alpha);

  const auto* sep = std::get_if<SeparableSpec>(&p.uncertainty);
  const Polyhedron& support = sep ? sep->Xi : xi_support(p);
  const VertexSet vs = vertices(support);
  if (vs.points.empty()) throw RegionError("empty multiplier support");
  r.matched = true;
  for (const Vector& xi : vs.points) {
    const Vector u = sep ? sep->map(xi, x) : coupling_argmax(p, xi, x);
    if (!slice.member(u, kOracleTol)) {
      r.matched = false;
      r.witness = xi;
      return r;
    }
  }
  return r;
}

namespace {

bool rfr_member(const TsroProblem& p, double t) {
  return feasibility_oracle(p, make_vector({t})).violation <= kOracleTol;
}

// Shrinks [inside, outside] until the bracket is narrower than tol; returns
// its midpoint (a boundary estimate certified on both sides).
double refine_boundary(const TsroProblem& p, double inside, double outside,
                       double tol) {
  while (std::abs(outside - inside) > tol) {
    const double mid = 0.5 * (inside + outside);
    if (rfr_member(p, mid))
      inside = mid;
    else
      outside = mid;
  }
  return 0.5 * (inside + outside);
}

}  // namespace

IntervalUnion rfr_scan_1d(const TsroProblem& p, double lo, double hi,
                          double coarse_step, double refine_tol) {
  if (p.nx() != 1) throw RegionError("rfr_scan_1d needs a 1-D first stage");
  if (!(hi > lo) || coarse_step <= 0.0 || refine_tol <= 0.0)
    throw RegionError("rfr_scan_1d: bad range or tolerances");
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / coarse_step)));
  std::vector<double> grid(n + 1);
  std::vector<char> in(n + 1);
  for (int k = 0; k <= n; ++k) {
    grid[k] = (k == n) ? hi : lo + k * coarse_step;
    in[k] = rfr_member(p, grid[k]) ? 1 : 0;
  }
  IntervalUnion out;
  int k = 0;
  while (k <= n) {
    if (!in[k]) {
      ++k;
      continue;
    }
    const double start =
        (k == 0) ? lo : refine_boundary(p, grid[k], grid[k - 1], refine_tol);
    while (k < n && in[k + 1]) ++k;
    const double end =
        (k == n) ? hi : refine_boundary(p, grid[k], grid[k + 1], refine_tol);
    out.intervals.emplace_back(start, end);
    ++k;
  }
  return out;
}

ConvexityReport convexity_probe(const TsroProblem& p, int samples,
                                unsigned seed) {
  ConvexityReport rep;
  if (const auto* sep = std::get_if<SeparableSpec>(&p.uncertainty))
    rep.failures_are_defects = sep->affine();
  else
    rep.failures_are_defects = std::holds_alternative<FixedSpec>(p.uncertainty);

  const int nx = p.nx();
  Vector blo(nx), bhi(nx);
  for (int i = 0; i < nx; ++i) {
    Vector d = Vector::Zero(nx);
    d[i] = 1.0;
    bhi[i] = support(p.X, d).value;
    d[i] = -1.0;
    blo[i] = -support(p.X, d).value;
  }

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto member = [&](const Vector& x) {
    return p.X.member(x, 1e-9) &&
           feasibility_oracle(p, x).violation <= kOracleTol;
  };
  const auto draw_member = [&]() -> Vector {
    for (long tries = 0; tries < 2000; ++tries) {
      Vector x(nx);
      for (int i = 0; i < nx; ++i) x[i] = blo[i] + unit(rng) * (bhi[i] - blo[i]);
      if (member(x)) return x;
    }
    throw RegionError("convexity_probe: no feasible samples found in X");
  };

  for (int s = 0; s < samples; ++s) {
    const Vector x1 = draw_member();
    const Vector x2 = draw_member();
    const Vector mid = 0.5 * (x1 + x2);
    ++rep.tested;
    if (!member(mid)) {
      ++rep.failures;
      if (rep.failure_examples.size() < 10)
        rep.failure_examples.push_back({x1, x2, mid});
    }
  }
  return rep;
}

}  // namespace ddurobust
