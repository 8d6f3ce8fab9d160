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

#include "ddurobust/model.hpp"

#include <algorithm>
#include <cmath>

namespace ddurobust {

Vector SeparableSpec::map(const Vector& xi, const Vector& x) const {
  Vector u = E * xi + h;
  if (F.size() != 0) u += F * x;
  if (!W.empty())
    for (size_t i = 0; i < W.size(); ++i)
      if (W[i].size() != 0) u[static_cast<int>(i)] += xi.dot(W[i] * x);
  return u;
}

Matrix SeparableSpec::effective_E(const Vector& x) const {
  Matrix Ex = E;
  if (!W.empty())
    for (size_t i = 0; i < W.size(); ++i)
      if (W[i].size() != 0)
        Ex.row(static_cast<int>(i)) += (W[i] * x).transpose();
  return Ex;
}

void TsroProblem::check_dimensions() const {
  const int n_x = nx(), n_y = ny(), n_u = nu(), mm = m();
  if (A.rows() != mm || B.rows() != mm || C.rows() != mm)
    throw ModelError("row-count mismatch between A, B, C, b");
  if (c.size() != n_y) throw ModelError("second-stage cost length mismatch");
  if (X.dim() != n_x) throw ModelError("first-stage set dimension mismatch");
  for (const auto& piece : f.pieces)
    if (piece.grad.size() != n_x)
      throw ModelError("first-stage cost gradient dimension mismatch");
  if (std::holds_alternative<FixedSpec>(uncertainty)) {
    if (std::get<FixedSpec>(uncertainty).U0.dim() != n_u)
      throw ModelError("fixed uncertainty set dimension mismatch");
  } else if (std::holds_alternative<AffineRhsSpec>(uncertainty)) {
    const auto& s = std::get<AffineRhsSpec>(uncertainty);
    if (s.G.cols() != n_u || s.g0.size() != s.G.rows() ||
        s.H.rows() != s.G.rows() || s.H.cols() != n_x)
      throw ModelError("rhs-dependent uncertainty dimension mismatch");
  } else {
    const auto& s = std::get<SeparableSpec>(uncertainty);
    if (s.E.rows() != n_u || s.Xi.dim() != s.E.cols() || s.h.size() != n_u)
      throw ModelError("separable uncertainty dimension mismatch");
    if (s.F.size() != 0 && (s.F.rows() != n_u || s.F.cols() != n_x))
      throw ModelError("separable F dimension mismatch");
    if (!s.W.empty()) {
      if (static_cast<int>(s.W.size()) != n_u)
        throw ModelError("one bilinear block per uncertain output required");
      for (const auto& w : s.W)
        if (w.size() != 0 && (w.rows() != s.E.cols() || w.cols() != n_x))
          throw ModelError("bilinear block dimension mismatch");
    }
  }
}

Polyhedron instantiate_ddus(const TsroProblem& p, const Vector& x) {
  if (x.size() != p.nx()) throw ModelError("first-stage point dimension");
  if (std::holds_alternative<FixedSpec>(p.uncertainty))
    return std::get<FixedSpec>(p.uncertainty).U0;
  if (std::holds_alternative<AffineRhsSpec>(p.uncertainty)) {
    const auto& s = std::get<AffineRhsSpec>(p.uncertainty);
    Polyhedron u(p.nu());
    const Vector rhs = s.g0 + s.H * x;
    u.add_rows(s.G, Relation::LessEq, rhs);
    return u;
  }
  const auto& s = std::get<SeparableSpec>(p.uncertainty);
  const int nxi = s.Xi.dim();
  const int n_u = p.nu();
  Polyhedron lift(nxi + n_u);
  for (const auto& r : s.Xi.rows()) {
    Vector a = Vector::Zero(nxi + n_u);
    a.head(nxi) = r.a;
    lift.add_row(std::move(a), r.rel, r.rhs);
  }
  const Matrix Ex = s.effective_E(x);
  Vector base = s.h;
  if (s.F.size() != 0) base += s.F * x;
  for (int i = 0; i < n_u; ++i) {
    Vector a = Vector::Zero(nxi + n_u);
    a.head(nxi) = -Ex.row(i).transpose();
    a[nxi + i] = 1.0;
    lift.add_row(std::move(a), Relation::Equal, base[i]);
  }
  std::vector<int> keep(static_cast<size_t>(n_u));
  for (int i = 0; i < n_u; ++i) keep[static_cast<size_t>(i)] = nxi + i;
  return project(lift, keep);
}

Polyhedron xi_support(const TsroProblem& p) {
  const int mm = p.m();
  Polyhedron xi(mm);
  for (int j = 0; j < p.ny(); ++j)
    xi.add_row(p.B.col(j), Relation::LessEq, 0.0);
  for (int i = 0; i < mm; ++i) {
    Vector a = Vector::Zero(mm);
    a[i] = 1.0;
    xi.add_row(a, Relation::LessEq, 0.0);
    xi.add_row(-a, Relation::LessEq, 1.0);
  }
  return xi;
}

Polyhedron pi_support(const TsroProblem& p) {
  const int mm = p.m();
  Polyhedron pi(mm);
  for (int j = 0; j < p.ny(); ++j)
    pi.add_row(p.B.col(j), Relation::LessEq, p.c[j]);
  for (int i = 0; i < mm; ++i) {
    Vector a = Vector::Zero(mm);
    a[i] = 1.0;
    pi.add_row(a, Relation::LessEq, 0.0);
  }
  return pi;
}

SeparableSurrogate surrogate_fea(const TsroProblem& p) {
  return SeparableSurrogate{xi_support(p), false};
}

SeparableSurrogate surrogate_opt(const TsroProblem& p) {
  return SeparableSurrogate{pi_support(p), true};
}

Vector coupling_argmax(const TsroProblem& p, const Vector& xi, const Vector& x) {
  if (xi.size() != p.m()) throw ModelError("multiplier dimension mismatch");
  const Polyhedron U = instantiate_ddus(p, x);
  const Vector d = -(p.C.transpose() * xi);
  LpProblem lp(p.nu());
  lp.sense = Sense::Maximize;
  lp.objective = d;
  for (const auto& r : U.rows()) lp.add_row(r.a, r.rel, r.rhs);
  auto out = solve(lp);
  if (std::holds_alternative<LpInfeasible>(out))
    throw ModelError("coupling argmax over an empty uncertainty set");
  if (std::holds_alternative<LpUnbounded>(out))
    throw ModelError("coupling argmax over an unbounded uncertainty set");
  double best = get_optimal(out).objective;
  // Lexicographic refinement pins a unique representative of the optimal face.
  constexpr double kLexTol = 1e-9;
  LpProblem lex(p.nu());
  lex.sense = Sense::Minimize;
  for (const auto& r : U.rows()) lex.add_row(r.a, r.rel, r.rhs);
  lex.add_row(d, Relation::GreaterEq, best - kLexTol);
  Vector pin = get_optimal(out).x;
  for (int i = 0; i < p.nu(); ++i) {
    lex.objective = Vector::Zero(p.nu());
    lex.objective[i] = 1.0;
    out = solve(lex);
    if (!is_optimal(out))
      throw ModelError("lexicographic refinement failed unexpectedly");
    pin = get_optimal(out).x;
    Vector a = Vector::Zero(p.nu());
    a[i] = 1.0;
    lex.add_row(std::move(a), Relation::LessEq, pin[i] + kLexTol);
  }
  return pin;
}

double slack_value(const TsroProblem& p, const Vector& x, const Vector& u,
                   Vector* dual_xi) {
  const int n_y = p.ny(), mm = p.m();
  LpProblem lp(n_y + mm);
  lp.lower = Vector::Zero(n_y + mm);
  lp.upper = Vector::Constant(n_y + mm, kInf);
  for (int i = 0; i < mm; ++i) lp.objective[n_y + i] = 1.0;
  const Vector rhs = p.b - p.A * x - p.C * u;
  for (int i = 0; i < mm; ++i) {
    Vector a = Vector::Zero(n_y + mm);
    a.head(n_y) = p.B.row(i).transpose();
    a[n_y + i] = -1.0;
    lp.add_row(std::move(a), Relation::LessEq, rhs[i]);
  }
  const auto out = solve(lp);
  const auto& o = get_optimal(out);  // always feasible (s large) and bounded
  if (dual_xi) *dual_xi = o.row_duals;
  return std::max(0.0, o.objective);
}

double recourse_value(const TsroProblem& p, const Vector& x, const Vector& u,
                      Vector* dual_pi, Vector* y_out) {
  const int n_y = p.ny();
  LpProblem lp(n_y);
  lp.lower = Vector::Zero(n_y);
  lp.upper = Vector::Constant(n_y, kInf);
  lp.objective = p.c;
  const Vector rhs = p.b - p.A * x - p.C * u;
  for (int i = 0; i < p.m(); ++i)
    lp.add_row(p.B.row(i).transpose(), Relation::LessEq, rhs[i]);
  const auto out = solve(lp);
  if (std::holds_alternative<LpInfeasible>(out))
    throw ModelError("recourse infeasible at the queried scenario");
  if (std::holds_alternative<LpUnbounded>(out))
    throw ModelError("recourse cost unbounded below: bounded-recourse "
                     "assumption violated");
  const auto& o = get_optimal(out);
  if (dual_pi) *dual_pi = o.row_duals;
  if (y_out) *y_out = o.x;
  return o.objective;
}

namespace {

void check_bounded(const Polyhedron& set, const std::string& label,
                   ValidationReport& rep) {
  try {
    (void)vertices(set);
  } catch (const UnboundedSetError&) {
    rep.issues.push_back({label + " is unbounded", true});
  } catch (const BudgetError&) {
    rep.issues.push_back({label + " too large to certify boundedness", false});
  }
}

}  // namespace

ValidationReport validate(const TsroProblem& p) {
  ValidationReport rep;
  try {
    p.check_dimensions();
  } catch (const ModelError& e) {
    rep.issues.push_back({e.what(), true});
    return rep;
  }

  std::vector<Vector> x_samples;
  try {
    const auto xv = vertices(p.X);
    for (size_t i = 0; i < xv.points.size() && i < 4; ++i)
      x_samples.push_back(xv.points[i]);
  } catch (const GeometryError&) {
    rep.issues.push_back({"first-stage set unbounded or too large; sampling "
                          "a witness instead", false});
  }
  if (x_samples.empty()) {
    const auto w = is_empty(p.X);
    if (w.empty()) {
      rep.issues.push_back({"first-stage set is empty", true});
      return rep;
    }
    x_samples.push_back(*w.witness);
  }

  if (std::holds_alternative<FixedSpec>(p.uncertainty)) {
    check_bounded(std::get<FixedSpec>(p.uncertainty).U0, "uncertainty set", rep);
  } else if (std::holds_alternative<SeparableSpec>(p.uncertainty)) {
    check_bounded(std::get<SeparableSpec>(p.uncertainty).Xi,
                  "separable base set", rep);
  }
  for (const auto& xs : x_samples) {
    Polyhedron U = instantiate_ddus(p, xs);
    if (is_empty(U).empty()) {
      rep.issues.push_back(
          {"uncertainty set empty at a sampled first stage (its scenarios "
           "are vacuously covered there)", false});
      continue;
    }
    if (!std::holds_alternative<FixedSpec>(p.uncertainty))
      check_bounded(U, "instantiated uncertainty set", rep);
    // Recourse boundedness at a few scenarios.
    try {
      const auto uv = vertices(U);
      for (size_t i = 0; i < uv.points.size() && i < 4; ++i) {
        Polyhedron Y(p.ny());
        const Vector rhs = p.b - p.A * xs - p.C * uv.points[i];
        Y.add_rows(p.B, Relation::LessEq, rhs);
        for (int j = 0; j < p.ny(); ++j) {
          Vector a = Vector::Zero(p.ny());
          a[j] = -1.0;
          Y.add_row(std::move(a), Relation::LessEq, 0.0);
        }
        if (is_empty(Y).empty()) continue;
        for (int j = 0; j < p.ny(); ++j) {
          Vector dir = Vector::Zero(p.ny());
          dir[j] = 1.0;
          try {
            (void)support(Y, dir);
          } catch (const UnboundedSetError&) {
            rep.issues.push_back({"recourse polytope unbounded at a sampled "
                                  "scenario", true});
            return rep;
          }
        }
      }
    } catch (const GeometryError&) {
      rep.issues.push_back({"could not enumerate sampled scenarios", false});
    }
  }
  return rep;
}

TsroProblem freeze_uncertainty(const TsroProblem& p, const Vector& x0) {
  TsroProblem q = p;
  q.name = p.name + "-frozen";
  q.uncertainty = FixedSpec{instantiate_ddus(p, x0)};
  return q;
}

TsroProblem lift_to_separable(const TsroProblem& p) {
  if (!std::holds_alternative<FixedSpec>(p.uncertainty))
    throw ModelError("separable lift requires a fixed uncertainty spec");
  TsroProblem q = p;
  SeparableSpec s;
  s.Xi = std::get<FixedSpec>(p.uncertainty).U0;
  s.E = Matrix::Identity(p.nu(), p.nu());
  s.F = Matrix::Zero(p.nu(), p.nx());
  s.h = Vector::Zero(p.nu());
  q.uncertainty = std::move(s);
  return q;
}

TsroProblem lift_to_affine_rhs(const TsroProblem& p) {
  if (!std::holds_alternative<FixedSpec>(p.uncertainty))
    throw ModelError("constant-rhs lift requires a fixed uncertainty spec");
  const auto& U0 = std::get<FixedSpec>(p.uncertainty).U0;
  TsroProblem q = p;
  AffineRhsSpec s;
  const auto rows = U0.canonical_rows();
  s.G = Matrix::Zero(static_cast<int>(rows.size()), p.nu());
  s.g0 = Vector::Zero(static_cast<int>(rows.size()));
  s.H = Matrix::Zero(static_cast<int>(rows.size()), p.nx());
  for (size_t i = 0; i < rows.size(); ++i) {
    s.G.row(static_cast<int>(i)) = rows[i].a.transpose();
    s.g0[static_cast<int>(i)] = rows[i].rhs;
  }
  q.uncertainty = std::move(s);
  return q;
}

}  // namespace ddurobust

