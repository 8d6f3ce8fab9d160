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
#include <string>
#include <variant>
#include <vector>

#include "ddurobust/geometry.hpp"
#include "ddurobust/linalg.hpp"

namespace ddurobust {

/// Convex piecewise-linear first-stage cost  f(x) = max_i (grad_i.x + offset_i).
struct PiecewiseLinearConvexCost {
  struct Piece {
    Vector grad;
    double offset = 0.0;
  };
  std::vector<Piece> pieces;

  double value(const Vector& x) const {
    double v = pieces.empty() ? 0.0 : -kInf;
    for (const auto& p : pieces) v = std::max(v, p.grad.dot(x) + p.offset);
    return v;
  }
  static PiecewiseLinearConvexCost zero() { return {}; }
};

/// Uncertainty set that ignores the first stage: U(x) = U0.
struct FixedSpec {
  Polyhedron U0;
};

/// Right-hand-side dependence: U(x) = { u : G u <= g0 + H x }.
struct AffineRhsSpec {
  Matrix G;
  Vector g0;
  Matrix H;
};

/// Separable form: U(x) = { coupling(xi, x) : xi in Xi } with
///   coupling(xi, x)_i = (E xi)_i + (F x)_i + h_i + xi' W_i x.
/// All W_i empty or zero keeps the map affine in (xi, x); a nonzero W_i makes
/// component i bilinear (still affine in xi at fixed x).
struct SeparableSpec {
  Polyhedron Xi;
  Matrix E;
  Matrix F;
  Vector h;
  std::vector<Matrix> W;  // empty, or one n_xi x n_x matrix per output

  bool affine() const {
    for (const auto& w : W)
      if (w.size() != 0 && w.lpNorm<Eigen::Infinity>() > 0.0) return false;
    return true;
  }
  /// u = coupling(xi, x).
  Vector map(const Vector& xi, const Vector& x) const;
  /// Matrix E_x with coupling(xi, x) = E_x xi + F x + h at fixed x.
  Matrix effective_E(const Vector& x) const;
};

using UncertaintySpec = std::variant<FixedSpec, AffineRhsSpec, SeparableSpec>;

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two-stage robust problem
///   min f(x) + max_{u in U(x)} min { c.y : A x + B y + C u <= b, y >= 0 }
/// over x in X, restricted to x whose recourse stays feasible for all of U(x).
struct TsroProblem {
  std::string name;
  Polyhedron X;
  PiecewiseLinearConvexCost f;
  Matrix A, B, C;
  Vector b, c;
  UncertaintySpec uncertainty;

  int nx() const { return static_cast<int>(A.cols()); }
  int ny() const { return static_cast<int>(B.cols()); }
  int nu() const { return static_cast<int>(C.cols()); }
  int m() const { return static_cast<int>(b.size()); }

  /// Throws ModelError on any dimensional inconsistency.
  void check_dimensions() const;
};

struct ValidationIssue {
  std::string what;
  bool fatal = false;
};
struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const {
    for (const auto& i : issues)
      if (i.fatal) return false;
    return true;
  }
};

/// Structural checks behind the standing assumptions: bounded uncertainty,
/// bounded recourse at sampled (x, u), consistent dimensions.
ValidationReport validate(const TsroProblem& p);

/// The uncertainty polytope at a fixed first stage.  Fixed: U0.  AffineRhs:
/// {u : G u <= g0 + H x}.  Separable: exact projection of the graph
/// {(xi, u) : xi in Xi, u = coupling(xi, x)} onto u.
Polyhedron instantiate_ddus(const TsroProblem& p, const Vector& x);

/// Multiplier support set for infeasibility detection:
///   { xi : B' xi <= 0, -1 <= xi <= 0 }.
Polyhedron xi_support(const TsroProblem& p);

/// Multiplier support set for second-stage cost:
///   { pi : B' pi <= c, pi <= 0 }  (pointed, possibly unbounded).
Polyhedron pi_support(const TsroProblem& p);

/// Deterministic multiplier-to-scenario map: the lexicographically smallest
/// maximizer of  (-C' xi).u  over U(x).  Throws ModelError when U(x) is
/// empty or unbounded.
Vector coupling_argmax(const TsroProblem& p, const Vector& xi, const Vector& x);

/// Separable views of a problem induced by its multiplier supports: the
/// support polytope plus the argmax coupling above.  Evaluating the coupling
/// needs the original problem; these are thin descriptors.
struct SeparableSurrogate {
  Polyhedron support;  // Xi or Pi
  bool optimality = false;
};
SeparableSurrogate surrogate_fea(const TsroProblem& p);
SeparableSurrogate surrogate_opt(const TsroProblem& p);

/// Scenario feasibility distance (0 when recourse is feasible):
///   R(x, u) = min { 1.s : A x + B y + C u <= b + s, y >= 0, s >= 0 }.
/// Optionally exposes the optimal row multipliers (a point of xi_support).
double slack_value(const TsroProblem& p, const Vector& x, const Vector& u,
                   Vector* dual_xi = nullptr);

/// Second-stage cost V(x, u) = min { c.y : feasible }, plus multipliers in
/// pi_support.  Throws ModelError if the recourse is infeasible.
double recourse_value(const TsroProblem& p, const Vector& x, const Vector& u,
                      Vector* dual_pi = nullptr, Vector* y_out = nullptr);

/// Replaces the uncertainty spec by the fixed polytope U(x0): the
/// decision-independent snapshot used for contrast experiments.
TsroProblem freeze_uncertainty(const TsroProblem& p, const Vector& x0);

/// Identity-coupled separable view of a Fixed-spec problem.
TsroProblem lift_to_separable(const TsroProblem& p);

/// Constant-rhs view of a Fixed-spec problem (H = 0).
TsroProblem lift_to_affine_rhs(const TsroProblem& p);

}  // namespace ddurobust
