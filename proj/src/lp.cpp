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

#include "ddurobust/lp.hpp"

#include <algorithm>
#include <cmath>

namespace ddurobust {
namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr long kIterBudget = 200000;

// One row of the expanded system.  Original rows come first (GreaterEq rows
// are flipped to LessEq, recorded in `flipped`); finite bounds that are not
// the natural x >= 0 become explicit rows so that every multiplier has a
// definite home.
struct ExpRow {
  Vector a;           // over the original variables
  bool is_eq = false;
  double rhs = 0.0;
  int orig = -1;      // index into p.rows, or -1 for a bound row
  bool flipped = false;
  int lower_of = -1;  // bound row  -x_j <= -l_j
  int upper_of = -1;  // bound row   x_j <=  u_j
};

struct Tableau {
  int m = 0;                 // active std rows
  int ncols = 0;
  Matrix T;                  // m x ncols, current B^-1 A
  Vector tb;                 // m, current B^-1 b  (>= 0)
  std::vector<int> basis;    // m, column index basic in each row
  std::vector<bool> banned;  // columns excluded from entering
  std::vector<bool> active;  // rows still participating
};

// Reduced costs r = c - c_B^T T for the given cost vector.
Vector reduced_costs(const Tableau& t, const Vector& cost) {
  Vector cb(t.m);
  for (int i = 0; i < t.m; ++i) cb[i] = t.active[i] ? cost[t.basis[i]] : 0.0;
  return cost - t.T.transpose() * cb;
}

void pivot(Tableau& t, int row, int col) {
  const double piv = t.T(row, col);
  t.T.row(row) /= piv;
  t.tb[row] /= piv;
  for (int k = 0; k < t.m; ++k) {
    if (k == row) continue;
    const double f = t.T(k, col);
    if (std::abs(f) > 0.0) {
      t.T.row(k) -= f * t.T.row(row);
      t.tb[k] -= f * t.tb[row];
    }
  }
  t.basis[row] = col;
}

enum class SimplexEnd { Optimal, Unbounded };

// Bland's rule: entering = lowest column index with negative reduced cost;
// leaving = lowest basic-variable index among minimum-ratio rows.
SimplexEnd run_simplex(Tableau& t, const Vector& cost, int* unbounded_col) {
  for (long iter = 0; iter < kIterBudget; ++iter) {
    const Vector r = reduced_costs(t, cost);
    int enter = -1;
    for (int j = 0; j < t.ncols; ++j) {
      if (t.banned[j]) continue;
      if (r[j] < -kPivotTol) { enter = j; break; }
    }
    if (enter < 0) return SimplexEnd::Optimal;

    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < t.m; ++i) {
      if (!t.active[i]) continue;
      const double tij = t.T(i, enter);
      if (tij > kPivotTol) {
        const double ratio = t.tb[i] / tij;
        if (leave < 0 || ratio < best_ratio - kPivotTol ||
            (std::abs(ratio - best_ratio) <= kPivotTol &&
             t.basis[i] < t.basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      if (unbounded_col) *unbounded_col = enter;
      return SimplexEnd::Unbounded;
    }
    pivot(t, leave, enter);
  }
  throw SimplexError("simplex iteration budget exceeded");
}

}  // namespace

LpOutcome solve(const LpProblem& p) {
  const int n = p.n();
  for (const auto& row : p.rows)
    if (row.a.size() != n) throw SimplexError("LP row dimension mismatch");
  Vector lo = p.lower.size() == n ? p.lower : Vector::Constant(n, -kInf);
  Vector hi = p.upper.size() == n ? p.upper : Vector::Constant(n, kInf);
  for (int j = 0; j < n; ++j)
    if (lo[j] > hi[j] + 1e-12) {
      // Crossed bounds: trivial certificate  (x_j <= u_j) + (-x_j <= -l_j).
      LpInfeasible inf;
      inf.row_mult = Vector::Zero(static_cast<int>(p.rows.size()));
      inf.lower_mult = Vector::Zero(n);
      inf.upper_mult = Vector::Zero(n);
      inf.lower_mult[j] = 1.0;
      inf.upper_mult[j] = 1.0;
      inf.certificate_value = hi[j] - lo[j];
      return inf;
    }

  const bool maximize = p.sense == Sense::Maximize;
  Vector c_obj = maximize ? Vector(-p.objective) : p.objective;

  // ---- expanded row list ----------------------------------------------
  std::vector<ExpRow> xr;
  for (int i = 0; i < static_cast<int>(p.rows.size()); ++i) {
    const LpRow& row = p.rows[i];
    ExpRow e;
    e.orig = i;
    e.is_eq = row.rel == Relation::Equal;
    if (row.rel == Relation::GreaterEq) {
      e.a = -row.a;
      e.rhs = -row.rhs;
      e.flipped = true;
    } else {
      e.a = row.a;
      e.rhs = row.rhs;
    }
    xr.push_back(std::move(e));
  }
  // Column plan: x_j = z+ (- z- when the domain reaches below zero).
  std::vector<int> plus_col(n), minus_col(n, -1);
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lo[j]) && lo[j] != 0.0) {
      ExpRow e;
      e.a = Vector::Zero(n);
      e.a[j] = -1.0;
      e.rhs = -lo[j];
      e.lower_of = j;
      xr.push_back(std::move(e));
    }
    if (std::isfinite(hi[j])) {
      ExpRow e;
      e.a = Vector::Zero(n);
      e.a[j] = 1.0;
      e.rhs = hi[j];
      e.upper_of = j;
      xr.push_back(std::move(e));
    }
  }
  const int m = static_cast<int>(xr.size());

  // ---- standard form ----------------------------------------------------
  int ncols = 0;
  for (int j = 0; j < n; ++j) {
    plus_col[j] = ncols++;
    if (lo[j] < 0.0) minus_col[j] = ncols++;
  }
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  for (int i = 0; i < m; ++i)
    if (!xr[i].is_eq) slack_col[i] = ncols++;
  std::vector<double> sigma(m, 1.0);  // row negation applied for rhs >= 0
  for (int i = 0; i < m; ++i)
    if (xr[i].rhs < 0.0) sigma[i] = -1.0;
  for (int i = 0; i < m; ++i)
    if (xr[i].is_eq || sigma[i] < 0.0) art_col[i] = ncols++;

  Tableau t;
  t.m = m;
  t.ncols = ncols;
  t.T = Matrix::Zero(m, ncols);
  t.tb = Vector::Zero(m);
  t.basis.assign(m, -1);
  t.banned.assign(ncols, false);
  t.active.assign(m, true);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = sigma[i] * xr[i].a[j];
      if (v != 0.0) {
        t.T(i, plus_col[j]) = v;
        if (minus_col[j] >= 0) t.T(i, minus_col[j]) = -v;
      }
    }
    if (slack_col[i] >= 0) t.T(i, slack_col[i]) = sigma[i];
    if (art_col[i] >= 0) t.T(i, art_col[i]) = 1.0;
    t.tb[i] = sigma[i] * xr[i].rhs;
    t.basis[i] = art_col[i] >= 0 ? art_col[i] : slack_col[i];
  }

  Vector cost2 = Vector::Zero(ncols);
  for (int j = 0; j < n; ++j) {
    cost2[plus_col[j]] = c_obj[j];
    if (minus_col[j] >= 0) cost2[minus_col[j]] = -c_obj[j];
  }
  Vector cost1 = Vector::Zero(ncols);
  bool need_phase1 = false;
  for (int i = 0; i < m; ++i)
    if (art_col[i] >= 0) {
      cost1[art_col[i]] = 1.0;
      need_phase1 = true;
    }

  // ---- phase 1 ------------------------------------------------------------
  if (need_phase1) {
    int ub_col = -1;
    if (run_simplex(t, cost1, &ub_col) == SimplexEnd::Unbounded)
      throw SimplexError("phase-1 subproblem reported unbounded");
    double p1 = 0.0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= 0 && cost1[t.basis[i]] > 0.0) p1 += t.tb[i];
    if (p1 > kFeasTol) {
      // Infeasible: phase-1 duals certify emptiness.
      const Vector r1 = reduced_costs(t, cost1);
      Vector y(m);
      for (int i = 0; i < m; ++i) {
        const int uc = art_col[i] >= 0 ? art_col[i] : slack_col[i];
        y[i] = cost1[uc] - r1[uc];
        if (art_col[i] < 0) y[i] /= sigma[i];  // slack coefficient is sigma
      }
      LpInfeasible inf;
      inf.row_mult = Vector::Zero(static_cast<int>(p.rows.size()));
      inf.lower_mult = Vector::Zero(n);
      inf.upper_mult = Vector::Zero(n);
      double val = 0.0;
      Vector combo = Vector::Zero(n);  // sum_i w_i a_i over expanded rows
      for (int i = 0; i < m; ++i) {
        const double w = -sigma[i] * y[i];  // multiplier on expanded row i
        if (std::abs(w) < 1e-12) continue;
        combo += w * xr[i].a;
        val += w * xr[i].rhs;
        if (xr[i].orig >= 0) {
          inf.row_mult[xr[i].orig] = xr[i].flipped ? -w : w;
        } else if (xr[i].lower_of >= 0) {
          inf.lower_mult[xr[i].lower_of] += w;
        } else if (xr[i].upper_of >= 0) {
          inf.upper_mult[xr[i].upper_of] += w;
        }
      }
      // Residual slack on naturally nonnegative columns acts as a multiplier
      // on x_j >= 0 (those have l_j = 0, so the value term is unaffected).
      for (int j = 0; j < n; ++j)
        if (minus_col[j] < 0) inf.lower_mult[j] += std::max(0.0, combo[j]);
      inf.certificate_value = val;
      return inf;
    }
    // Drive artificials out of the basis; rows that cannot release one are
    // linearly dependent and go inactive.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < 0 || cost1[t.basis[i]] == 0.0) continue;
      int target = -1;
      for (int j = 0; j < ncols; ++j) {
        if (cost1[j] > 0.0) continue;  // never re-admit an artificial
        if (std::abs(t.T(i, j)) > kFeasTol) { target = j; break; }
      }
      if (target >= 0) {
        pivot(t, i, target);
      } else {
        t.active[i] = false;
      }
    }
    for (int j = 0; j < ncols; ++j)
      if (cost1[j] > 0.0) t.banned[j] = true;
  }

  // ---- phase 2 ------------------------------------------------------------
  int ub_col = -1;
  const SimplexEnd end = run_simplex(t, cost2, &ub_col);

  Vector z = Vector::Zero(ncols);
  for (int i = 0; i < m; ++i)
    if (t.active[i]) z[t.basis[i]] = std::max(0.0, t.tb[i]);
  auto to_x = [&](const Vector& zz) {
    Vector x(n);
    for (int j = 0; j < n; ++j)
      x[j] = zz[plus_col[j]] - (minus_col[j] >= 0 ? zz[minus_col[j]] : 0.0);
    return x;
  };

  if (end == SimplexEnd::Unbounded) {
    Vector dz = Vector::Zero(ncols);
    dz[ub_col] = 1.0;
    for (int i = 0; i < m; ++i)
      if (t.active[i]) dz[t.basis[i]] = -t.T(i, ub_col);
    LpUnbounded u;
    u.direction = to_x(dz);
    return u;
  }

  // Optimal: primal solution plus exact multipliers from the final basis.
  const Vector r2 = reduced_costs(t, cost2);
  Vector y(m);
  for (int i = 0; i < m; ++i) {
    if (!t.active[i]) { y[i] = 0.0; continue; }
    const int uc = art_col[i] >= 0 ? art_col[i] : slack_col[i];
    y[i] = -r2[uc];
    if (art_col[i] < 0) y[i] /= sigma[i];
  }

  LpOptimal opt;
  opt.x = to_x(z);
  double obj_int = 0.0;
  for (int j = 0; j < ncols; ++j) obj_int += cost2[j] * z[j];
  opt.objective = maximize ? -obj_int : obj_int;
  opt.row_duals = Vector::Zero(static_cast<int>(p.rows.size()));
  opt.lower_duals = Vector::Zero(n);
  opt.upper_duals = Vector::Zero(n);
  for (int i = 0; i < m; ++i) {
    const double lam = sigma[i] * y[i];  // multiplier on expanded row i
    if (xr[i].orig >= 0) {
      double v = xr[i].flipped ? -lam : lam;
      opt.row_duals[xr[i].orig] = maximize ? -v : v;
    } else if (xr[i].lower_of >= 0) {
      opt.lower_duals[xr[i].lower_of] += -lam;  // lam <= 0 on bound rows
    } else if (xr[i].upper_of >= 0) {
      opt.upper_duals[xr[i].upper_of] += -lam;
    }
  }
  // Naturally nonnegative columns: the reduced cost is the multiplier on
  // x_j >= 0 (only meaningful sign-wise; l_j = 0 keeps it out of the value).
  for (int j = 0; j < n; ++j)
    if (minus_col[j] < 0) opt.lower_duals[j] += std::max(0.0, r2[plus_col[j]]);

  double dual_obj = 0.0;
  for (int i = 0; i < static_cast<int>(p.rows.size()); ++i)
    dual_obj += opt.row_duals[i] * p.rows[i].rhs;
  for (int j = 0; j < n; ++j) {
    const double sl = maximize ? -1.0 : 1.0;
    if (opt.lower_duals[j] > 0.0 && std::isfinite(lo[j]))
      dual_obj += sl * opt.lower_duals[j] * lo[j];
    if (opt.upper_duals[j] > 0.0 && std::isfinite(hi[j]))
      dual_obj -= sl * opt.upper_duals[j] * hi[j];
  }
  opt.dual_objective = dual_obj;
  return opt;
}

}  // namespace ddurobust
