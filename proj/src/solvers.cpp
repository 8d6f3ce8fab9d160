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

#include "ddurobust/solvers.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>

#include "ddurobust/lp.hpp"

namespace ddurobust {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::RmpInfeasible: return "rmp_infeasible";
    case SolveStatus::Stalled: return "stalled";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

void SolveTrace::write_jsonl(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw SolverError("cannot open trace file: " + path);
  const auto vec = [](const Vector& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    return out;
  };
  for (const auto& r : iterations) {
    nlohmann::json j;
    j["iter"] = r.iter;
    j["x"] = vec(r.x);
    j["alpha"] = r.alpha;
    j["violation"] = r.violation;
    j["S"] = r.S.has_value() ? nlohmann::json(*r.S) : nlohmann::json(nullptr);
    j["cut_kind"] = r.cut_kind.empty() ? nlohmann::json(nullptr)
                                       : nlohmann::json(r.cut_kind);
    j["lb"] = r.lb;
    j["ub"] = r.ub.has_value() ? nlohmann::json(*r.ub) : nlohmann::json(nullptr);
    f << j.dump() << "\n";
  }
  nlohmann::json t;
  t["status"] = to_string(status);
  t["diagnosis"] = diagnosis;
  f << t.dump() << "\n";
}

namespace {

double default_alpha_floor(const TsroProblem& p) {
  for (int i = 0; i < p.c.size(); ++i)
    if (p.c[i] < -1e-12) return -1e6;
  return 0.0;  // nonnegative recourse costs make S(x) >= 0
}

}  // namespace

MasterProblem MasterProblem::build(const TsroProblem& p,
                                   const SolverOptions& opts) {
  MasterProblem m;
  m.nx_ = p.nx();
  for (int j = 0; j < p.nx(); ++j) m.add_col(-kInf, kInf, 0.0);
  for (const auto& row : p.X.rows()) {
    const int r = m.add_row(row.rel, row.rhs);
    for (int j = 0; j < p.nx(); ++j)
      if (row.a[j] != 0.0) m.add_term(r, j, row.a[j]);
  }
  if (p.f.pieces.empty()) {
    m.t_col_ = m.add_col(0.0, 0.0, 1.0);
  } else {
    m.t_col_ = m.add_col(-kInf, kInf, 1.0);
    for (const auto& piece : p.f.pieces) {
      const int r = m.add_row(Relation::LessEq, -piece.offset);
      for (int j = 0; j < p.nx(); ++j)
        if (piece.grad[j] != 0.0) m.add_term(r, j, piece.grad[j]);
      m.add_term(r, m.t_col_, -1.0);
    }
  }
  m.alpha_col_ =
      m.add_col(opts.alpha_floor.value_or(default_alpha_floor(p)), kInf, 1.0);
  return m;
}

int MasterProblem::add_col(double lo, double hi, double cost) {
  lo_.push_back(lo);
  hi_.push_back(hi);
  cost_.push_back(cost);
  return static_cast<int>(lo_.size()) - 1;
}

int MasterProblem::add_row(Relation rel, double rhs) {
  rows_.push_back(Row{{}, rel, rhs});
  return static_cast<int>(rows_.size()) - 1;
}

void MasterProblem::add_term(int row, int col, double coef) {
  rows_.at(row).terms.emplace_back(col, coef);
}

void MasterProblem::add_pair(int mu_col, int row) {
  if (rows_.at(row).rel != Relation::LessEq)
    throw SolverError("complementarity pairs require a <= row");
  pairs_.push_back(ComplementarityPair{mu_col, row});
}

LpProblem MasterProblem::materialize() const {
  LpProblem lp(cols());
  for (int j = 0; j < cols(); ++j) {
    lp.objective[j] = cost_[j];
    lp.lower[j] = lo_[j];
    lp.upper[j] = hi_[j];
  }
  for (const auto& row : rows_) {
    Vector a = Vector::Zero(cols());
    for (const auto& [col, coef] : row.terms) a[col] += coef;
    lp.add_row(std::move(a), row.rel, row.rhs);
  }
  return lp;
}

MasterResult master_solve(const MasterProblem& m, long node_budget) {
  const LpProblem base = m.materialize();
  const auto& pairs = m.pairs();
  MasterResult best;
  long nodes = 0;

  const auto solve_node = [&](const std::vector<int8_t>& state) {
    if (++nodes > node_budget)
      throw NodeBudgetError("master branch-and-bound exceeded its node budget");
    LpProblem lp = base;
    for (size_t k = 0; k < state.size(); ++k) {
      if (state[k] == 0)
        lp.upper[pairs[k].mu_col] = 0.0;
      else if (state[k] == 1)
        lp.rows[pairs[k].row].rel = Relation::Equal;
    }
    return solve(lp);
  };

  double inc = kInf;
  std::vector<std::vector<int8_t>> stack;
  stack.emplace_back(pairs.size(), int8_t{-1});
  while (!stack.empty()) {
    const std::vector<int8_t> st = std::move(stack.back());
    stack.pop_back();
    const LpOutcome out = solve_node(st);
    if (std::holds_alternative<LpInfeasible>(out)) continue;
    if (std::holds_alternative<LpUnbounded>(out))
      throw SolverError("master relaxation unbounded (missing alpha floor?)");
    const LpOptimal& o = std::get<LpOptimal>(out);
    if (best.feasible && o.objective > inc + 1e-9) continue;  // bound prune

    int split = -1;
    double worst = 1e-7;
    for (size_t k = 0; k < pairs.size(); ++k) {
      if (st[k] != -1) continue;
      // pairs are only registered on <= rows (checked in add_pair)
      const double mu = o.x[pairs[k].mu_col];
      const double slack =
          base.rows[pairs[k].row].rhs - base.rows[pairs[k].row].a.dot(o.x);
      const double v = std::min(mu, slack);
      if (v > worst) {
        worst = v;
        split = static_cast<int>(k);
      }
    }
    if (split < 0) {  // complementary leaf
      const Vector xh = o.x.head(m.nx());
      bool take = !best.feasible;
      if (!take && o.objective < inc - 1e-9) take = true;
      if (!take && o.objective <= inc + 1e-9 &&
          lex_less(xh, best.values.head(m.nx()), 1e-9))
        take = true;
      if (take) {
        best.feasible = true;
        best.values = o.x;
        best.objective = o.objective;
        inc = std::min(inc, o.objective);
      }
      continue;
    }
    std::vector<int8_t> tight = st;
    tight[static_cast<size_t>(split)] = 1;
    stack.push_back(std::move(tight));
    std::vector<int8_t> zero = st;
    zero[static_cast<size_t>(split)] = 0;
    stack.push_back(std::move(zero));  // mu = 0 branch explored first
  }
  best.nodes = nodes;
  return best;
}

namespace {

// ---- cut builders ---------------------------------------------------------

// xi'(b - Ax - Cu) <= 0 over x (feasibility) or pi'(...) <= alpha.
void add_halfplane_cut(MasterProblem& m, const TsroProblem& p,
                       const Vector& mult, const Vector& u, bool optimality) {
  const Vector ax = p.A.transpose() * mult;
  const double rhs = mult.dot(p.C * u) - mult.dot(p.b);
  const int r = m.add_row(Relation::LessEq, rhs);
  for (int j = 0; j < p.nx(); ++j)
    if (ax[j] != 0.0) m.add_term(r, j, -ax[j]);
  if (optimality) m.add_term(r, m.alpha_col(), -1.0);
}

// Fresh recourse block covering the frozen scenario u:
//   A x + B y^j <= b - C u,  y^j >= 0,  c.y^j <= alpha.
void add_ccg_block(MasterProblem& m, const TsroProblem& p, const Vector& u) {
  std::vector<int> y(p.ny());
  for (int k = 0; k < p.ny(); ++k) y[k] = m.add_col(0.0, kInf, 0.0);
  const Vector cu = p.C * u;
  for (int i = 0; i < p.m(); ++i) {
    const int r = m.add_row(Relation::LessEq, p.b[i] - cu[i]);
    for (int j = 0; j < p.nx(); ++j)
      if (p.A(i, j) != 0.0) m.add_term(r, j, p.A(i, j));
    for (int k = 0; k < p.ny(); ++k)
      if (p.B(i, k) != 0.0) m.add_term(r, y[k], p.B(i, k));
  }
  const int r = m.add_row(Relation::LessEq, 0.0);
  for (int k = 0; k < p.ny(); ++k)
    if (p.c[k] != 0.0) m.add_term(r, y[k], p.c[k]);
  m.add_term(r, m.alpha_col(), -1.0);
}

// Recourse block whose scenario tracks x through the coupling at frozen xi:
//   A x + B y^j + C u^j <= b,  y^j >= 0,  c.y^j <= alpha,
//   u^j_i - (F + xi'W_i) x = (E xi)_i + h_i.
void add_enhanced_ccg_block(MasterProblem& m, const TsroProblem& p,
                            const SeparableSpec& sep, const Vector& xi) {
  std::vector<int> y(p.ny()), u(p.nu());
  for (int k = 0; k < p.ny(); ++k) y[k] = m.add_col(0.0, kInf, 0.0);
  for (int k = 0; k < p.nu(); ++k) u[k] = m.add_col(-kInf, kInf, 0.0);
  for (int i = 0; i < p.m(); ++i) {
    const int r = m.add_row(Relation::LessEq, p.b[i]);
    for (int j = 0; j < p.nx(); ++j)
      if (p.A(i, j) != 0.0) m.add_term(r, j, p.A(i, j));
    for (int k = 0; k < p.ny(); ++k)
      if (p.B(i, k) != 0.0) m.add_term(r, y[k], p.B(i, k));
    for (int k = 0; k < p.nu(); ++k)
      if (p.C(i, k) != 0.0) m.add_term(r, u[k], p.C(i, k));
  }
  int r = m.add_row(Relation::LessEq, 0.0);
  for (int k = 0; k < p.ny(); ++k)
    if (p.c[k] != 0.0) m.add_term(r, y[k], p.c[k]);
  m.add_term(r, m.alpha_col(), -1.0);
  const Vector exi = sep.E * xi;
  for (int i = 0; i < p.nu(); ++i) {
    r = m.add_row(Relation::Equal, exi[i] + sep.h[i]);
    m.add_term(r, u[i], 1.0);
    for (int j = 0; j < p.nx(); ++j) {
      double coef = sep.F(i, j);
      if (!sep.W.empty() && sep.W[i].size() != 0)
        coef += xi.dot(sep.W[i].col(j));
      if (coef != 0.0) m.add_term(r, j, -coef);
    }
  }
}

// Half-plane cut over a fresh scenario block u^j tied to x by the exact
// optimality system of  max { -(C'mult).u : G u <= g0 + H x }.
void add_embedded_benders_cut(MasterProblem& m, const TsroProblem& p,
                              const AffineRhsSpec& ar, const Vector& mult,
                              bool optimality, const Vector& x_probe) {
  const int nu = p.nu();
  const int ng = static_cast<int>(ar.G.rows());
  const Vector d = -(p.C.transpose() * mult);

  // Defect checks: the argmax system must be solvable at the current x.
  {
    Polyhedron prim(nu);
    prim.add_rows(ar.G, Relation::LessEq, ar.g0 + ar.H * x_probe);
    if (is_empty(prim).empty())
      throw EmbeddingInfeasibleError(
          "scenario system G u <= g0 + H x is empty at the tentative x");
    Polyhedron dual(ng);
    dual.add_rows(ar.G.transpose(), Relation::Equal, d);
    dual.add_rows(-Matrix::Identity(ng, ng), Relation::LessEq,
                  Vector::Zero(ng));
    if (is_empty(dual).empty())
      throw EmbeddingInfeasibleError(
          "argmax dual system G'mu = -C'mult, mu >= 0 is empty (unbounded "
          "scenario direction)");
  }

  std::vector<int> u(nu), mu(ng);
  for (int k = 0; k < nu; ++k) u[k] = m.add_col(-kInf, kInf, 0.0);
  for (int i = 0; i < ng; ++i) mu[i] = m.add_col(0.0, kInf, 0.0);

  // Cut row: -(A'mult).x - (C'mult).u [- alpha] <= -mult.b.
  const Vector ax = p.A.transpose() * mult;
  const Vector cx = p.C.transpose() * mult;
  int r = m.add_row(Relation::LessEq, -mult.dot(p.b));
  for (int j = 0; j < p.nx(); ++j)
    if (ax[j] != 0.0) m.add_term(r, j, -ax[j]);
  for (int k = 0; k < nu; ++k)
    if (cx[k] != 0.0) m.add_term(r, u[k], -cx[k]);
  if (optimality) m.add_term(r, m.alpha_col(), -1.0);

  // Primal rows G u - H x <= g0, each paired with its multiplier.
  for (int i = 0; i < ng; ++i) {
    r = m.add_row(Relation::LessEq, ar.g0[i]);
    for (int k = 0; k < nu; ++k)
      if (ar.G(i, k) != 0.0) m.add_term(r, u[k], ar.G(i, k));
    for (int j = 0; j < p.nx(); ++j)
      if (ar.H(i, j) != 0.0) m.add_term(r, j, -ar.H(i, j));
    m.add_pair(mu[i], r);
  }
  // Dual rows G'mu = d.
  for (int k = 0; k < nu; ++k) {
    r = m.add_row(Relation::Equal, d[k]);
    for (int i = 0; i < ng; ++i)
      if (ar.G(i, k) != 0.0) m.add_term(r, mu[i], ar.G(i, k));
  }
}

// ---- shared loop plumbing --------------------------------------------------

struct LoopContext {
  SolveTrace trace;
  std::optional<Vector> incumbent;
  double inc_obj = kInf;
  double lb = -kInf;
  SolveStatus status = SolveStatus::IterationLimit;
  int iterations = 0;
};

SolveOutcome finish(const TsroProblem& p, const SolverOptions& opts,
                    LoopContext& ctx, const std::vector<Vector>* frozen_us) {
  SolveOutcome out;
  out.status = ctx.status;
  out.iterations = ctx.iterations;
  out.lower_bound = ctx.lb;
  if (ctx.incumbent.has_value()) {
    out.x = ctx.incumbent;
    out.objective = ctx.inc_obj;
    const FeasibilityVerdict fin = feasibility_oracle(p, *ctx.incumbent);
    out.feasible_certified = fin.violation <= opts.feas_tol;
    if (frozen_us != nullptr &&
        !std::holds_alternative<FixedSpec>(p.uncertainty)) {
      const Polyhedron ufin = instantiate_ddus(p, *ctx.incumbent);
      for (const Vector& u : *frozen_us) {
        if (!ufin.member(u, 1e-7)) {
          out.suboptimal_flag = true;
          ctx.trace.diagnosis.push_back(
              "suboptimality flag: a frozen scenario from an earlier "
              "iteration lies outside U(x*); the stale cut may have removed "
              "better decisions");
          break;
        }
      }
    }
  }
  ctx.trace.status = ctx.status;
  return out;
}

bool is_repeat(const std::vector<Vector>& seen, const Vector& v) {
  for (const Vector& s : seen)
    if (s.size() == v.size() &&
        (s - v).lpNorm<Eigen::Infinity>() <= 1e-9)
      return true;
  return false;
}

std::pair<SolveOutcome, SolveTrace> run_standard(const TsroProblem& p,
                                                 const SolverOptions& opts,
                                                 bool ccg) {
  p.check_dimensions();
  LoopContext ctx;
  const bool ddu = !std::holds_alternative<FixedSpec>(p.uncertainty);
  if (ddu)
    ctx.trace.diagnosis.push_back(
        "warning: frozen-scenario cuts assume a decision-independent "
        "uncertainty set; on this decision-dependent spec the algorithm can "
        "misdiagnose infeasibility or return a suboptimal point");
  MasterProblem m = MasterProblem::build(p, opts);
  std::vector<Vector> frozen;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    ctx.iterations = iter;
    const MasterResult res = master_solve(m, opts.node_budget);
    if (!res.feasible) {
      ctx.status = SolveStatus::RmpInfeasible;
      ctx.trace.diagnosis.push_back(
          ddu ? "master infeasible under frozen scenarios: with "
                "decision-dependent uncertainty this can be a misdiagnosis — "
                "the true problem may still have robust-feasible decisions"
              : "master infeasible: X and the accumulated cuts admit no "
                "first stage");
      break;
    }
    ctx.lb = res.objective;
    const Vector xk = res.values.head(p.nx());
    const double ak = res.values[m.alpha_col()];
    IterationRecord rec;
    rec.iter = iter;
    rec.x = xk;
    rec.alpha = ak;
    rec.lb = ctx.lb;
    if (ctx.incumbent) rec.ub = ctx.inc_obj;
    const FeasibilityVerdict fv = feasibility_oracle(p, xk);
    rec.violation = fv.violation;
    if (fv.violation > opts.feas_tol) {
      rec.cut_kind = ccg ? "ccg_primal" : "benders_fea";
      rec.cut_multiplier = fv.dual_xi;
      rec.cut_scenario = fv.worst_u;
      if (ccg)
        add_ccg_block(m, p, fv.worst_u);
      else
        add_halfplane_cut(m, p, fv.dual_xi, fv.worst_u, false);
      frozen.push_back(fv.worst_u);
      ctx.trace.iterations.push_back(std::move(rec));
      continue;
    }
    if (fv.empty_ddus) {
      ctx.trace.diagnosis.push_back(
          "note: U(x) is empty at the final iterate — coverage is vacuous "
          "and the worst-case cost is taken as 0");
      rec.S = 0.0;
      const double obj = p.f.value(xk);
      if (obj < ctx.inc_obj - 1e-12) {
        ctx.incumbent = xk;
        ctx.inc_obj = obj;
      }
      rec.ub = ctx.inc_obj;
      ctx.status = SolveStatus::Optimal;
      ctx.trace.iterations.push_back(std::move(rec));
      break;
    }
    const OptimalityVerdict ov = optimality_oracle(p, xk);
    rec.S = ov.value;
    const double obj = p.f.value(xk) + ov.value;
    if (obj < ctx.inc_obj - 1e-12) {
      ctx.incumbent = xk;
      ctx.inc_obj = obj;
    }
    rec.ub = ctx.inc_obj;
    if (ov.value <= ak + opts.gap_tol) {
      ctx.status = SolveStatus::Optimal;
      ctx.trace.iterations.push_back(std::move(rec));
      break;
    }
    rec.cut_kind = ccg ? "ccg_primal" : "benders_opt";
    rec.cut_multiplier = ov.dual_pi;
    rec.cut_scenario = ov.worst_u;
    if (ccg)
      add_ccg_block(m, p, ov.worst_u);
    else
      add_halfplane_cut(m, p, ov.dual_pi, ov.worst_u, true);
    frozen.push_back(ov.worst_u);
    ctx.trace.iterations.push_back(std::move(rec));
  }
  const SolveOutcome out = finish(p, opts, ctx, &frozen);
  return {out, std::move(ctx.trace)};
}

// Deterministic support point realizing u_star at x: minimizes the L1
// mismatch of E_x xi = u_star - F x - h over xi in Xi.
Vector recover_support_point(const SeparableSpec& sep, const Vector& x,
                             const Vector& u_star) {
  const Matrix ex = sep.effective_E(x);
  const int nxi = sep.Xi.dim();
  const int nu = static_cast<int>(u_star.size());
  LpProblem lp(nxi + 2 * nu);
  for (int k = 0; k < nxi; ++k) {
    lp.lower[k] = -kInf;
    lp.upper[k] = kInf;
  }
  for (int k = 0; k < 2 * nu; ++k) {
    lp.lower[nxi + k] = 0.0;
    lp.objective[nxi + k] = 1.0;
  }
  const Vector target = u_star - sep.F * x - sep.h;
  for (int i = 0; i < nu; ++i) {
    // effective_E(x) already folds the bilinear xi'W_i x terms into its rows.
    Vector a = Vector::Zero(nxi + 2 * nu);
    a.head(nxi) = ex.row(i).transpose();
    a[nxi + i] = 1.0;
    a[nxi + nu + i] = -1.0;
    lp.add_row(std::move(a), Relation::Equal, target[i]);
  }
  for (const auto& row : sep.Xi.rows()) {
    Vector a = Vector::Zero(nxi + 2 * nu);
    a.head(nxi) = row.a;
    lp.add_row(std::move(a), row.rel, row.rhs);
  }
  const LpOutcome out = solve(lp);
  if (!is_optimal(out))
    throw SolverError("could not match the worst scenario to a support point");
  const LpOptimal& o = get_optimal(out);
  if (o.objective > 1e-5)
    throw SolverError(
        "worst scenario lies off the coupling image (mismatch " +
        std::to_string(o.objective) + ")");
  return o.x.head(nxi);
}

}  // namespace

std::pair<SolveOutcome, SolveTrace> standard_benders(const TsroProblem& p,
                                                     const SolverOptions& opts) {
  return run_standard(p, opts, /*ccg=*/false);
}

std::pair<SolveOutcome, SolveTrace> standard_ccg(const TsroProblem& p,
                                                 const SolverOptions& opts) {
  return run_standard(p, opts, /*ccg=*/true);
}

std::pair<SolveOutcome, SolveTrace> enhanced_ccg(const TsroProblem& p,
                                                 const SolverOptions& opts) {
  p.check_dimensions();
  TsroProblem q = p;
  if (std::holds_alternative<FixedSpec>(p.uncertainty))
    q = lift_to_separable(p);
  else if (!std::holds_alternative<SeparableSpec>(p.uncertainty))
    throw IncompatibleSpecError(
        "scenario generation with coupling embedding needs a separable (or "
        "fixed) spec; rhs-coupled sets belong to enhanced_benders");
  const auto& sep = std::get<SeparableSpec>(q.uncertainty);

  LoopContext ctx;
  MasterProblem m = MasterProblem::build(q, opts);
  std::vector<Vector> seen;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    ctx.iterations = iter;
    const MasterResult res = master_solve(m, opts.node_budget);
    if (!res.feasible) {
      ctx.status = SolveStatus::RmpInfeasible;
      ctx.trace.diagnosis.push_back(
          "master infeasible: the embedded support points admit no coverable "
          "first stage — the problem is robust-infeasible over X");
      break;
    }
    ctx.lb = res.objective;
    const Vector xk = res.values.head(q.nx());
    const double ak = res.values[m.alpha_col()];
    IterationRecord rec;
    rec.iter = iter;
    rec.x = xk;
    rec.alpha = ak;
    rec.lb = ctx.lb;
    if (ctx.incumbent) rec.ub = ctx.inc_obj;
    const FeasibilityVerdict fv = feasibility_oracle(q, xk);
    rec.violation = fv.violation;
    if (fv.empty_ddus) {
      ctx.trace.diagnosis.push_back(
          "note: U(x) is empty at the final iterate — coverage is vacuous "
          "and the worst-case cost is taken as 0");
      rec.S = 0.0;
      if (p.f.value(xk) < ctx.inc_obj - 1e-12) {
        ctx.incumbent = xk;
        ctx.inc_obj = p.f.value(xk);
      }
      rec.ub = ctx.inc_obj;
      ctx.status = SolveStatus::Optimal;
      ctx.trace.iterations.push_back(std::move(rec));
      break;
    }
    Vector xi;
    bool cut_needed = false;
    if (fv.violation > opts.feas_tol) {
      xi = recover_support_point(sep, xk, fv.worst_u);
      rec.cut_scenario = fv.worst_u;
      cut_needed = true;
    } else {
      const OptimalityVerdict ov = optimality_oracle(q, xk);
      rec.S = ov.value;
      const double obj = q.f.value(xk) + ov.value;
      if (obj < ctx.inc_obj - 1e-12) {
        ctx.incumbent = xk;
        ctx.inc_obj = obj;
      }
      rec.ub = ctx.inc_obj;
      if (ov.value <= ak + opts.gap_tol) {
        ctx.status = SolveStatus::Optimal;
        ctx.trace.iterations.push_back(std::move(rec));
        break;
      }
      xi = recover_support_point(sep, xk, ov.worst_u);
      rec.cut_scenario = ov.worst_u;
      cut_needed = true;
    }
    if (cut_needed) {
      if (is_repeat(seen, xi)) {
        ctx.status = SolveStatus::Stalled;
        ctx.trace.diagnosis.push_back(
            "defect: support point repeated — an embedded coupling block "
            "failed to cut off the tentative point that produced it");
        ctx.trace.iterations.push_back(std::move(rec));
        break;
      }
      seen.push_back(xi);
      rec.cut_kind = "enhanced_ccg";
      rec.cut_multiplier = xi;
      add_enhanced_ccg_block(m, q, sep, xi);
      ctx.trace.iterations.push_back(std::move(rec));
    }
  }
  const SolveOutcome out = finish(q, opts, ctx, nullptr);
  return {out, std::move(ctx.trace)};
}

std::pair<SolveOutcome, SolveTrace> enhanced_benders(const TsroProblem& p,
                                                     const SolverOptions& opts) {
  p.check_dimensions();
  TsroProblem q = p;
  if (std::holds_alternative<FixedSpec>(p.uncertainty))
    q = lift_to_affine_rhs(p);
  else if (!std::holds_alternative<AffineRhsSpec>(p.uncertainty))
    throw IncompatibleSpecError(
        "the argmax embedding needs an rhs-coupled set {u : Gu <= g0 + Hx}; "
        "separable couplings belong to enhanced_ccg");
  const auto& ar = std::get<AffineRhsSpec>(q.uncertainty);

  LoopContext ctx;
  MasterProblem m = MasterProblem::build(q, opts);
  std::vector<Vector> seen_fea, seen_opt;
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    ctx.iterations = iter;
    const MasterResult res = master_solve(m, opts.node_budget);
    if (!res.feasible) {
      ctx.status = SolveStatus::RmpInfeasible;
      ctx.trace.diagnosis.push_back(
          "master infeasible: no first stage covers the embedded worst-case "
          "scenarios — X_R is empty over X (or an embedding degenerated, "
          "which the cut-time checks should have caught)");
      break;
    }
    ctx.lb = res.objective;
    const Vector xk = res.values.head(q.nx());
    const double ak = res.values[m.alpha_col()];
    IterationRecord rec;
    rec.iter = iter;
    rec.x = xk;
    rec.alpha = ak;
    rec.lb = ctx.lb;
    if (ctx.incumbent) rec.ub = ctx.inc_obj;
    const FeasibilityVerdict fv = feasibility_oracle(q, xk);
    rec.violation = fv.violation;
    if (fv.empty_ddus) {
      ctx.trace.diagnosis.push_back(
          "note: U(x) is empty at the final iterate — coverage is vacuous "
          "and the worst-case cost is taken as 0");
      rec.S = 0.0;
      if (q.f.value(xk) < ctx.inc_obj - 1e-12) {
        ctx.incumbent = xk;
        ctx.inc_obj = q.f.value(xk);
      }
      rec.ub = ctx.inc_obj;
      ctx.status = SolveStatus::Optimal;
      ctx.trace.iterations.push_back(std::move(rec));
      break;
    }
    if (fv.violation > opts.feas_tol) {
      if (is_repeat(seen_fea, fv.dual_xi)) {
        ctx.status = SolveStatus::Stalled;
        ctx.trace.diagnosis.push_back(
            "defect: feasibility multiplier repeated — an embedded cut "
            "failed to cut off the tentative point that produced it");
        ctx.trace.iterations.push_back(std::move(rec));
        break;
      }
      seen_fea.push_back(fv.dual_xi);
      rec.cut_kind = "enhanced_benders_fea";
      rec.cut_multiplier = fv.dual_xi;
      rec.cut_scenario = fv.worst_u;
      add_embedded_benders_cut(m, q, ar, fv.dual_xi, false, xk);
      ctx.trace.iterations.push_back(std::move(rec));
      continue;
    }
    const OptimalityVerdict ov = optimality_oracle(q, xk);
    rec.S = ov.value;
    const double obj = q.f.value(xk) + ov.value;
    if (obj < ctx.inc_obj - 1e-12) {
      ctx.incumbent = xk;
      ctx.inc_obj = obj;
    }
    rec.ub = ctx.inc_obj;
    if (ov.value <= ak + opts.gap_tol) {
      ctx.status = SolveStatus::Optimal;
      ctx.trace.iterations.push_back(std::move(rec));
      break;
    }
    if (is_repeat(seen_opt, ov.dual_pi)) {
      ctx.status = SolveStatus::Stalled;
      ctx.trace.diagnosis.push_back(
          "defect: optimality multiplier repeated — an embedded cut failed "
          "to tighten alpha at the tentative point that produced it");
      ctx.trace.iterations.push_back(std::move(rec));
      break;
    }
    seen_opt.push_back(ov.dual_pi);
    rec.cut_kind = "enhanced_benders_opt";
    rec.cut_multiplier = ov.dual_pi;
    rec.cut_scenario = ov.worst_u;
    add_embedded_benders_cut(m, q, ar, ov.dual_pi, true, xk);
    ctx.trace.iterations.push_back(std::move(rec));
  }
  const SolveOutcome out = finish(q, opts, ctx, nullptr);
  return {out, std::move(ctx.trace)};
}

}  // namespace ddurobust
