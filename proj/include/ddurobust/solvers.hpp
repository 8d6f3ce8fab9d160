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
#include <utility>
#include <vector>

#include "ddurobust/model.hpp"
#include "ddurobust/oracles.hpp"

namespace ddurobust {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// The algorithm cannot represent the problem's uncertainty coupling.
struct IncompatibleSpecError : SolverError {
  using SolverError::SolverError;
};
/// Branch-and-bound exhausted its node budget.
struct NodeBudgetError : SolverError {
  using SolverError::SolverError;
};
/// A scenario-argmax embedding turned out empty (defect: contradicts the
/// standing boundedness/nonemptiness assumptions).
struct EmbeddingInfeasibleError : SolverError {
  using SolverError::SolverError;
};

enum class SolveStatus { Optimal, RmpInfeasible, Stalled, IterationLimit };
std::string to_string(SolveStatus s);

struct SolverOptions {
  double gap_tol = 1e-6;   // absolute UB - LB convergence gap
  double feas_tol = 1e-7;  // oracle violation considered covered
  int max_iter = 100;
  // Lower bound keeping the zero-cut master bounded.  Default: 0 when the
  // recourse cost is componentwise nonnegative (then S >= 0), else -1e6.
  std::optional<double> alpha_floor;
  long node_budget = 20000;  // LP solves allowed per master branch-and-bound
};

struct IterationRecord {
  int iter = 0;  // 1-based
  Vector x;
  double alpha = 0.0;
  double violation = 0.0;          // feasibility-oracle worst distance
  std::optional<double> S;         // worst-case cost, when evaluated
  std::string cut_kind;            // empty when no cut was added
  double lb = -kInf;               // master objective (nondecreasing)
  std::optional<double> ub;        // best certified f(x)+S(x) so far
  // Cut ingredients for audits (not exported to JSONL):
  std::optional<Vector> cut_multiplier;  // xi or pi
  std::optional<Vector> cut_scenario;    // frozen u (standard cuts)
};

struct SolveTrace {
  std::vector<IterationRecord> iterations;
  SolveStatus status = SolveStatus::IterationLimit;
  std::vector<std::string> diagnosis;  // banners, audits, failure analysis

  /// One JSON object per line: per-iteration records with fields
  /// {iter, x, alpha, violation, S, cut_kind, lb, ub}, then a terminal
  /// record {status, diagnosis}.
  void write_jsonl(const std::string& path) const;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::IterationLimit;
  std::optional<Vector> x;     // incumbent (certified feasible when set)
  double objective = kInf;     // f(x) + S(x) re-evaluated at the incumbent
  double lower_bound = -kInf;  // final master bound
  bool feasible_certified = false;
  bool suboptimal_flag = false;  // a frozen scenario left U(x*) (stale cut)
  int iterations = 0;
};

/// Relaxed master accumulating cutting planes: columns are the first stage x,
/// the epigraph value t of f, the worst-case-cost guess alpha, and any
/// per-cut blocks; objective is min t + alpha.  Complementarity pairs (from
/// scenario-argmax embeddings) make it nonconvex; master_solve handles them.
class MasterProblem {
 public:
  struct Row {
    std::vector<std::pair<int, double>> terms;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
  };
  struct ComplementarityPair {
    int mu_col = -1;  // multiplier column, >= 0
    int row = -1;     // paired inequality: either mu = 0 or the row is tight
  };

  static MasterProblem build(const TsroProblem& p, const SolverOptions& opts);

  int add_col(double lo, double hi, double cost = 0.0);
  int add_row(Relation rel, double rhs);
  void add_term(int row, int col, double coef);
  void add_pair(int mu_col, int row);

  int cols() const { return static_cast<int>(lo_.size()); }
  int rows() const { return static_cast<int>(rows_.size()); }
  int nx() const { return nx_; }
  int t_col() const { return t_col_; }
  int alpha_col() const { return alpha_col_; }
  const std::vector<ComplementarityPair>& pairs() const { return pairs_; }

  /// The LP relaxation (complementarity dropped).
  LpProblem materialize() const;

 private:
  int nx_ = 0, t_col_ = -1, alpha_col_ = -1;
  std::vector<double> lo_, hi_, cost_;
  std::vector<Row> rows_;
  std::vector<ComplementarityPair> pairs_;
};

struct MasterResult {
  bool feasible = false;
  Vector values;          // all columns at the optimum
  double objective = kInf;
  long nodes = 0;         // LP relaxations solved
};

/// Global optimum of the master.  Pure LP when there are no complementarity
/// pairs; otherwise depth-first branch-and-bound over the pairs (mu = 0
/// versus row tight), pruning by LP bound; value ties resolve to the
/// lexicographically smallest first stage.  Throws NodeBudgetError.
MasterResult master_solve(const MasterProblem& m, long node_budget = 20000);

/// Classical cutting-plane loop freezing the oracle's worst scenario into
/// half-plane cuts xi'(b - Ax - Cu) <= 0 / pi'(b - Ax - Cu) <= alpha.  Sound
/// for decision-independent (Fixed) sets; on decision-dependent sets the
/// frozen scenarios go stale — the trace then carries an unsoundness banner,
/// RmpInfeasible gets a misdiagnosis note, and incumbents whose frozen
/// scenarios drifted out of U(x*) are flagged suboptimal, reproducing the
/// documented failure modes instead of hiding them.
std::pair<SolveOutcome, SolveTrace> standard_benders(
    const TsroProblem& p, const SolverOptions& opts = {});

/// Same loop but adding a fresh recourse block {A x + B y^j + C u^j <= b,
/// y^j >= 0, c.y^j <= alpha} per frozen scenario u^j.  Same DDU caveats.
std::pair<SolveOutcome, SolveTrace> standard_ccg(
    const TsroProblem& p, const SolverOptions& opts = {});

/// Scenario-generation loop for separable uncertainty: each cut embeds the
/// coupling at a frozen support point xi^j, so the scenario block
/// u^j = E xi^j + F_eff(xi^j) x + h tracks x instead of going stale.  The
/// master stays an LP.  Fixed specs are lifted through the identity coupling;
/// rhs-coupled specs are rejected (IncompatibleSpecError).  A repeated xi^j
/// is a defect and terminates with Stalled.
std::pair<SolveOutcome, SolveTrace> enhanced_ccg(const TsroProblem& p,
                                                 const SolverOptions& opts = {});

/// Benders loop for rhs-coupled uncertainty {u : G u <= g0 + H x}: each cut
/// keeps the half-plane form but replaces the frozen scenario by a fresh
/// block u^j tied to x through the exact optimality system of
/// max {-xi'C u : u in U(x)} (primal rows, dual multipliers mu >= 0 with
/// G'mu = -C'xi, and complementarity pairs solved in the master
/// branch-and-bound).  Fixed specs are lifted; separable specs with
/// first-stage terms inside the coupling are rejected.
std::pair<SolveOutcome, SolveTrace> enhanced_benders(
    const TsroProblem& p, const SolverOptions& opts = {});

}  // namespace ddurobust
