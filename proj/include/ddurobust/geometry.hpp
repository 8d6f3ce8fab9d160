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
#include <vector>

#include "ddurobust/linalg.hpp"
#include "ddurobust/lp.hpp"

namespace ddurobust {

/// One linear condition  a.x (<=|=) rhs  of a polyhedron description.
struct PolyRow {
  Vector a;
  Relation rel = Relation::LessEq;  // GreaterEq is normalized away on entry
  double rhs = 0.0;
};

/// H-representation of a polyhedron.  Zero rows means all of R^dim.
class Polyhedron {
 public:
  explicit Polyhedron(int dim = 0, std::vector<std::string> names = {});

  void add_row(Vector a, Relation rel, double rhs);
  void add_rows(const Matrix& A, Relation rel, const Vector& rhs);

  int dim() const { return dim_; }
  const std::vector<PolyRow>& rows() const { return rows_; }
  const std::vector<std::string>& names() const { return names_; }

  /// All rows as <=, equalities expanded into opposing pairs.  Certificates
  /// from is_empty index this list.
  std::vector<PolyRow> canonical_rows() const;

  /// Point membership within an absolute per-row tolerance.
  bool member(const Vector& pt, double tol = 1e-7) const;

  /// Largest signed violation of pt over all rows (<= 0 inside).
  double violation(const Vector& pt) const;

 private:
  int dim_;
  std::vector<PolyRow> rows_;
  std::vector<std::string> names_;
};

struct VertexSet {
  std::vector<Vector> points;  // sorted lexicographically
  int dim = 0;
};

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Thrown when an enumeration or projection exceeds its work budget.
struct BudgetError : GeometryError {
  using GeometryError::GeometryError;
};
/// Thrown when a recession direction defeats an operation needing boundedness.
struct UnboundedSetError : GeometryError {
  Vector direction;
  explicit UnboundedSetError(Vector d)
      : GeometryError("polyhedron is unbounded along a direction"),
        direction(std::move(d)) {}
};

struct EmptinessResult {
  std::optional<Vector> witness;      // present iff nonempty
  std::optional<Vector> certificate;  // over canonical_rows(), >= 0
  bool empty() const { return !witness.has_value(); }
};

/// Feasibility with evidence either way: an interior-ish witness point, or a
/// nonnegative combination of canonical rows with negative total slack.
EmptinessResult is_empty(const Polyhedron& p);

struct EnumerationOptions {
  double dedup_tol = 1e-6;
  double feas_tol = 1e-7;
  long basis_budget = 1000000;  // candidate active-set combinations
};

/// All vertices by active-set enumeration.  Requires boundedness; throws
/// UnboundedSetError with a recession direction otherwise.
VertexSet vertices(const Polyhedron& p, const EnumerationOptions& opt = {});

/// Basic feasible points without a boundedness precheck.  For a pointed
/// unbounded polyhedron this enumerates its vertices.
VertexSet basic_points(const Polyhedron& p, const EnumerationOptions& opt = {});

struct ProjectOptions {
  long max_rows = 100000;     // abort threshold during elimination
  double drop_tol = 1e-9;     // zero-coefficient threshold
  bool remove_redundant = true;
};

/// Orthogonal projection onto the coordinates in `keep` (result dimensions
/// follow the order of `keep`).  Eliminates the remaining coordinates one at a
/// time: by substitution when an equality pivot exists, otherwise by pairing
/// opposite-sign rows; redundant rows are pruned after every step.
Polyhedron project(const Polyhedron& p, const std::vector<int>& keep,
                   const ProjectOptions& opt = {});

struct ContainsResult {
  bool contained = false;
  bool vacuous = false;             // inner was empty
  std::optional<Vector> violator;   // an inner vertex outside outer
  int violated_row = -1;            // canonical row of outer it violates
};

/// Does outer contain inner?  Inner must be bounded (vertex argument).
ContainsResult contains(const Polyhedron& outer, const Polyhedron& inner,
                        double tol = 1e-7);

struct SupportResult {
  double value = 0.0;
  Vector argmax;
};

/// Support function max {direction.x : x in p}.  Throws UnboundedSetError or
/// GeometryError (empty set).
SupportResult support(const Polyhedron& p, const Vector& direction);

/// Drops rows implied by the others (one LP per row).  Equalities are kept.
Polyhedron remove_redundancy(const Polyhedron& p, double tol = 1e-9);

/// Scale-normalized, lexicographically sorted copy for row-for-row
/// comparisons: each inequality is divided by its max-abs coefficient,
/// equalities additionally get a positive leading coefficient, and trivially
/// true rows are dropped.
Polyhedron canonical_form(const Polyhedron& p, double tol = 1e-9);

/// Row-for-row equality of canonical forms within tol.
bool same_rows(const Polyhedron& a, const Polyhedron& b, double tol = 1e-9);

}  // namespace ddurobust
