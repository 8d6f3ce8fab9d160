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

#include "ddurobust/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace ddurobust {

Polyhedron::Polyhedron(int dim, std::vector<std::string> names)
    : dim_(dim), names_(std::move(names)) {
  if (dim_ < 0) throw GeometryError("negative dimension");
  if (!names_.empty() && static_cast<int>(names_.size()) != dim_)
    throw GeometryError("dimension name count mismatch");
}

void Polyhedron::add_row(Vector a, Relation rel, double rhs) {
  if (a.size() != dim_) throw GeometryError("row dimension mismatch");
  if (rel == Relation::GreaterEq) {  // normalize on entry
    a = -a;
    rhs = -rhs;
    rel = Relation::LessEq;
  }
  rows_.push_back(PolyRow{std::move(a), rel, rhs});
}

void Polyhedron::add_rows(const Matrix& A, Relation rel, const Vector& rhs) {
  if (A.rows() != rhs.size()) throw GeometryError("rhs length mismatch");
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    add_row(A.row(i).transpose(), rel, rhs[i]);
}

std::vector<PolyRow> Polyhedron::canonical_rows() const {
  std::vector<PolyRow> out;
  for (const auto& r : rows_) {
    out.push_back(PolyRow{r.a, Relation::LessEq, r.rhs});
    if (r.rel == Relation::Equal)
      out.push_back(PolyRow{-r.a, Relation::LessEq, -r.rhs});
  }
  return out;
}

bool Polyhedron::member(const Vector& pt, double tol) const {
  return violation(pt) <= tol;
}

double Polyhedron::violation(const Vector& pt) const {
  if (pt.size() != dim_) throw GeometryError("point dimension mismatch");
  double worst = -kInf;
  for (const auto& r : rows_) {
    const double g = r.a.dot(pt) - r.rhs;
    worst = std::max(worst, r.rel == Relation::Equal ? std::abs(g) : g);
  }
  return rows_.empty() ? 0.0 : worst;
}

namespace {

LpProblem feasibility_lp(const Polyhedron& p) {
  LpProblem lp(p.dim());
  for (const auto& r : p.rows()) lp.add_row(r.a, r.rel, r.rhs);
  return lp;
}

}  // namespace

EmptinessResult is_empty(const Polyhedron& p) {
  EmptinessResult res;
  const auto out = solve(feasibility_lp(p));
  if (is_optimal(out)) {
    res.witness = get_optimal(out).x;
    return res;
  }
  const auto& inf = std::get<LpInfeasible>(out);
  // Map per-row multipliers onto the canonical (all <=) row list: an equality
  // multiplier lands on whichever of its two opposing copies keeps it >= 0.
  std::vector<double> cert;
  for (size_t i = 0; i < p.rows().size(); ++i) {
    const double w = inf.row_mult[static_cast<int>(i)];
    if (p.rows()[i].rel == Relation::Equal) {
      cert.push_back(std::max(w, 0.0));
      cert.push_back(std::max(-w, 0.0));
    } else {
      cert.push_back(std::max(w, 0.0));
    }
  }
  Vector c(static_cast<int>(cert.size()));
  for (size_t i = 0; i < cert.size(); ++i) c[static_cast<int>(i)] = cert[i];
  res.certificate = std::move(c);
  return res;
}

namespace {

// Number of k-subsets of n, saturating at `cap`.
double combinations(int n, int k, double cap) {
  if (k < 0 || k > n) return 0.0;
  double v = 1.0;
  for (int i = 0; i < k; ++i) {
    v *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (v > cap) return cap + 1.0;
  }
  return v;
}

VertexSet enumerate_basic(const Polyhedron& p, const EnumerationOptions& opt) {
  VertexSet vs;
  vs.dim = p.dim();
  const int dim = p.dim();
  if (dim == 0) return vs;

  std::vector<const PolyRow*> eqs, ineqs;
  for (const auto& r : p.rows())
    (r.rel == Relation::Equal ? eqs : ineqs).push_back(&r);

  // Rank of the mandatory equality block decides how many inequality rows an
  // active set still needs.
  int eq_rank = 0;
  Matrix E(static_cast<int>(eqs.size()), dim);
  Vector erhs(static_cast<int>(eqs.size()));
  for (size_t i = 0; i < eqs.size(); ++i) {
    E.row(static_cast<int>(i)) = eqs[i]->a.transpose();
    erhs[static_cast<int>(i)] = eqs[i]->rhs;
  }
  if (!eqs.empty()) {
    Eigen::FullPivLU<Matrix> lu(E);
    eq_rank = static_cast<int>(lu.rank());
  }
  const int k = dim - eq_rank;
  if (k < 0) return vs;
  if (combinations(static_cast<int>(ineqs.size()), k,
                   static_cast<double>(opt.basis_budget)) >
      static_cast<double>(opt.basis_budget))
    throw BudgetError("active-set enumeration budget exceeded");

  std::vector<Vector> found;
  const int ni = static_cast<int>(ineqs.size());
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  const bool any = k == 0 || ni >= k;
  while (any) {
    Matrix M(static_cast<int>(eqs.size()) + k, dim);
    Vector v(M.rows());
    for (size_t i = 0; i < eqs.size(); ++i) {
      M.row(static_cast<int>(i)) = E.row(static_cast<int>(i));
      v[static_cast<int>(i)] = erhs[static_cast<int>(i)];
    }
    for (int i = 0; i < k; ++i) {
      M.row(static_cast<int>(eqs.size()) + i) = ineqs[idx[i]]->a.transpose();
      v[static_cast<int>(eqs.size()) + i] = ineqs[idx[i]]->rhs;
    }
    Eigen::FullPivLU<Matrix> lu(M);
    if (static_cast<int>(lu.rank()) == dim) {
      Vector x = lu.solve(v);
      const double resid = (M * x - v).lpNorm<Eigen::Infinity>();
      if (resid <= 1e-8 * (1.0 + v.lpNorm<Eigen::Infinity>()) &&
          p.member(x, opt.feas_tol * (1.0 + x.lpNorm<Eigen::Infinity>())))
        found.push_back(std::move(x));
    }
    // next combination
    if (k == 0) break;
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == ni - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }

  std::sort(found.begin(), found.end(),
            [](const Vector& a, const Vector& b) { return lex_less(a, b, 0.0); });
  for (const auto& x : found) {
    bool dup = false;
    for (const auto& y : vs.points)
      if ((x - y).lpNorm<Eigen::Infinity>() <= opt.dedup_tol) {
        dup = true;
        break;
      }
    if (!dup) vs.points.push_back(x);
  }
  return vs;
}

}  // namespace

VertexSet vertices(const Polyhedron& p, const EnumerationOptions& opt) {
  if (is_empty(p).empty()) return VertexSet{{}, p.dim()};
  for (int j = 0; j < p.dim(); ++j)
    for (double s : {1.0, -1.0}) {
      LpProblem lp = feasibility_lp(p);
      lp.sense = Sense::Maximize;
      lp.objective[j] = s;
      const auto out = solve(lp);
      if (std::holds_alternative<LpUnbounded>(out))
        throw UnboundedSetError(std::get<LpUnbounded>(out).direction);
    }
  return enumerate_basic(p, opt);
}

VertexSet basic_points(const Polyhedron& p, const EnumerationOptions& opt) {
  if (is_empty(p).empty()) return VertexSet{{}, p.dim()};
  return enumerate_basic(p, opt);
}

Polyhedron remove_redundancy(const Polyhedron& p, double tol) {
  std::vector<PolyRow> kept(p.rows().begin(), p.rows().end());
  for (size_t i = 0; i < kept.size();) {
    if (kept[i].rel == Relation::Equal ||
        kept[i].a.lpNorm<Eigen::Infinity>() <= tol) {
      // Keep equalities; drop trivially true zero rows, keep inconsistent
      // ones (they encode emptiness).
      if (kept[i].rel == Relation::LessEq &&
          kept[i].a.lpNorm<Eigen::Infinity>() <= tol && kept[i].rhs >= -tol) {
        kept.erase(kept.begin() + static_cast<long>(i));
        continue;
      }
      ++i;
      continue;
    }
    LpProblem lp(p.dim());
    lp.sense = Sense::Maximize;
    lp.objective = kept[i].a;
    for (size_t j = 0; j < kept.size(); ++j)
      if (j != i) lp.add_row(kept[j].a, kept[j].rel, kept[j].rhs);
    const auto out = solve(lp);
    if (is_optimal(out) &&
        get_optimal(out).objective <=
            kept[i].rhs + tol * (1.0 + std::abs(kept[i].rhs))) {
      kept.erase(kept.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
  Polyhedron out(p.dim(), p.names());
  for (auto& r : kept) out.add_row(r.a, r.rel, r.rhs);
  return out;
}

Polyhedron project(const Polyhedron& p, const std::vector<int>& keep,
                   const ProjectOptions& opt) {
  std::vector<bool> keep_mask(p.dim(), false);
  for (int k : keep) {
    if (k < 0 || k >= p.dim()) throw GeometryError("projection index range");
    keep_mask[k] = true;
  }
  std::vector<PolyRow> rows(p.rows().begin(), p.rows().end());

  auto cleanup = [&](std::vector<PolyRow>& rs) {
    for (size_t i = 0; i < rs.size();) {
      if (rs[i].a.lpNorm<Eigen::Infinity>() <= opt.drop_tol &&
          !(rs[i].rel == Relation::LessEq && rs[i].rhs < -opt.drop_tol) &&
          !(rs[i].rel == Relation::Equal && std::abs(rs[i].rhs) > opt.drop_tol))
        rs.erase(rs.begin() + static_cast<long>(i));
      else
        ++i;
    }
  };

  for (int e = p.dim() - 1; e >= 0; --e) {
    if (keep_mask[e]) continue;
    // Substitution through an equality pivot when one exists.
    int piv = -1;
    for (size_t i = 0; i < rows.size(); ++i)
      if (rows[i].rel == Relation::Equal && std::abs(rows[i].a[e]) > opt.drop_tol) {
        piv = static_cast<int>(i);
        break;
      }
    if (piv >= 0) {
      const PolyRow pr = rows[static_cast<size_t>(piv)];
      rows.erase(rows.begin() + piv);
      for (auto& r : rows) {
        if (std::abs(r.a[e]) <= opt.drop_tol) { r.a[e] = 0.0; continue; }
        const double f = r.a[e] / pr.a[e];
        r.a -= f * pr.a;
        r.rhs -= f * pr.rhs;
        r.a[e] = 0.0;
      }
    } else {
      std::vector<PolyRow> pos, neg, zero;
      for (auto& r : rows) {
        if (r.a[e] > opt.drop_tol) pos.push_back(std::move(r));
        else if (r.a[e] < -opt.drop_tol) neg.push_back(std::move(r));
        else { r.a[e] = 0.0; zero.push_back(std::move(r)); }
      }
      const long produced = static_cast<long>(pos.size()) *
                            static_cast<long>(neg.size()) +
                            static_cast<long>(zero.size());
      if (produced > opt.max_rows)
        throw BudgetError("elimination row budget exceeded");
      std::vector<PolyRow> next = std::move(zero);
      for (const auto& rp : pos)
        for (const auto& rn : neg) {
          PolyRow r;
          r.rel = Relation::LessEq;
          r.a = rp.a / rp.a[e] + rn.a / (-rn.a[e]);
          r.rhs = rp.rhs / rp.a[e] + rn.rhs / (-rn.a[e]);
          r.a[e] = 0.0;
          next.push_back(std::move(r));
        }
      rows = std::move(next);
    }
    cleanup(rows);
    if (opt.remove_redundant) {
      Polyhedron tmp(p.dim());
      for (auto& r : rows) tmp.add_row(r.a, r.rel, r.rhs);
      const Polyhedron pruned = remove_redundancy(tmp);
      rows.assign(pruned.rows().begin(), pruned.rows().end());
    }
  }

  std::vector<std::string> names;
  if (!p.names().empty())
    for (int k : keep) names.push_back(p.names()[static_cast<size_t>(k)]);
  Polyhedron out(static_cast<int>(keep.size()), std::move(names));
  for (const auto& r : rows) {
    Vector a(static_cast<int>(keep.size()));
    for (size_t i = 0; i < keep.size(); ++i) a[static_cast<int>(i)] = r.a[keep[i]];
    out.add_row(std::move(a), r.rel, r.rhs);
  }
  return out;
}

ContainsResult contains(const Polyhedron& outer, const Polyhedron& inner,
                        double tol) {
  if (outer.dim() != inner.dim()) throw GeometryError("dimension mismatch");
  ContainsResult res;
  const VertexSet vs = vertices(inner);
  if (vs.points.empty()) {
    res.contained = true;
    res.vacuous = true;
    return res;
  }
  const auto crows = outer.canonical_rows();
  for (const auto& v : vs.points) {
    for (size_t i = 0; i < crows.size(); ++i) {
      if (crows[i].a.dot(v) > crows[i].rhs + tol) {
        res.contained = false;
        res.violator = v;
        res.violated_row = static_cast<int>(i);
        return res;
      }
    }
  }
  res.contained = true;
  return res;
}

SupportResult support(const Polyhedron& p, const Vector& direction) {
  if (direction.size() != p.dim()) throw GeometryError("direction dimension");
  LpProblem lp = feasibility_lp(p);
  lp.sense = Sense::Maximize;
  lp.objective = direction;
  const auto out = solve(lp);
  if (std::holds_alternative<LpUnbounded>(out))
    throw UnboundedSetError(std::get<LpUnbounded>(out).direction);
  if (std::holds_alternative<LpInfeasible>(out))
    throw GeometryError("support function of an empty set");
  const auto& o = get_optimal(out);
  return SupportResult{o.objective, o.x};
}

Polyhedron canonical_form(const Polyhedron& p, double tol) {
  std::vector<PolyRow> rows;
  for (const auto& r : p.rows()) {
    const double norm = r.a.lpNorm<Eigen::Infinity>();
    if (norm <= tol) {
      const bool trivially_true =
          (r.rel == Relation::LessEq && r.rhs >= -tol) ||
          (r.rel == Relation::Equal && std::abs(r.rhs) <= tol);
      if (trivially_true) continue;
      rows.push_back(r);  // inconsistent marker row, keep as-is
      continue;
    }
    PolyRow c{r.a / norm, r.rel, r.rhs / norm};
    if (c.rel == Relation::Equal) {
      for (int j = 0; j < c.a.size(); ++j) {
        if (std::abs(c.a[j]) > tol) {
          if (c.a[j] < 0) { c.a = -c.a; c.rhs = -c.rhs; }
          break;
        }
      }
    }
    rows.push_back(std::move(c));
  }
  std::sort(rows.begin(), rows.end(), [&](const PolyRow& x, const PolyRow& y) {
    if (x.rel != y.rel) return x.rel < y.rel;
    if (lex_less(x.a, y.a, tol)) return true;
    if (lex_less(y.a, x.a, tol)) return false;
    return x.rhs < y.rhs - tol;
  });
  Polyhedron out(p.dim(), p.names());
  for (auto& r : rows) out.add_row(r.a, r.rel, r.rhs);
  return out;
}

bool same_rows(const Polyhedron& a, const Polyhedron& b, double tol) {
  const Polyhedron ca = canonical_form(a, tol);
  const Polyhedron cb = canonical_form(b, tol);
  if (ca.dim() != cb.dim() || ca.rows().size() != cb.rows().size())
    return false;
  for (size_t i = 0; i < ca.rows().size(); ++i) {
    const auto& ra = ca.rows()[i];
    const auto& rb = cb.rows()[i];
    if (ra.rel != rb.rel) return false;
    if (!approx_equal(ra.a, rb.a, tol)) return false;
    if (std::abs(ra.rhs - rb.rhs) > tol) return false;
  }
  return true;
}

}  // namespace ddurobust
