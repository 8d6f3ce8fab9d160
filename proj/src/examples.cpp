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

#include "ddurobust/examples.hpp"

namespace ddurobust {

namespace {

// Two-sided band recourse  u1 <= y1 + y2 - 2 <= u2  with y in [0, 2]^2,
// written as B y + C u <= b over nonnegative y.  Row order: the four box
// rows, then the lower band edge, then the upper band edge.
void band_recourse(TsroProblem& p, int n_x) {
  p.A = Matrix::Zero(6, n_x);
  p.B = make_matrix(6, 2, {-1, 0,
                            1, 0,
                            0, -1,
                            0, 1,
                           -1, -1,
                            1, 1});
  p.C = make_matrix(6, 2, {0, 0,
                           0, 0,
                           0, 0,
                           0, 0,
                           1, 0,
                           0, -1});
  p.b = make_vector({0, 2, 0, 2, -2, 2});
  p.c = Vector::Zero(2);
}

Polyhedron interval_box(std::initializer_list<std::pair<double, double>> lims) {
  Polyhedron X(static_cast<int>(lims.size()));
  int j = 0;
  for (const auto& [lo, hi] : lims) {
    Vector a = Vector::Zero(X.dim());
    a[j] = 1.0;
    X.add_row(a, Relation::LessEq, hi);
    X.add_row(-a, Relation::LessEq, -lo);
    ++j;
  }
  return X;
}

TsroProblem case8() {
  TsroProblem p;
  p.name = "case8";
  p.X = interval_box({{0.0, 1.0}, {0.0, 1.0}});
  band_recourse(p, 2);
  p.c = make_vector({1.0, 0.0});
  AffineRhsSpec s;
  s.G = make_matrix(6, 2, { 1,  0,
                            0,  1,
                           -1,  2,
                            1,  1,
                            4, -7,
                           -8, -3});
  s.g0 = make_vector({0, 0, 8, 13, -25, -40});
  s.H = make_matrix(6, 2, { 7,  8,
                            0, 13,
                            0, 15,
                            7,  2,
                           21, 11,
                            0,  0});
  p.uncertainty = std::move(s);
  return p;
}

TsroProblem case9() {
  TsroProblem p = case8();
  p.name = "case9";
  auto& s = std::get<AffineRhsSpec>(p.uncertainty);
  s.H(0, 0) = 1.0;  // first row becomes  u1 <= x1 + x2
  s.H(0, 1) = 1.0;
  return p;
}

TsroProblem case10() {
  TsroProblem p;
  p.name = "case10";
  p.X = interval_box({{-3.0, 3.0}, {-3.0, 3.0}});
  band_recourse(p, 2);
  SeparableSpec s;
  // Hexagonal base set: hull of (1,1),(1,0),(0,-1),(-1,-1),(-1,0),(0,1).
  Polyhedron Xi(2);
  Xi.add_row(make_vector({1.0, 0.0}), Relation::LessEq, 1.0);
  Xi.add_row(make_vector({-1.0, 0.0}), Relation::LessEq, 1.0);
  Xi.add_row(make_vector({0.0, 1.0}), Relation::LessEq, 1.0);
  Xi.add_row(make_vector({0.0, -1.0}), Relation::LessEq, 1.0);
  Xi.add_row(make_vector({1.0, -1.0}), Relation::LessEq, 1.0);
  Xi.add_row(make_vector({-1.0, 1.0}), Relation::LessEq, 1.0);
  s.Xi = std::move(Xi);
  s.E = Matrix::Identity(2, 2);
  s.F = Matrix::Identity(2, 2);
  s.h = Vector::Zero(2);
  p.uncertainty = std::move(s);
  return p;
}

TsroProblem case11() {
  TsroProblem p;
  p.name = "case11";
  p.X = interval_box({{0.8, 2.2}});
  band_recourse(p, 1);
  AffineRhsSpec s;
  s.G = make_matrix(11, 2, { 1,  0,
                             1,  0,
                             0,  1,
                            -1,  2,
                             1,  1,
                             4, -7,
                            -8, -3,
                            -1,  0,
                             1,  0,
                             0, -1,
                             0,  1});
  s.g0 = make_vector({6, 0, 0, 8, 31, -25, -20, 0, 3, -8, 13});
  s.H = make_matrix(11, 1, {-2, 2, 13, 15, -9, 32, 0, 0, 0, 0, 0});
  p.uncertainty = std::move(s);
  return p;
}

TsroProblem case12() {
  TsroProblem p = case11();
  p.name = "case12";
  p.f.pieces.push_back({make_vector({1.0}), -1.5});
  p.f.pieces.push_back({make_vector({-1.0}), 1.5});
  return p;
}

TsroProblem case13() {
  TsroProblem p = case12();
  p.name = "case13";
  p.A(4, 0) = -0.5;  // lower band edge becomes  u1 - 0.5 x <= y1 + y2 - 2
  p.A(5, 0) = -0.5;  // upper band edge becomes  y1 + y2 - 2 <= u2 + 0.5 x
  return p;
}

}  // namespace

TsroProblem bundled_case(int id) {
  switch (id) {
    case 8: return case8();
    case 9: return case9();
    case 10: return case10();
    case 11: return case11();
    case 12: return case12();
    case 13: return case13();
    default: throw ModelError("unknown bundled case id");
  }
}

}  // namespace ddurobust
