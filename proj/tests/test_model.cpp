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

#include "ddurobust/examples.hpp"
#include "ddurobust/model.hpp"

using namespace ddurobust;

TEST_CASE("bundled cases pass dimensional and structural validation") {
  for (int id : {8, 9, 10, 11, 12, 13}) {
    const TsroProblem p = bundled_case(id);
    CAPTURE(id);
    CHECK_NOTHROW(p.check_dimensions());
    const auto rep = validate(p);
    CHECK(rep.ok());
  }
}

TEST_CASE("instantiation at x=(1,1) reproduces the frozen right-hand side") {
  const TsroProblem p = bundled_case(8);
  const Polyhedron U = instantiate_ddus(p, make_vector({1.0, 1.0}));
  REQUIRE(U.rows().size() == 6);
  const Vector want_rhs = make_vector({15, 13, 23, 22, 7, -40});
  for (int i = 0; i < 6; ++i)
    CHECK(U.rows()[static_cast<size_t>(i)].rhs ==
          doctest::Approx(want_rhs[i]).epsilon(1e-12));
}

TEST_CASE("scenario polytope corners at x=(1,1)") {
  // Corner points solved by hand from the active row pairs of the
  // instantiated set: a pentagon.
  const TsroProblem p = bundled_case(8);
  const auto vs = vertices(instantiate_ddus(p, make_vector({1.0, 1.0})));
  REQUIRE(vs.points.size() == 5);
  const std::vector<Vector> want = {
      make_vector({11.0 / 19.0, 224.0 / 19.0}),
      make_vector({3.0, 13.0}),
      make_vector({301.0 / 68.0, 26.0 / 17.0}),
      make_vector({9.0, 13.0}),
      make_vector({161.0 / 11.0, 81.0 / 11.0}),
  };
  for (size_t i = 0; i < want.size(); ++i)
    CHECK(approx_equal(vs.points[i], want[i], 1e-9));
}

TEST_CASE("separable instantiation is the translated base set") {
  const TsroProblem p = bundled_case(10);
  const Vector x = make_vector({1.0, -1.0});
  const Polyhedron U = instantiate_ddus(p, x);
  Polyhedron want(2);
  want.add_row(make_vector({1.0, 0.0}), Relation::LessEq, 2.0);
  want.add_row(make_vector({-1.0, 0.0}), Relation::LessEq, 0.0);
  want.add_row(make_vector({0.0, 1.0}), Relation::LessEq, 0.0);
  want.add_row(make_vector({0.0, -1.0}), Relation::LessEq, 2.0);
  want.add_row(make_vector({1.0, -1.0}), Relation::LessEq, 3.0);
  want.add_row(make_vector({-1.0, 1.0}), Relation::LessEq, -1.0);
  CHECK(same_rows(U, want, 1e-7));
}

TEST_CASE("multiplier support sets have the advertised membership") {
  const TsroProblem p = bundled_case(8);
  const Polyhedron Xi = xi_support(p);
  CHECK(Xi.dim() == 6);
  CHECK(Xi.member(make_vector({0, -1, 0, -1, -1, 0})));
  CHECK(Xi.member(Vector::Zero(6)));
  CHECK(!Xi.member(make_vector({0.5, 0, 0, 0, 0, 0})));   // sign
  CHECK(!Xi.member(make_vector({-1, 0, 0, 0, 0, 0})));    // B' xi <= 0 fails
  const Polyhedron Pi = pi_support(p);
  CHECK(Pi.member(Vector::Zero(6)));
  CHECK(Pi.member(make_vector({0, -1, 0, 0, 0, 0})));
  CHECK(!Pi.member(make_vector({0, 0, 0, 0, 0, 0.1})));
}

TEST_CASE("coupling argmax maximizes and breaks ties lexicographically") {
  const TsroProblem p = bundled_case(8);
  const Vector x = make_vector({1.0, 1.0});
  // Multiplier loading the lower band edge pushes toward large u1.
  const Vector u1max =
      coupling_argmax(p, make_vector({0, -1, 0, -1, -1, 0}), x);
  CHECK(approx_equal(u1max, make_vector({161.0 / 11.0, 81.0 / 11.0}), 1e-7));
  // Zero multiplier leaves the whole set optimal; the lex-min corner wins.
  const Vector tie = coupling_argmax(p, Vector::Zero(6), x);
  CHECK(approx_equal(tie, make_vector({11.0 / 19.0, 224.0 / 19.0}), 1e-7));
  // Empty instantiated set is a contract violation.
  CHECK_THROWS_AS(
      (void)coupling_argmax(p, Vector::Zero(6), make_vector({0.0, 0.0})),
      ModelError);
}

TEST_CASE("slack distance and its multiplier at a non-dispatchable scenario") {
  const TsroProblem p = bundled_case(8);
  Vector xi;
  const double r =
      slack_value(p, make_vector({1.0, 1.0}), make_vector({3.0, 8.0}), &xi);
  CHECK(r == doctest::Approx(1.0));
  const Vector want = make_vector({0, -1, 0, -1, -1, 0});
  for (int i = 0; i < 6; ++i)
    CHECK(xi[i] == doctest::Approx(want[i]).epsilon(1e-9));
  CHECK(xi_support(p).member(xi, 1e-9));
  // Dual identity: the multiplier prices exactly the slack distance.
  const Vector rhs = p.b - p.A * make_vector({1.0, 1.0}) -
                     p.C * make_vector({3.0, 8.0});
  CHECK(xi.dot(rhs) == doctest::Approx(r));
}

TEST_CASE("recourse value, its multiplier, and the infeasible branch") {
  const TsroProblem p = bundled_case(8);
  const Vector x = make_vector({1.0, 1.0});
  Vector pi, y;
  const double v = recourse_value(p, x, make_vector({1.0, 1.0}), &pi, &y);
  CHECK(v == doctest::Approx(1.0));  // y1+y2 = 3 with y2 <= 2 forces y1 >= 1
  CHECK(pi_support(p).member(pi, 1e-9));
  const Vector rhs = p.b - p.A * x - p.C * make_vector({1.0, 1.0});
  CHECK(pi.dot(rhs) == doctest::Approx(v));
  CHECK(p.c.dot(y) == doctest::Approx(v));
  CHECK_THROWS_AS(
      (void)recourse_value(p, x, make_vector({3.0, 8.0}), nullptr, nullptr),
      ModelError);
}

TEST_CASE("freezing the uncertainty keeps the snapshot across first stages") {
  const TsroProblem p = bundled_case(11);
  const TsroProblem q = freeze_uncertainty(p, make_vector({0.9}));
  const Polyhedron u_low = instantiate_ddus(q, make_vector({0.8}));
  const Polyhedron u_high = instantiate_ddus(q, make_vector({2.2}));
  CHECK(same_rows(u_low, u_high));
  CHECK(u_low.member(make_vector({1.0, 9.0})));
  // The snapshot at 0.9 caps u1 by 1.8 (the 2x row), unlike the live set.
  CHECK(!u_low.member(make_vector({2.5, 9.0})));
  CHECK(instantiate_ddus(p, make_vector({1.5})).member(make_vector({2.5, 9.0})));
}

TEST_CASE("fixed-spec lifts instantiate to the same scenario polytope") {
  const TsroProblem frozen = freeze_uncertainty(bundled_case(11), make_vector({0.9}));
  const TsroProblem sep = lift_to_separable(frozen);
  const TsroProblem rhs = lift_to_affine_rhs(frozen);
  const Vector x = make_vector({1.7});
  const Polyhedron want = instantiate_ddus(frozen, x);
  CHECK(contains(want, instantiate_ddus(sep, x)).contained);
  CHECK(contains(instantiate_ddus(sep, x), want).contained);
  CHECK(contains(want, instantiate_ddus(rhs, x)).contained);
  CHECK(contains(instantiate_ddus(rhs, x), want).contained);
  CHECK_THROWS_AS((void)lift_to_separable(bundled_case(11)), ModelError);
}

TEST_CASE("bilinear coupling blocks enter the effective map") {
  // u = xi * (1 + x): E = I scaled through W at fixed x.
  SeparableSpec s;
  Polyhedron Xi(1);
  Xi.add_row(make_vector({1.0}), Relation::LessEq, 1.0);
  Xi.add_row(make_vector({-1.0}), Relation::LessEq, 1.0);
  s.Xi = std::move(Xi);
  s.E = Matrix::Identity(1, 1);
  s.F = Matrix::Zero(1, 1);
  s.h = Vector::Zero(1);
  s.W = {Matrix::Identity(1, 1)};
  CHECK(!s.affine());
  const Vector x = make_vector({0.5});
  CHECK(s.map(make_vector({1.0}), x)[0] == doctest::Approx(1.5));
  CHECK(s.effective_E(x)(0, 0) == doctest::Approx(1.5));

  TsroProblem p;
  p.name = "bilinear-toy";
  p.X = Polyhedron(1);
  p.X.add_row(make_vector({1.0}), Relation::LessEq, 1.0);
  p.X.add_row(make_vector({-1.0}), Relation::LessEq, 0.0);
  p.A = Matrix::Zero(1, 1);
  p.B = make_matrix(1, 1, {1.0});
  p.C = make_matrix(1, 1, {1.0});
  p.b = make_vector({2.0});
  p.c = make_vector({0.0});
  p.uncertainty = s;
  const Polyhedron U = instantiate_ddus(p, x);
  Polyhedron want(1);
  want.add_row(make_vector({1.0}), Relation::LessEq, 1.5);
  want.add_row(make_vector({-1.0}), Relation::LessEq, 1.5);
  CHECK(same_rows(U, want, 1e-7));
}

TEST_CASE("validation flags an unbounded recourse") {
  TsroProblem p;
  p.name = "unbounded-recourse-toy";
  p.X = Polyhedron(1);
  p.X.add_row(make_vector({1.0}), Relation::LessEq, 1.0);
  p.X.add_row(make_vector({-1.0}), Relation::LessEq, 0.0);
  p.A = Matrix::Zero(2, 1);
  p.B = make_matrix(2, 2, {-1, 0, 0, -1});  // y >= 0 only: a free quadrant
  p.C = Matrix::Zero(2, 2);
  p.b = Vector::Zero(2);
  p.c = make_vector({1.0, 1.0});
  Polyhedron U0(2);
  U0.add_row(make_vector({1.0, 0.0}), Relation::LessEq, 1.0);
  U0.add_row(make_vector({-1.0, 0.0}), Relation::LessEq, 0.0);
  U0.add_row(make_vector({0.0, 1.0}), Relation::LessEq, 1.0);
  U0.add_row(make_vector({0.0, -1.0}), Relation::LessEq, 0.0);
  p.uncertainty = FixedSpec{std::move(U0)};
  const auto rep = validate(p);
  CHECK(!rep.ok());
}
