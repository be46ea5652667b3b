#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <random>

#include "pricing/linear_program.hpp"

using namespace pricing::lp;

namespace {

LinearProgram make_lp(int n) { return LinearProgram(n); }

Eigen::VectorXd vec(std::initializer_list<double> vals) {
  Eigen::VectorXd v(static_cast<int>(vals.size()));
  int i = 0;
  for (double x : vals) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("single variable box") {
  auto lp = make_lp(1);
  lp.objective = vec({1.0});
  lp.add_row(vec({1.0}), Sense::Le, 1.0);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.x[0] == doctest::Approx(1.0));
  CHECK(sol.certificate_residual <= 1e-7);
}

TEST_CASE("two variable simplex face") {
  auto lp = make_lp(2);
  lp.objective = vec({1.0, 1.0});
  lp.add_row(vec({1.0, 1.0}), Sense::Le, 1.0);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
}

TEST_CASE("infeasible bounds are detected") {
  auto lp = make_lp(1);
  lp.objective = vec({1.0});
  lp.add_row(vec({1.0}), Sense::Ge, 2.0);
  lp.add_row(vec({1.0}), Sense::Le, 1.0);
  CHECK(solve_lp(lp).status == Status::Infeasible);
}

TEST_CASE("unbounded ray is detected") {
  auto lp = make_lp(1);
  lp.objective = vec({1.0});
  lp.add_row(vec({-1.0}), Sense::Le, 5.0);
  CHECK(solve_lp(lp).status == Status::Unbounded);
}

TEST_CASE("equality rows, negative rhs, general bounds") {
  // maximize x + 2y + 3z  s.t.  x + y + z = 1, -x - y <= -0.5,
  // 0 <= z <= 0.4, y free below via lower = -1.
  auto lp = make_lp(3);
  lp.objective = vec({1.0, 2.0, 3.0});
  lp.lower = vec({0.0, -1.0, 0.0});
  lp.upper[2] = 0.4;
  lp.add_row(vec({1.0, 1.0, 1.0}), Sense::Eq, 1.0);
  lp.add_row(vec({-1.0, -1.0, 0.0}), Sense::Le, -0.5);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == Status::Optimal);
  // z at its cap, the rest on y (better than x).
  CHECK(sol.x[2] == doctest::Approx(0.4));
  CHECK(sol.x[1] == doctest::Approx(0.6));
  CHECK(sol.objective == doctest::Approx(0.6 * 2 + 0.4 * 3));
  CHECK(sol.certificate_residual <= 1e-7);
}

TEST_CASE("free variable can go negative") {
  auto lp = make_lp(2);
  lp.objective = vec({-1.0, 0.0});
  lp.lower = vec({-std::numeric_limits<double>::infinity(), 0.0});
  lp.add_row(vec({1.0, 1.0}), Sense::Eq, -2.0);
  lp.add_row(vec({0.0, 1.0}), Sense::Le, 1.0);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.x[0] == doctest::Approx(-3.0));
  CHECK(sol.x[1] == doctest::Approx(1.0));
}

TEST_CASE("beale cycling example terminates") {
  // Classic degenerate Dantzig cycler; the Bland fallback must finish it.
  auto lp = make_lp(4);
  lp.objective = vec({0.75, -150.0, 0.02, -6.0});
  lp.add_row(vec({0.25, -60.0, -1.0 / 25.0, 9.0}), Sense::Le, 0.0);
  lp.add_row(vec({0.5, -90.0, -1.0 / 50.0, 3.0}), Sense::Le, 0.0);
  lp.add_row(vec({0.0, 0.0, 1.0, 0.0}), Sense::Le, 1.0);
  auto sol = solve_lp(lp);
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective == doctest::Approx(0.05));
}

TEST_CASE("random small LPs agree with vertex enumeration") {
  // Oracle: enumerate all constraint-pair intersections (plus axes) of a
  // 2-variable system and take the best feasible point.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.2, 1.5);
  for (int rep = 0; rep < 50; ++rep) {
    constexpr int rows = 5;
    Eigen::MatrixXd A(rows, 2);
    Eigen::VectorXd b(rows);
    for (int i = 0; i + 1 < rows; ++i) {
      A(i, 0) = coef(rng);
      A(i, 1) = coef(rng);
      b[i] = pos(rng);
    }
    // Bounding box keeps the polytope compact, so Optimal is the only
    // admissible status.
    A.row(rows - 1) << 1.0, 1.0;
    b[rows - 1] = 3.0;
    Eigen::VectorXd c = vec({coef(rng), coef(rng)});

    // Candidate vertices: intersections of row pairs, row/axis, origin.
    std::vector<Eigen::Vector2d> candidates{{0.0, 0.0}};
    for (int i = 0; i < rows; ++i) {
      for (int j = i + 1; j < rows; ++j) {
        Eigen::Matrix2d M;
        M << A(i, 0), A(i, 1), A(j, 0), A(j, 1);
        if (std::abs(M.determinant()) < 1e-9) continue;
        candidates.emplace_back(M.inverse() * Eigen::Vector2d(b[i], b[j]));
      }
      if (std::abs(A(i, 0)) > 1e-9) candidates.emplace_back(b[i] / A(i, 0), 0.0);
      if (std::abs(A(i, 1)) > 1e-9) candidates.emplace_back(0.0, b[i] / A(i, 1));
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : candidates) {
      if (p[0] < -1e-9 || p[1] < -1e-9) continue;
      if (((A * p).array() > b.array() + 1e-9).any()) continue;
      best = std::max(best, c.dot(p));
    }

    auto lp = make_lp(2);
    lp.objective = c;
    for (int i = 0; i < rows; ++i) lp.add_row(A.row(i), Sense::Le, b[i]);
    auto sol = solve_lp(lp);
    if (sol.status == Status::Optimal) {
      CHECK(sol.objective == doctest::Approx(best).epsilon(1e-7));
      CHECK(sol.certificate_residual <= 1e-7);
    } else {
      // Feasible (origin) and bounded problems must come back optimal.
      CHECK(sol.status == Status::Unbounded);
      CHECK(best == -std::numeric_limits<double>::infinity());
    }
  }
}

TEST_CASE("exact rational mode reproduces double results") {
  using Rational = boost::multiprecision::cpp_rational;
  using Solver = SimplexSolver<Rational, ExactScalarPolicy<Rational>>;
  using RVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
  using RMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

  // maximize 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x,y >= 0 -> (4, 0).
  RMat A(2, 2);
  A << 1, 1, 1, 3;
  RVec b(2);
  b << 4, 6;
  RVec c(2);
  c << 3, 2;
  Solver solver;
  auto sol = solver.solve(A, {Sense::Le, Sense::Le}, b, c);
  REQUIRE(sol.status == Status::Optimal);
  CHECK(sol.objective == Rational(12));
  CHECK(sol.x[0] == Rational(4));
  CHECK(sol.x[1] == Rational(0));

  // Degenerate equality case stays exact: x + y = 1, maximize x - y.
  RMat A2(1, 2);
  A2 << 1, 1;
  RVec b2(1);
  b2 << 1;
  RVec c2(2);
  c2 << 1, -1;
  Solver solver2;
  auto sol2 = solver2.solve(A2, {Sense::Eq}, b2, c2);
  REQUIRE(sol2.status == Status::Optimal);
  CHECK(sol2.objective == Rational(1));
}

TEST_CASE("iteration cap reports a diagnostic") {
  auto lp = make_lp(2);
  lp.objective = vec({1.0, 1.0});
  lp.add_row(vec({1.0, 1.0}), Sense::Le, 1.0);
  auto sol = solve_lp(lp, 1);
  CHECK(sol.status == Status::IterationLimit);
  CHECK(!sol.note.empty());
}
