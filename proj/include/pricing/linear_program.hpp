#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pricing/simplex.hpp"

namespace pricing::lp {

// General-form LP: maximize objective'x subject to constraints x (senses) rhs
// and lower <= x <= upper. Defaults give x >= 0 with no upper bound.
struct LinearProgram {
  Eigen::VectorXd objective;
  Eigen::MatrixXd constraints;  // m x n
  std::vector<Sense> senses;
  Eigen::VectorXd rhs;
  Eigen::VectorXd lower;  // -inf allowed (free below)
  Eigen::VectorXd upper;  // +inf allowed
  double tolerance = 1e-9;

  explicit LinearProgram(int num_vars = 0, int num_rows_hint = 0);

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(senses.size()); }

  void add_row(const Eigen::VectorXd& coefficients, Sense sense, double rhs_value);
};

struct LpSolution {
  Status status = Status::IterationLimit;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd duals;
  // Largest violation among primal feasibility, dual feasibility, and the
  // duality gap; the optimality certificate for this solution.
  double certificate_residual = 0.0;
  int iterations = 0;
  std::string note;
};

LpSolution solve_lp(const LinearProgram& lp, int max_iterations = 0);

}  // namespace pricing::lp
