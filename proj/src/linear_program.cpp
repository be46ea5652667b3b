#include "pricing/linear_program.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pricing::lp {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LinearProgram::LinearProgram(int num_vars, int num_rows_hint) {
  objective = Eigen::VectorXd::Zero(num_vars);
  constraints.resize(0, num_vars);
  rhs.resize(0);
  lower = Eigen::VectorXd::Zero(num_vars);
  upper = Eigen::VectorXd::Constant(num_vars, kInf);
  if (num_rows_hint > 0) senses.reserve(num_rows_hint);
}

void LinearProgram::add_row(const Eigen::VectorXd& coefficients, Sense sense, double rhs_value) {
  if (coefficients.size() != objective.size())
    throw std::invalid_argument("LinearProgram::add_row: coefficient size mismatch");
  constraints.conservativeResize(constraints.rows() + 1, Eigen::NoChange);
  constraints.row(constraints.rows() - 1) = coefficients.transpose();
  rhs.conservativeResize(rhs.size() + 1);
  rhs[rhs.size() - 1] = rhs_value;
  senses.push_back(sense);
}

LpSolution solve_lp(const LinearProgram& lp, int max_iterations) {
  const int n = lp.num_vars();
  const int m = lp.num_rows();
  if (lp.constraints.rows() != m || lp.constraints.cols() != n || lp.rhs.size() != m ||
      lp.lower.size() != n || lp.upper.size() != n)
    throw std::invalid_argument("solve_lp: inconsistent dimensions");

  // Fold bounds into x >= 0 standard form. Finite lower bounds shift the
  // variable; a -inf lower bound splits it into a positive and negative part;
  // finite upper bounds become extra <= rows.
  struct VarMap {
    int plus;
    int minus;       // -1 unless free below
    double shift;    // finite lower bound
  };
  std::vector<VarMap> vmap(n);
  int ncore = 0;
  for (int j = 0; j < n; ++j) {
    double lo = lp.lower[j], up = lp.upper[j];
    if (std::isfinite(lo) && std::isfinite(up) && up < lo)
      throw std::invalid_argument("solve_lp: upper bound below lower bound");
    if (std::isfinite(lo)) {
      vmap[j] = {ncore++, -1, lo};
    } else {
      int p = ncore++;
      vmap[j] = {p, ncore++, 0.0};
    }
  }

  std::vector<std::pair<int, double>> upper_rows;  // (var, cap on shifted var)
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) upper_rows.emplace_back(j, lp.upper[j] - vmap[j].shift);
  }

  const int mcore = m + static_cast<int>(upper_rows.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(mcore, ncore);
  Eigen::VectorXd b(mcore);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(ncore);
  std::vector<Sense> senses = lp.senses;
  senses.resize(mcore, Sense::Le);

  for (int j = 0; j < n; ++j) {
    c[vmap[j].plus] = lp.objective[j];
    if (vmap[j].minus >= 0) c[vmap[j].minus] = -lp.objective[j];
  }
  for (int i = 0; i < m; ++i) {
    double shift_total = 0.0;
    for (int j = 0; j < n; ++j) {
      double a = lp.constraints(i, j);
      if (a == 0.0) continue;
      A(i, vmap[j].plus) = a;
      if (vmap[j].minus >= 0) A(i, vmap[j].minus) = -a;
      shift_total += a * vmap[j].shift;
    }
    b[i] = lp.rhs[i] - shift_total;
  }
  for (size_t r = 0; r < upper_rows.size(); ++r) {
    auto [j, cap] = upper_rows[r];
    int i = m + static_cast<int>(r);
    A(i, vmap[j].plus) = 1.0;
    if (vmap[j].minus >= 0) A(i, vmap[j].minus) = -1.0;
    b[i] = cap;
  }

  SimplexSolver<double> solver;
  SimplexResult<double> core = solver.solve(A, senses, b, c, max_iterations);

  LpSolution out;
  out.status = core.status;
  out.iterations = core.iterations;
  out.note = core.note;
  if (core.status != Status::Optimal) return out;

  out.x = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    double v = core.x[vmap[j].plus] + vmap[j].shift;
    if (vmap[j].minus >= 0) v -= core.x[vmap[j].minus];
    out.x[j] = v;
  }
  out.objective = lp.objective.dot(out.x);
  out.duals = core.duals.head(m);

  // Optimality certificate on the core standard form: primal feasibility,
  // dual feasibility (sense-signed multipliers, nonpositive reduced costs),
  // and the duality gap.
  double resid = 0.0;
  Eigen::VectorXd Ax = A * core.x;
  for (int i = 0; i < mcore; ++i) {
    double d = Ax[i] - b[i];
    if (senses[i] == Sense::Le) resid = std::max(resid, d);
    else if (senses[i] == Sense::Ge) resid = std::max(resid, -d);
    else resid = std::max(resid, std::abs(d));
  }
  resid = std::max(resid, -core.x.minCoeff());
  Eigen::VectorXd reduced = c - A.transpose() * core.duals;
  for (int j = 0; j < ncore; ++j) resid = std::max(resid, reduced[j]);  // need <= 0
  for (int i = 0; i < mcore; ++i) {
    if (senses[i] == Sense::Le) resid = std::max(resid, -core.duals[i]);
    else if (senses[i] == Sense::Ge) resid = std::max(resid, core.duals[i]);
  }
  resid = std::max(resid, std::abs(c.dot(core.x) - core.duals.dot(b)));
  out.certificate_residual = resid;
  return out;
}

}  // namespace pricing::lp
