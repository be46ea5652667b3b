#include "pricing/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace pricing {

DominanceQuery marginal_domination_witness(const MarketModel& model,
                                           const PriceDistribution& opponent, int x_index) {
  DominanceQuery q;
  if (!model.is_bertrand()) {
    q.failed_precondition = "model is not Bertrand";
    return q;
  }
  int k = model.k();
  if (opponent.k() != k) throw std::invalid_argument("marginal_domination_witness: size mismatch");
  if (x_index < 0 || x_index >= k) throw std::domain_error("marginal_domination_witness: x off grid");

  // Hypotheses: x >= 3/k and opponent mass strictly above x at most 1/(24k).
  if (x_index + 1 < 3) {
    q.failed_precondition = "x below 3/k";
    return q;
  }
  double mass_above = x_index + 1 < k ? opponent.mass_at_or_above(x_index + 1) : 0.0;
  if (mass_above > 1.0 / (24.0 * k) + 1e-15) {
    q.failed_precondition = "opponent mass above x exceeds 1/(24k)";
    return q;
  }

  Eigen::VectorXd v = pure_payoffs(model, opponent);
  int best = -1;
  for (int i = 0; i < x_index; ++i)
    if (best < 0 || v[i] > v[best]) best = i;
  double gap = v[best] - v[x_index];
  double required = 1.0 / (24.0 * double(k) * k);
  if (gap < required) {
    // The hypotheses held, so the lemma promises a witness; reaching this
    // branch would falsify it.
    q.failed_precondition = "no price below x clears the 1/(24k^2) gap";
    return q;
  }
  q.witness = DominanceWitness{x_index, best, gap};
  return q;
}

std::vector<int> iterated_dominance(const MarketModel& model) {
  if (!model.is_bertrand())
    throw std::invalid_argument("iterated_dominance: only the Bertrand rule is supported");
  int k = model.k();
  if (k < 20) throw std::invalid_argument("iterated_dominance: requires k >= 20");

  // Remove the current maximum surviving price while it is >= 3/k; each such
  // price is never a best response to any distribution on the survivors.
  std::vector<int> surviving(k);
  for (int i = 0; i < k; ++i) surviving[i] = i;
  while (!surviving.empty() && surviving.back() + 1 >= 3) surviving.pop_back();
  return surviving;
}

EpsilonNashResult epsilon_nash_check(const MarketModel& model, const PriceDistribution& d1,
                                     const PriceDistribution& d2, double eps) {
  if (eps < 0) throw std::invalid_argument("epsilon_nash_check: eps must be >= 0");
  PayoffMatrices m = payoff_matrices(model);
  auto [u1, u2] = expected_payoff(m, d1, d2);
  double best1 = (m.A * d2.weights()).maxCoeff();
  double best2 = (m.B.transpose() * d1.weights()).maxCoeff();
  double gap1 = best1 - u1;
  double gap2 = best2 - u2;
  return {gap1 <= eps && gap2 <= eps, gap1, gap2};
}

double logit_threshold(double tau, int k) {
  if (tau < 0 || !std::isfinite(tau)) throw std::invalid_argument("logit_threshold: bad tau");
  if (tau == 0.0) return std::numeric_limits<double>::infinity();  // demand ignores price
  double a = 2.0 / (k * (1.0 - std::exp(-tau)));
  double b = 2.0 / tau;
  return std::max(a, b);
}

double logit_ne_support_bound(double tau, int k) {
  double t = logit_threshold(tau, k);
  if (!std::isfinite(t)) return t;
  return t + 1.0 / k;
}

int verify_logit_br_below(const MarketModel& model, int trials, std::uint64_t seed) {
  if (model.is_bertrand()) throw std::invalid_argument("verify_logit_br_below: logit model required");
  int k = model.k();
  double bound = logit_ne_support_bound(model.tau, k);
  if (!std::isfinite(bound)) return 0;  // tau == 0: nothing to check
  // Smallest grid index whose price lies strictly above the bound.
  int first_above = static_cast<int>(std::floor(bound * k + 1e-9));
  if (first_above >= k) return 0;  // bound leaves no grid room above it

  PayoffMatrices m = payoff_matrices(model);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_top(first_above, k - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int failures = 0;
  for (int t = 0; t < trials; ++t) {
    // Random support with a forced max element above the bound.
    int top = pick_top(rng);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
    for (int i = 0; i <= top; ++i) w[i] = (unif(rng) < 0.5) ? unif(rng) : 0.0;
    w[top] = std::max(w[top], 0.1);
    w /= w.sum();
    PriceDistribution d(std::move(w));
    BestResponse br = best_response_set(m, d, 1e-12);
    for (int idx : br.indices)
      if (idx >= top) ++failures;
  }
  return failures;
}

CceFeasibility cce_feasibility(const MarketModel& model, int min_support_index,
                               EquilibriumConstraints constraints, double tolerance) {
  int k = model.k();
  if (min_support_index < 0 || min_support_index >= k)
    throw std::domain_error("cce_feasibility: min support index off grid");
  PayoffMatrices m = payoff_matrices(model);

  // Variables: joint probability z(i,j) over supported pairs, both indices
  // >= min_support_index.
  int s = k - min_support_index;
  auto var = [&](int i, int j) { return (i - min_support_index) * s + (j - min_support_index); };
  int nvars = s * s;

  lp::LinearProgram prog(nvars);
  prog.tolerance = tolerance;

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(nvars);
  prog.add_row(ones, lp::Sense::Eq, 1.0);

  if (constraints == EquilibriumConstraints::CoarseCorrelated) {
    // E[u_p] >= E[u_p(a', marginal)] for every fixed deviation a'.
    for (int dev = 0; dev < k; ++dev) {
      Eigen::VectorXd row1 = Eigen::VectorXd::Zero(nvars);
      Eigen::VectorXd row2 = Eigen::VectorXd::Zero(nvars);
      for (int i = min_support_index; i < k; ++i) {
        for (int j = min_support_index; j < k; ++j) {
          row1[var(i, j)] = m.A(i, j) - m.A(dev, j);
          row2[var(i, j)] = m.B(i, j) - m.B(i, dev);
        }
      }
      prog.add_row(row1, lp::Sense::Ge, 0.0);
      prog.add_row(row2, lp::Sense::Ge, 0.0);
    }
  } else {
    // Per-recommendation constraints: conditioned on being told to play a,
    // no deviation a' improves the payoff.
    for (int rec = min_support_index; rec < k; ++rec) {
      for (int dev = 0; dev < k; ++dev) {
        if (dev == rec) continue;
        Eigen::VectorXd row1 = Eigen::VectorXd::Zero(nvars);
        Eigen::VectorXd row2 = Eigen::VectorXd::Zero(nvars);
        for (int j = min_support_index; j < k; ++j)
          row1[var(rec, j)] = m.A(rec, j) - m.A(dev, j);
        for (int i = min_support_index; i < k; ++i)
          row2[var(i, rec)] = m.B(i, rec) - m.B(i, dev);
        prog.add_row(row1, lp::Sense::Ge, 0.0);
        prog.add_row(row2, lp::Sense::Ge, 0.0);
      }
    }
  }

  lp::LpSolution sol = lp::solve_lp(prog);
  if (sol.status == lp::Status::Infeasible) return {false, std::nullopt};
  if (sol.status != lp::Status::Optimal)
    throw std::runtime_error(std::string("cce_feasibility: LP failure: ") + lp::status_name(sol.status) +
                             (sol.note.empty() ? "" : " (" + sol.note + ")"));
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(k, k);
  for (int i = min_support_index; i < k; ++i)
    for (int j = min_support_index; j < k; ++j) joint(i, j) = std::max(0.0, sol.x[var(i, j)]);
  return {true, joint};
}

}  // namespace pricing
