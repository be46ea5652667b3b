#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "pricing/equilibrium.hpp"
#include "pricing/parallel.hpp"

namespace pricing {

namespace {

// Leader/follower payoffs in (leader action, follower action) coordinates so
// both seller roles share one code path.
struct RoleView {
  Eigen::MatrixXd L;
  Eigen::MatrixXd F;
};

RoleView role_view(const PayoffMatrices& m, int leader) {
  if (leader == 1) return {m.A, m.B};
  if (leader == 2) return {m.B.transpose(), m.A.transpose()};
  throw std::invalid_argument("stackelberg_stage: leader must be 1 or 2");
}

}  // namespace

StackelbergReport stackelberg_stage(const PayoffMatrices& matrices, int leader,
                                    const StackelbergOptions& options) {
  const int k = matrices.k();
  RoleView role = role_view(matrices, leader);

  // One LP per candidate follower price j: maximize the leader's payoff over
  // commitments that keep j a (weakly) best response. The weak inequalities
  // encode follower tie-breaking in the leader's favor.
  std::vector<CandidateValue> candidates(k);
  std::vector<Eigen::VectorXd> solutions(k);
  std::vector<double> certificates(k, 0.0);

  auto solve_candidate = [&](int j) {
    lp::LinearProgram prog(k, k);
    prog.tolerance = options.lp_tolerance;
    prog.objective = role.L.col(j);
    prog.add_row(Eigen::VectorXd::Ones(k), lp::Sense::Eq, 1.0);
    for (int other = 0; other < k; ++other) {
      if (other == j) continue;
      prog.add_row(role.F.col(j) - role.F.col(other), lp::Sense::Ge, 0.0);
    }
    lp::LpSolution sol = lp::solve_lp(prog);
    candidates[j] = {j, sol.status, sol.status == lp::Status::Optimal ? sol.objective : 0.0};
    if (sol.status == lp::Status::Optimal) {
      solutions[j] = sol.x;
      certificates[j] = sol.certificate_residual;
    }
  };

  int threads = options.parallel ? default_thread_count() : 1;
  parallel_for_index(k, threads, solve_candidate);

  int best = -1;
  for (int j = 0; j < k; ++j) {
    if (candidates[j].status != lp::Status::Optimal) continue;
    if (best < 0 || candidates[j].leader_value > candidates[best].leader_value) best = j;
  }
  if (best < 0)
    throw std::runtime_error(
        "stackelberg_stage: every candidate LP failed; a point-mass commitment always "
        "leaves some follower best response feasible");

  // Clean up solver dust so the commitment is a valid distribution.
  Eigen::VectorXd x = solutions[best].cwiseMax(0.0);
  x /= x.sum();

  StackelbergReport report;
  report.candidates = std::move(candidates);
  report.certificate_residual = certificates[best];
  report.solution.leader_dist = PriceDistribution(x);
  report.solution.follower_index = best;

  Eigen::VectorXd follower_payoffs = role.F.transpose() * x;
  report.solution.follower_value = follower_payoffs[best];
  report.solution.leader_value = role.L.col(best).dot(x);

  double fmax = follower_payoffs.maxCoeff();
  for (int j = 0; j < k; ++j)
    if (follower_payoffs[j] >= fmax - options.tie_tolerance) report.follower_tie_set.push_back(j);

  // Footnote refinement: shift a sliver of mass to the price just above the
  // intended best response, which breaks the tie band toward that response.
  int above = std::min(best + 1, k - 1);
  double eps = options.tie_break_mass;
  Eigen::VectorXd xp = (1.0 - eps) * x;
  xp[above] += eps;
  report.perturbed_dist = PriceDistribution(xp);
  Eigen::VectorXd perturbed_payoffs = role.F.transpose() * report.perturbed_dist.weights();
  int arg = 0;
  for (int j = 1; j < k; ++j)
    if (perturbed_payoffs[j] > perturbed_payoffs[arg]) arg = j;
  report.perturbed_follower_br = arg;
  return report;
}

StackelbergReport stackelberg_stage(const MarketModel& model, int leader,
                                    const StackelbergOptions& options) {
  return stackelberg_stage(payoff_matrices(model), leader, options);
}

// ---------------------------------------------------------------------------
// Exact-rational certification (Bertrand only)
// ---------------------------------------------------------------------------

namespace {

using Rational = boost::multiprecision::cpp_rational;
using RMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

RMat bertrand_payoffs_exact(int k) {
  RMat A(k, k);
  for (int i = 0; i < k; ++i) {
    Rational pi(i + 1, k);
    for (int j = 0; j < k; ++j) {
      if (i < j) A(i, j) = pi;
      else if (i == j) A(i, j) = pi / 2;
      else A(i, j) = 0;
    }
  }
  return A;
}

}  // namespace

ExactStackelberg stackelberg_stage_exact(int k, int leader) {
  if (k < 2 || k > 50)
    throw std::invalid_argument("stackelberg_stage_exact: supported for 2 <= k <= 50");
  if (leader != 1 && leader != 2) throw std::invalid_argument("leader must be 1 or 2");
  // Symmetric game: both roles see the same (L, F) = (A, A^T) structure.
  RMat L = bertrand_payoffs_exact(k);
  RMat F = L.transpose();

  using Solver = lp::SimplexSolver<Rational, lp::ExactScalarPolicy<Rational>>;
  RVec best_x;
  Rational best_value(-1);
  int best_j = -1;

  for (int j = 0; j < k; ++j) {
    RMat A(k, k);  // rows: 1 equality + (k-1) incentive constraints
    RVec b = RVec::Zero(k);
    std::vector<lp::Sense> senses(k, lp::Sense::Ge);
    A.row(0) = RVec::Ones(k).transpose();
    b[0] = 1;
    senses[0] = lp::Sense::Eq;
    int r = 1;
    for (int other = 0; other < k; ++other) {
      if (other == j) continue;
      A.row(r++) = (F.col(j) - F.col(other)).transpose();
    }
    Solver solver;
    auto sol = solver.solve(A, senses, b, RVec(L.col(j)));
    if (sol.status != lp::Status::Optimal) continue;
    if (best_j < 0 || sol.objective > best_value) {
      best_value = sol.objective;
      best_x = sol.x;
      best_j = j;
    }
  }
  if (best_j < 0) throw std::runtime_error("stackelberg_stage_exact: all candidate LPs failed");

  ExactStackelberg out;
  // Explicit loop: 2-D matrix expressions with multiprecision scalars trip a
  // boost 1.74 trait when Eigen probes matrix-to-scalar conversions.
  RVec follower_payoffs = RVec::Zero(k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) follower_payoffs[j] += F(i, j) * best_x[i];
  Rational fmax = follower_payoffs[0];
  for (int j = 1; j < k; ++j) fmax = std::max(fmax, follower_payoffs[j]);
  for (int j = 0; j < k; ++j)
    if (follower_payoffs[j] == fmax) out.follower_tie_set.push_back(j);

  Eigen::VectorXd x(k);
  for (int i = 0; i < k; ++i) x[i] = best_x[i].convert_to<double>();
  out.solution.leader_dist = PriceDistribution(x);
  out.solution.follower_index = best_j;
  out.solution.leader_value = best_value.convert_to<double>();
  out.solution.follower_value = follower_payoffs[best_j].convert_to<double>();
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force lattice oracle
// ---------------------------------------------------------------------------

namespace {

double compositions(int steps, int parts) {
  double v = 1.0;
  for (int i = 1; i < parts; ++i) v *= double(steps + i) / i;
  return v;
}

// Depth-first enumeration of lattice distributions with per-level partial
// payoff sums; evaluates the follower best response (leader-favorable ties)
// at each leaf.
class LatticeSearch {
 public:
  LatticeSearch(const Eigen::MatrixXd& L, const Eigen::MatrixXd& F, int steps,
                std::vector<int> lo = {}, std::vector<int> hi = {})
      : L_(L), F_(F), k_(static_cast<int>(L.rows())), steps_(steps), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (lo_.empty()) lo_.assign(k_, 0);
    if (hi_.empty()) hi_.assign(k_, steps_);
    pf_.assign(k_ + 1, Eigen::VectorXd::Zero(k_));
    pv_.assign(k_ + 1, Eigen::VectorXd::Zero(k_));
    counts_.assign(k_, 0);
    lo_suffix_.assign(k_ + 1, 0);
    hi_suffix_.assign(k_ + 1, 0);
    for (int i = k_ - 1; i >= 0; --i) {
      lo_suffix_[i] = lo_suffix_[i + 1] + lo_[i];
      hi_suffix_[i] = hi_suffix_[i + 1] + hi_[i];
    }
  }

  struct Candidate {
    double value;
    std::vector<int> counts;
    bool operator>(const Candidate& o) const { return value > o.value; }
  };

  void run(int keep_top) {
    keep_top_ = keep_top;
    recurse(0, steps_);
  }

  const std::vector<Candidate>& best() {
    std::sort(heap_.begin(), heap_.end(), std::greater<>());
    return heap_;
  }

 private:
  void recurse(int level, int remaining) {
    if (remaining < lo_suffix_[level] || remaining > hi_suffix_[level]) return;
    if (level == k_ - 1) {
      leaf(remaining);
      return;
    }
    double h = 1.0 / steps_;
    pf_[level + 1] = pf_[level];
    pv_[level + 1] = pv_[level];
    int lo = std::max(lo_[level], remaining - hi_suffix_[level + 1]);
    int hi = std::min(hi_[level], remaining - lo_suffix_[level + 1]);
    if (lo > 0) {
      pf_[level + 1] += (lo * h) * F_.row(level).transpose();
      pv_[level + 1] += (lo * h) * L_.row(level).transpose();
    }
    for (int c = lo;; ++c) {
      counts_[level] = c;
      recurse(level + 1, remaining - c);
      if (c == hi) break;
      pf_[level + 1] += h * F_.row(level).transpose();
      pv_[level + 1] += h * L_.row(level).transpose();
    }
  }

  void leaf(int remaining) {
    double h = 1.0 / steps_;
    int level = k_ - 1;
    counts_[level] = remaining;
    Eigen::VectorXd f = pf_[level] + (remaining * h) * F_.row(level).transpose();
    Eigen::VectorXd v = pv_[level] + (remaining * h) * L_.row(level).transpose();
    double fmax = f.maxCoeff();
    double val = -1.0;
    for (int j = 0; j < k_; ++j)
      if (f[j] >= fmax - 1e-12) val = std::max(val, v[j]);
    if (static_cast<int>(heap_.size()) < keep_top_) {
      heap_.push_back({val, counts_});
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
    } else if (val > heap_.front().value) {
      std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
      heap_.back() = {val, counts_};
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
    }
  }

  const Eigen::MatrixXd& L_;
  const Eigen::MatrixXd& F_;
  int k_, steps_;
  std::vector<int> lo_, hi_;
  std::vector<Eigen::VectorXd> pf_, pv_;
  std::vector<int> counts_;
  std::vector<int> lo_suffix_, hi_suffix_;
  std::vector<Candidate> heap_;  // min-heap of the best candidates
  int keep_top_ = 1;
};

GridSearchResult evaluate_lattice_point(const Eigen::MatrixXd& L, const Eigen::MatrixXd& F,
                                        const std::vector<int>& counts, int steps) {
  int k = static_cast<int>(L.rows());
  Eigen::VectorXd x(k);
  for (int i = 0; i < k; ++i) x[i] = double(counts[i]) / steps;
  Eigen::VectorXd f = F.transpose() * x;
  Eigen::VectorXd v = L.transpose() * x;
  double fmax = f.maxCoeff();
  int best_j = -1;
  for (int j = 0; j < k; ++j)
    if (f[j] >= fmax - 1e-12 && (best_j < 0 || v[j] > v[best_j])) best_j = j;
  return {PriceDistribution(x), best_j, v[best_j]};
}

}  // namespace

GridSearchResult stackelberg_grid_search(const MarketModel& model, double resolution) {
  const int k = model.k();
  if (k > 8) throw std::invalid_argument("stackelberg_grid_search: oracle intended for k <= 8");
  PayoffMatrices m = payoff_matrices(model);
  const Eigen::MatrixXd& L = m.A;
  const Eigen::MatrixXd& F = m.B;

  const int fine_steps = std::max(1, static_cast<int>(std::lround(1.0 / resolution)));
  const double budget = 4e7;

  if (compositions(fine_steps, k) <= budget) {
    LatticeSearch search(L, F, fine_steps);
    search.run(1);
    const auto& best = search.best();
    return evaluate_lattice_point(L, F, best.front().counts, fine_steps);
  }

  // Coarse pass at the largest lattice that fits the budget, then refine the
  // top candidates on the fine lattice inside a one-coarse-step box.
  int coarse_steps = fine_steps;
  while (coarse_steps > 10 && compositions(coarse_steps, k) > budget) coarse_steps = coarse_steps * 9 / 10;
  LatticeSearch coarse(L, F, coarse_steps);
  coarse.run(400);

  GridSearchResult best{PriceDistribution::uniform(k), -1,
                        -std::numeric_limits<double>::infinity()};
  double box = 1.0 / coarse_steps;
  for (const auto& cand : coarse.best()) {
    std::vector<int> lo(k), hi(k);
    for (int i = 0; i < k; ++i) {
      double center = double(cand.counts[i]) / coarse_steps;
      lo[i] = std::max(0, static_cast<int>(std::floor((center - box) * fine_steps)));
      hi[i] = std::min(fine_steps, static_cast<int>(std::ceil((center + box) * fine_steps)));
    }
    LatticeSearch fine(L, F, fine_steps, lo, hi);
    fine.run(1);
    if (fine.best().empty()) continue;
    GridSearchResult r = evaluate_lattice_point(L, F, fine.best().front().counts, fine_steps);
    if (r.leader_value > best.leader_value) best = r;
  }
  if (best.follower_index < 0) throw std::runtime_error("stackelberg_grid_search: refinement found no points");
  return best;
}

}  // namespace pricing
