#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pricing/linear_program.hpp"
#include "pricing/stage_game.hpp"

namespace pricing {

// ---------------------------------------------------------------------------
// Dominance and Nash machinery (Bertrand stage game)
// ---------------------------------------------------------------------------

struct DominanceWitness {
  int dominated_index;
  int dominating_index;
  double gap;  // payoff advantage of the dominating price vs the opponent
};

struct DominanceQuery {
  std::optional<DominanceWitness> witness;
  std::string failed_precondition;  // empty when the hypotheses held
};

// Against an opponent distribution with mass at most 1/(24k) above price x
// (x >= 3/k), undercutting beats x by at least 1/(24k^2). Scans every price
// below x and returns the best witness; if a hypothesis fails, reports which
// one instead of guessing.
DominanceQuery marginal_domination_witness(const MarketModel& model,
                                           const PriceDistribution& opponent, int x_index);

// Iterated removal of the current maximum price while it is at least 3/k.
// Mirrors the induction that pins Nash (and correlated) equilibrium support
// to {1/k, 2/k}. Bertrand only; requires k >= 20.
std::vector<int> iterated_dominance(const MarketModel& model);

struct EpsilonNashResult {
  bool is_eps_nash;
  double gap1;  // best pure deviation gain for seller 1
  double gap2;
};

EpsilonNashResult epsilon_nash_check(const MarketModel& model, const PriceDistribution& d1,
                                     const PriceDistribution& d2, double eps);

// ---------------------------------------------------------------------------
// Logit-model support bounds
// ---------------------------------------------------------------------------

// max{ 2/(k(1-e^-tau)), 2/tau }; infinity when tau == 0 (no bound).
double logit_threshold(double tau, int k);

// Nash support bound p_threshold(tau) + 1/k.
double logit_ne_support_bound(double tau, int k);

// Empirical companion: draws `trials` random distributions whose max support
// exceeds the bound and checks every best response is strictly below that
// max support. Returns the number of failures (0 expected).
int verify_logit_br_below(const MarketModel& model, int trials, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Stackelberg (Conitzer–Sandholm multiple LPs)
// ---------------------------------------------------------------------------

struct StageSolution {
  PriceDistribution leader_dist;
  int follower_index = -1;  // induced follower pure price (grid index)
  double leader_value = 0.0;
  double follower_value = 0.0;
};

struct StackelbergOptions {
  double lp_tolerance = 1e-9;
  double tie_tolerance = 1e-7;    // width of the reported follower tie set
  double tie_break_mass = 1e-9;   // mass moved to the price above the BR
  bool parallel = true;           // run the per-candidate LPs concurrently
};

struct CandidateValue {
  int follower_index;
  lp::Status status;
  double leader_value;  // meaningful when status == Optimal
};

struct StackelbergReport {
  StageSolution solution;
  std::vector<int> follower_tie_set;   // BR indices under the optimal commitment
  PriceDistribution perturbed_dist;    // (1-eps) dist + eps on the price above
  int perturbed_follower_br = -1;      // unique BR under the perturbed commitment
  std::vector<CandidateValue> candidates;
  double certificate_residual = 0.0;   // worst LP certificate among candidates
};

// Leader commits to a distribution, follower best-responds in the leader's
// favor. One LP per candidate follower price; the best feasible value wins.
StackelbergReport stackelberg_stage(const MarketModel& model, int leader = 1,
                                    const StackelbergOptions& options = {});
StackelbergReport stackelberg_stage(const PayoffMatrices& matrices, int leader = 1,
                                    const StackelbergOptions& options = {});

// Exact-rational re-solve (Bertrand, k <= 50): certifies the follower tie
// structure by exact payoff equality. Returns the solution plus the tie set.
struct ExactStackelberg {
  StageSolution solution;
  std::vector<int> follower_tie_set;  // exact payoff ties under the commitment
};
ExactStackelberg stackelberg_stage_exact(int k, int leader = 1);

// Brute-force oracle: searches leader distributions on a simplex lattice
// (coarse pass plus local refinement down to `resolution`), follower
// best-responds with leader-favorable tie-breaking. Independent of the LP
// path; intended for small k.
struct GridSearchResult {
  PriceDistribution leader_dist;
  int follower_index;
  double leader_value;
};
GridSearchResult stackelberg_grid_search(const MarketModel& model, double resolution = 1e-3);

// ---------------------------------------------------------------------------
// Correlated / coarse-correlated feasibility (exploratory)
// ---------------------------------------------------------------------------

enum class EquilibriumConstraints { CoarseCorrelated, Correlated };

struct CceFeasibility {
  bool feasible;
  // Joint distribution over price pairs, row-major (i = seller 1), present
  // when feasible.
  std::optional<Eigen::MatrixXd> joint;
};

// Feasibility of an equilibrium whose joint support uses only prices with
// index >= min_support_index for both sellers.
CceFeasibility cce_feasibility(const MarketModel& model, int min_support_index,
                               EquilibriumConstraints constraints = EquilibriumConstraints::CoarseCorrelated,
                               double tolerance = 1e-9);

}  // namespace pricing
