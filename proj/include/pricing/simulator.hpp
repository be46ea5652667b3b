#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "pricing/learners.hpp"

namespace pricing {

// A learner emitted something that is not a distribution over the grid.
struct SimulationError : std::runtime_error {
  int round;
  int player;
  SimulationError(int round_, int player_, const std::string& defect)
      : std::runtime_error("round " + std::to_string(round_) + ", player " +
                           std::to_string(player_) + ": " + defect),
        round(round_),
        player(player_) {}
};

struct RunOptions {
  // Store every stride-th round record (1 = all, 0 = none). Aggregates and
  // the per-round payoff series are always kept, so audits never need the
  // full distribution log.
  int store_stride = 1;
  std::vector<int> must_store_rounds;
  // Track per-round tail-mass series for these 1-based price indices i
  // (total mass on prices >= i/k, per player).
  std::vector<int> profile_indices;
  double tail_fraction = 0.1;
};

struct RoundRecord {
  int t;
  PriceDistribution d1, d2;
  double u1, u2, buyer_price;
};

struct ConvergenceProfile {
  std::vector<double> series1, series2;  // per-round mass at or above i/k
  double tail1 = 0.0, tail2 = 0.0;       // mean over the tail window
};

// Full record of a T-round run plus streaming aggregates: cumulative payoffs,
// per-action counterfactual totals, per-source-action swap counterfactuals,
// time-aggregated distributions, and a tail window of the same.
struct Transcript {
  MarketModel model{PriceGrid(2), AllocationRule::Bertrand, 0.0};
  int T = 0;
  AlgorithmConfig config1, config2;
  int store_stride = 1;
  int tail_start = 1;  // first round of the tail window

  std::vector<RoundRecord> rounds;
  std::vector<double> u1_series, u2_series;

  double U1 = 0.0, U2 = 0.0;
  Eigen::VectorXd cum_cf1, cum_cf2;    // sum_t of own-payoff vectors
  Eigen::MatrixXd swap_cf1, swap_cf2;  // (a, a') -> sum_t x_t[a] * v_t[a']
  Eigen::VectorXd cum_mass1, cum_mass2;
  Eigen::VectorXd tail_mass1, tail_mass2;
  std::map<int, ConvergenceProfile> profiles;

  int k() const { return model.k(); }
};

Transcript run(PricingAlgorithm& alg1, PricingAlgorithm& alg2, const MarketModel& model, int T,
               const RunOptions& options = {});

inline Transcript run(const AlgorithmConfig& c1, const AlgorithmConfig& c2,
                      const MarketModel& model, int T, const RunOptions& options = {}) {
  auto a1 = make_algorithm(c1);
  auto a2 = make_algorithm(c2);
  return run(*a1, *a2, model, T, options);
}

std::pair<double, double> cumulative_payoffs(const Transcript& tr);

// Mean buyer price over rounds [from, to] (1-based, inclusive); the full
// window equals (U1 + U2) / T.
double average_buyer_price(const Transcript& tr);
double average_buyer_price(const Transcript& tr, int from, int to);

// max over fixed prices of the counterfactual total minus the realized total.
double external_regret(const Transcript& tr, int player);

// sum over source actions of the best per-action remapping gain; the optimal
// swap function decomposes coordinatewise.
double swap_regret(const Transcript& tr, int player);

// Time-average probability the player priced at or above the threshold.
double frequency_above(const Transcript& tr, int player, int threshold_index);

// Per-round series of total mass on prices >= i/k (1-based i), with tail
// means; requires the series to have been tracked or full rounds stored.
ConvergenceProfile convergence_profile(const Transcript& tr, int price_index);

struct AlgorithmSpaceGaps {
  double learner_gap;    // player 1's external regret
  double optimizer_gap;  // stackelberg leader value * T - U2
};

struct StageSolution;  // equilibrium.hpp
AlgorithmSpaceGaps algorithm_space_gaps(const Transcript& tr, double stackelberg_leader_value);

}  // namespace pricing
