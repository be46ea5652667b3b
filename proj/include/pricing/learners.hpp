#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pricing/distribution.hpp"
#include "pricing/market_model.hpp"
#include "pricing/stage_game.hpp"

namespace pricing {

struct ScheduleEntry {
  int from = 1;  // 1-based, inclusive
  int to = 1;    // inclusive
  PriceDistribution dist;
};

struct AlgorithmConfig {
  enum class Kind { Hedge, Ftpl, BlumMansour, Static, Uniform, ThreatLeader, Scripted, Custom };

  Kind kind = Kind::Uniform;
  double learning_rate = 0.0;  // 0 = auto
  double scale = 0.0;          // FTPL perturbation scale, 0 = auto (sqrt(T))
  std::uint64_t seed = 0;
  bool horizon_aware = true;   // auto rates use T; otherwise the anytime variant
  PriceDistribution static_dist;        // Static
  std::vector<ScheduleEntry> schedule;  // Scripted
  std::string custom_name;              // Custom (test harness algorithms)

  std::string kind_name() const;
  static Kind kind_from_name(const std::string& name);
};

// Market context handed to an algorithm before a run. own_payoffs(a, j) is
// the player's stage payoff for playing a against an opponent playing j, so
// the expected payoff vector against an opponent mixed strategy q is
// own_payoffs * q. Both sellers observe full mixed strategies.
struct MarketContext {
  MarketModel model;
  Eigen::MatrixXd own_payoffs;
  int T = 0;
  int player = 1;

  static MarketContext for_player(const MarketModel& model, const PayoffMatrices& m, int player,
                                  int T);
};

// An online pricing algorithm: a deterministic map from the opponent's
// revealed mixed-strategy history to the next round's distribution. Fed
// incrementally: next(t) may use only what observe() saw for rounds < t.
class PricingAlgorithm {
 public:
  explicit PricingAlgorithm(AlgorithmConfig cfg) : cfg_(std::move(cfg)) {}
  virtual ~PricingAlgorithm() = default;

  virtual void reset(const MarketContext& ctx) { ctx_ = ctx; }
  virtual PriceDistribution next(int t) = 0;
  virtual void observe(const PriceDistribution& opponent, int t) = 0;

  const AlgorithmConfig& config() const { return cfg_; }

 protected:
  AlgorithmConfig cfg_;
  MarketContext ctx_;
};

std::unique_ptr<PricingAlgorithm> make_algorithm(const AlgorithmConfig& config);

// Config factories for the zoo.
AlgorithmConfig hedge_config(double eta = 0.0, std::uint64_t seed = 0);
AlgorithmConfig ftpl_config(double scale = 0.0, std::uint64_t seed = 0);
AlgorithmConfig blum_mansour_config(double eta = 0.0, std::uint64_t seed = 0);
AlgorithmConfig static_config(PriceDistribution dist);
AlgorithmConfig uniform_config();
AlgorithmConfig threat_leader_config();
AlgorithmConfig scripted_config(std::vector<ScheduleEntry> schedule);

// Default learning rates.
double hedge_auto_eta(int k, int T);        // sqrt(ln k / T)
double blum_mansour_auto_eta(int k, int T); // sqrt(8 k ln k / T), per internal instance

// Threat-algorithm phase arithmetic. The commitment holds prices high until
// the cutoff t_bar = T - T/(2(1-1/k)) - 1 and punishes observed deviations
// forever after. The cutoff is rarely a whole round, so the boundary round
// mixes the two phase actions with weights chosen to realize the continuous
// cutoff in expectation (either the leader or the compliant follower mixes,
// depending on which side of 1/2 the leftover mass falls).
struct ThreatPhases {
  double t_bar;             // continuous cutoff
  int boundary_round;       // floor(t_bar) + 1
  int monitored_rounds;     // compliance enforced for rounds 1..monitored_rounds
  double leader_high_mass;  // boundary-round leader mass on 1 - 1/k
  double follower_one_mass; // boundary-round compliant-follower mass on 1
  double compliant_leader_total;    // closed-form leader payoff vs compliance
  double compliant_follower_total;  // equals T/2 + 1 - 1/k
};
ThreatPhases threat_phases(int k, int T);

// Scripted followers used by the threat experiments.
AlgorithmConfig threat_compliant_follower_config(int k, int T);
AlgorithmConfig threat_deviating_follower_config(int k, int T, int deviation_round,
                                                 int deviation_index = -1);

// Replays a fresh instance against a fixed opponent history and returns its
// round-(history.size()+1) output; determinism harness.
PriceDistribution replay_next(const AlgorithmConfig& config, const MarketContext& ctx,
                              const std::vector<PriceDistribution>& history);

}  // namespace pricing
