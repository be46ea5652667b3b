#include "pricing/learners.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace pricing {

std::string AlgorithmConfig::kind_name() const {
  switch (kind) {
    case Kind::Hedge: return "hedge";
    case Kind::Ftpl: return "ftpl";
    case Kind::BlumMansour: return "blum_mansour";
    case Kind::Static: return "static";
    case Kind::Uniform: return "uniform";
    case Kind::ThreatLeader: return "threat_leader";
    case Kind::Scripted: return "scripted";
    case Kind::Custom: return "custom";
  }
  return "?";
}

AlgorithmConfig::Kind AlgorithmConfig::kind_from_name(const std::string& name) {
  if (name == "hedge") return Kind::Hedge;
  if (name == "ftpl") return Kind::Ftpl;
  if (name == "blum_mansour" || name == "bm" || name == "nsr") return Kind::BlumMansour;
  if (name == "static") return Kind::Static;
  if (name == "uniform") return Kind::Uniform;
  if (name == "threat_leader" || name == "threat") return Kind::ThreatLeader;
  if (name == "scripted") return Kind::Scripted;
  if (name == "custom") return Kind::Custom;
  throw std::invalid_argument("unknown algorithm kind: " + name);
}

MarketContext MarketContext::for_player(const MarketModel& model, const PayoffMatrices& m,
                                        int player, int T) {
  MarketContext ctx;
  ctx.model = model;
  ctx.own_payoffs = (player == 1) ? m.A : Eigen::MatrixXd(m.B.transpose());
  ctx.T = T;
  ctx.player = player;
  return ctx;
}

double hedge_auto_eta(int k, int T) { return std::sqrt(std::log(double(k)) / T); }

// Per-instance rate minimizing the summed instance regret bound
// k ln k / eta + eta T / 8 over the scaled payoff streams.
double blum_mansour_auto_eta(int k, int T) { return std::sqrt(8.0 * k * std::log(double(k)) / T); }

namespace {

class HedgeAlgorithm : public PricingAlgorithm {
 public:
  using PricingAlgorithm::PricingAlgorithm;

  void reset(const MarketContext& ctx) override {
    PricingAlgorithm::reset(ctx);
    cum_ = Eigen::VectorXd::Zero(ctx.model.k());
  }

  PriceDistribution next(int t) override {
    double eta = cfg_.learning_rate > 0 ? cfg_.learning_rate
                 : cfg_.horizon_aware   ? hedge_auto_eta(ctx_.model.k(), ctx_.T)
                                        : hedge_auto_eta(ctx_.model.k(), t);
    Eigen::VectorXd scaled = eta * (cum_.array() - cum_.maxCoeff()).matrix();
    Eigen::VectorXd w = scaled.array().exp();
    return PriceDistribution(w / w.sum());
  }

  void observe(const PriceDistribution& opponent, int) override {
    cum_ += ctx_.own_payoffs * opponent.weights();
  }

 private:
  Eigen::VectorXd cum_;
};

class FtplAlgorithm : public PricingAlgorithm {
 public:
  using PricingAlgorithm::PricingAlgorithm;

  void reset(const MarketContext& ctx) override {
    PricingAlgorithm::reset(ctx);
    int k = ctx.model.k();
    cum_ = Eigen::VectorXd::Zero(k);
    perturbation_.resize(k);
    double scale = cfg_.scale > 0 ? cfg_.scale : std::sqrt(double(ctx.T));
    std::mt19937_64 rng(cfg_.seed);
    std::exponential_distribution<double> exp_dist(1.0 / scale);
    for (int i = 0; i < k; ++i) perturbation_[i] = exp_dist(rng);
  }

  PriceDistribution next(int) override {
    int best = 0;
    double best_v = cum_[0] + perturbation_[0];
    for (int i = 1; i < cum_.size(); ++i) {
      double v = cum_[i] + perturbation_[i];
      if (v > best_v) { best_v = v; best = i; }
    }
    return PriceDistribution::point_mass(ctx_.model.k(), best);
  }

  void observe(const PriceDistribution& opponent, int) override {
    cum_ += ctx_.own_payoffs * opponent.weights();
  }

 private:
  Eigen::VectorXd cum_;
  Eigen::VectorXd perturbation_;
};

// Blum–Mansour reduction: one Hedge instance per price. Each round the
// instances' distributions form a row-stochastic matrix Q whose stationary
// distribution is played; instance a then receives the payoff vector scaled
// by the mass x[a] it was played with.
class BlumMansourAlgorithm : public PricingAlgorithm {
 public:
  using PricingAlgorithm::PricingAlgorithm;

  static constexpr double kDamping = 1e-9;
  static constexpr double kStationaryResidual = 1e-12;

  void reset(const MarketContext& ctx) override {
    PricingAlgorithm::reset(ctx);
    int k = ctx.model.k();
    cum_.setZero(k, k);
    q_.resize(k, k);
    m_.resize(k, k);
    lu_ = Eigen::PartialPivLU<Eigen::MatrixXd>(k);
    x_ = Eigen::VectorXd::Constant(k, 1.0 / k);
    eta_ = cfg_.learning_rate > 0 ? cfg_.learning_rate
                                  : blum_mansour_auto_eta(k, ctx.T);
  }

  PriceDistribution next(int) override {
    int k = ctx_.model.k();
    for (int a = 0; a < k; ++a) {
      Eigen::ArrayXd row = eta_ * (cum_.row(a).array() - cum_.row(a).maxCoeff());
      Eigen::ArrayXd w = row.exp();
      q_.row(a) = (w / w.sum()).matrix();
    }
    // Damping keeps the chain irreducible when instances degenerate.
    q_ = (1.0 - kDamping) * q_ + Eigen::MatrixXd::Constant(k, k, kDamping / k);

    // Stationary distribution of Q: solve (Q' - I) x = 0 with a
    // normalization row, falling back to power iteration.
    m_ = q_.transpose() - Eigen::MatrixXd::Identity(k, k);
    m_.row(k - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    rhs[k - 1] = 1.0;
    lu_.compute(m_);
    Eigen::VectorXd x = lu_.solve(rhs);
    if (!stationary_ok(x)) {
      x = x_;  // warm start from the previous round
      for (int it = 0; it < 200000; ++it) {
        Eigen::VectorXd nx = q_.transpose() * x;
        nx /= nx.sum();
        if ((nx - x).lpNorm<Eigen::Infinity>() < 1e-15) { x = nx; break; }
        x = nx;
        if (stationary_ok(x)) break;
      }
    }
    x = x.cwiseMax(0.0);
    x /= x.sum();
    x_ = x;
    return PriceDistribution(x_);
  }

  void observe(const PriceDistribution& opponent, int) override {
    Eigen::VectorXd v = ctx_.own_payoffs * opponent.weights();
    cum_.noalias() += x_ * v.transpose();
  }

 private:
  bool stationary_ok(const Eigen::VectorXd& x) const {
    if (!x.allFinite()) return false;
    if (x.minCoeff() < -1e-10) return false;
    return (q_.transpose() * x - x).lpNorm<Eigen::Infinity>() <= kStationaryResidual;
  }

  Eigen::MatrixXd cum_, q_, m_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd x_;
  double eta_ = 0.0;
};

class StaticAlgorithm : public PricingAlgorithm {
 public:
  explicit StaticAlgorithm(AlgorithmConfig cfg, PriceDistribution dist)
      : PricingAlgorithm(std::move(cfg)), dist_(std::move(dist)) {}

  void reset(const MarketContext& ctx) override {
    PricingAlgorithm::reset(ctx);
    if (dist_.k() != ctx.model.k())
      throw std::invalid_argument("static algorithm: distribution size does not match grid");
  }

  PriceDistribution next(int) override { return dist_; }
  void observe(const PriceDistribution&, int) override {}

 private:
  PriceDistribution dist_;
};

class UniformAlgorithm : public PricingAlgorithm {
 public:
  using PricingAlgorithm::PricingAlgorithm;
  PriceDistribution next(int) override { return PriceDistribution::uniform(ctx_.model.k()); }
  void observe(const PriceDistribution&, int) override {}
};

class ThreatLeaderAlgorithm : public PricingAlgorithm {
 public:
  using PricingAlgorithm::PricingAlgorithm;

  void reset(const MarketContext& ctx) override {
    PricingAlgorithm::reset(ctx);
    phases_ = threat_phases(ctx.model.k(), ctx.T);
    punished_ = false;
  }

  PriceDistribution next(int t) override {
    int k = ctx_.model.k();
    if (punished_) return PriceDistribution::point_mass(k, 0);
    if (t < phases_.boundary_round) return PriceDistribution::point_mass(k, k - 2);
    if (t == phases_.boundary_round)
      return PriceDistribution::mixture(k, k - 2, phases_.leader_high_mass, k - 1);
    return PriceDistribution::point_mass(k, k - 1);
  }

  void observe(const PriceDistribution& opponent, int t) override {
    if (punished_ || t > phases_.monitored_rounds) return;
    // Compliance means exactly the point mass on price 1; scripted followers
    // emit exact point masses, so the comparison is exact.
    int k = ctx_.model.k();
    if (opponent[k - 1] != 1.0) punished_ = true;
  }

 private:
  ThreatPhases phases_{};
  bool punished_ = false;
};

class ScriptedAlgorithm : public PricingAlgorithm {
 public:
  using PricingAlgorithm::PricingAlgorithm;

  void reset(const MarketContext& ctx) override {
    PricingAlgorithm::reset(ctx);
    auto schedule = cfg_.schedule;
    std::sort(schedule.begin(), schedule.end(),
              [](const ScheduleEntry& a, const ScheduleEntry& b) { return a.from < b.from; });
    int expected = 1;
    for (const ScheduleEntry& e : schedule) {
      if (e.from != expected || e.to < e.from)
        throw std::invalid_argument("scripted schedule: ranges must partition 1..T");
      if (e.dist.k() != ctx.model.k())
        throw std::invalid_argument("scripted schedule: distribution size mismatch");
      expected = e.to + 1;
    }
    if (expected != ctx.T + 1)
      throw std::invalid_argument("scripted schedule: ranges must partition 1..T");
    schedule_ = std::move(schedule);
  }

  PriceDistribution next(int t) override {
    for (const ScheduleEntry& e : schedule_)
      if (t >= e.from && t <= e.to) return e.dist;
    throw std::logic_error("scripted schedule: round not covered");
  }

  void observe(const PriceDistribution&, int) override {}

 private:
  std::vector<ScheduleEntry> schedule_;
};

}  // namespace

std::unique_ptr<PricingAlgorithm> make_algorithm(const AlgorithmConfig& config) {
  using Kind = AlgorithmConfig::Kind;
  switch (config.kind) {
    case Kind::Hedge: return std::make_unique<HedgeAlgorithm>(config);
    case Kind::Ftpl: return std::make_unique<FtplAlgorithm>(config);
    case Kind::BlumMansour: return std::make_unique<BlumMansourAlgorithm>(config);
    case Kind::Static: return std::make_unique<StaticAlgorithm>(config, config.static_dist);
    case Kind::Uniform: return std::make_unique<UniformAlgorithm>(config);
    case Kind::ThreatLeader: return std::make_unique<ThreatLeaderAlgorithm>(config);
    case Kind::Scripted: return std::make_unique<ScriptedAlgorithm>(config);
    case Kind::Custom: break;
  }
  throw std::invalid_argument("make_algorithm: cannot instantiate kind " + config.kind_name());
}

AlgorithmConfig hedge_config(double eta, std::uint64_t seed) {
  AlgorithmConfig c;
  c.kind = AlgorithmConfig::Kind::Hedge;
  c.learning_rate = eta;
  c.seed = seed;
  return c;
}

AlgorithmConfig ftpl_config(double scale, std::uint64_t seed) {
  AlgorithmConfig c;
  c.kind = AlgorithmConfig::Kind::Ftpl;
  c.scale = scale;
  c.seed = seed;
  return c;
}

AlgorithmConfig blum_mansour_config(double eta, std::uint64_t seed) {
  AlgorithmConfig c;
  c.kind = AlgorithmConfig::Kind::BlumMansour;
  c.learning_rate = eta;
  c.seed = seed;
  return c;
}

AlgorithmConfig static_config(PriceDistribution dist) {
  AlgorithmConfig c;
  c.kind = AlgorithmConfig::Kind::Static;
  c.static_dist = std::move(dist);
  return c;
}

AlgorithmConfig uniform_config() {
  AlgorithmConfig c;
  c.kind = AlgorithmConfig::Kind::Uniform;
  return c;
}

AlgorithmConfig threat_leader_config() {
  AlgorithmConfig c;
  c.kind = AlgorithmConfig::Kind::ThreatLeader;
  return c;
}

AlgorithmConfig scripted_config(std::vector<ScheduleEntry> schedule) {
  AlgorithmConfig c;
  c.kind = AlgorithmConfig::Kind::Scripted;
  c.schedule = std::move(schedule);
  return c;
}

ThreatPhases threat_phases(int k, int T) {
  if (k < 20) throw std::invalid_argument("threat_phases: requires k >= 20");
  if (T < 4) throw std::invalid_argument("threat_phases: requires T >= 4");
  double high = 1.0 - 1.0 / k;
  double t_bar = T - T / (2.0 * high) - 1.0;
  if (t_bar <= 0.0)
    throw std::invalid_argument("threat_phases: horizon too short for a positive cutoff");

  ThreatPhases p;
  p.t_bar = t_bar;
  p.boundary_round = static_cast<int>(std::floor(t_bar)) + 1;
  p.monitored_rounds = p.boundary_round - 1;

  // Mass the compliant follower forgoes at the boundary so its total equals
  // (T - t_bar) * (1 - 1/k) = T/2 + 1 - 1/k exactly.
  double leftover = high * (p.boundary_round - t_bar);
  if (leftover <= 0.5) {
    p.leader_high_mass = 1.0 - 2.0 * leftover;
    p.follower_one_mass = 1.0;
  } else {
    p.leader_high_mass = 0.0;
    p.follower_one_mass = (high - leftover) / (0.5 - 1.0 / k);
  }

  double boundary_leader =
      p.leader_high_mass > 0.0
          ? p.leader_high_mass * high * p.follower_one_mass + (1.0 - p.leader_high_mass) * 0.5
          : p.follower_one_mass * 0.5;
  p.compliant_leader_total = (p.boundary_round - 1) * high + boundary_leader;
  p.compliant_follower_total = T / 2.0 + 1.0 - 1.0 / k;
  return p;
}

AlgorithmConfig threat_compliant_follower_config(int k, int T) {
  ThreatPhases p = threat_phases(k, T);
  std::vector<ScheduleEntry> schedule;
  int tb = p.boundary_round;
  if (tb > 1) schedule.push_back({1, tb - 1, PriceDistribution::point_mass(k, k - 1)});
  schedule.push_back({tb, tb, p.follower_one_mass == 1.0
                                  ? PriceDistribution::point_mass(k, k - 1)
                                  : PriceDistribution::mixture(k, k - 1, p.follower_one_mass, k - 2)});
  if (tb < T) schedule.push_back({tb + 1, T, PriceDistribution::point_mass(k, k - 2)});
  return scripted_config(std::move(schedule));
}

AlgorithmConfig threat_deviating_follower_config(int k, int T, int deviation_round,
                                                 int deviation_index) {
  ThreatPhases p = threat_phases(k, T);
  if (deviation_round < 1 || deviation_round > p.monitored_rounds)
    throw std::invalid_argument("threat_deviating_follower: deviation must fall in the monitored rounds");
  if (deviation_index < 0) deviation_index = k - 3;  // undercut the leader's 1 - 1/k
  std::vector<ScheduleEntry> schedule;
  if (deviation_round > 1)
    schedule.push_back({1, deviation_round - 1, PriceDistribution::point_mass(k, k - 1)});
  schedule.push_back({deviation_round, deviation_round, PriceDistribution::point_mass(k, deviation_index)});
  if (deviation_round < T)
    schedule.push_back({deviation_round + 1, T, PriceDistribution::point_mass(k, 0)});
  return scripted_config(std::move(schedule));
}

PriceDistribution replay_next(const AlgorithmConfig& config, const MarketContext& ctx,
                              const std::vector<PriceDistribution>& history) {
  auto alg = make_algorithm(config);
  alg->reset(ctx);
  int t = 1;
  for (const PriceDistribution& d : history) {
    alg->next(t);
    alg->observe(d, t);
    ++t;
  }
  return alg->next(t);
}

}  // namespace pricing
