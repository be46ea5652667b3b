#include "pricing/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace pricing {

namespace {

// Neumaier-compensated accumulator; keeps million-round sums exact enough
// for the 1e-12 accounting identities.
struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
    else comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

void validate_output(const PriceDistribution& d, int k, int t, int player) {
  if (d.k() != k) throw SimulationError(t, player, "distribution size does not match grid");
  double sum = d.weights().sum();
  if (std::abs(sum - 1.0) > PriceDistribution::kSumTolerance)
    throw SimulationError(t, player, "weights sum to " + std::to_string(sum));
  if ((d.weights().array() < 0.0).any())
    throw SimulationError(t, player, "negative weight");
}

}  // namespace

Transcript run(PricingAlgorithm& alg1, PricingAlgorithm& alg2, const MarketModel& model, int T,
               const RunOptions& options) {
  if (T < 1) throw std::invalid_argument("run: T must be >= 1");
  const int k = model.k();
  PayoffMatrices m = payoff_matrices(model);
  alg1.reset(MarketContext::for_player(model, m, 1, T));
  alg2.reset(MarketContext::for_player(model, m, 2, T));

  Transcript tr;
  tr.model = model;
  tr.T = T;
  tr.config1 = alg1.config();
  tr.config2 = alg2.config();
  tr.store_stride = options.store_stride;
  int tail_len = std::max(1, static_cast<int>(std::floor(options.tail_fraction * T)));
  tr.tail_start = T - tail_len + 1;

  tr.u1_series.reserve(T);
  tr.u2_series.reserve(T);
  tr.cum_cf1 = Eigen::VectorXd::Zero(k);
  tr.cum_cf2 = Eigen::VectorXd::Zero(k);
  tr.swap_cf1 = Eigen::MatrixXd::Zero(k, k);
  tr.swap_cf2 = Eigen::MatrixXd::Zero(k, k);
  tr.cum_mass1 = Eigen::VectorXd::Zero(k);
  tr.cum_mass2 = Eigen::VectorXd::Zero(k);
  tr.tail_mass1 = Eigen::VectorXd::Zero(k);
  tr.tail_mass2 = Eigen::VectorXd::Zero(k);
  for (int i : options.profile_indices) {
    if (i < 1 || i > k) throw std::invalid_argument("run: profile index off grid");
    auto& p = tr.profiles[i];
    p.series1.reserve(T);
    p.series2.reserve(T);
  }

  std::vector<int> must_store = options.must_store_rounds;
  std::sort(must_store.begin(), must_store.end());

  Kahan U1, U2;
  Eigen::MatrixXd Bt = m.B.transpose();
  std::map<int, std::pair<Kahan, Kahan>> profile_tails;
  for (int i : options.profile_indices) profile_tails[i];

  for (int t = 1; t <= T; ++t) {
    PriceDistribution d1 = alg1.next(t);
    PriceDistribution d2 = alg2.next(t);
    validate_output(d1, k, t, 1);
    validate_output(d2, k, t, 2);

    Eigen::VectorXd v1 = m.A * d2.weights();
    Eigen::VectorXd v2 = Bt * d1.weights();
    double u1 = d1.weights().dot(v1);
    double u2 = d2.weights().dot(v2);

    U1.add(u1);
    U2.add(u2);
    tr.u1_series.push_back(u1);
    tr.u2_series.push_back(u2);
    tr.cum_cf1 += v1;
    tr.cum_cf2 += v2;
    tr.swap_cf1.noalias() += d1.weights() * v1.transpose();
    tr.swap_cf2.noalias() += d2.weights() * v2.transpose();
    tr.cum_mass1 += d1.weights();
    tr.cum_mass2 += d2.weights();
    if (t >= tr.tail_start) {
      tr.tail_mass1 += d1.weights();
      tr.tail_mass2 += d2.weights();
    }
    for (auto& [i, profile] : tr.profiles) {
      double m1 = d1.mass_at_or_above(i - 1);
      double m2 = d2.mass_at_or_above(i - 1);
      profile.series1.push_back(m1);
      profile.series2.push_back(m2);
      if (t >= tr.tail_start) {
        profile_tails[i].first.add(m1);
        profile_tails[i].second.add(m2);
      }
    }

    bool store = options.store_stride > 0 && (t - 1) % options.store_stride == 0;
    if (!store && std::binary_search(must_store.begin(), must_store.end(), t)) store = true;
    if (store) tr.rounds.push_back({t, d1, d2, u1, u2, u1 + u2});

    alg1.observe(d2, t);
    alg2.observe(d1, t);
  }

  tr.U1 = U1.value();
  tr.U2 = U2.value();
  for (auto& [i, profile] : tr.profiles) {
    profile.tail1 = profile_tails[i].first.value() / tail_len;
    profile.tail2 = profile_tails[i].second.value() / tail_len;
  }
  return tr;
}

std::pair<double, double> cumulative_payoffs(const Transcript& tr) { return {tr.U1, tr.U2}; }

double average_buyer_price(const Transcript& tr) { return average_buyer_price(tr, 1, tr.T); }

double average_buyer_price(const Transcript& tr, int from, int to) {
  if (from < 1 || to > tr.T || from > to) throw std::invalid_argument("average_buyer_price: empty or invalid window");
  Kahan sum;
  for (int t = from; t <= to; ++t) sum.add(tr.u1_series[t - 1] + tr.u2_series[t - 1]);
  return sum.value() / (to - from + 1);
}

double external_regret(const Transcript& tr, int player) {
  const Eigen::VectorXd& cf = player == 1 ? tr.cum_cf1 : tr.cum_cf2;
  double realized = player == 1 ? tr.U1 : tr.U2;
  return cf.maxCoeff() - realized;
}

double swap_regret(const Transcript& tr, int player) {
  const Eigen::MatrixXd& m = player == 1 ? tr.swap_cf1 : tr.swap_cf2;
  double realized = player == 1 ? tr.U1 : tr.U2;
  double best = 0.0;
  for (int a = 0; a < m.rows(); ++a) best += m.row(a).maxCoeff();
  return best - realized;
}

double frequency_above(const Transcript& tr, int player, int threshold_index) {
  if (threshold_index < 0 || threshold_index >= tr.k())
    throw std::domain_error("frequency_above: threshold off grid");
  const Eigen::VectorXd& mass = player == 1 ? tr.cum_mass1 : tr.cum_mass2;
  return mass.tail(tr.k() - threshold_index).sum() / tr.T;
}

ConvergenceProfile convergence_profile(const Transcript& tr, int price_index) {
  if (price_index < 1 || price_index > tr.k())
    throw std::domain_error("convergence_profile: index off grid");
  auto it = tr.profiles.find(price_index);
  if (it != tr.profiles.end()) return it->second;
  if (tr.store_stride != 1 || static_cast<int>(tr.rounds.size()) != tr.T)
    throw std::invalid_argument(
        "convergence_profile: series not tracked and full rounds not stored");
  ConvergenceProfile p;
  p.series1.reserve(tr.T);
  p.series2.reserve(tr.T);
  Kahan t1, t2;
  for (const RoundRecord& r : tr.rounds) {
    double m1 = r.d1.mass_at_or_above(price_index - 1);
    double m2 = r.d2.mass_at_or_above(price_index - 1);
    p.series1.push_back(m1);
    p.series2.push_back(m2);
    if (r.t >= tr.tail_start) {
      t1.add(m1);
      t2.add(m2);
    }
  }
  int tail_len = tr.T - tr.tail_start + 1;
  p.tail1 = t1.value() / tail_len;
  p.tail2 = t2.value() / tail_len;
  return p;
}

AlgorithmSpaceGaps algorithm_space_gaps(const Transcript& tr, double stackelberg_leader_value) {
  return {external_regret(tr, 1), stackelberg_leader_value * tr.T - tr.U2};
}

}  // namespace pricing
