#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace pricing {

// Price grid {1/k, 2/k, ..., 1}. Grid points are addressed by 0-based index
// throughout; index i carries the price (i+1)/k. Keeping prices as integer
// indices makes Bertrand comparisons exact.
struct PriceGrid {
  int k = 2;

  PriceGrid() = default;
  explicit PriceGrid(int k_) : k(k_) {
    if (k < 2) throw std::invalid_argument("PriceGrid: k must be >= 2");
  }

  double price(int index) const {
    if (index < 0 || index >= k) throw std::domain_error("PriceGrid: price index off grid");
    return static_cast<double>(index + 1) / k;
  }

  // Maps a real price back to its grid index; rejects off-grid values.
  int index_of(double price, double tol = 1e-9) const {
    double scaled = price * k - 1.0;
    int idx = static_cast<int>(std::lround(scaled));
    if (idx < 0 || idx >= k || std::abs(scaled - idx) > tol * k)
      throw std::domain_error("PriceGrid: price " + std::to_string(price) + " is not on the grid");
    return idx;
  }

  // Several statements quoted by the solvers assume k >= 20.
  bool constants_apply() const { return k >= 20; }
};

enum class AllocationRule { Bertrand, Logit };

// A market instance: the grid plus the demand-splitting rule. Logit carries
// the temperature tau; Bertrand is the tau -> infinity limit.
struct MarketModel {
  PriceGrid grid;
  AllocationRule rule = AllocationRule::Bertrand;
  double tau = 0.0;

  static MarketModel bertrand(int k) { return MarketModel{PriceGrid(k), AllocationRule::Bertrand, 0.0}; }

  static MarketModel logit(int k, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau))
      throw std::invalid_argument("MarketModel: logit tau must be finite and >= 0");
    return MarketModel{PriceGrid(k), AllocationRule::Logit, tau};
  }

  int k() const { return grid.k; }
  bool is_bertrand() const { return rule == AllocationRule::Bertrand; }
  std::string rule_name() const { return is_bertrand() ? "bertrand" : "logit"; }
};

// Demand split (share1, share2) for grid indices i, j. Shares sum to 1
// exactly for Bertrand and within 1e-12 for logit. The logit form subtracts
// tau*max(p1,p2) before exponentiating so large tau cannot overflow.
std::pair<double, double> allocate(const MarketModel& model, int i, int j);

// Stage payoffs u_i = p_i * share_i for pure grid prices.
std::pair<double, double> stage_payoff(const MarketModel& model, int i, int j);

}  // namespace pricing
