#include "pricing/market_model.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace pricing {

std::pair<double, double> allocate(const MarketModel& model, int i, int j) {
  const PriceGrid& g = model.grid;
  double p1 = g.price(i);
  double p2 = g.price(j);
  if (model.is_bertrand()) {
    if (i < j) return {1.0, 0.0};
    if (i > j) return {0.0, 1.0};
    return {0.5, 0.5};
  }
  // share1 = e^{tau p2} / (e^{tau p1} + e^{tau p2}); shift by tau*max(p1,p2)
  // so the exponents are <= 0. Both shares use the one rounded denominator,
  // which keeps allocate(i,j) and allocate(j,i) exact mirror images.
  double m = model.tau * std::max(p1, p2);
  double e1 = std::exp(model.tau * p1 - m);
  double e2 = std::exp(model.tau * p2 - m);
  double denom = e1 + e2;
  return {e2 / denom, e1 / denom};
}

std::pair<double, double> stage_payoff(const MarketModel& model, int i, int j) {
  auto [c1, c2] = allocate(model, i, j);
  return {model.grid.price(i) * c1, model.grid.price(j) * c2};
}

}  // namespace pricing
