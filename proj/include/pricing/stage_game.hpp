#pragma once

#include <iosfwd>
#include <vector>

#include "pricing/distribution.hpp"
#include "pricing/market_model.hpp"

namespace pricing {

// Dense stage-payoff tables. A(i,j) is seller 1's payoff when seller 1 plays
// grid index i and seller 2 plays j; B is seller 2's. Both allocation rules
// are symmetric, so B = A^T.
struct PayoffMatrices {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;

  int k() const { return static_cast<int>(A.rows()); }
};

// Tabulates stage_payoff over the full grid. Guarded at k <= 10000.
PayoffMatrices payoff_matrices(const MarketModel& model);

// Expected payoffs of mixed strategies: the bilinear forms d1' A d2, d1' B d2.
std::pair<double, double> expected_payoff(const PayoffMatrices& m, const PriceDistribution& d1,
                                          const PriceDistribution& d2);
std::pair<double, double> expected_payoff(const MarketModel& model, const PriceDistribution& d1,
                                          const PriceDistribution& d2);

// Expected price paid by the buyer, which equals u1 + u2 under unit demand.
double buyer_price(const PayoffMatrices& m, const PriceDistribution& d1,
                   const PriceDistribution& d2);
double buyer_price(const MarketModel& model, const PriceDistribution& d1,
                   const PriceDistribution& d2);

// Same quantity accumulated directly as E[p1*C1 + p2*C2] from the allocation
// rule, without going through the payoff matrices. Kept as a separate code
// path so the two can be cross-checked.
double buyer_price_direct(const MarketModel& model, const PriceDistribution& d1,
                          const PriceDistribution& d2);

// Payoff of every own pure price against an opponent mixed strategy, i.e.
// the vector A * opp (identical for either seller in these symmetric games).
Eigen::VectorXd pure_payoffs(const PayoffMatrices& m, const PriceDistribution& opponent);
Eigen::VectorXd pure_payoffs(const MarketModel& model, const PriceDistribution& opponent);

struct BestResponse {
  std::vector<int> indices;  // grid indices within tolerance of the maximum
  double value = 0.0;        // exact maximum payoff
};

// All pure prices whose payoff against `opponent` is within `tolerance` of
// the best. Tie handling is left to the caller.
BestResponse best_response_set(const MarketModel& model, const PriceDistribution& opponent,
                               double tolerance = 0.0);
BestResponse best_response_set(const PayoffMatrices& m, const PriceDistribution& opponent,
                               double tolerance = 0.0);

// CSV export: header row of column prices, one row per seller-1 price,
// 12 significant digits.
void write_payoff_csv(std::ostream& os, const MarketModel& model);

}  // namespace pricing
