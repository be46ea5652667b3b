#include "pricing/stage_game.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

#include "pricing/format.hpp"

namespace pricing {

namespace {

void check_dimension(int k, const PriceDistribution& d, const char* who) {
  if (d.k() != k) throw std::invalid_argument(std::string(who) + ": distribution size does not match grid");
}

}  // namespace

PayoffMatrices payoff_matrices(const MarketModel& model) {
  int k = model.k();
  if (k > 10000) throw std::length_error("payoff_matrices: k exceeds the 10000 guard");
  PayoffMatrices m;
  m.A.resize(k, k);
  m.B.resize(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      auto [u1, u2] = stage_payoff(model, i, j);
      m.A(i, j) = u1;
      m.B(i, j) = u2;
    }
  }
  return m;
}

std::pair<double, double> expected_payoff(const PayoffMatrices& m, const PriceDistribution& d1,
                                          const PriceDistribution& d2) {
  check_dimension(m.k(), d1, "expected_payoff");
  check_dimension(m.k(), d2, "expected_payoff");
  Eigen::VectorXd Ad2 = m.A * d2.weights();
  Eigen::VectorXd Bd2 = m.B * d2.weights();
  return {d1.weights().dot(Ad2), d1.weights().dot(Bd2)};
}

std::pair<double, double> expected_payoff(const MarketModel& model, const PriceDistribution& d1,
                                          const PriceDistribution& d2) {
  int k = model.k();
  check_dimension(k, d1, "expected_payoff");
  check_dimension(k, d2, "expected_payoff");
  double u1 = 0.0, u2 = 0.0;
  for (int i = 0; i < k; ++i) {
    if (d1[i] == 0.0) continue;
    for (int j = 0; j < k; ++j) {
      if (d2[j] == 0.0) continue;
      auto [a, b] = stage_payoff(model, i, j);
      double w = d1[i] * d2[j];
      u1 += w * a;
      u2 += w * b;
    }
  }
  return {u1, u2};
}

double buyer_price(const PayoffMatrices& m, const PriceDistribution& d1,
                   const PriceDistribution& d2) {
  auto [u1, u2] = expected_payoff(m, d1, d2);
  return u1 + u2;
}

double buyer_price(const MarketModel& model, const PriceDistribution& d1,
                   const PriceDistribution& d2) {
  auto [u1, u2] = expected_payoff(model, d1, d2);
  return u1 + u2;
}

double buyer_price_direct(const MarketModel& model, const PriceDistribution& d1,
                          const PriceDistribution& d2) {
  int k = model.k();
  check_dimension(k, d1, "buyer_price_direct");
  check_dimension(k, d2, "buyer_price_direct");
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    if (d1[i] == 0.0) continue;
    for (int j = 0; j < k; ++j) {
      if (d2[j] == 0.0) continue;
      auto [c1, c2] = allocate(model, i, j);
      total += d1[i] * d2[j] * (model.grid.price(i) * c1 + model.grid.price(j) * c2);
    }
  }
  return total;
}

Eigen::VectorXd pure_payoffs(const PayoffMatrices& m, const PriceDistribution& opponent) {
  check_dimension(m.k(), opponent, "pure_payoffs");
  return m.A * opponent.weights();
}

Eigen::VectorXd pure_payoffs(const MarketModel& model, const PriceDistribution& opponent) {
  int k = model.k();
  check_dimension(k, opponent, "pure_payoffs");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (opponent[j] == 0.0) continue;
      v[i] += opponent[j] * stage_payoff(model, i, j).first;
    }
  }
  return v;
}

namespace {

BestResponse best_response_from(const Eigen::VectorXd& v, double tolerance) {
  if (tolerance < 0) throw std::invalid_argument("best_response_set: negative tolerance");
  BestResponse br;
  br.value = v.maxCoeff();
  for (int i = 0; i < v.size(); ++i)
    if (v[i] >= br.value - tolerance) br.indices.push_back(i);
  return br;
}

}  // namespace

BestResponse best_response_set(const MarketModel& model, const PriceDistribution& opponent,
                               double tolerance) {
  return best_response_from(pure_payoffs(model, opponent), tolerance);
}

BestResponse best_response_set(const PayoffMatrices& m, const PriceDistribution& opponent,
                               double tolerance) {
  return best_response_from(pure_payoffs(m, opponent), tolerance);
}

void write_payoff_csv(std::ostream& os, const MarketModel& model) {
  PayoffMatrices m = payoff_matrices(model);
  int k = model.k();
  os << "price";
  for (int j = 0; j < k; ++j) os << ',' << format_double(model.grid.price(j));
  os << '\n';
  for (int i = 0; i < k; ++i) {
    os << format_double(model.grid.price(i));
    for (int j = 0; j < k; ++j) os << ',' << format_double(m.A(i, j));
    os << '\n';
  }
}

}  // namespace pricing
