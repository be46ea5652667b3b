#include <doctest.h>

#include <random>
#include <sstream>

#include "pricing/stage_game.hpp"

using namespace pricing;

namespace {

PriceDistribution random_distribution(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd w(k);
  for (int i = 0; i < k; ++i) w[i] = u(rng);
  w /= w.sum();
  return PriceDistribution(w);
}

}  // namespace

TEST_CASE("grid prices and index mapping") {
  PriceGrid g(20);
  CHECK(g.price(0) == 0.05);
  CHECK(g.price(19) == 1.0);
  CHECK(g.index_of(0.05) == 0);
  CHECK(g.index_of(1.0) == 19);
  CHECK_THROWS_AS(g.index_of(0.512), std::domain_error);
  CHECK_THROWS_AS(g.price(20), std::domain_error);
  CHECK_THROWS_AS(PriceGrid(1), std::invalid_argument);
}

TEST_CASE("bertrand allocation: lower price takes the demand") {
  auto model = MarketModel::bertrand(10);
  auto [s1, s2] = allocate(model, model.grid.index_of(0.5), model.grid.index_of(0.7));
  CHECK(s1 == 1.0);
  CHECK(s2 == 0.0);
  auto [t1, t2] = allocate(model, 4, 4);
  CHECK(t1 == 0.5);
  CHECK(t2 == 0.5);
}

TEST_CASE("logit allocation: tau=0 splits evenly, equal prices split evenly") {
  auto flat = MarketModel::logit(10, 0.0);
  for (int i = 0; i < 10; i += 3) {
    for (int j = 0; j < 10; j += 2) {
      auto [s1, s2] = allocate(flat, i, j);
      CHECK(s1 == 0.5);
      CHECK(s2 == 0.5);
    }
  }
  auto model = MarketModel::logit(10, 7.5);
  for (int i = 0; i < 10; ++i) {
    auto [s1, s2] = allocate(model, i, i);
    CHECK(s1 == 0.5);
    CHECK(s2 == 0.5);
  }
}

TEST_CASE("allocation shares sum to one and mirror on swap") {
  std::vector<MarketModel> models = {MarketModel::bertrand(13), MarketModel::logit(13, 3.7),
                                     MarketModel::logit(13, 2000.0)};
  for (const auto& model : models) {
    for (int i = 0; i < 13; ++i) {
      for (int j = 0; j < 13; ++j) {
        auto [s1, s2] = allocate(model, i, j);
        auto [r1, r2] = allocate(model, j, i);
        if (model.is_bertrand()) CHECK(s1 + s2 == 1.0);
        else CHECK(s1 + s2 == doctest::Approx(1.0).epsilon(1e-12));
        // Exact mirror, including the logit rounding.
        CHECK(s1 == r2);
        CHECK(s2 == r1);
      }
    }
  }
}

TEST_CASE("stage payoffs: bertrand examples") {
  auto model = MarketModel::bertrand(10);
  int half = model.grid.index_of(0.5);
  auto [u1, u2] = stage_payoff(model, half, half);
  CHECK(u1 == 0.25);
  CHECK(u2 == 0.25);
  auto [w1, w2] = stage_payoff(model, half, model.grid.index_of(0.7));
  CHECK(w1 == 0.5);
  CHECK(w2 == 0.0);
}

TEST_CASE("stage payoffs: logit closed form") {
  // tau=2, prices (0.5, 1.0); frozen against an arbitrary-precision
  // evaluation of 0.5 e^2/(e+e^2) and e/(e+e^2).
  auto model = MarketModel::logit(10, 2.0);
  auto [u1, u2] = stage_payoff(model, model.grid.index_of(0.5), model.grid.index_of(1.0));
  CHECK(u1 == doctest::Approx(0.36552928931500243963).epsilon(1e-15));
  CHECK(u2 == doctest::Approx(0.26894142136999512075).epsilon(1e-15));
}

TEST_CASE("payoffs bounded by own price") {
  std::mt19937_64 rng(7);
  for (const auto& model : {MarketModel::bertrand(17), MarketModel::logit(17, 12.0)}) {
    for (int i = 0; i < 17; ++i) {
      for (int j = 0; j < 17; ++j) {
        auto [u1, u2] = stage_payoff(model, i, j);
        CHECK(u1 >= 0.0);
        CHECK(u1 <= model.grid.price(i));
        CHECK(u2 >= 0.0);
        CHECK(u2 <= model.grid.price(j));
      }
    }
  }
}

TEST_CASE("payoff matrices: hand-checked k=2 tables and symmetry") {
  auto bert = payoff_matrices(MarketModel::bertrand(2));
  CHECK(bert.A(0, 0) == 0.25);
  CHECK(bert.A(0, 1) == 0.5);
  CHECK(bert.A(1, 0) == 0.0);
  CHECK(bert.A(1, 1) == 0.5);
  CHECK(bert.B == bert.A.transpose());

  auto flat = payoff_matrices(MarketModel::logit(2, 0.0));
  CHECK(flat.A(0, 0) == 0.25);
  CHECK(flat.A(0, 1) == 0.25);
  CHECK(flat.A(1, 0) == 0.5);
  CHECK(flat.A(1, 1) == 0.5);

  auto logit = payoff_matrices(MarketModel::logit(23, 31.0));
  CHECK(logit.B == logit.A.transpose());
  CHECK(logit.A.minCoeff() >= 0.0);
  CHECK(logit.A.maxCoeff() <= 1.0);
}

TEST_CASE("payoff matrices size guard") {
  CHECK_THROWS_AS(payoff_matrices(MarketModel::bertrand(10001)), std::length_error);
}

TEST_CASE("expected payoff: point masses match stage payoffs") {
  for (const auto& model : {MarketModel::bertrand(7), MarketModel::logit(7, 4.0)}) {
    PayoffMatrices m = payoff_matrices(model);
    for (int i = 0; i < 7; ++i) {
      for (int j = 0; j < 7; ++j) {
        auto [u1, u2] = expected_payoff(m, PriceDistribution::point_mass(7, i),
                                        PriceDistribution::point_mass(7, j));
        auto [s1, s2] = stage_payoff(model, i, j);
        CHECK(u1 == s1);
        CHECK(u2 == s2);
      }
    }
  }
}

TEST_CASE("expected payoff: uniform opponent example for k=5") {
  // Seller 1 at 0.6 vs uniform: wins 2/5 of the time fully, ties once,
  // so u1 = 0.6 * (0.4 + 0.1) = 0.30.
  auto model = MarketModel::bertrand(5);
  auto [u1, u2] = expected_payoff(model, PriceDistribution::point_mass(5, 2),
                                  PriceDistribution::uniform(5));
  CHECK(u1 == doctest::Approx(0.30).epsilon(1e-15));
  CHECK(u2 == doctest::Approx((0.2 + 0.4 + 0.6 / 2) / 5).epsilon(1e-14));
}

TEST_CASE("expected payoff: tau=0 logit gives half the expected own price") {
  auto model = MarketModel::logit(11, 0.0);
  std::mt19937_64 rng(3);
  Eigen::VectorXd prices(11);
  for (int i = 0; i < 11; ++i) prices[i] = model.grid.price(i);
  for (int rep = 0; rep < 10; ++rep) {
    auto d1 = random_distribution(11, rng);
    auto d2 = random_distribution(11, rng);
    auto [u1, u2] = expected_payoff(model, d1, d2);
    CHECK(u1 == doctest::Approx(prices.dot(d1.weights()) / 2).epsilon(1e-12));
    CHECK(u2 == doctest::Approx(prices.dot(d2.weights()) / 2).epsilon(1e-12));
  }
}

TEST_CASE("expected payoff is bilinear") {
  auto model = MarketModel::bertrand(9);
  PayoffMatrices m = payoff_matrices(model);
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    auto a = random_distribution(9, rng);
    auto b = random_distribution(9, rng);
    auto e = random_distribution(9, rng);
    double alpha = 0.375;
    PriceDistribution mix(alpha * a.weights() + (1 - alpha) * b.weights());
    auto [mixed, _] = expected_payoff(m, mix, e);
    auto [ua, _a] = expected_payoff(m, a, e);
    auto [ub, _b] = expected_payoff(m, b, e);
    CHECK(mixed == doctest::Approx(alpha * ua + (1 - alpha) * ub).epsilon(1e-12));
  }
}

TEST_CASE("buyer price: monopoly and undercut examples") {
  auto model = MarketModel::bertrand(10);
  PayoffMatrices m = payoff_matrices(model);
  auto one = PriceDistribution::point_mass(10, 9);
  CHECK(buyer_price(m, one, one) == 1.0);
  CHECK(buyer_price(m, PriceDistribution::point_mass(10, model.grid.index_of(0.5)),
                    PriceDistribution::point_mass(10, model.grid.index_of(0.7))) == 0.5);
}

TEST_CASE("buyer price: two independent routes agree on random inputs") {
  std::mt19937_64 rng(2024);
  for (const auto& model : {MarketModel::bertrand(15), MarketModel::logit(15, 9.0)}) {
    PayoffMatrices m = payoff_matrices(model);
    for (int rep = 0; rep < 100; ++rep) {
      auto d1 = random_distribution(15, rng);
      auto d2 = random_distribution(15, rng);
      double via_payoffs = buyer_price(m, d1, d2);
      double direct = buyer_price_direct(model, d1, d2);
      CHECK(via_payoffs == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("logit share monotone in tau and sharp at huge tau") {
  int k = 25;
  int lo = 3, hi = 4;  // adjacent grid prices, p1 < p2
  double prev = 0.0;
  for (double tau : {0.0, 1.0, 5.0, 25.0, 250.0, 2500.0}) {
    auto [s1, s2] = allocate(MarketModel::logit(k, tau), lo, hi);
    CHECK(s1 >= prev);
    prev = s1;
  }
  auto [sharp, _] = allocate(MarketModel::logit(k, 1e4 * k), lo, hi);
  CHECK(sharp > 0.999);
}

TEST_CASE("best responses: bertrand examples") {
  auto model = MarketModel::bertrand(5);
  BestResponse br = best_response_set(model, PriceDistribution::uniform(5), 1e-12);
  REQUIRE(br.indices.size() == 1);
  CHECK(model.grid.price(br.indices[0]) == doctest::Approx(0.6));
  CHECK(br.value == doctest::Approx(0.30).epsilon(1e-15));

  auto bottom = PriceDistribution::point_mass(5, 0);
  BestResponse tie = best_response_set(model, bottom, 0.0);
  REQUIRE(tie.indices.size() == 1);
  CHECK(tie.indices[0] == 0);
  CHECK(tie.value == doctest::Approx(1.0 / 10).epsilon(1e-15));
}

TEST_CASE("best response tolerance widens the set") {
  auto model = MarketModel::bertrand(20);
  BestResponse tight = best_response_set(model, PriceDistribution::uniform(20), 0.0);
  BestResponse loose = best_response_set(model, PriceDistribution::uniform(20), 0.01);
  CHECK(tight.indices.size() <= loose.indices.size());
  CHECK_THROWS_AS(best_response_set(model, PriceDistribution::uniform(20), -1.0),
                  std::invalid_argument);
}

TEST_CASE("logit best responses undercut large point masses") {
  // Opponent at p above the threshold: every best response sits strictly
  // below p.
  auto model = MarketModel::logit(20, 30.0);
  int p = model.grid.index_of(0.8);
  BestResponse br = best_response_set(model, PriceDistribution::point_mass(20, p), 1e-12);
  for (int idx : br.indices) CHECK(idx < p);
}

TEST_CASE("payoff csv export shape and precision") {
  std::ostringstream os;
  write_payoff_csv(os, MarketModel::bertrand(4));
  std::istringstream is(os.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == "price,0.25,0.5,0.75,1");
  std::string row;
  std::getline(is, row);
  CHECK(row == "0.25,0.125,0.25,0.25,0.25");
  int rows = 1;
  while (std::getline(is, row)) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("distribution validation") {
  Eigen::VectorXd bad(3);
  bad << 0.5, 0.6, 0.1;
  CHECK_THROWS_AS(PriceDistribution{bad}, std::invalid_argument);
  Eigen::VectorXd neg(3);
  neg << 1.2, -0.2, 0.0;
  CHECK_THROWS_AS(PriceDistribution{neg}, std::invalid_argument);
  CHECK(PriceDistribution::uniform(4).mass_at_or_above(2) == doctest::Approx(0.5));
}
