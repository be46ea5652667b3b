#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace pricing {

// A mixed strategy over the k grid prices. Immutable after construction;
// construction validates nonnegativity and that the weights sum to 1 within
// 1e-12.
class PriceDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  PriceDistribution() = default;

  explicit PriceDistribution(Eigen::VectorXd weights) : w_(std::move(weights)) {
    if (w_.size() < 2) throw std::invalid_argument("PriceDistribution: needs k >= 2 weights");
    if ((w_.array() < 0.0).any())
      throw std::invalid_argument("PriceDistribution: negative weight");
    if (std::abs(w_.sum() - 1.0) > kSumTolerance)
      throw std::invalid_argument("PriceDistribution: weights do not sum to 1");
  }

  static PriceDistribution point_mass(int k, int index) {
    if (index < 0 || index >= k) throw std::domain_error("point_mass: index off grid");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
    w[index] = 1.0;
    return PriceDistribution(std::move(w));
  }

  static PriceDistribution uniform(int k) {
    return PriceDistribution(Eigen::VectorXd::Constant(k, 1.0 / k));
  }

  // Two-point mixture, handy for scripted phase boundaries.
  static PriceDistribution mixture(int k, int index_a, double weight_a, int index_b) {
    if (index_a < 0 || index_a >= k || index_b < 0 || index_b >= k)
      throw std::domain_error("mixture: index off grid");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k);
    w[index_a] += weight_a;
    w[index_b] += 1.0 - weight_a;
    return PriceDistribution(std::move(w));
  }

  int k() const { return static_cast<int>(w_.size()); }
  double operator[](int i) const { return w_[i]; }
  const Eigen::VectorXd& weights() const { return w_; }

  // Total mass on grid indices >= index.
  double mass_at_or_above(int index) const {
    return w_.tail(w_.size() - index).sum();
  }

  bool operator==(const PriceDistribution& o) const { return w_ == o.w_; }

 private:
  Eigen::VectorXd w_;
};

}  // namespace pricing
