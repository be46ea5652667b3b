#include "pricing/audit.hpp"

#include <cmath>

namespace pricing {

std::vector<MeanBasedViolation> mean_based_audit(const Transcript& tr, int player, double gamma) {
  if (tr.store_stride != 1 || static_cast<int>(tr.rounds.size()) != tr.T)
    throw std::invalid_argument("mean_based_audit: requires full round storage");
  if (gamma <= 0.0) gamma = 1.0 / std::sqrt(double(tr.T));

  const int k = tr.k();
  PayoffMatrices m = payoff_matrices(tr.model);
  Eigen::MatrixXd own = player == 1 ? m.A : Eigen::MatrixXd(m.B.transpose());

  std::vector<MeanBasedViolation> violations;
  Eigen::VectorXd cum = Eigen::VectorXd::Zero(k);
  for (const RoundRecord& r : tr.rounds) {
    int t = r.t;
    const PriceDistribution& mine = player == 1 ? r.d1 : r.d2;
    const PriceDistribution& other = player == 1 ? r.d2 : r.d1;
    if (t > 1) {
      double best = cum.maxCoeff();
      double denom = t - 1;
      for (int j = 0; j < k; ++j) {
        double avg_lag = (best - cum[j]) / denom;
        if (avg_lag >= gamma && mine[j] > gamma)
          violations.push_back({t, j, mine[j], avg_lag});
      }
    }
    cum += own * other.weights();
  }
  return violations;
}

AuditReport audit_transcript(const Transcript& tr, double gamma) {
  AuditReport r;
  r.T = tr.T;
  r.k = tr.k();
  r.gamma = gamma > 0.0 ? gamma : 1.0 / std::sqrt(double(tr.T));
  r.external_regret1 = external_regret(tr, 1);
  r.external_regret2 = external_regret(tr, 2);
  r.swap_regret1 = swap_regret(tr, 1);
  r.swap_regret2 = swap_regret(tr, 2);
  if (tr.store_stride == 1 && static_cast<int>(tr.rounds.size()) == tr.T) {
    r.mean_based_violations1 = static_cast<long long>(mean_based_audit(tr, 1, gamma).size());
    r.mean_based_violations2 = static_cast<long long>(mean_based_audit(tr, 2, gamma).size());
  }
  r.frequency_above.resize(2, r.k);
  for (int i = 0; i < r.k; ++i) {
    r.frequency_above(0, i) = frequency_above(tr, 1, i);
    r.frequency_above(1, i) = frequency_above(tr, 2, i);
  }
  r.avg_buyer_price = average_buyer_price(tr);
  r.tail_avg_buyer_price = average_buyer_price(tr, tr.tail_start, tr.T);
  r.avg_payoff1 = tr.U1 / tr.T;
  r.avg_payoff2 = tr.U2 / tr.T;
  r.buyer_identity_residual = std::abs(r.avg_buyer_price - (tr.U1 + tr.U2) / tr.T);
  r.swap_dominates_external = r.swap_regret1 >= r.external_regret1 - 1e-9 &&
                              r.swap_regret2 >= r.external_regret2 - 1e-9;
  return r;
}

}  // namespace pricing
