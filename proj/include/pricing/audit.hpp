#pragma once

#include "pricing/simulator.hpp"

namespace pricing {

struct MeanBasedViolation {
  int round;
  int action;
  double weight;   // mass placed on the lagging action
  double avg_lag;  // how far the action trailed in time-average payoff
};

// Flags every (round, action) where the action trailed some other action by
// at least gamma in time-average historical payoff and still carried more
// than gamma weight. History means rounds before t (an algorithm cannot see
// round t's opponent play when choosing round t). gamma <= 0 selects the
// default 1/sqrt(T). Requires full round storage.
std::vector<MeanBasedViolation> mean_based_audit(const Transcript& tr, int player,
                                                 double gamma = 0.0);

struct AuditReport {
  int T = 0;
  int k = 0;
  double external_regret1 = 0.0, external_regret2 = 0.0;
  double swap_regret1 = 0.0, swap_regret2 = 0.0;
  // -1 when the transcript lacks full rounds (audit not computable).
  long long mean_based_violations1 = -1, mean_based_violations2 = -1;
  double gamma = 0.0;
  Eigen::MatrixXd frequency_above;  // 2 x k: row per player, column per threshold
  double avg_buyer_price = 0.0;
  double tail_avg_buyer_price = 0.0;
  double avg_payoff1 = 0.0, avg_payoff2 = 0.0;
  // |avg buyer price - (U1+U2)/T|; the value-transfer accounting identity.
  double buyer_identity_residual = 0.0;
  bool swap_dominates_external = false;
};

AuditReport audit_transcript(const Transcript& tr, double gamma = 0.0);

}  // namespace pricing
