#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "pricing/audit.hpp"
#include "pricing/equilibrium.hpp"
#include "pricing/simulator.hpp"

namespace pricing {

using json = nlohmann::ordered_json;

json model_to_json(const MarketModel& model);
MarketModel model_from_json(const json& j);

json config_to_json(const AlgorithmConfig& config);
AlgorithmConfig config_from_json(const json& j);

// {k, model, tau?, leader_value, follower_value, follower_action, leader_dist}
json stage_solution_to_json(const StageSolution& solution, const MarketModel& model);

json audit_report_to_json(const AuditReport& report);

// Transcript persistence: JSON lines, a header object followed by one record
// per stored round. Doubles round-trip exactly.
void write_transcript(std::ostream& os, const Transcript& tr);
void write_transcript_file(const std::string& path, const Transcript& tr);

// Loading re-verifies the per-round invariants (payoff recomputation and the
// buyer-price identity) and rebuilds the streaming aggregates; requires a
// transcript stored with stride 1. Malformed input reports a byte offset.
Transcript load_transcript(std::istream& is);
Transcript load_transcript_file(const std::string& path);

}  // namespace pricing
