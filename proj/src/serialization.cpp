#include "pricing/serialization.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pricing/format.hpp"

namespace pricing {

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
  return v;
}

}  // namespace

json model_to_json(const MarketModel& model) {
  json j{{"rule", model.rule_name()}, {"k", model.k()}};
  if (!model.is_bertrand()) j["tau"] = model.tau;
  return j;
}

MarketModel model_from_json(const json& j) {
  std::string rule = j.at("rule").get<std::string>();
  int k = j.at("k").get<int>();
  if (rule == "bertrand") return MarketModel::bertrand(k);
  if (rule == "logit") return MarketModel::logit(k, j.at("tau").get<double>());
  throw std::invalid_argument("model_from_json: unknown rule " + rule);
}

json config_to_json(const AlgorithmConfig& config) {
  using Kind = AlgorithmConfig::Kind;
  json j{{"kind", config.kind_name()}};
  switch (config.kind) {
    case Kind::Hedge:
    case Kind::BlumMansour:
      if (config.learning_rate > 0) j["eta"] = config.learning_rate;
      else j["eta"] = "auto";
      j["seed"] = config.seed;
      j["horizon_aware"] = config.horizon_aware;
      break;
    case Kind::Ftpl:
      if (config.scale > 0) j["scale"] = config.scale;
      else j["scale"] = "auto";
      j["seed"] = config.seed;
      break;
    case Kind::Static:
      j["dist"] = vector_to_json(config.static_dist.weights());
      break;
    case Kind::Scripted: {
      json sched = json::array();
      for (const ScheduleEntry& e : config.schedule)
        sched.push_back({{"from", e.from}, {"to", e.to}, {"dist", vector_to_json(e.dist.weights())}});
      j["schedule"] = sched;
      break;
    }
    case Kind::Custom:
      j["name"] = config.custom_name;
      break;
    case Kind::Uniform:
    case Kind::ThreatLeader:
      break;
  }
  return j;
}

AlgorithmConfig config_from_json(const json& j) {
  using Kind = AlgorithmConfig::Kind;
  AlgorithmConfig c;
  c.kind = AlgorithmConfig::kind_from_name(j.at("kind").get<std::string>());
  if (j.contains("eta") && j["eta"].is_number()) c.learning_rate = j["eta"].get<double>();
  if (j.contains("scale") && j["scale"].is_number()) c.scale = j["scale"].get<double>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("horizon_aware")) c.horizon_aware = j["horizon_aware"].get<bool>();
  if (c.kind == Kind::Static) {
    if (j.contains("price")) {
      // Convenience: {"kind":"static","price":0.5,"k":20}
      int k = j.at("k").get<int>();
      PriceGrid grid(k);
      c.static_dist = PriceDistribution::point_mass(k, grid.index_of(j["price"].get<double>()));
    } else {
      c.static_dist = PriceDistribution(vector_from_json(j.at("dist")));
    }
  }
  if (c.kind == Kind::Scripted) {
    for (const json& e : j.at("schedule")) {
      ScheduleEntry entry{e.at("from").get<int>(), e.at("to").get<int>(),
                          PriceDistribution(vector_from_json(e.at("dist")))};
      c.schedule.push_back(std::move(entry));
    }
  }
  if (j.contains("name")) c.custom_name = j["name"].get<std::string>();
  return c;
}

json stage_solution_to_json(const StageSolution& solution, const MarketModel& model) {
  json j{{"k", model.k()}, {"model", model.rule_name()}};
  if (!model.is_bertrand()) j["tau"] = model.tau;
  j["leader_value"] = solution.leader_value;
  j["follower_value"] = solution.follower_value;
  j["follower_action"] = model.grid.price(solution.follower_index);
  j["leader_dist"] = vector_to_json(solution.leader_dist.weights());
  return j;
}

json audit_report_to_json(const AuditReport& r) {
  json freq1 = json::array(), freq2 = json::array();
  for (int i = 0; i < r.k; ++i) {
    freq1.push_back(r.frequency_above(0, i));
    freq2.push_back(r.frequency_above(1, i));
  }
  return json{{"T", r.T},
              {"k", r.k},
              {"external_regret", {r.external_regret1, r.external_regret2}},
              {"swap_regret", {r.swap_regret1, r.swap_regret2}},
              {"mean_based_violations", {r.mean_based_violations1, r.mean_based_violations2}},
              {"gamma", r.gamma},
              {"frequency_at_or_above", {{"player1", freq1}, {"player2", freq2}}},
              {"avg_payoff", {r.avg_payoff1, r.avg_payoff2}},
              {"avg_buyer_price", r.avg_buyer_price},
              {"tail_avg_buyer_price", r.tail_avg_buyer_price},
              {"buyer_identity_residual", r.buyer_identity_residual},
              {"swap_dominates_external", r.swap_dominates_external}};
}

void write_transcript(std::ostream& os, const Transcript& tr) {
  json header{{"format_version", 1},
              {"model", model_to_json(tr.model)},
              {"T", tr.T},
              {"store_stride", tr.store_stride},
              {"tail_start", tr.tail_start},
              {"config1", config_to_json(tr.config1)},
              {"config2", config_to_json(tr.config2)}};
  os << header.dump() << '\n';
  std::string line;
  for (const RoundRecord& r : tr.rounds) {
    line.clear();
    line += "{\"t\":" + std::to_string(r.t) + ",\"d1\":[";
    for (int i = 0; i < r.d1.k(); ++i) {
      if (i) line += ',';
      line += format_exact(r.d1[i]);
    }
    line += "],\"d2\":[";
    for (int i = 0; i < r.d2.k(); ++i) {
      if (i) line += ',';
      line += format_exact(r.d2[i]);
    }
    line += "],\"u1\":" + format_exact(r.u1) + ",\"u2\":" + format_exact(r.u2) +
            ",\"bp\":" + format_exact(r.buyer_price) + "}";
    os << line << '\n';
  }
}

void write_transcript_file(const std::string& path, const Transcript& tr) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_transcript(os, tr);
}

Transcript load_transcript(std::istream& is) {
  std::string line;
  std::size_t offset = 0;
  int line_no = 0;

  auto parse_line = [&](const std::string& text) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw std::runtime_error("transcript parse error at byte " +
                               std::to_string(offset + (e.byte ? e.byte - 1 : 0)) + " (line " +
                               std::to_string(line_no) + "): " + e.what());
    }
  };

  if (!std::getline(is, line)) throw std::runtime_error("transcript is empty");
  ++line_no;
  json header = parse_line(line);
  offset += line.size() + 1;

  Transcript tr;
  tr.model = model_from_json(header.at("model"));
  tr.T = header.at("T").get<int>();
  tr.store_stride = header.at("store_stride").get<int>();
  tr.tail_start = header.at("tail_start").get<int>();
  tr.config1 = config_from_json(header.at("config1"));
  tr.config2 = config_from_json(header.at("config2"));
  if (tr.store_stride != 1)
    throw std::runtime_error("load_transcript: only stride-1 transcripts can be audited");

  const int k = tr.model.k();
  PayoffMatrices m = payoff_matrices(tr.model);
  Eigen::MatrixXd Bt = m.B.transpose();
  tr.cum_cf1 = Eigen::VectorXd::Zero(k);
  tr.cum_cf2 = Eigen::VectorXd::Zero(k);
  tr.swap_cf1 = Eigen::MatrixXd::Zero(k, k);
  tr.swap_cf2 = Eigen::MatrixXd::Zero(k, k);
  tr.cum_mass1 = Eigen::VectorXd::Zero(k);
  tr.cum_mass2 = Eigen::VectorXd::Zero(k);
  tr.tail_mass1 = Eigen::VectorXd::Zero(k);
  tr.tail_mass2 = Eigen::VectorXd::Zero(k);

  double U1 = 0.0, U2 = 0.0, c1 = 0.0, c2 = 0.0;  // compensated sums
  auto kadd = [](double& sum, double& comp, double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
    else comp += (v - t) + sum;
    sum = t;
  };

  int expected_t = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) { offset += 1; continue; }
    json rec = parse_line(line);
    offset += line.size() + 1;

    RoundRecord r{rec.at("t").get<int>(), PriceDistribution(vector_from_json(rec.at("d1"))),
                  PriceDistribution(vector_from_json(rec.at("d2"))), rec.at("u1").get<double>(),
                  rec.at("u2").get<double>(), rec.at("bp").get<double>()};
    if (r.t != expected_t)
      throw std::runtime_error("transcript integrity: expected round " +
                               std::to_string(expected_t) + ", found " + std::to_string(r.t));
    ++expected_t;

    // Re-verify the stored invariants.
    auto [u1, u2] = expected_payoff(m, r.d1, r.d2);
    if (std::abs(u1 - r.u1) > 1e-12 || std::abs(u2 - r.u2) > 1e-12)
      throw std::runtime_error("transcript invariant violated at round " + std::to_string(r.t) +
                               ": stored payoffs do not match the distributions");
    if (std::abs(r.buyer_price - (r.u1 + r.u2)) > 1e-12)
      throw std::runtime_error("transcript invariant violated at round " + std::to_string(r.t) +
                               ": buyer price is not the payoff sum");

    Eigen::VectorXd v1 = m.A * r.d2.weights();
    Eigen::VectorXd v2 = Bt * r.d1.weights();
    kadd(U1, c1, r.u1);
    kadd(U2, c2, r.u2);
    tr.u1_series.push_back(r.u1);
    tr.u2_series.push_back(r.u2);
    tr.cum_cf1 += v1;
    tr.cum_cf2 += v2;
    tr.swap_cf1.noalias() += r.d1.weights() * v1.transpose();
    tr.swap_cf2.noalias() += r.d2.weights() * v2.transpose();
    tr.cum_mass1 += r.d1.weights();
    tr.cum_mass2 += r.d2.weights();
    if (r.t >= tr.tail_start) {
      tr.tail_mass1 += r.d1.weights();
      tr.tail_mass2 += r.d2.weights();
    }
    tr.rounds.push_back(std::move(r));
  }
  if (expected_t != tr.T + 1)
    throw std::runtime_error("transcript integrity: header promises " + std::to_string(tr.T) +
                             " rounds, found " + std::to_string(expected_t - 1));
  tr.U1 = U1 + c1;
  tr.U2 = U2 + c2;
  return tr;
}

Transcript load_transcript_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return load_transcript(is);
}

}  // namespace pricing
