#include "gbl/policy.hpp"

#include <nlohmann/json.hpp>

#include "gbl/errors.hpp"

namespace gbl {

UniformPolicy::UniformPolicy(int num_arms) {
  if (num_arms < 1) throw InputError("uniform policy needs at least one arm");
  const auto k = static_cast<std::size_t>(num_arms);
  dist_.probs.assign(k, 1.0 / num_arms);
  dist_.exploit_part = dist_.probs;
  dist_.explore_part.assign(k, 0.0);
}

Exp3gPolicy::Exp3gPolicy(FeedbackGraph graph, const DominatingSet& dom, std::int64_t horizon)
    : graph_(std::move(graph)), state_(exp3g_init(graph_, dom, horizon)) {}

const ActionDistribution& Exp3gPolicy::distribution() {
  dist_ = exp3g_distribution(state_);
  return dist_;
}

RoundEvents Exp3gPolicy::observe(const RoundObservation& obs) {
  exp3g_update(state_, graph_, obs, dist_);
  return {};
}

BobwPolicy::BobwPolicy(BobwParams params, std::int64_t horizon)
    : params_(std::move(params)), horizon_(horizon), state_(BobwState::initial(params_)) {
  if (horizon_ < 1) throw InputError("horizon must be >= 1");
}

const ActionDistribution& BobwPolicy::distribution() {
  if (!dist_ready_) {
    dist_ = exp3g_ ? exp3g_distribution(*exp3g_) : action_distribution(state_, params_);
    dist_ready_ = true;
  }
  return dist_;
}

RoundEvents BobwPolicy::observe(const RoundObservation& obs) {
  if (!dist_ready_) throw InternalError("observe() before distribution() in this round");
  dist_ready_ = false;
  if (exp3g_) {
    exp3g_update(*exp3g_, params_.graph, obs, dist_);
    return {};
  }
  RoundEvents events = step(state_, obs, dist_, params_);
  if (events.detected) {
    const std::int64_t remaining = horizon_ - *state_.detect_round;
    // Past the horizon there is nothing left to play; keep a 1-round instance.
    exp3g_ = exp3g_init(params_.graph, params_.dom, std::max<std::int64_t>(remaining, 1));
  }
  return events;
}

namespace {

using nlohmann::json;

json optional_map(const std::vector<std::optional<std::int64_t>>& values) {
  json out = json::object();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i]) out[std::to_string(i + 1)] = *values[i];
  return out;
}

std::vector<std::optional<std::int64_t>> read_optional_map(const json& j, std::size_t k) {
  std::vector<std::optional<std::int64_t>> out(k);
  for (const auto& [key, value] : j.items()) {
    const auto arm = std::stoul(key);
    if (arm < 1 || arm > k) throw InputError("snapshot arm " + key + " out of range");
    out[arm - 1] = value.get<std::int64_t>();
  }
  return out;
}

json arm_list(const std::vector<char>& flags) {
  json out = json::array();
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) out.push_back(i + 1);
  return out;
}

std::vector<char> read_arm_list(const json& j, std::size_t k) {
  std::vector<char> out(k, 0);
  for (const auto& v : j) {
    const auto arm = v.get<std::size_t>();
    if (arm < 1 || arm > k) throw InputError("snapshot arm out of range");
    out[arm - 1] = 1;
  }
  return out;
}

json sums(const std::vector<CompensatedSum>& values) {
  json out = json::array();
  for (const auto& s : values) out.push_back({s.sum, s.compensation});
  return out;
}

std::vector<CompensatedSum> read_sums(const json& j, std::size_t k) {
  if (j.size() != k) throw InputError("snapshot per-arm array has the wrong length");
  std::vector<CompensatedSum> out;
  for (const auto& v : j) out.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  return out;
}

}  // namespace

std::string BobwPolicy::snapshot() const {
  json doc;
  doc["round"] = state_.round;
  doc["phase"] = state_.phase == Phase::bobw ? "BOBW" : "EXP3G";
  doc["active"] = arm_list(state_.active);
  doc["active_dom"] = arm_list(state_.active_dom);
  doc["tau"] = optional_map(state_.tau);
  doc["tau_dom"] = optional_map(state_.tau_dom);
  doc["tau_prime"] = optional_map(state_.tau_prime);
  json frozen = json::object();
  for (Arm j : params_.dom.members()) frozen[std::to_string(j)] = state_.frozen_u[static_cast<std::size_t>(j - 1)];
  doc["frozen_u"] = frozen;
  doc["est_sum"] = sums(state_.est_sum);
  doc["inv_gamma_sum"] = sums(state_.inv_gamma_sum);
  doc["detect_round"] = state_.detect_round ? json(*state_.detect_round) : json(nullptr);
  if (exp3g_) {
    doc["exp3g"] = {{"log_weights", exp3g_->log_weights}, {"gamma", exp3g_->gamma},
                    {"eta", exp3g_->eta},                 {"horizon", exp3g_->horizon},
                    {"round", exp3g_->round}};
  } else {
    doc["exp3g"] = nullptr;
  }
  return doc.dump();
}

BobwPolicy BobwPolicy::restore(BobwParams params, std::int64_t horizon, std::string_view snapshot) {
  BobwPolicy policy(std::move(params), horizon);
  const auto k = static_cast<std::size_t>(policy.params_.graph.num_arms());
  try {
    const json doc = json::parse(snapshot);
    BobwState& s = policy.state_;
    s.round = doc.at("round").get<std::int64_t>();
    const auto phase = doc.at("phase").get<std::string>();
    if (phase != "BOBW" && phase != "EXP3G") throw InputError("snapshot phase must be BOBW or EXP3G");
    s.phase = phase == "BOBW" ? Phase::bobw : Phase::exp3g;
    s.active = read_arm_list(doc.at("active"), k);
    s.active_dom = read_arm_list(doc.at("active_dom"), k);
    s.tau = read_optional_map(doc.at("tau"), k);
    s.tau_dom = read_optional_map(doc.at("tau_dom"), k);
    s.tau_prime = read_optional_map(doc.at("tau_prime"), k);
    for (const auto& [key, value] : doc.at("frozen_u").items()) {
      const auto arm = std::stoul(key);
      if (arm < 1 || arm > k) throw InputError("snapshot arm " + key + " out of range");
      s.frozen_u[arm - 1] = value.get<double>();
    }
    s.est_sum = read_sums(doc.at("est_sum"), k);
    s.inv_gamma_sum = read_sums(doc.at("inv_gamma_sum"), k);
    if (!doc.at("detect_round").is_null()) s.detect_round = doc.at("detect_round").get<std::int64_t>();
    if (!doc.at("exp3g").is_null()) {
      const json& e = doc.at("exp3g");
      Exp3gState ex = exp3g_init_with(policy.params_.graph, policy.params_.dom, e.at("horizon").get<std::int64_t>(),
                                      e.at("gamma").get<double>(), e.at("eta").get<double>());
      ex.log_weights = e.at("log_weights").get<std::vector<double>>();
      if (ex.log_weights.size() != k) throw InputError("snapshot Exp3.G weights have the wrong length");
      ex.round = e.at("round").get<std::int64_t>();
      policy.exp3g_ = std::move(ex);
    }
    if (s.phase == Phase::exp3g && !policy.exp3g_) throw InputError("snapshot in EXP3G phase lacks Exp3.G state");
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed snapshot: ") + e.what());
  }
  return policy;
}

}  // namespace gbl
