#include "propor/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "propor/selection.hpp"

namespace propor {

namespace {

Scenario round_scenario(const Scenario& base, const std::vector<Observer>& observers,
                        const EpisodeRound& round) {
  Scenario s;
  s.violation = round.violation;
  s.violator_id = round.violator_id;
  s.params = base.params;
  s.observers = observers;
  for (auto& o : s.observers) {
    if (o.id == round.violator_id) {
      o.role = ObserverRole::Violator;
      o.prefers_self_advocacy = false;
    } else if (o.role == ObserverRole::Violator) {
      o.role = ObserverRole::Bystander;
    }
  }
  return s;
}

SpeechAct policy_act(ResponsePolicy policy, const Scenario& s, ModelVariant variant,
                     UtilityBreakdown& breakdown) {
  switch (policy) {
    case ResponsePolicy::SelectBest: {
      auto result = select_response(s, variant);
      breakdown = std::move(result.breakdown);
      return std::move(result.chosen);
    }
    case ResponsePolicy::AlwaysHonestBald: {
      const auto bald = PolitenessStrategy::BaldOnRecord;
      const double conveyed =
          std::min(s.violation.actual_severity.value(), s.params.conveyance_cap[bald]);
      auto act = SpeechAct::utterance(Severity(conveyed), bald, s.params);
      breakdown = total_utility(s, act, variant);
      return act;
    }
    case ResponsePolicy::AlwaysSilent:
      break;
  }
  breakdown = total_utility(s, SpeechAct::silence(), variant);
  return SpeechAct::silence();
}

}  // namespace

std::string to_string(ResponsePolicy policy) {
  switch (policy) {
    case ResponsePolicy::SelectBest: return "select_best";
    case ResponsePolicy::AlwaysHonestBald: return "always_honest_bald";
    case ResponsePolicy::AlwaysSilent: return "always_silent";
  }
  return "unknown";
}

ResponsePolicy parse_policy(const std::string& text, const std::string& path) {
  if (text == "select_best") return ResponsePolicy::SelectBest;
  if (text == "always_honest_bald") return ResponsePolicy::AlwaysHonestBald;
  if (text == "always_silent") return ResponsePolicy::AlwaysSilent;
  throw ValidationError(path, "unknown policy '" + text +
                                  "' (expected select_best|always_honest_bald|always_silent)");
}

void EpisodeScript::validate(const std::string& prefix) const {
  initial_scenario.validate("scenario.");
  if (rounds.empty()) throw ValidationError(prefix + "rounds", "must contain at least one round");
  std::set<std::string> ids;
  for (const auto& o : initial_scenario.observers) ids.insert(o.id);
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const std::string path = prefix + "rounds[" + std::to_string(i) + "].";
    if (!ids.contains(rounds[i].violator_id)) {
      throw ValidationError(path + "violator_id",
                            "'" + rounds[i].violator_id + "' does not name an observer");
    }
  }
}

std::vector<Observer> update_beliefs(const std::vector<Observer>& observers, const SpeechAct& act,
                                     double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ValidationError("lambda", "value outside permitted range [0,1]");
  }
  std::vector<Observer> updated = observers;
  const auto* u = act.as_utterance();
  if (u == nullptr) return updated;
  const double target = u->conveyed_severity.value();
  for (auto& o : updated) {
    const double rate = o.update_rate.value_or(lambda);
    const double current = o.perceived_severity.value();
    const double next = std::clamp(current + rate * (target - current), 0.0, 1.0);
    o.perceived_severity = Severity(next);
  }
  return updated;
}

EpisodeSummary summarize(const std::vector<RoundRecord>& rounds) {
  EpisodeSummary summary;
  double error_sum = 0.0;
  std::size_t samples = 0;
  for (const auto& r : rounds) {
    const double actual = r.round.violation.actual_severity.value();
    for (const auto& [id, belief] : r.beliefs) {
      error_sum += std::abs(belief - actual);
      ++samples;
    }
    summary.cumulative_face_threat += r.breakdown.face_threat;
    if (const auto* u = r.act.as_utterance()) {
      summary.cumulative_honesty_gap += std::abs(u->conveyed_severity.value() - actual);
    }
  }
  if (samples > 0) summary.mean_belief_error = error_sum / static_cast<double>(samples);
  return summary;
}

EpisodeTrace run_episode(const EpisodeScript& script, ModelVariant variant) {
  script.validate();
  const double lambda = script.initial_scenario.params.lambda;
  std::vector<Observer> observers = script.initial_scenario.observers;

  EpisodeTrace trace;
  trace.rounds.reserve(script.rounds.size());
  for (const auto& round : script.rounds) {
    const Scenario s = round_scenario(script.initial_scenario, observers, round);
    RoundRecord record;
    record.round = round;
    record.act = policy_act(script.policy, s, variant, record.breakdown);
    observers = update_beliefs(observers, record.act, lambda);
    for (const auto& o : observers) record.beliefs[o.id] = o.perceived_severity.value();
    trace.rounds.push_back(std::move(record));
  }
  trace.summary = summarize(trace.rounds);
  return trace;
}

}  // namespace propor
