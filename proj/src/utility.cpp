#include "propor/utility.hpp"

#include <algorithm>
#include <cmath>

namespace propor {

namespace {

// Per-observer moral term. The dishonesty penalty sits inside the observer sum.
double correction_term(const Observer& o, double actual, double conveyed, double beta) {
  const double dishonesty = std::abs(actual - conveyed);
  return (std::abs(actual - o.perceived_severity.value()) - dishonesty) - beta * dishonesty;
}

double moral_contribution(const Observer& o, const Scenario& s, double conveyed,
                          ModelVariant variant) {
  const auto& p = s.params;
  const double actual = s.violation.actual_severity.value();
  const double term = correction_term(o, actual, conveyed, p.beta);
  if (variant == ModelVariant::Base) return term;
  double value = p.role_weights[o.role] * term;
  if (o.role == ObserverRole::Victim) value += p.w_harm * std::min(conveyed, actual);
  return value;
}

double shame_bonus(const Scenario& s, double threat, ModelVariant variant) {
  if (variant == ModelVariant::Base || !s.violation.harm_done) return 0.0;
  return s.params.gamma * std::min(threat, s.params.face_cap);
}

// Undiscounted social term for one observer, spillover and self-advocacy
// penalties included.
double social_contribution(const Observer& o, const ModelParams& p, double threat,
                           ModelVariant variant) {
  if (variant == ModelVariant::Base) return -(o.importance * threat);
  double load = o.importance;
  if (!o.aware_of_norm) load += p.kappa;
  double value = -(threat * load);
  if (o.role == ObserverRole::Victim && o.prefers_self_advocacy) value -= p.rho * threat;
  return value;
}

struct AudienceLoad {
  double load = 0.0;
  std::size_t self_advocates = 0;
};

AudienceLoad audience_load(const Scenario& s, const std::vector<std::size_t>& order) {
  AudienceLoad a;
  std::size_t unaware = 0;
  for (auto i : order) {
    const auto& o = s.observers[i];
    a.load += o.importance;
    if (!o.aware_of_norm) ++unaware;
    if (o.role == ObserverRole::Victim && o.prefers_self_advocacy) ++a.self_advocates;
  }
  a.load += s.params.kappa * static_cast<double>(unaware);
  return a;
}

}  // namespace

std::string to_string(ModelVariant variant) {
  return variant == ModelVariant::Base ? "base" : "extended";
}

ModelVariant parse_variant(const std::string& text, const std::string& path) {
  if (text == "base") return ModelVariant::Base;
  if (text == "extended") return ModelVariant::Extended;
  throw ValidationError(path, "unknown variant '" + text + "' (expected base|extended)");
}

double moral_utility(const Scenario& scenario, const SpeechAct& act, ModelVariant variant) {
  const auto* u = act.as_utterance();
  if (u == nullptr) return 0.0;
  const double conveyed = u->conveyed_severity.value();
  double sum = 0.0;
  for (auto i : sorted_order(scenario.observers)) {
    sum += moral_contribution(scenario.observers[i], scenario, conveyed, variant);
  }
  return sum + shame_bonus(scenario, face_threat(act, scenario.params), variant);
}

double social_utility(const Scenario& scenario, const SpeechAct& act, ModelVariant variant) {
  if (act.is_silence()) return 0.0;
  const double threat = face_threat(act, scenario.params);
  const auto order = sorted_order(scenario.observers);
  if (variant == ModelVariant::Base) {
    double sum = 0.0;
    for (auto i : order) sum += scenario.observers[i].importance * threat;
    return -sum;
  }
  const auto a = audience_load(scenario, order);
  const double discounted = std::pow(a.load, scenario.params.alpha);
  return -(threat * discounted) -
         scenario.params.rho * threat * static_cast<double>(a.self_advocates);
}

UtilityBreakdown total_utility(const Scenario& scenario, const SpeechAct& act,
                               ModelVariant variant) {
  UtilityBreakdown b;
  b.moral = moral_utility(scenario, act, variant);
  b.social = social_utility(scenario, act, variant);
  b.total = b.moral + b.social;
  b.face_threat = face_threat(act, scenario.params);

  const auto order = sorted_order(scenario.observers);
  b.per_observer.reserve(order.size());
  const auto* u = act.as_utterance();
  for (auto i : order) {
    const auto& o = scenario.observers[i];
    ObserverContribution c{o.id, 0.0, 0.0};
    if (u != nullptr) {
      c.moral_contribution =
          moral_contribution(o, scenario, u->conveyed_severity.value(), variant);
      c.social_contribution = social_contribution(o, scenario.params, b.face_threat, variant);
    }
    b.per_observer.push_back(std::move(c));
  }

  if (variant == ModelVariant::Extended && u != nullptr) {
    b.shame_bonus = shame_bonus(scenario, b.face_threat, variant);
    b.audience_load = audience_load(scenario, order).load;
    if (b.audience_load > 0.0) {
      b.discount_factor = std::pow(b.audience_load, scenario.params.alpha) / b.audience_load;
    }
  }
  return b;
}

}  // namespace propor
