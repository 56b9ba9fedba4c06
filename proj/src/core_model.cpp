#include "propor/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace propor {

namespace {

std::string format_range(double lo, double hi, bool lo_open, bool hi_open) {
  std::ostringstream os;
  os << (lo_open ? "(" : "[") << lo << "," << hi << (hi_open ? ")" : "]");
  return os.str();
}

void check_range(double v, double lo, double hi, const std::string& path,
                 bool lo_open = false, bool hi_open = false) {
  const bool ok = std::isfinite(v) && (lo_open ? v > lo : v >= lo) &&
                  (hi_open ? v < hi : v <= hi);
  if (!ok) {
    std::ostringstream os;
    os << "value " << v << " outside permitted range "
       << format_range(lo, hi, lo_open, hi_open);
    throw ValidationError(path, os.str());
  }
}

void check_nonnegative(double v, const std::string& path) {
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << "value " << v << " outside permitted range [0,inf)";
    throw ValidationError(path, os.str());
  }
}

}  // namespace

ValidationError::ValidationError(std::string path, const std::string& message)
    : std::invalid_argument(path.empty() ? message : path + ": " + message),
      path_(std::move(path)),
      detail_(message) {}

Severity::Severity(double value, const std::string& path) : value_(value) {
  check_range(value, 0.0, 1.0, path);
}

std::string to_string(ObserverRole role) {
  switch (role) {
    case ObserverRole::Bystander: return "bystander";
    case ObserverRole::Violator: return "violator";
    case ObserverRole::Victim: return "victim";
    case ObserverRole::CoViolator: return "co_violator";
  }
  return "unknown";
}

std::string to_string(PolitenessStrategy strategy) {
  switch (strategy) {
    case PolitenessStrategy::OffRecord: return "off_record";
    case PolitenessStrategy::NegativePoliteness: return "negative_politeness";
    case PolitenessStrategy::PositivePoliteness: return "positive_politeness";
    case PolitenessStrategy::BaldOnRecord: return "bald_on_record";
  }
  return "unknown";
}

ObserverRole parse_role(const std::string& text, const std::string& path) {
  if (text == "bystander") return ObserverRole::Bystander;
  if (text == "violator") return ObserverRole::Violator;
  if (text == "victim") return ObserverRole::Victim;
  if (text == "co_violator") return ObserverRole::CoViolator;
  throw ValidationError(
      path, "unknown role '" + text + "' (expected bystander|violator|victim|co_violator)");
}

PolitenessStrategy parse_strategy(const std::string& text, const std::string& path) {
  if (text == "off_record" || text == "off") return PolitenessStrategy::OffRecord;
  if (text == "negative_politeness" || text == "negative")
    return PolitenessStrategy::NegativePoliteness;
  if (text == "positive_politeness" || text == "positive")
    return PolitenessStrategy::PositivePoliteness;
  if (text == "bald_on_record" || text == "bald") return PolitenessStrategy::BaldOnRecord;
  throw ValidationError(path, "unknown strategy '" + text +
                                  "' (expected off_record|negative_politeness|"
                                  "positive_politeness|bald_on_record)");
}

void ModelParams::validate(const std::string& prefix) const {
  check_nonnegative(beta, prefix + "beta");
  check_range(alpha, 0.0, 1.0, prefix + "alpha", /*lo_open=*/true);
  check_nonnegative(gamma, prefix + "gamma");
  check_nonnegative(face_cap, prefix + "face_cap");
  check_range(theta, 0.0, 1.0, prefix + "theta");
  check_nonnegative(kappa, prefix + "kappa");
  check_nonnegative(rho, prefix + "rho");
  check_nonnegative(w_harm, prefix + "w_harm");
  for (auto role : kAllRoles) {
    check_nonnegative(role_weights[role], prefix + "role_weights." + to_string(role));
  }
  for (auto s : kAllStrategies) {
    check_range(strategy_base_threat[s], 0.0, 1.0,
                prefix + "strategy_base_threat." + to_string(s));
    check_range(conveyance_cap[s], 0.0, 1.0, prefix + "conveyance_cap." + to_string(s));
  }
  for (std::size_t i = 1; i < kAllStrategies.size(); ++i) {
    const auto lo = kAllStrategies[i - 1];
    const auto hi = kAllStrategies[i];
    if (!(strategy_base_threat[hi] > strategy_base_threat[lo])) {
      throw ValidationError(prefix + "strategy_base_threat." + to_string(hi),
                            "must be strictly greater than " + to_string(lo));
    }
    if (!(conveyance_cap[hi] > conveyance_cap[lo])) {
      throw ValidationError(prefix + "conveyance_cap." + to_string(hi),
                            "must be strictly greater than " + to_string(lo));
    }
  }
  check_range(grid_step, 0.0, 1.0, prefix + "grid_step", /*lo_open=*/true);
  check_range(lambda, 0.0, 1.0, prefix + "lambda");
}

void Observer::validate(const std::string& prefix) const {
  if (id.empty()) throw ValidationError(prefix + "id", "must be a non-empty string");
  check_range(perceived_severity.value(), 0.0, 1.0, prefix + "perceived_severity");
  check_range(importance, 0.0, 1.0, prefix + "importance");
  if (prefers_self_advocacy && role != ObserverRole::Victim) {
    throw ValidationError(prefix + "prefers_self_advocacy",
                          "may only be true for role victim");
  }
  if (update_rate) check_range(*update_rate, 0.0, 1.0, prefix + "update_rate");
}

SpeechAct SpeechAct::utterance(Severity conveyed, PolitenessStrategy strategy,
                               const ModelParams& params,
                               std::optional<double> explicit_face_threat) {
  SpeechAct act{Utterance{conveyed, strategy, explicit_face_threat}};
  act.validate(params);
  return act;
}

int SpeechAct::rank() const noexcept {
  if (const auto* u = as_utterance()) return harshness_rank(u->strategy);
  return -1;
}

double SpeechAct::conveyed_or_zero() const noexcept {
  if (const auto* u = as_utterance()) return u->conveyed_severity.value();
  return 0.0;
}

void SpeechAct::validate(const ModelParams& params, const std::string& path) const {
  const auto* u = as_utterance();
  if (u == nullptr) return;
  const double cap = params.conveyance_cap[u->strategy];
  if (u->conveyed_severity.value() > cap) {
    std::ostringstream os;
    os << "conveyed severity " << u->conveyed_severity.value() << " exceeds the "
       << to_string(u->strategy) << " conveyance cap " << cap;
    throw ValidationError(path + ".conveyed_severity", os.str());
  }
  if (u->explicit_face_threat) {
    check_nonnegative(*u->explicit_face_threat, path + ".explicit_face_threat");
  }
}

std::string describe(const SpeechAct& act) {
  const auto* u = act.as_utterance();
  if (u == nullptr) return "silence";
  std::ostringstream os;
  os << to_string(u->strategy) << ":" << u->conveyed_severity.value();
  if (u->explicit_face_threat) os << " (F=" << *u->explicit_face_threat << ")";
  return os.str();
}

void Scenario::validate(const std::string& prefix) const {
  check_range(violation.actual_severity.value(), 0.0, 1.0,
              prefix + "violation.actual_severity");
  params.validate(prefix + "params.");

  std::set<std::string> ids;
  std::optional<std::size_t> violator_index;
  for (std::size_t i = 0; i < observers.size(); ++i) {
    const std::string path = prefix + "observers[" + std::to_string(i) + "].";
    observers[i].validate(path);
    if (!ids.insert(observers[i].id).second) {
      throw ValidationError(path + "id", "duplicate observer id '" + observers[i].id + "'");
    }
    if (observers[i].role == ObserverRole::Violator) {
      if (violator_index) {
        throw ValidationError(path + "role", "more than one observer has role violator");
      }
      violator_index = i;
    }
  }
  if (observers.empty()) return;
  if (!violator_index) {
    throw ValidationError(prefix + "violator_id",
                          "no observer has role violator (violator_id '" + violator_id + "')");
  }
  if (observers[*violator_index].id != violator_id) {
    throw ValidationError(prefix + "violator_id",
                          "'" + violator_id + "' does not name the observer with role violator ('" +
                              observers[*violator_index].id + "')");
  }
}

double face_threat(const SpeechAct& act, const ModelParams& params) noexcept {
  const auto* u = act.as_utterance();
  if (u == nullptr) return 0.0;
  if (u->explicit_face_threat) return *u->explicit_face_threat;
  const double sc = u->conveyed_severity.value();
  return params.strategy_base_threat[u->strategy] *
         (params.theta + (1.0 - params.theta) * sc);
}

double derive_importance(double violator_rank, double observer_rank) {
  check_range(violator_rank, 0.0, 1.0, "violator_rank");
  check_range(observer_rank, 0.0, 1.0, "observer_rank");
  return std::clamp(0.5 + 0.5 * (observer_rank - violator_rank), 0.0, 1.0);
}

std::vector<std::size_t> sorted_order(const std::vector<Observer>& observers) {
  std::vector<std::size_t> order(observers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return observers[a].id < observers[b].id;
  });
  return order;
}

}  // namespace propor
