#pragma once

#include <array>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace propor {

/// Raised when a value falls outside its declared domain. `path()` names the
/// offending field (e.g. "observers[0].importance") when it is known.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string path, const std::string& message);

  const std::string& path() const noexcept { return path_; }

  /// Message without the path prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string path_;
  std::string detail_;
};

/// Norm-violation severity on the closed unit interval.
class Severity {
 public:
  constexpr Severity() = default;
  explicit Severity(double value, const std::string& path = "severity");

  constexpr double value() const noexcept { return value_; }

  friend constexpr bool operator==(Severity, Severity) = default;
  friend constexpr auto operator<=>(Severity, Severity) = default;

 private:
  double value_ = 0.0;
};

enum class ObserverRole { Bystander, Violator, Victim, CoViolator };

inline constexpr std::array<ObserverRole, 4> kAllRoles = {
    ObserverRole::Bystander, ObserverRole::Violator, ObserverRole::Victim,
    ObserverRole::CoViolator};

/// Brown-Levinson redress classes, declared from least to most threatening.
enum class PolitenessStrategy {
  OffRecord = 0,
  NegativePoliteness = 1,
  PositivePoliteness = 2,
  BaldOnRecord = 3,
};

inline constexpr std::array<PolitenessStrategy, 4> kAllStrategies = {
    PolitenessStrategy::OffRecord, PolitenessStrategy::NegativePoliteness,
    PolitenessStrategy::PositivePoliteness, PolitenessStrategy::BaldOnRecord};

constexpr int harshness_rank(PolitenessStrategy s) noexcept {
  return static_cast<int>(s);
}

std::string to_string(ObserverRole role);
std::string to_string(PolitenessStrategy strategy);

/// Accepts the canonical snake_case names ("co_violator") and a few short
/// aliases ("bald", "negative", ...). Throws ValidationError on anything else.
ObserverRole parse_role(const std::string& text, const std::string& path = "role");
PolitenessStrategy parse_strategy(const std::string& text,
                                  const std::string& path = "strategy");

/// Fixed-size table keyed by an enum whose values are 0..3.
template <typename Key>
struct EnumTable {
  std::array<double, 4> values{};

  constexpr double operator[](Key k) const noexcept {
    return values[static_cast<std::size_t>(k)];
  }
  constexpr double& operator[](Key k) noexcept {
    return values[static_cast<std::size_t>(k)];
  }
  friend constexpr bool operator==(const EnumTable&, const EnumTable&) = default;
};

using RoleWeights = EnumTable<ObserverRole>;
using StrategyTable = EnumTable<PolitenessStrategy>;

struct ModelParams {
  double beta = 0.0;
  double alpha = 1.0;
  double gamma = 0.0;
  double face_cap = 0.5;
  double theta = 0.5;
  double kappa = 0.0;
  double rho = 0.0;
  double w_harm = 0.0;
  RoleWeights role_weights{{1.0, 1.0, 1.0, 1.0}};
  StrategyTable strategy_base_threat{{0.2, 0.45, 0.7, 1.0}};
  StrategyTable conveyance_cap{{0.3, 0.55, 0.8, 1.0}};
  double grid_step = 0.05;
  double lambda = 0.5;

  /// Throws ValidationError naming `prefix + field` for the first violation.
  void validate(const std::string& prefix = "params.") const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct Observer {
  std::string id;
  ObserverRole role = ObserverRole::Bystander;
  Severity perceived_severity;
  double importance = 0.0;
  bool aware_of_norm = true;
  bool prefers_self_advocacy = false;
  /// Per-observer belief update rate; the scenario's lambda applies when unset.
  std::optional<double> update_rate;

  void validate(const std::string& prefix = "observer.") const;

  friend bool operator==(const Observer&, const Observer&) = default;
};

struct Silence {
  friend constexpr bool operator==(Silence, Silence) = default;
};

struct Utterance {
  Severity conveyed_severity;
  PolitenessStrategy strategy = PolitenessStrategy::OffRecord;
  std::optional<double> explicit_face_threat;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

/// A candidate response: silence, or an abstract utterance conveying a
/// severity under a politeness strategy.
class SpeechAct {
 public:
  SpeechAct() = default;

  static SpeechAct silence() { return SpeechAct{}; }

  /// Rejects conveyed severities above the strategy's conveyance cap and
  /// negative or non-finite explicit face threats.
  static SpeechAct utterance(Severity conveyed, PolitenessStrategy strategy,
                             const ModelParams& params,
                             std::optional<double> explicit_face_threat = std::nullopt);

  bool is_silence() const noexcept { return std::holds_alternative<Silence>(act_); }
  const Utterance* as_utterance() const noexcept { return std::get_if<Utterance>(&act_); }

  /// Strategy rank, with Silence ranked below every strategy (-1).
  int rank() const noexcept;
  /// Conveyed severity; Silence reports 0.
  double conveyed_or_zero() const noexcept;

  /// Re-checks the cap invariant against `params` (caps may differ from the
  /// ones the act was built with).
  void validate(const ModelParams& params, const std::string& path = "act") const;

  friend bool operator==(const SpeechAct&, const SpeechAct&) = default;

 private:
  explicit SpeechAct(Utterance u) : act_(std::move(u)) {}
  std::variant<Silence, Utterance> act_;
};

std::string describe(const SpeechAct& act);

struct Violation {
  std::string norm_id;
  Severity actual_severity;
  bool harm_done = false;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct Scenario {
  Violation violation;
  std::string violator_id;
  std::vector<Observer> observers;
  ModelParams params;

  /// Checks every field range plus referential integrity: distinct ids, at
  /// most one Violator, and violator_id naming it (unless there are no
  /// observers).
  void validate(const std::string& prefix = "scenario.") const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// F = base_threat(strategy) * (theta + (1 - theta) * S_c), or the explicit
/// override when the utterance carries one. Silence imposes none.
double face_threat(const SpeechAct& act, const ModelParams& params) noexcept;

/// Importance of keeping face in front of an observer, from relative
/// standing: clamp(0.5 + 0.5 * (observer_rank - violator_rank), 0, 1).
double derive_importance(double violator_rank, double observer_rank);

/// Indices of `observers` ordered by id; all sums iterate in this order.
std::vector<std::size_t> sorted_order(const std::vector<Observer>& observers);

}  // namespace propor
