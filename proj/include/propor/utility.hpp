#pragma once

#include <string>
#include <vector>

#include "propor/core_model.hpp"

namespace propor {

/// Base evaluates the two-term model exactly as printed (only beta and the
/// face-threat tables are honored). Extended adds role weights, victim terms,
/// spillover threat to unaware observers, audience discounting and the capped
/// shame bonus.
enum class ModelVariant { Base, Extended };

std::string to_string(ModelVariant variant);
ModelVariant parse_variant(const std::string& text, const std::string& path = "variant");

struct ObserverContribution {
  std::string observer_id;
  double moral_contribution = 0.0;
  /// Extended: before the audience discount is applied.
  double social_contribution = 0.0;

  friend bool operator==(const ObserverContribution&, const ObserverContribution&) = default;
};

struct UtilityBreakdown {
  double moral = 0.0;
  double social = 0.0;
  double total = 0.0;
  double face_threat = 0.0;
  /// Extended only: capped shame bonus folded into `moral`.
  double shame_bonus = 0.0;
  /// Extended only: aggregate audience load L and the factor L^alpha / L that
  /// maps undiscounted to discounted audience threat (1 when L = 0).
  double audience_load = 0.0;
  double discount_factor = 1.0;
  /// Sorted by observer id.
  std::vector<ObserverContribution> per_observer;

  friend bool operator==(const UtilityBreakdown&, const UtilityBreakdown&) = default;
};

/// Sum over observers of correction benefit minus dishonesty penalty (weighted
/// and extended with victim/shame terms under Extended). Silence scores 0.
double moral_utility(const Scenario& scenario, const SpeechAct& act, ModelVariant variant);

/// Negated audience-weighted face threat; never positive. Silence scores 0.
double social_utility(const Scenario& scenario, const SpeechAct& act, ModelVariant variant);

UtilityBreakdown total_utility(const Scenario& scenario, const SpeechAct& act,
                               ModelVariant variant);

}  // namespace propor
