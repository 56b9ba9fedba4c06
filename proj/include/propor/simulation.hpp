#pragma once

#include <map>
#include <string>
#include <vector>

#include "propor/core_model.hpp"
#include "propor/utility.hpp"

namespace propor {

enum class ResponsePolicy { SelectBest, AlwaysHonestBald, AlwaysSilent };

std::string to_string(ResponsePolicy policy);
ResponsePolicy parse_policy(const std::string& text, const std::string& path = "policy");

struct EpisodeRound {
  Violation violation;
  std::string violator_id;

  friend bool operator==(const EpisodeRound&, const EpisodeRound&) = default;
};

struct EpisodeScript {
  std::vector<EpisodeRound> rounds;
  Scenario initial_scenario;
  ResponsePolicy policy = ResponsePolicy::SelectBest;

  void validate(const std::string& prefix = "episode.") const;

  friend bool operator==(const EpisodeScript&, const EpisodeScript&) = default;
};

struct RoundRecord {
  EpisodeRound round;
  SpeechAct act;
  UtilityBreakdown breakdown;
  /// Post-round beliefs keyed by observer id.
  std::map<std::string, double> beliefs;
};

struct EpisodeSummary {
  double mean_belief_error = 0.0;
  double cumulative_face_threat = 0.0;
  double cumulative_honesty_gap = 0.0;

  friend bool operator==(const EpisodeSummary&, const EpisodeSummary&) = default;
};

struct EpisodeTrace {
  std::vector<RoundRecord> rounds;
  EpisodeSummary summary;
};

/// Moves every observer's belief toward the conveyed severity:
/// S_i += rate * (S_c - S_i), where rate is the observer's own update_rate
/// when set and `lambda` otherwise. Silence changes nothing.
std::vector<Observer> update_beliefs(const std::vector<Observer>& observers, const SpeechAct& act,
                                     double lambda);

/// Recomputes the summary from per-round records.
EpisodeSummary summarize(const std::vector<RoundRecord>& rounds);

/// Rounds run in order on a fixed observer set. The round's violator takes
/// the Violator role for that round; any other Violator-role observer is
/// treated as a bystander.
EpisodeTrace run_episode(const EpisodeScript& script, ModelVariant variant);

}  // namespace propor
