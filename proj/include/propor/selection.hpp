#pragma once

#include <string>
#include <vector>

#include "propor/core_model.hpp"
#include "propor/utility.hpp"

namespace propor {

/// Silence first, then utterances ordered by (strategy rank, conveyed
/// severity). Grid points are multiples of grid_step up to each strategy's
/// cap; the honest point min(S_a, cap) is always present exactly.
struct CandidateSet {
  std::vector<SpeechAct> acts;
};

CandidateSet candidate_acts(const Scenario& scenario);

struct RankedAct {
  SpeechAct act;
  UtilityBreakdown breakdown;
};

struct SelectionResult {
  SpeechAct chosen;
  UtilityBreakdown breakdown;
  /// Full candidate set, best first.
  std::vector<RankedAct> ranked;
};

/// Strict weak order used to rank candidates: higher total first, then lower
/// face threat, then smaller |S_c - S_a| (Silence counts as S_c = 0), then
/// lower strategy rank (Silence lowest), then lower S_c.
bool ranks_before(const RankedAct& a, const RankedAct& b, double actual_severity);

SelectionResult select_response(const Scenario& scenario, ModelVariant variant);

enum class SweepAxis { ActualSeverity, Beta, Alpha, Gamma, Kappa, Rho, AudienceSize };

std::string to_string(SweepAxis axis);
/// Accepts "actual_severity" (alias "S_a"), "beta", "alpha", "gamma",
/// "kappa", "rho" and "n".
SweepAxis parse_axis(const std::string& name);

struct AxisSpec {
  SweepAxis axis = SweepAxis::ActualSeverity;
  std::vector<double> values;
};

/// Parses "name=v1,v2,..." or "name=start:stop:step" (stop inclusive).
AxisSpec parse_axis_spec(const std::string& text);

/// Returns a copy of `base` with the axis set to `value`. For the audience
/// size axis the observer list becomes `value` copies of a prototype (the
/// violator entry if present, else the first observer); copies after the
/// first are bystanders when the prototype is the violator.
Scenario apply_axis(const Scenario& base, SweepAxis axis, double value);

struct SweepRow {
  double axis_value = 0.0;
  SpeechAct chosen;
  UtilityBreakdown breakdown;
};

struct SweepTable {
  SweepAxis axis = SweepAxis::ActualSeverity;
  std::vector<SweepRow> rows;
};

/// One independent select_response per axis value, rows in input order.
/// Every value is validated before any row is computed.
SweepTable sweep(const Scenario& scenario_template, const AxisSpec& spec, ModelVariant variant);

}  // namespace propor
