#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "propor/core_model.hpp"
#include "propor/selection.hpp"
#include "propor/simulation.hpp"

namespace propor {

inline constexpr int kFormatVersion = 1;

/// Malformed document syntax. `path()` is "$" and `offset()` the byte
/// position reported by the JSON parser.
class SyntaxError : public ValidationError {
 public:
  SyntaxError(std::size_t offset, const std::string& message);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

struct ScenarioDocument {
  int format_version = kFormatVersion;
  Scenario scenario;
  /// When present, `episode->initial_scenario` equals `scenario`.
  std::optional<EpisodeScript> episode;

  friend bool operator==(const ScenarioDocument&, const ScenarioDocument&) = default;
};

/// Strict parse: unknown keys, wrong types, out-of-range values and broken
/// references all raise ValidationError (SyntaxError for malformed JSON).
/// Omitted optional fields take their defaults.
ScenarioDocument parse_scenario(std::string_view text);

/// Canonical JSON: sorted keys, two-space indent, numbers rounded to 9
/// significant digits, default-valued fields omitted, trailing newline.
std::string serialize_scenario(const ScenarioDocument& doc);

/// Formats a number with 9 significant digits ("%.9g").
std::string format_number(double value);

/// CSV quoting: fields containing a comma, quote, CR or LF are wrapped in
/// double quotes with embedded quotes doubled.
std::string csv_field(std::string_view text);

/// Sweep table: axis_value,strategy,conveyed_severity,face_threat,moral,social,total
std::string write_results(const SweepTable& table);

/// Episode trace: round,norm_id,violator_id,actual_severity,strategy,
/// conveyed_severity,face_threat,moral,social,total,mean_belief_error, then
/// one belief:<id> column per observer in id order.
std::string write_results(const EpisodeTrace& trace);

/// Candidate list: rank,strategy,conveyed_severity,face_threat,moral,social,total
std::string write_results(const std::vector<RankedAct>& ranked);

}  // namespace propor
