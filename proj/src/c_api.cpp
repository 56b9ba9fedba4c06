#include "propor/propor.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "propor/report.hpp"
#include "propor/scenario_io.hpp"
#include "propor/selection.hpp"
#include "propor/simulation.hpp"
#include "propor/utility.hpp"

struct propor_scenario {
  propor::ScenarioDocument doc;
};

struct propor_report {
  std::string table;
  std::string csv;
  std::vector<std::pair<propor::SpeechAct, propor::UtilityBreakdown>> rows;
};

namespace {

using namespace propor;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

thread_local std::string g_last_error;
thread_local std::string g_last_path;

propor_status fail(propor_status status, std::string message, std::string path = {}) {
  g_last_error = std::move(message);
  g_last_path = std::move(path);
  return status;
}

template <typename F>
propor_status guarded(F&& body) {
  g_last_error.clear();
  g_last_path.clear();
  try {
    body();
    return PROPOR_OK;
  } catch (const ValidationError& e) {
    return fail(PROPOR_ERR_VALIDATION, e.what(), e.path());
  } catch (const IoError& e) {
    return fail(PROPOR_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PROPOR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PROPOR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PROPOR_ERR_INTERNAL, "unknown error");
  }
}

ModelVariant to_variant(propor_variant v) {
  switch (v) {
    case PROPOR_VARIANT_BASE: return ModelVariant::Base;
    case PROPOR_VARIANT_EXTENDED: return ModelVariant::Extended;
  }
  throw ValidationError("variant", "unknown variant value " + std::to_string(static_cast<int>(v)));
}

SpeechAct to_act(const propor_act& a, const ModelParams& params) {
  if (a.strategy == PROPOR_SILENCE) return SpeechAct::silence();
  if (a.strategy < PROPOR_OFF_RECORD || a.strategy > PROPOR_BALD_ON_RECORD) {
    throw ValidationError("act.strategy", "unknown strategy value " + std::to_string(a.strategy));
  }
  std::optional<double> explicit_threat;
  if (a.has_explicit_face_threat) explicit_threat = a.explicit_face_threat;
  return SpeechAct::utterance(Severity(a.conveyed_severity, "act.conveyed_severity"),
                              static_cast<PolitenessStrategy>(a.strategy), params,
                              explicit_threat);
}

propor_act from_act(const SpeechAct& act) {
  propor_act out{PROPOR_SILENCE, 0.0, 0, 0.0};
  if (const auto* u = act.as_utterance()) {
    out.strategy = harshness_rank(u->strategy);
    out.conveyed_severity = u->conveyed_severity.value();
    if (u->explicit_face_threat) {
      out.has_explicit_face_threat = 1;
      out.explicit_face_threat = *u->explicit_face_threat;
    }
  }
  return out;
}

propor_utility from_breakdown(const UtilityBreakdown& b) {
  return {b.moral, b.social, b.total, b.face_threat};
}

std::vector<RankedAct> ranked_candidates(const Scenario& s, ModelVariant variant) {
  return select_response(s, variant).ranked;
}

bool null_arg(const void* p, const char* name, propor_status& status) {
  if (p != nullptr) return false;
  status = fail(PROPOR_ERR_ARGUMENT, std::string(name) + " must not be null", name);
  return true;
}

}  // namespace

extern "C" {

const char* propor_version(void) { return "1.0.0"; }

const char* propor_last_error(void) { return g_last_error.c_str(); }

const char* propor_last_error_path(void) { return g_last_path.c_str(); }

propor_status propor_scenario_parse(const char* text, size_t length, propor_scenario** out) {
  propor_status status{};
  if (null_arg(out, "out", status)) return status;
  *out = nullptr;
  if (text == nullptr && length != 0) return fail(PROPOR_ERR_ARGUMENT, "text must not be null");
  return guarded([&] {
    auto doc = parse_scenario(std::string_view(text == nullptr ? "" : text, length));
    *out = new propor_scenario{std::move(doc)};
  });
}

propor_status propor_scenario_load(const char* path, propor_scenario** out) {
  propor_status status{};
  if (null_arg(path, "path", status) || null_arg(out, "out", status)) return status;
  *out = nullptr;
  return guarded([&] {
    std::error_code ec;
    if (std::filesystem::is_directory(path, ec)) {
      throw IoError(std::string("scenario path '") + path + "' is a directory");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open scenario file '") + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError(std::string("cannot read scenario file '") + path + "'");
    auto doc = parse_scenario(buffer.str());
    *out = new propor_scenario{std::move(doc)};
  });
}

void propor_scenario_free(propor_scenario* scenario) { delete scenario; }

propor_status propor_scenario_serialize(const propor_scenario* scenario, char** out_text) {
  propor_status status{};
  if (null_arg(scenario, "scenario", status) || null_arg(out_text, "out_text", status))
    return status;
  *out_text = nullptr;
  return guarded([&] {
    const std::string text = serialize_scenario(scenario->doc);
    auto* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (buf == nullptr) throw std::bad_alloc();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
  });
}

void propor_string_free(char* text) { std::free(text); }

propor_status propor_scenario_set_grid_step(propor_scenario* scenario, double grid_step) {
  propor_status status{};
  if (null_arg(scenario, "scenario", status)) return status;
  return guarded([&] {
    ModelParams params = scenario->doc.scenario.params;
    params.grid_step = grid_step;
    params.validate("params.");
    scenario->doc.scenario.params = params;
    if (scenario->doc.episode) scenario->doc.episode->initial_scenario.params = params;
  });
}

size_t propor_scenario_observer_count(const propor_scenario* scenario) {
  return scenario == nullptr ? 0 : scenario->doc.scenario.observers.size();
}

int propor_scenario_has_episode(const propor_scenario* scenario) {
  return scenario != nullptr && scenario->doc.episode.has_value() ? 1 : 0;
}

propor_status propor_parse_act(const char* text, propor_act* out) {
  propor_status status{};
  if (null_arg(text, "text", status) || null_arg(out, "out", status)) return status;
  return guarded([&] {
    const std::string spec(text);
    if (spec == "silence") {
      *out = propor_act{PROPOR_SILENCE, 0.0, 0, 0.0};
      return;
    }
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3) {
      throw ValidationError("act", "expected strategy:severity[:face_threat], got '" + spec + "'");
    }
    auto number = [](const std::string& s, const char* path) {
      char* end = nullptr;
      const double v = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size()) {
        throw ValidationError(path, "'" + s + "' is not a number");
      }
      return v;
    };
    propor_act act{};
    act.strategy = harshness_rank(parse_strategy(parts[0], "act.strategy"));
    act.conveyed_severity = number(parts[1], "act.conveyed_severity");
    if (parts.size() == 3) {
      act.has_explicit_face_threat = 1;
      act.explicit_face_threat = number(parts[2], "act.explicit_face_threat");
    }
    *out = act;
  });
}

propor_status propor_face_threat(const propor_scenario* scenario, const propor_act* act,
                                 double* out) {
  propor_status status{};
  if (null_arg(scenario, "scenario", status) || null_arg(act, "act", status) ||
      null_arg(out, "out", status))
    return status;
  return guarded([&] {
    const auto& params = scenario->doc.scenario.params;
    *out = face_threat(to_act(*act, params), params);
  });
}

propor_status propor_derive_importance(double violator_rank, double observer_rank, double* out) {
  propor_status status{};
  if (null_arg(out, "out", status)) return status;
  return guarded([&] { *out = derive_importance(violator_rank, observer_rank); });
}

propor_status propor_utility_of(const propor_scenario* scenario, propor_variant variant,
                                const propor_act* act, propor_utility* out) {
  propor_status status{};
  if (null_arg(scenario, "scenario", status) || null_arg(act, "act", status) ||
      null_arg(out, "out", status))
    return status;
  return guarded([&] {
    const auto& s = scenario->doc.scenario;
    *out = from_breakdown(total_utility(s, to_act(*act, s.params), to_variant(variant)));
  });
}

propor_status propor_evaluate(const propor_scenario* scenario, propor_variant variant,
                              const propor_act* act, propor_report** out) {
  propor_status status{};
  if (null_arg(scenario, "scenario", status) || null_arg(out, "out", status)) return status;
  *out = nullptr;
  return guarded([&] {
    const auto& s = scenario->doc.scenario;
    const auto v = to_variant(variant);
    auto report = std::make_unique<propor_report>();
    if (act != nullptr) {
      const auto a = to_act(*act, s.params);
      auto breakdown = total_utility(s, a, v);
      report->table = render_breakdown(s, a, breakdown, v);
      report->csv = write_results(std::vector<RankedAct>{{a, breakdown}});
      report->rows.emplace_back(a, std::move(breakdown));
    } else {
      auto ranked = ranked_candidates(s, v);
      report->table = render_ranked(ranked);
      report->csv = write_results(ranked);
      for (auto& r : ranked) report->rows.emplace_back(std::move(r.act), std::move(r.breakdown));
    }
    *out = report.release();
  });
}

propor_status propor_select(const propor_scenario* scenario, propor_variant variant,
                            propor_report** out) {
  propor_status status{};
  if (null_arg(scenario, "scenario", status) || null_arg(out, "out", status)) return status;
  *out = nullptr;
  return guarded([&] {
    const auto& s = scenario->doc.scenario;
    const auto v = to_variant(variant);
    auto result = select_response(s, v);
    auto report = std::make_unique<propor_report>();
    report->table = render_selection(s, result, v);
    report->csv = write_results(result.ranked);
    for (auto& r : result.ranked) report->rows.emplace_back(std::move(r.act), std::move(r.breakdown));
    *out = report.release();
  });
}

propor_status propor_sweep(const propor_scenario* scenario, propor_variant variant,
                           const char* axis_spec, propor_report** out) {
  propor_status status{};
  if (null_arg(scenario, "scenario", status) || null_arg(axis_spec, "axis_spec", status) ||
      null_arg(out, "out", status))
    return status;
  *out = nullptr;
  return guarded([&] {
    const auto spec = parse_axis_spec(axis_spec);
    auto table = sweep(scenario->doc.scenario, spec, to_variant(variant));
    auto report = std::make_unique<propor_report>();
    report->table = render_sweep(table);
    report->csv = write_results(table);
    for (auto& r : table.rows) report->rows.emplace_back(std::move(r.chosen), std::move(r.breakdown));
    *out = report.release();
  });
}

propor_status propor_simulate(const propor_scenario* scenario, propor_variant variant,
                              propor_report** out) {
  propor_status status{};
  if (null_arg(scenario, "scenario", status) || null_arg(out, "out", status)) return status;
  *out = nullptr;
  return guarded([&] {
    if (!scenario->doc.episode) {
      throw ValidationError("episode", "document has no episode block to simulate");
    }
    auto trace = run_episode(*scenario->doc.episode, to_variant(variant));
    auto report = std::make_unique<propor_report>();
    report->table = render_episode(trace);
    report->csv = write_results(trace);
    for (auto& r : trace.rounds) report->rows.emplace_back(std::move(r.act), std::move(r.breakdown));
    *out = report.release();
  });
}

propor_status propor_report_render(const propor_report* report, propor_format format,
                                   const char** out_text, size_t* out_length) {
  propor_status status{};
  if (null_arg(report, "report", status) || null_arg(out_text, "out_text", status)) return status;
  const std::string* text = nullptr;
  switch (format) {
    case PROPOR_FORMAT_TABLE: text = &report->table; break;
    case PROPOR_FORMAT_CSV: text = &report->csv; break;
  }
  if (text == nullptr) return fail(PROPOR_ERR_ARGUMENT, "unknown format", "format");
  *out_text = text->c_str();
  if (out_length != nullptr) *out_length = text->size();
  return PROPOR_OK;
}

size_t propor_report_row_count(const propor_report* report) {
  return report == nullptr ? 0 : report->rows.size();
}

propor_status propor_report_row(const propor_report* report, size_t index, propor_act* act,
                                propor_utility* utility) {
  propor_status status{};
  if (null_arg(report, "report", status)) return status;
  if (index >= report->rows.size()) {
    return fail(PROPOR_ERR_ARGUMENT, "row index " + std::to_string(index) + " out of range",
                "index");
  }
  const auto& [a, b] = report->rows[index];
  if (act != nullptr) *act = from_act(a);
  if (utility != nullptr) *utility = from_breakdown(b);
  return PROPOR_OK;
}

void propor_report_free(propor_report* report) { delete report; }

}  // extern "C"
