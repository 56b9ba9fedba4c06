#include "propor/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace propor {

using nlohmann::json;

namespace {

std::string type_name(const json& j) {
  if (j.is_number()) return "number";
  return j.type_name();
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) {
    throw ValidationError(path.empty() ? "$" : path, "expected an object, got " + type_name(j));
  }
}

void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!names.contains(key)) {
      throw ValidationError(path + key, "unknown key '" + key + "'");
    }
  }
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const char* key, const std::string& path) {
  const json* v = find(j, key);
  if (v == nullptr) throw ValidationError(path + key, "missing required key");
  return *v;
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number, got " + type_name(j));
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(path, "number is not finite");
  return v;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path, "expected a string, got " + type_name(j));
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ValidationError(path, "expected a boolean, got " + type_name(j));
  return j.get<bool>();
}

void read_number(const json& j, const char* key, const std::string& path, double& out) {
  if (const json* v = find(j, key)) out = as_number(*v, path + key);
}

void read_bool(const json& j, const char* key, const std::string& path, bool& out) {
  if (const json* v = find(j, key)) out = as_bool(*v, path + key);
}

Severity read_severity(const json& j, const char* key, const std::string& path) {
  return Severity(as_number(require(j, key, path), path + key), path + key);
}

template <typename Key>
void read_table(const json& j, const std::string& path, EnumTable<Key>& table,
                const auto& all_keys) {
  expect_object(j, path);
  for (const auto& [name, value] : j.items()) {
    bool matched = false;
    for (auto k : all_keys) {
      if (to_string(k) == name) {
        table[k] = as_number(value, path + "." + name);
        matched = true;
      }
    }
    if (!matched) throw ValidationError(path + "." + name, "unknown key '" + name + "'");
  }
}

ModelParams parse_params(const json& j, const std::string& path) {
  expect_object(j, path.substr(0, path.size() - 1));
  reject_unknown_keys(j, path,
                      {"beta", "alpha", "gamma", "face_cap", "theta", "kappa", "rho", "w_harm",
                       "role_weights", "strategy_base_threat", "conveyance_cap", "grid_step",
                       "lambda"});
  ModelParams p;
  read_number(j, "beta", path, p.beta);
  read_number(j, "alpha", path, p.alpha);
  read_number(j, "gamma", path, p.gamma);
  read_number(j, "face_cap", path, p.face_cap);
  read_number(j, "theta", path, p.theta);
  read_number(j, "kappa", path, p.kappa);
  read_number(j, "rho", path, p.rho);
  read_number(j, "w_harm", path, p.w_harm);
  read_number(j, "grid_step", path, p.grid_step);
  read_number(j, "lambda", path, p.lambda);
  if (const json* v = find(j, "role_weights"))
    read_table(*v, path + "role_weights", p.role_weights, kAllRoles);
  if (const json* v = find(j, "strategy_base_threat"))
    read_table(*v, path + "strategy_base_threat", p.strategy_base_threat, kAllStrategies);
  if (const json* v = find(j, "conveyance_cap"))
    read_table(*v, path + "conveyance_cap", p.conveyance_cap, kAllStrategies);
  p.validate(path);
  return p;
}

Violation parse_violation(const json& j, const std::string& path) {
  expect_object(j, path.substr(0, path.size() - 1));
  reject_unknown_keys(j, path, {"norm_id", "actual_severity", "harm_done"});
  Violation v;
  v.norm_id = as_string(require(j, "norm_id", path), path + "norm_id");
  v.actual_severity = read_severity(j, "actual_severity", path);
  read_bool(j, "harm_done", path, v.harm_done);
  return v;
}

Observer parse_observer(const json& j, const std::string& path) {
  expect_object(j, path.substr(0, path.size() - 1));
  reject_unknown_keys(j, path,
                      {"id", "role", "perceived_severity", "importance", "aware_of_norm",
                       "prefers_self_advocacy", "update_rate"});
  Observer o;
  o.id = as_string(require(j, "id", path), path + "id");
  o.role = parse_role(as_string(require(j, "role", path), path + "role"), path + "role");
  o.perceived_severity = read_severity(j, "perceived_severity", path);
  o.importance = as_number(require(j, "importance", path), path + "importance");
  read_bool(j, "aware_of_norm", path, o.aware_of_norm);
  read_bool(j, "prefers_self_advocacy", path, o.prefers_self_advocacy);
  if (const json* v = find(j, "update_rate")) o.update_rate = as_number(*v, path + "update_rate");
  o.validate(path);
  return o;
}

Scenario parse_scenario_body(const json& j) {
  const std::string path = "scenario.";
  expect_object(j, "scenario");
  reject_unknown_keys(j, path, {"violation", "violator_id", "observers", "params"});
  Scenario s;
  s.violation = parse_violation(require(j, "violation", path), path + "violation.");
  s.violator_id = as_string(require(j, "violator_id", path), path + "violator_id");
  const json& observers = require(j, "observers", path);
  if (!observers.is_array()) {
    throw ValidationError(path + "observers", "expected an array, got " + type_name(observers));
  }
  for (std::size_t i = 0; i < observers.size(); ++i) {
    s.observers.push_back(
        parse_observer(observers[i], path + "observers[" + std::to_string(i) + "]."));
  }
  if (const json* p = find(j, "params")) s.params = parse_params(*p, path + "params.");
  s.validate(path);
  return s;
}

EpisodeScript parse_episode(const json& j, const Scenario& scenario) {
  const std::string path = "episode.";
  expect_object(j, "episode");
  reject_unknown_keys(j, path, {"policy", "rounds"});
  EpisodeScript e;
  e.initial_scenario = scenario;
  if (const json* p = find(j, "policy")) {
    e.policy = parse_policy(as_string(*p, path + "policy"), path + "policy");
  }
  const json& rounds = require(j, "rounds", path);
  if (!rounds.is_array()) {
    throw ValidationError(path + "rounds", "expected an array, got " + type_name(rounds));
  }
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const std::string rp = path + "rounds[" + std::to_string(i) + "].";
    const json& r = rounds[i];
    expect_object(r, rp.substr(0, rp.size() - 1));
    reject_unknown_keys(r, rp, {"violation", "violator_id"});
    EpisodeRound round;
    round.violation = parse_violation(require(r, "violation", rp), rp + "violation.");
    round.violator_id = as_string(require(r, "violator_id", rp), rp + "violator_id");
    e.rounds.push_back(std::move(round));
  }
  e.validate(path);
  return e;
}

double canonical(double v) {
  return std::strtod(format_number(v).c_str(), nullptr);
}

template <typename Key>
json table_json(const EnumTable<Key>& table, const EnumTable<Key>& defaults,
                const auto& all_keys) {
  json out = json::object();
  for (auto k : all_keys) {
    if (table[k] != defaults[k]) out[to_string(k)] = canonical(table[k]);
  }
  return out;
}

json params_json(const ModelParams& p) {
  const ModelParams d;
  json out = json::object();
  auto put = [&](const char* key, double value, double def) {
    if (value != def) out[key] = canonical(value);
  };
  put("beta", p.beta, d.beta);
  put("alpha", p.alpha, d.alpha);
  put("gamma", p.gamma, d.gamma);
  put("face_cap", p.face_cap, d.face_cap);
  put("theta", p.theta, d.theta);
  put("kappa", p.kappa, d.kappa);
  put("rho", p.rho, d.rho);
  put("w_harm", p.w_harm, d.w_harm);
  put("grid_step", p.grid_step, d.grid_step);
  put("lambda", p.lambda, d.lambda);
  auto put_table = [&](const char* key, json table) {
    if (!table.empty()) out[key] = std::move(table);
  };
  put_table("role_weights", table_json(p.role_weights, d.role_weights, kAllRoles));
  put_table("strategy_base_threat",
            table_json(p.strategy_base_threat, d.strategy_base_threat, kAllStrategies));
  put_table("conveyance_cap", table_json(p.conveyance_cap, d.conveyance_cap, kAllStrategies));
  return out;
}

json violation_json(const Violation& v) {
  json out = {{"norm_id", v.norm_id},
              {"actual_severity", canonical(v.actual_severity.value())}};
  if (v.harm_done) out["harm_done"] = true;
  return out;
}

json observer_json(const Observer& o) {
  json out = {{"id", o.id},
              {"role", to_string(o.role)},
              {"perceived_severity", canonical(o.perceived_severity.value())},
              {"importance", canonical(o.importance)}};
  if (!o.aware_of_norm) out["aware_of_norm"] = false;
  if (o.prefers_self_advocacy) out["prefers_self_advocacy"] = true;
  if (o.update_rate) out["update_rate"] = canonical(*o.update_rate);
  return out;
}

std::string strategy_label(const SpeechAct& act) {
  if (const auto* u = act.as_utterance()) return to_string(u->strategy);
  return "silence";
}

std::string conveyed_label(const SpeechAct& act) {
  if (const auto* u = act.as_utterance()) return format_number(u->conveyed_severity.value());
  return "";
}

void append_act_columns(std::ostringstream& os, const SpeechAct& act, const UtilityBreakdown& b) {
  os << csv_field(strategy_label(act)) << ',' << conveyed_label(act) << ','
     << format_number(b.face_threat) << ',' << format_number(b.moral) << ','
     << format_number(b.social) << ',' << format_number(b.total);
}

}  // namespace

SyntaxError::SyntaxError(std::size_t offset, const std::string& message)
    : ValidationError("$", "malformed JSON at byte " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

ScenarioDocument parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SyntaxError(e.byte, e.what());
  } catch (const json::exception& e) {
    // Lexically valid but unrepresentable, e.g. a number beyond double range.
    throw ValidationError("$", e.what());
  }
  expect_object(root, "$");
  reject_unknown_keys(root, "", {"format_version", "scenario", "episode"});

  ScenarioDocument doc;
  const json& version = require(root, "format_version", "");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kFormatVersion) {
    throw ValidationError("format_version",
                          "unsupported format version (expected " +
                              std::to_string(kFormatVersion) + ")");
  }
  doc.scenario = parse_scenario_body(require(root, "scenario", ""));
  if (const json* e = find(root, "episode")) doc.episode = parse_episode(*e, doc.scenario);
  return doc;
}

std::string serialize_scenario(const ScenarioDocument& doc) {
  json scenario = {{"violation", violation_json(doc.scenario.violation)},
                   {"violator_id", doc.scenario.violator_id},
                   {"observers", json::array()}};
  for (const auto& o : doc.scenario.observers) scenario["observers"].push_back(observer_json(o));
  json params = params_json(doc.scenario.params);
  if (!params.empty()) scenario["params"] = std::move(params);

  json root = {{"format_version", doc.format_version}, {"scenario", std::move(scenario)}};
  if (doc.episode) {
    json episode = {{"rounds", json::array()}};
    if (doc.episode->policy != ResponsePolicy::SelectBest) {
      episode["policy"] = to_string(doc.episode->policy);
    }
    for (const auto& r : doc.episode->rounds) {
      episode["rounds"].push_back(
          {{"violation", violation_json(r.violation)}, {"violator_id", r.violator_id}});
    }
    root["episode"] = std::move(episode);
  }
  return root.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string write_results(const SweepTable& table) {
  std::ostringstream os;
  os << "axis_value,strategy,conveyed_severity,face_threat,moral,social,total\n";
  for (const auto& row : table.rows) {
    os << format_number(row.axis_value) << ',';
    append_act_columns(os, row.chosen, row.breakdown);
    os << '\n';
  }
  return os.str();
}

std::string write_results(const EpisodeTrace& trace) {
  std::ostringstream os;
  os << "round,norm_id,violator_id,actual_severity,strategy,conveyed_severity,face_threat,"
        "moral,social,total,mean_belief_error";
  if (!trace.rounds.empty()) {
    for (const auto& [id, belief] : trace.rounds.front().beliefs) {
      os << ',' << csv_field("belief:" + id);
    }
  }
  os << '\n';
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& r = trace.rounds[i];
    const double actual = r.round.violation.actual_severity.value();
    double error = 0.0;
    for (const auto& [id, belief] : r.beliefs) error += std::abs(belief - actual);
    if (!r.beliefs.empty()) error /= static_cast<double>(r.beliefs.size());
    os << (i + 1) << ',' << csv_field(r.round.violation.norm_id) << ','
       << csv_field(r.round.violator_id) << ',' << format_number(actual) << ',';
    append_act_columns(os, r.act, r.breakdown);
    os << ',' << format_number(error);
    for (const auto& [id, belief] : r.beliefs) os << ',' << format_number(belief);
    os << '\n';
  }
  return os.str();
}

std::string write_results(const std::vector<RankedAct>& ranked) {
  std::ostringstream os;
  os << "rank,strategy,conveyed_severity,face_threat,moral,social,total\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    os << (i + 1) << ',';
    append_act_columns(os, ranked[i].act, ranked[i].breakdown);
    os << '\n';
  }
  return os.str();
}

}  // namespace propor
