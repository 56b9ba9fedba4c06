// Exercises the shared library strictly through propor/propor.h.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "propor/propor.h"

#ifndef PROPOR_SCENARIO_DIR
#error "PROPOR_SCENARIO_DIR must point at the scenarios directory"
#endif

namespace {

std::string scenario_path(const char* name) {
  return std::string(PROPOR_SCENARIO_DIR) + "/" + name;
}

propor_scenario* load(const char* name) {
  propor_scenario* s = nullptr;
  REQUIRE(propor_scenario_load(scenario_path(name).c_str(), &s) == PROPOR_OK);
  REQUIRE(s != nullptr);
  return s;
}

std::string render(const propor_report* r, propor_format format) {
  const char* text = nullptr;
  std::size_t length = 0;
  REQUIRE(propor_report_render(r, format, &text, &length) == PROPOR_OK);
  REQUIRE(std::strlen(text) == length);
  return std::string(text, length);
}

}  // namespace

TEST_CASE("load and select through the C API") {
  propor_scenario* s = load("bystander3.json");
  CHECK(propor_scenario_observer_count(s) == 3);
  CHECK(propor_scenario_has_episode(s) == 0);

  propor_report* r = nullptr;
  REQUIRE(propor_select(s, PROPOR_VARIANT_BASE, &r) == PROPOR_OK);
  propor_act act{};
  propor_utility u{};
  REQUIRE(propor_report_row(r, 0, &act, &u) == PROPOR_OK);
  CHECK(act.strategy == PROPOR_NEGATIVE_POLITENESS);
  CHECK(act.conveyed_severity == 0.55);
  CHECK(std::abs(u.total - 0.30375) < 1e-9);
  CHECK(propor_report_row_count(r) > 50);
  CHECK(propor_report_row(r, propor_report_row_count(r), &act, &u) == PROPOR_ERR_ARGUMENT);

  const auto table = render(r, PROPOR_FORMAT_TABLE);
  CHECK(table.find("chosen:       (negative_politeness, 0.55)") != std::string::npos);
  const auto csv = render(r, PROPOR_FORMAT_CSV);
  CHECK(csv.rfind("rank,strategy,conveyed_severity,face_threat,moral,social,total\n", 0) == 0);

  propor_report_free(r);
  propor_scenario_free(s);
}

TEST_CASE("evaluate a single act") {
  propor_scenario* s = load("min.json");
  propor_act act{};
  REQUIRE(propor_parse_act("bald:0.9", &act) == PROPOR_OK);
  CHECK(act.strategy == PROPOR_BALD_ON_RECORD);

  propor_utility u{};
  REQUIRE(propor_utility_of(s, PROPOR_VARIANT_BASE, &act, &u) == PROPOR_OK);
  CHECK(std::abs(u.moral - 0.8) < 1e-12);
  CHECK(std::abs(u.social + 0.19) < 1e-12);
  CHECK(std::abs(u.total - 0.61) < 1e-12);

  double f = 0.0;
  REQUIRE(propor_face_threat(s, &act, &f) == PROPOR_OK);
  CHECK(std::abs(f - 0.95) < 1e-12);

  propor_report* r = nullptr;
  REQUIRE(propor_evaluate(s, PROPOR_VARIANT_BASE, &act, &r) == PROPOR_OK);
  CHECK(propor_report_row_count(r) == 1);
  propor_report_free(r);

  REQUIRE(propor_evaluate(s, PROPOR_VARIANT_EXTENDED, nullptr, &r) == PROPOR_OK);
  CHECK(propor_report_row_count(r) > 50);
  propor_report_free(r);

  REQUIRE(propor_parse_act("off:0.4", &act) == PROPOR_OK);
  CHECK(propor_utility_of(s, PROPOR_VARIANT_BASE, &act, &u) == PROPOR_ERR_VALIDATION);
  CHECK(std::string(propor_last_error_path()) == "act.conveyed_severity");

  CHECK(propor_parse_act("loud:0.4", &act) == PROPOR_ERR_VALIDATION);
  CHECK(propor_parse_act("bald", &act) == PROPOR_ERR_VALIDATION);
  REQUIRE(propor_parse_act("silence", &act) == PROPOR_OK);
  CHECK(act.strategy == PROPOR_SILENCE);
  REQUIRE(propor_parse_act("positive:0.5:0.25", &act) == PROPOR_OK);
  CHECK(act.has_explicit_face_threat == 1);
  CHECK(act.explicit_face_threat == 0.25);

  propor_scenario_free(s);
}

TEST_CASE("error statuses") {
  propor_scenario* s = nullptr;
  CHECK(propor_scenario_load("/nonexistent/scenario.json", &s) == PROPOR_ERR_IO);
  CHECK(s == nullptr);
  CHECK(std::string(propor_last_error()).find("/nonexistent/scenario.json") != std::string::npos);

  const char* bad = R"({"format_version": 1, "scenario": {"violation": {"norm_id": "n",
      "actual_severity": 0.5}, "violator_id": "v", "observers": [{"id": "v",
      "role": "violator", "perceived_severity": 0.2, "importance": 1.5}]}})";
  CHECK(propor_scenario_parse(bad, std::strlen(bad), &s) == PROPOR_ERR_VALIDATION);
  CHECK(std::string(propor_last_error_path()) == "scenario.observers[0].importance");

  CHECK(propor_scenario_parse("{", 1, &s) == PROPOR_ERR_VALIDATION);
  CHECK(propor_scenario_parse(nullptr, 0, &s) == PROPOR_ERR_VALIDATION);
  CHECK(propor_scenario_parse("{}", 2, nullptr) == PROPOR_ERR_ARGUMENT);
  CHECK(propor_select(nullptr, PROPOR_VARIANT_BASE, nullptr) == PROPOR_ERR_ARGUMENT);

  double v = 0.0;
  CHECK(propor_derive_importance(0.8, 0.2, &v) == PROPOR_OK);
  CHECK(std::abs(v - 0.2) < 1e-12);
  CHECK(propor_derive_importance(1.2, 0.2, &v) == PROPOR_ERR_VALIDATION);
}

TEST_CASE("sweep, simulate and grid override") {
  propor_scenario* s = load("single_observer.json");
  propor_report* r = nullptr;
  REQUIRE(propor_sweep(s, PROPOR_VARIANT_BASE, "actual_severity=0:1:0.1", &r) == PROPOR_OK);
  CHECK(propor_report_row_count(r) == 11);
  propor_report_free(r);

  CHECK(propor_sweep(s, PROPOR_VARIANT_BASE, "zeta=1", &r) == PROPOR_ERR_VALIDATION);
  CHECK(std::string(propor_last_error_path()) == "axis zeta");
  CHECK(propor_simulate(s, PROPOR_VARIANT_BASE, &r) == PROPOR_ERR_VALIDATION);
  CHECK(std::string(propor_last_error_path()) == "episode");

  CHECK(propor_scenario_set_grid_step(s, 0.0) == PROPOR_ERR_VALIDATION);
  REQUIRE(propor_scenario_set_grid_step(s, 0.5) == PROPOR_OK);
  REQUIRE(propor_evaluate(s, PROPOR_VARIANT_BASE, nullptr, &r) == PROPOR_OK);
  // Silence, off {0, 0.3}, negative {0, 0.5}, positive {0, 0.5}, bald {0, 0.5, 1}.
  CHECK(propor_report_row_count(r) == 1 + 2 + 2 + 2 + 3);
  propor_report_free(r);

  char* text = nullptr;
  REQUIRE(propor_scenario_serialize(s, &text) == PROPOR_OK);
  CHECK(std::string(text).find("\"grid_step\": 0.5") != std::string::npos);
  propor_scenario* again = nullptr;
  REQUIRE(propor_scenario_parse(text, std::strlen(text), &again) == PROPOR_OK);
  propor_string_free(text);
  propor_scenario_free(again);
  propor_scenario_free(s);

  s = load("team_episode.json");
  CHECK(propor_scenario_has_episode(s) == 1);
  REQUIRE(propor_simulate(s, PROPOR_VARIANT_EXTENDED, &r) == PROPOR_OK);
  CHECK(propor_report_row_count(r) == 4);
  const auto table = render(r, PROPOR_FORMAT_TABLE);
  CHECK(table.find("cumulative honesty gap") != std::string::npos);
  propor_report_free(r);
  propor_scenario_free(s);
}
