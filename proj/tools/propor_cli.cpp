// propor: select and evaluate norm-violation responses from scenario files.
//
// Exit status: 0 success, 1 validation or usage error, 2 I/O error. Results
// are written only after the whole computation succeeded.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "propor/propor.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct ScenarioDeleter {
  void operator()(propor_scenario* s) const { propor_scenario_free(s); }
};
struct ReportDeleter {
  void operator()(propor_report* r) const { propor_report_free(r); }
};
using ScenarioHandle = std::unique_ptr<propor_scenario, ScenarioDeleter>;
using ReportHandle = std::unique_ptr<propor_report, ReportDeleter>;

int exit_code_for(propor_status status) {
  return status == PROPOR_ERR_IO ? kExitIo : kExitValidation;
}

int report_error(propor_status status) {
  std::cerr << "propor: error: " << propor_last_error() << "\n";
  return exit_code_for(status);
}

struct Options {
  std::string scenario_path;
  std::string variant = "base";
  std::string act;
  std::string axis;
  std::string output;
  std::string format = "table";
};

void add_common(CLI::App* cmd, Options& opts) {
  cmd->add_option("scenario", opts.scenario_path, "Scenario file (JSON, format_version 1)")
      ->required();
  cmd->add_option("--variant", opts.variant, "Utility model: base|extended")
      ->check(CLI::IsMember({"base", "extended"}))
      ->capture_default_str();
  cmd->add_option("--format", opts.format, "Output format: table|csv")
      ->check(CLI::IsMember({"table", "csv"}))
      ->capture_default_str();
  cmd->add_option("-o,--output", opts.output, "Write results to this file instead of stdout");
}

// PROPOR_GRID_STEP overrides the scenario's grid_step when set.
int apply_grid_override(propor_scenario* scenario) {
  const char* env = std::getenv("PROPOR_GRID_STEP");
  if (env == nullptr) return kExitOk;
  const std::string text(env);
  char* end = nullptr;
  errno = 0;
  const double step = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    std::cerr << "propor: error: PROPOR_GRID_STEP: '" << text << "' is not a number\n";
    return kExitValidation;
  }
  if (const auto status = propor_scenario_set_grid_step(scenario, step); status != PROPOR_OK) {
    std::cerr << "propor: error: PROPOR_GRID_STEP: " << propor_last_error() << "\n";
    return exit_code_for(status);
  }
  return kExitOk;
}

int emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    std::cout.flush();
    return std::cout ? kExitOk : kExitIo;
  }
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "propor: error: cannot open output file '" << output << "'\n";
    return kExitIo;
  }
  out << text;
  out.close();
  if (!out) {
    std::cerr << "propor: error: cannot write output file '" << output << "'\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proportional norm-violation response selection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", propor_version());

  Options opts;
  auto* evaluate = app.add_subcommand("evaluate", "Score one act, or every candidate act");
  add_common(evaluate, opts);
  evaluate->add_option("--act", opts.act,
                       "Act to score: silence | strategy:severity[:face_threat] "
                       "(strategy off|negative|positive|bald or full name)");

  auto* select = app.add_subcommand("select", "Choose the utility-maximizing response");
  add_common(select, opts);

  auto* sweep = app.add_subcommand("sweep", "Re-run selection across one parameter axis");
  add_common(sweep, opts);
  sweep
      ->add_option("--axis", opts.axis,
                   "name=v1,v2,... or name=start:stop:step; names: actual_severity (S_a), "
                   "beta, alpha, gamma, kappa, rho, n")
      ->required();

  auto* simulate = app.add_subcommand("simulate", "Run the scenario's multi-round episode");
  add_common(simulate, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "propor: error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  propor_scenario* raw = nullptr;
  if (const auto status = propor_scenario_load(opts.scenario_path.c_str(), &raw);
      status != PROPOR_OK) {
    return report_error(status);
  }
  ScenarioHandle scenario(raw);
  if (const int rc = apply_grid_override(scenario.get()); rc != kExitOk) return rc;

  const auto variant = opts.variant == "extended" ? PROPOR_VARIANT_EXTENDED : PROPOR_VARIANT_BASE;
  const auto format = opts.format == "csv" ? PROPOR_FORMAT_CSV : PROPOR_FORMAT_TABLE;

  propor_report* report_raw = nullptr;
  propor_status status = PROPOR_OK;
  if (*evaluate) {
    if (opts.act.empty()) {
      status = propor_evaluate(scenario.get(), variant, nullptr, &report_raw);
    } else {
      propor_act act{};
      status = propor_parse_act(opts.act.c_str(), &act);
      if (status == PROPOR_OK) status = propor_evaluate(scenario.get(), variant, &act, &report_raw);
    }
  } else if (*select) {
    status = propor_select(scenario.get(), variant, &report_raw);
  } else if (*sweep) {
    status = propor_sweep(scenario.get(), variant, opts.axis.c_str(), &report_raw);
  } else {
    status = propor_simulate(scenario.get(), variant, &report_raw);
  }
  if (status != PROPOR_OK) return report_error(status);
  ReportHandle report(report_raw);

  const char* text = nullptr;
  std::size_t length = 0;
  if (const auto st = propor_report_render(report.get(), format, &text, &length); st != PROPOR_OK) {
    return report_error(st);
  }
  return emit(std::string(text, length), opts.output);
}
