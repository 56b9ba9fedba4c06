#include "propor/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <atomic>
#include <sstream>
#include <thread>

namespace propor {

namespace {

constexpr double kGridTolerance = 1e-9;
constexpr std::size_t kMaxAxisValues = 100000;
constexpr double kMaxAudience = 10000.0;

std::vector<double> strategy_grid(double cap, double step, double actual) {
  std::vector<double> grid;
  const auto last = static_cast<long>(std::floor(cap / step + kGridTolerance));
  const double honest = std::min(actual, cap);
  for (long k = 0; k <= last; ++k) {
    double v = static_cast<double>(k) * step;
    if (v > cap || std::abs(v - cap) <= kGridTolerance) v = cap;
    if (std::abs(v - honest) <= kGridTolerance) continue;
    grid.push_back(v);
  }
  grid.push_back(honest);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double parse_number(const std::string& text, const std::string& path) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || !std::isfinite(v)) {
    throw ValidationError(path, "'" + text + "' is not a finite number");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

Scenario replicate_prototype(const Scenario& base, double value) {
  if (value != std::floor(value) || value < 0.0 || value > kMaxAudience) {
    std::ostringstream os;
    os << "audience size " << value << " must be an integer in [0," << kMaxAudience << "]";
    throw ValidationError("axis n", os.str());
  }
  if (base.observers.empty()) {
    throw ValidationError("axis n", "template scenario has no observer to replicate");
  }
  const auto count = static_cast<std::size_t>(value);
  auto proto_it = std::find_if(base.observers.begin(), base.observers.end(),
                               [](const Observer& o) { return o.role == ObserverRole::Violator; });
  const Observer proto = proto_it != base.observers.end() ? *proto_it : base.observers.front();

  Scenario s = base;
  s.observers.clear();
  for (std::size_t k = 0; k < count; ++k) {
    Observer o = proto;
    if (k > 0) {
      o.id = proto.id + "#" + std::to_string(k + 1);
      if (o.role == ObserverRole::Violator) o.role = ObserverRole::Bystander;
    }
    s.observers.push_back(std::move(o));
  }
  return s;
}

}  // namespace

CandidateSet candidate_acts(const Scenario& scenario) {
  const auto& p = scenario.params;
  const double actual = scenario.violation.actual_severity.value();
  CandidateSet set;
  set.acts.push_back(SpeechAct::silence());
  for (auto strategy : kAllStrategies) {
    for (double v : strategy_grid(p.conveyance_cap[strategy], p.grid_step, actual)) {
      set.acts.push_back(SpeechAct::utterance(Severity(v), strategy, p));
    }
  }
  return set;
}

bool ranks_before(const RankedAct& a, const RankedAct& b, double actual_severity) {
  if (a.breakdown.total != b.breakdown.total) return a.breakdown.total > b.breakdown.total;
  if (a.breakdown.face_threat != b.breakdown.face_threat)
    return a.breakdown.face_threat < b.breakdown.face_threat;
  const double da = std::abs(a.act.conveyed_or_zero() - actual_severity);
  const double db = std::abs(b.act.conveyed_or_zero() - actual_severity);
  if (da != db) return da < db;
  if (a.act.rank() != b.act.rank()) return a.act.rank() < b.act.rank();
  return a.act.conveyed_or_zero() < b.act.conveyed_or_zero();
}

SelectionResult select_response(const Scenario& scenario, ModelVariant variant) {
  auto candidates = candidate_acts(scenario);
  std::vector<RankedAct> ranked;
  ranked.reserve(candidates.acts.size());
  for (auto& act : candidates.acts) {
    auto breakdown = total_utility(scenario, act, variant);
    ranked.push_back({std::move(act), std::move(breakdown)});
  }
  const double actual = scenario.violation.actual_severity.value();
  std::sort(ranked.begin(), ranked.end(), [actual](const RankedAct& a, const RankedAct& b) {
    return ranks_before(a, b, actual);
  });
  SelectionResult result;
  result.chosen = ranked.front().act;
  result.breakdown = ranked.front().breakdown;
  result.ranked = std::move(ranked);
  return result;
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::ActualSeverity: return "actual_severity";
    case SweepAxis::Beta: return "beta";
    case SweepAxis::Alpha: return "alpha";
    case SweepAxis::Gamma: return "gamma";
    case SweepAxis::Kappa: return "kappa";
    case SweepAxis::Rho: return "rho";
    case SweepAxis::AudienceSize: return "n";
  }
  return "unknown";
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "actual_severity" || name == "S_a") return SweepAxis::ActualSeverity;
  if (name == "beta") return SweepAxis::Beta;
  if (name == "alpha") return SweepAxis::Alpha;
  if (name == "gamma") return SweepAxis::Gamma;
  if (name == "kappa") return SweepAxis::Kappa;
  if (name == "rho") return SweepAxis::Rho;
  if (name == "n") return SweepAxis::AudienceSize;
  throw ValidationError("axis " + name,
                        "unknown axis (expected actual_severity|beta|alpha|gamma|kappa|rho|n)");
}

AxisSpec parse_axis_spec(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) {
    throw ValidationError("axis", "expected name=v1,v2,... or name=start:stop:step, got '" +
                                      text + "'");
  }
  const std::string name = text.substr(0, eq);
  const std::string body = text.substr(eq + 1);
  AxisSpec spec;
  spec.axis = parse_axis(name);
  const std::string path = "axis " + name;

  if (body.find(':') != std::string::npos) {
    const auto parts = split(body, ':');
    if (parts.size() != 3) throw ValidationError(path, "range must be start:stop:step");
    const double start = parse_number(parts[0], path);
    const double stop = parse_number(parts[1], path);
    const double step = parse_number(parts[2], path);
    if (!(step > 0.0)) throw ValidationError(path, "range step must be positive");
    if (stop < start) throw ValidationError(path, "range stop is below start");
    const double span = std::floor((stop - start) / step + kGridTolerance);
    if (span + 1.0 > static_cast<double>(kMaxAxisValues)) {
      throw ValidationError(path, "range expands to too many values");
    }
    for (long k = 0; k <= static_cast<long>(span); ++k) {
      const double v = start + static_cast<double>(k) * step;
      spec.values.push_back(std::round(v * 1e12) / 1e12);
    }
  } else {
    for (const auto& part : split(body, ',')) spec.values.push_back(parse_number(part, path));
  }
  if (spec.values.empty()) throw ValidationError(path, "axis has no values");
  return spec;
}

Scenario apply_axis(const Scenario& base, SweepAxis axis, double value) {
  if (axis == SweepAxis::AudienceSize) return replicate_prototype(base, value);

  const std::string path = "axis " + to_string(axis);
  Scenario s = base;
  auto& p = s.params;
  try {
    switch (axis) {
      case SweepAxis::ActualSeverity:
        s.violation.actual_severity = Severity(value, path);
        break;
      case SweepAxis::Beta: p.beta = value; break;
      case SweepAxis::Alpha: p.alpha = value; break;
      case SweepAxis::Gamma: p.gamma = value; break;
      case SweepAxis::Kappa: p.kappa = value; break;
      case SweepAxis::Rho: p.rho = value; break;
      case SweepAxis::AudienceSize: break;
    }
    p.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path, e.detail());
  }
  return s;
}

SweepTable sweep(const Scenario& scenario_template, const AxisSpec& spec, ModelVariant variant) {
  if (spec.values.empty()) {
    throw ValidationError("axis " + to_string(spec.axis), "axis has no values");
  }
  std::vector<Scenario> scenarios;
  scenarios.reserve(spec.values.size());
  for (double v : spec.values) {
    scenarios.push_back(apply_axis(scenario_template, spec.axis, v));
    scenarios.back().validate();
  }

  std::vector<SelectionResult> results(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < scenarios.size(); i = next++) {
      results[i] = select_response(scenarios[i], variant);
    }
  };
  const auto workers = std::min<std::size_t>(
      scenarios.size(), std::max(1u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  SweepTable table;
  table.axis = spec.axis;
  table.rows.reserve(spec.values.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    table.rows.push_back(
        {spec.values[i], std::move(results[i].chosen), std::move(results[i].breakdown)});
  }
  return table;
}

}  // namespace propor
