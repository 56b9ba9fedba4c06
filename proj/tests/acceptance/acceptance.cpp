// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.
//
// usage: propor_acceptance <path-to-propor-cli> <scenarios-dir>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "propor/scenario_io.hpp"
#include "propor/selection.hpp"
#include "propor/simulation.hpp"
#include "propor/utility.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

namespace fs = std::filesystem;
using namespace propor;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure message; later failures only flip the flag.
class Tally {
 public:
  void check(bool ok, const std::function<std::string()>& why) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (first_.empty()) first_ = why();
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream os;
    os << summary << " (" << (checks_ - failures_) << "/" << checks_ << " checks)";
    if (failures_ > 0) os << "; first failure: " << first_;
    return {failures_ == 0, os.str()};
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_;
};

Observer make_observer(std::string id, ObserverRole role, double belief, double importance) {
  Observer o;
  o.id = std::move(id);
  o.role = role;
  o.perceived_severity = Severity(belief);
  o.importance = importance;
  return o;
}

Scenario identical_audience(double actual, std::size_t n, double belief, double importance) {
  Scenario s;
  s.violation = {"insult", Severity(actual), false};
  s.violator_id = "o00";
  for (std::size_t i = 0; i < n; ++i) {
    char id[8];
    std::snprintf(id, sizeof id, "o%02zu", i);
    s.observers.push_back(make_observer(id, i == 0 ? ObserverRole::Violator
                                                   : ObserverRole::Bystander,
                                        belief, importance));
  }
  return s;
}

std::string act_text(const SpeechAct& act) { return describe(act); }

// 1. Honesty optimality.
Outcome honesty_optimality() {
  testing::ScenarioGen gen(1001);
  testing::GenOptions opts;
  opts.min_observers = 1;
  opts.max_observers = 10;
  opts.random_grid = false;
  Tally tally;
  for (int i = 0; i < 1000; ++i) {
    const auto s = gen.scenario(opts);
    const double sa = s.violation.actual_severity.value();
    const auto candidates = candidate_acts(s);
    for (auto strategy : kAllStrategies) {
      const double honest = std::min(sa, s.params.conveyance_cap[strategy]);
      const SpeechAct* best = nullptr;
      double best_value = 0.0;
      for (const auto& act : candidates.acts) {
        const auto* u = act.as_utterance();
        if (u == nullptr || u->strategy != strategy) continue;
        const double value = moral_utility(s, act, ModelVariant::Base);
        if (best == nullptr || value > best_value) {
          best = &act;
          best_value = value;
        }
      }
      const double chosen = best->conveyed_or_zero();
      tally.check(chosen == honest, [&] {
        std::ostringstream os;
        os << "scenario " << i << " " << to_string(strategy) << ": argmax S_c " << chosen
           << " != " << honest;
        return os.str();
      });
    }
  }
  return tally.outcome("1000 Base scenarios, 1-10 observers, beta~U[0,2], step 0.05");
}

// 2. Oracle equivalence.
Outcome oracle_equivalence() {
  testing::ScenarioGen gen(2002);
  Tally tally;
  for (int i = 0; i < 1000; ++i) {
    testing::GenOptions opts;
    opts.extended_params = i % 2 == 1;
    const auto s = gen.scenario(opts);
    for (auto v : {ModelVariant::Base, ModelVariant::Extended}) {
      const auto got = select_response(s, v).chosen;
      const auto want = oracle::best(s, v).act;
      tally.check(oracle::from(got) == want, [&] {
        return "scenario " + std::to_string(i) + " " + to_string(v) + ": chose " + act_text(got);
      });
    }
  }
  return tally.outcome("1000 scenarios x {base, extended}, exact chosen-act match");
}

// 3. Variant reduction.
Outcome variant_reduction() {
  testing::ScenarioGen gen(3003);
  Tally tally;
  for (int i = 0; i < 1000; ++i) {
    const auto s = gen.scenario({});  // neutral extension parameters
    const auto strategy = kAllStrategies[gen.index(0, 3)];
    const double conveyed = gen.uniform(0.0, s.params.conveyance_cap[strategy]);
    std::optional<double> fixed;
    if (gen.coin(0.25)) fixed = gen.uniform(0.0, 2.0);
    const auto act = gen.coin(0.05) ? SpeechAct::silence()
                                    : SpeechAct::utterance(Severity(conveyed), strategy,
                                                           s.params, fixed);
    const auto base = total_utility(s, act, ModelVariant::Base);
    const auto ext = total_utility(s, act, ModelVariant::Extended);
    const double diff = std::max({std::abs(base.total - ext.total),
                                  std::abs(base.moral - ext.moral),
                                  std::abs(base.social - ext.social)});
    tally.check(diff <= 1e-12, [&] {
      std::ostringstream os;
      os << "pair " << i << " differs by " << diff;
      return os.str();
    });
  }
  return tally.outcome("1000 (scenario, act) pairs within 1e-12");
}

// 4. Discount concavity.
Outcome discount_concavity() {
  Tally tally;
  const double importance = 0.7;
  for (double alpha : {0.25, 0.5, 0.75, 1.0}) {
    std::vector<double> social(51, 0.0);
    for (std::size_t n = 1; n <= 50; ++n) {
      auto s = identical_audience(0.9, n, 0.1, importance);
      s.params.alpha = alpha;
      const auto act = SpeechAct::utterance(Severity(0.9), PolitenessStrategy::BaldOnRecord,
                                            s.params);
      social[n] = social_utility(s, act, ModelVariant::Extended);
    }
    for (std::size_t n = 1; n < 50; ++n) {
      const double here = std::abs(social[n] - social[n - 1]);
      const double next = std::abs(social[n + 1] - social[n]);
      if (alpha < 1.0) {
        tally.check(next < here, [&] {
          std::ostringstream os;
          os << "alpha " << alpha << " n " << n << ": |dU| " << next << " >= " << here;
          return os.str();
        });
      } else {
        tally.check(std::abs(next - here) <= 1e-12, [&] {
          std::ostringstream os;
          os << "alpha 1 n " << n << ": marginal changed by " << std::abs(next - here);
          return os.str();
        });
      }
    }
  }
  return tally.outcome("alpha in {0.25,0.5,0.75} decreasing marginals, alpha=1 constant");
}

// 5. Shame-bonus guard.
Outcome shame_guard() {
  Tally tally;
  auto s = identical_audience(0.9, 1, 0.1, 1.0);
  s.violation.harm_done = true;
  s.params.gamma = 0.1;
  s.params.face_cap = 0.5;
  double previous = 0.0;
  for (int k = 1; k <= 30; ++k) {
    const double threat = 0.5 + 0.05 * k;
    const auto act = SpeechAct::utterance(Severity(0.9), PolitenessStrategy::BaldOnRecord,
                                          s.params, threat);
    const double total = total_utility(s, act, ModelVariant::Extended).total;
    if (k > 1) {
      tally.check(total < previous, [&] {
        std::ostringstream os;
        os << "F " << threat << ": total " << total << " >= " << previous;
        return os.str();
      });
    }
    previous = total;
  }
  return tally.outcome("gamma 0.1, face_cap 0.5, I=1, F in (0.5,2.0] step 0.05");
}

// 6. Audience softening.
Outcome audience_softening() {
  Tally tally;
  const auto proto = identical_audience(0.9, 1, 0.1, 1.0);
  const auto table = sweep(proto, parse_axis_spec("n=1:20:1"), ModelVariant::Base);
  tally.check(table.rows.size() == 20, [] { return std::string("expected 20 sweep rows"); });
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    tally.check(table.rows[i].breakdown.face_threat <= table.rows[i - 1].breakdown.face_threat,
                [&] { return "face threat rose at n=" + std::to_string(i + 1); });
  }

  // Worked examples; expected values cross-checked against the brute-force oracle.
  struct Example {
    Scenario scenario;
    PolitenessStrategy strategy;
    double conveyed;
    double total;
  };
  const Example examples[] = {
      {identical_audience(0.9, 1, 0.1, 0.2), PolitenessStrategy::BaldOnRecord, 0.9, 0.61},
      {identical_audience(0.9, 3, 0.1, 1.0), PolitenessStrategy::NegativePoliteness, 0.55,
       0.30375},
  };
  for (const auto& ex : examples) {
    const auto result = select_response(ex.scenario, ModelVariant::Base);
    const auto brute = oracle::best(ex.scenario, ModelVariant::Base);
    const auto* u = result.chosen.as_utterance();
    const bool act_ok = u != nullptr && u->strategy == ex.strategy &&
                        u->conveyed_severity.value() == ex.conveyed;
    tally.check(act_ok && oracle::from(result.chosen) == brute.act,
                [&] { return "chosen " + act_text(result.chosen); });
    tally.check(std::abs(result.breakdown.total - ex.total) <= 1e-6 &&
                    std::abs(brute.scores.total - ex.total) <= 1e-6,
                [&] {
                  std::ostringstream os;
                  os << "total " << result.breakdown.total << " vs " << ex.total;
                  return os.str();
                });
  }
  const auto three = identical_audience(0.9, 3, 0.1, 1.0);
  const auto bald = SpeechAct::utterance(Severity(0.9), PolitenessStrategy::BaldOnRecord,
                                         three.params);
  const double bald_total = total_utility(three, bald, ModelVariant::Base).total;
  tally.check(std::abs(bald_total + 0.45) <= 1e-6,
              [&] { return "honest bald total " + std::to_string(bald_total); });
  return tally.outcome("n=1..20 face threat nonincreasing; n=1 bald/0.9 0.61; n=3 negative/0.55 0.30375");
}

// 7. Belief contraction.
Outcome belief_contraction() {
  testing::ScenarioGen gen(7007);
  Tally tally;
  for (double lambda : {0.1, 0.5, 1.0}) {
    for (int trial = 0; trial < 20; ++trial) {
      testing::GenOptions opts;
      opts.min_observers = 1;
      auto base = gen.scenario(opts);
      for (auto& o : base.observers) o.update_rate.reset();
      base.params.lambda = lambda;
      EpisodeScript script;
      script.initial_scenario = base;
      script.policy = ResponsePolicy::AlwaysHonestBald;
      for (int t = 0; t < 20; ++t) script.rounds.push_back({base.violation, base.violator_id});
      const auto trace = run_episode(script, ModelVariant::Base);
      const double sa = base.violation.actual_severity.value();
      double previous_error = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
        const auto& record = trace.rounds[t];
        double error_sum = 0.0;
        for (const auto& o : base.observers) {
          const double initial = std::abs(o.perceived_severity.value() - sa);
          const double expected = std::pow(1.0 - lambda, static_cast<double>(t + 1)) * initial;
          const double actual = std::abs(record.beliefs.at(o.id) - sa);
          error_sum += actual;
          tally.check(std::abs(actual - expected) <= 1e-12, [&] {
            std::ostringstream os;
            os << "lambda " << lambda << " t " << (t + 1) << ": error " << actual << " vs "
               << expected;
            return os.str();
          });
        }
        tally.check(error_sum <= previous_error,
                    [&] { return "mean belief error rose at t=" + std::to_string(t + 1); });
        previous_error = error_sum;
      }
    }
  }
  return tally.outcome("lambda in {0.1,0.5,1.0}, t<=20, within 1e-12");
}

// 8. Permutation invariance.
Outcome permutation_invariance() {
  testing::ScenarioGen gen(8008);
  Tally tally;
  for (int i = 0; i < 100; ++i) {
    testing::GenOptions opts;
    opts.min_observers = 2;
    opts.extended_params = i % 2 == 0;
    const auto s = gen.scenario(opts);
    const auto candidates = candidate_acts(s).acts;
    const auto& act = candidates[gen.index(1, candidates.size() - 1)];
    const auto base = total_utility(s, act, ModelVariant::Base);
    const auto ext = total_utility(s, act, ModelVariant::Extended);
    auto shuffled = s;
    for (int p = 0; p < 100; ++p) {
      std::shuffle(shuffled.observers.begin(), shuffled.observers.end(), gen.rng());
      tally.check(total_utility(shuffled, act, ModelVariant::Base) == base &&
                      total_utility(shuffled, act, ModelVariant::Extended) == ext,
                  [&] { return "scenario " + std::to_string(i) + " permutation " +
                               std::to_string(p); });
    }
  }
  return tally.outcome("100 scenarios x 100 permutations, bit-identical breakdowns");
}

std::string random_json(std::mt19937_64& rng, int depth) {
  static const char* kKeys[] = {"format_version", "scenario", "episode", "violation",
                                "observers", "params", "id", "role", "importance",
                                "alpha", "rounds", "x"};
  switch (depth > 4 ? rng() % 4 : rng() % 7) {
    case 0: return std::to_string(static_cast<long>(rng() % 2001) - 1000);
    case 1: return std::to_string(std::uniform_real_distribution<double>(-2, 2)(rng));
    case 2: return rng() % 2 ? "true" : "null";
    case 3: return "\"" + std::string(kKeys[rng() % 12]) + "\"";
    case 4: {
      std::string out = "[";
      const auto n = rng() % 4;
      for (std::size_t i = 0; i < n; ++i) out += (i ? "," : "") + random_json(rng, depth + 1);
      return out + "]";
    }
    default: {
      std::string out = "{";
      const auto n = rng() % 5;
      for (std::size_t i = 0; i < n; ++i) {
        out += (i ? ",\"" : "\"") + std::string(kKeys[rng() % 12]) + "\":" +
               random_json(rng, depth + 1);
      }
      return out + "}";
    }
  }
}

// 9. I/O round trip and parser totality.
Outcome io_round_trip() {
  testing::ScenarioGen gen(9009);
  Tally tally;
  std::vector<std::string> seeds;
  for (int i = 0; i < 500; ++i) {
    testing::GenOptions opts;
    opts.extended_params = i % 2 == 0;
    opts.decimals = 6;
    opts.min_observers = i % 5 == 0 ? 0 : 1;
    ScenarioDocument doc;
    doc.scenario = gen.scenario(opts);
    if (!doc.scenario.observers.empty() && gen.coin()) doc.episode = gen.episode(doc.scenario);
    const auto text = serialize_scenario(doc);
    bool equal = false;
    try {
      equal = parse_scenario(text) == doc;
    } catch (const ValidationError&) {
    }
    tally.check(equal, [&] { return "document " + std::to_string(i) + " did not round-trip"; });
    if (seeds.size() < 20) seeds.push_back(text);
  }

  auto& rng = gen.rng();
  std::size_t accepted = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string text;
    switch (i % 4) {
      case 0:
      case 1: {
        text = seeds[rng() % seeds.size()];
        const std::size_t edits = 1 + rng() % 8;
        for (std::size_t e = 0; e < edits && !text.empty(); ++e) {
          const std::size_t pos = rng() % text.size();
          switch (rng() % 4) {
            case 0: text[pos] = static_cast<char>(rng() % 256); break;
            case 1: text.erase(pos, 1 + rng() % 16); break;
            case 2: text.insert(pos, 1, "{}[],:\"0-e.tfn\\"[rng() % 15]); break;
            case 3: text.resize(pos); break;
          }
        }
        break;
      }
      case 2: {
        const std::size_t len = rng() % 256;
        for (std::size_t k = 0; k < len; ++k) text += static_cast<char>(rng() % 256);
        break;
      }
      case 3: text = random_json(rng, 0); break;
    }
    bool structured = true;
    std::string what;
    try {
      parse_scenario(text);
      ++accepted;
    } catch (const ValidationError&) {
    } catch (const std::exception& e) {
      structured = false;
      what = e.what();
    } catch (...) {
      structured = false;
      what = "non-standard exception";
    }
    tally.check(structured, [&] { return "input " + std::to_string(i) + ": " + what; });
  }
  return tally.outcome("500 round trips; 10000 fuzzed inputs (" + std::to_string(accepted) +
                       " accepted), all others structured errors");
}

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run_cli(const std::string& cli, const std::string& args, const fs::path& work) {
  const auto out = work / "stdout.txt";
  const auto err = work / "stderr.txt";
  const std::string command = "'" + cli + "' " + args + " >'" + out.string() + "' 2>'" +
                              err.string() + "'";
  const int raw = std::system(command.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

// 10. CLI end-to-end.
Outcome cli_end_to_end(const std::string& cli, const fs::path& scenarios) {
  Tally tally;
  const auto work = fs::temp_directory_path() / ("propor_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);
  const std::string bystander3 = "'" + (scenarios / "bystander3.json").string() + "'";
  const std::string min = "'" + (scenarios / "min.json").string() + "'";
  const std::string missing = "'" + (work / "missing.json").string() + "'";

  auto select = run_cli(cli, "select " + bystander3, work);
  tally.check(select.status == 0, [&] { return "select exit " + std::to_string(select.status); });
  tally.check(contains(select.out, "chosen:       (negative_politeness, 0.55)  total 0.30375"),
              [&] { return "select output missing chosen act:\n" + select.out; });

  auto evaluate = run_cli(cli, "evaluate " + min + " --act bald:0.9", work);
  tally.check(evaluate.status == 0,
              [&] { return "evaluate exit " + std::to_string(evaluate.status); });
  tally.check(contains(evaluate.out, "moral:        0.8\n") &&
                  contains(evaluate.out, "social:       -0.19\n") &&
                  contains(evaluate.out, "total:        0.61\n"),
              [&] { return "evaluate output:\n" + evaluate.out; });

  auto absent = run_cli(cli, "select " + missing, work);
  tally.check(absent.status == 2, [&] { return "missing file exit " + std::to_string(absent.status); });
  tally.check(absent.out.empty(), [] { return std::string("missing file wrote to stdout"); });
  tally.check(contains(absent.err, (work / "missing.json").string()),
              [&] { return "missing file error does not name path: " + absent.err; });

  for (const std::string& args :
       {"select " + bystander3 + " --format csv", "evaluate " + min + " --act bald:0.9 --format csv",
        "sweep " + bystander3 + " --axis n=1:20:1 --format csv"}) {
    const auto first = run_cli(cli, args, work);
    const auto second = run_cli(cli, args, work);
    tally.check(first.status == 0 && !first.out.empty() && first.out == second.out,
                [&] { return "csv output not reproducible for: " + args; });
  }
  fs::remove_all(work);
  return tally.outcome("select/evaluate/missing-file exit codes and byte-identical CSV reruns");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: " << argv[0] << " <propor-cli> <scenarios-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scenarios = argv[2];

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"honesty optimality", honesty_optimality},
      {"oracle equivalence", oracle_equivalence},
      {"variant reduction", variant_reduction},
      {"discount concavity", discount_concavity},
      {"shame-bonus guard", shame_guard},
      {"audience softening", audience_softening},
      {"belief contraction", belief_contraction},
      {"permutation invariance", permutation_invariance},
      {"I/O round trip", io_round_trip},
      {"CLI end-to-end", [&] { return cli_end_to_end(cli, scenarios); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].name
              << ": " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
