#include "propor/report.hpp"

#include <cstdio>
#include <sstream>

namespace propor {

namespace {

std::string num(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string act_strategy(const SpeechAct& act) {
  if (const auto* u = act.as_utterance()) return to_string(u->strategy);
  return "silence";
}

std::string act_conveyed(const SpeechAct& act) {
  if (const auto* u = act.as_utterance()) return num(u->conveyed_severity.value());
  return "-";
}

std::string act_line(const SpeechAct& act) {
  if (act.is_silence()) return "silence";
  return "(" + act_strategy(act) + ", " + act_conveyed(act) + ")";
}

const Observer* find_observer(const Scenario& s, const std::string& id) {
  for (const auto& o : s.observers)
    if (o.id == id) return &o;
  return nullptr;
}

}  // namespace

std::string render_breakdown(const Scenario& scenario, const SpeechAct& act,
                             const UtilityBreakdown& b, ModelVariant variant) {
  std::ostringstream os;
  os << "act:          " << act_line(act) << "\n"
     << "variant:      " << to_string(variant) << "\n"
     << "face threat:  " << num(b.face_threat) << "\n"
     << "moral:        " << num(b.moral) << "\n"
     << "social:       " << num(b.social) << "\n"
     << "total:        " << num(b.total) << "\n";
  if (variant == ModelVariant::Extended) {
    os << "shame bonus:  " << num(b.shame_bonus) << "\n"
       << "audience load " << num(b.audience_load) << " (discount factor "
       << num(b.discount_factor) << ")\n";
  }
  if (!b.per_observer.empty()) {
    os << "\n"
       << pad("observer", 16) << pad("role", 14) << pad("belief", 10) << pad("importance", 12)
       << pad("moral", 12) << "social\n";
    for (const auto& c : b.per_observer) {
      const Observer* o = find_observer(scenario, c.observer_id);
      os << pad(c.observer_id, 16) << pad(o ? to_string(o->role) : "?", 14)
         << pad(o ? num(o->perceived_severity.value()) : "?", 10)
         << pad(o ? num(o->importance) : "?", 12) << pad(num(c.moral_contribution), 12)
         << num(c.social_contribution) << "\n";
    }
  }
  return os.str();
}

std::string render_ranked(const std::vector<RankedAct>& ranked) {
  std::ostringstream os;
  os << pad("rank", 6) << pad("strategy", 22) << pad("conveyed", 10) << pad("threat", 10)
     << pad("moral", 12) << pad("social", 12) << "total\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& r = ranked[i];
    os << pad(std::to_string(i + 1), 6) << pad(act_strategy(r.act), 22)
       << pad(act_conveyed(r.act), 10) << pad(num(r.breakdown.face_threat), 10)
       << pad(num(r.breakdown.moral), 12) << pad(num(r.breakdown.social), 12)
       << num(r.breakdown.total) << "\n";
  }
  return os.str();
}

std::string render_selection(const Scenario& scenario, const SelectionResult& result,
                             ModelVariant variant) {
  std::ostringstream os;
  os << "chosen:       " << act_line(result.chosen) << "  total " << num(result.breakdown.total)
     << "\n\n"
     << render_breakdown(scenario, result.chosen, result.breakdown, variant) << "\n"
     << "candidates (" << result.ranked.size() << ")\n"
     << render_ranked(result.ranked);
  return os.str();
}

std::string render_sweep(const SweepTable& table) {
  std::ostringstream os;
  os << pad(to_string(table.axis), 18) << pad("strategy", 22) << pad("conveyed", 10)
     << pad("threat", 10) << pad("moral", 12) << pad("social", 12) << "total\n";
  for (const auto& row : table.rows) {
    os << pad(num(row.axis_value), 18) << pad(act_strategy(row.chosen), 22)
       << pad(act_conveyed(row.chosen), 10) << pad(num(row.breakdown.face_threat), 10)
       << pad(num(row.breakdown.moral), 12) << pad(num(row.breakdown.social), 12)
       << num(row.breakdown.total) << "\n";
  }
  return os.str();
}

std::string render_episode(const EpisodeTrace& trace) {
  std::ostringstream os;
  os << pad("round", 7) << pad("norm", 14) << pad("S_a", 8) << pad("strategy", 22)
     << pad("conveyed", 10) << pad("threat", 10) << pad("total", 12) << "beliefs\n";
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& r = trace.rounds[i];
    os << pad(std::to_string(i + 1), 7) << pad(r.round.violation.norm_id, 14)
       << pad(num(r.round.violation.actual_severity.value()), 8) << pad(act_strategy(r.act), 22)
       << pad(act_conveyed(r.act), 10) << pad(num(r.breakdown.face_threat), 10)
       << pad(num(r.breakdown.total), 12);
    bool first = true;
    for (const auto& [id, belief] : r.beliefs) {
      os << (first ? "" : " ") << id << "=" << num(belief);
      first = false;
    }
    os << "\n";
  }
  os << "\nmean belief error:       " << num(trace.summary.mean_belief_error) << "\n"
     << "cumulative face threat:  " << num(trace.summary.cumulative_face_threat) << "\n"
     << "cumulative honesty gap:  " << num(trace.summary.cumulative_honesty_gap) << "\n";
  return os.str();
}

}  // namespace propor
