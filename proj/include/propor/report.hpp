#pragma once

#include <string>
#include <vector>

#include "propor/core_model.hpp"
#include "propor/selection.hpp"
#include "propor/simulation.hpp"
#include "propor/utility.hpp"

namespace propor {

// Plain-text tables for terminal output. CSV lives in scenario_io.

std::string render_breakdown(const Scenario& scenario, const SpeechAct& act,
                             const UtilityBreakdown& breakdown, ModelVariant variant);

std::string render_ranked(const std::vector<RankedAct>& ranked);

/// Chosen act, per-observer explanation, then the full ranked table.
std::string render_selection(const Scenario& scenario, const SelectionResult& result,
                             ModelVariant variant);

std::string render_sweep(const SweepTable& table);

std::string render_episode(const EpisodeTrace& trace);

}  // namespace propor
