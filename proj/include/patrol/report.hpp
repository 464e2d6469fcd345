// SPDX-License-Identifier: Apache-2.0
/*
Copyright (C) 2025 The Patrol Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "patrol/pipeline.hpp"
#include "patrol/scenario.hpp"

namespace patrol {

// One evaluation row. detected: some labeled event drew a non-allow verdict
// or a behavior flag. prevented: some labeled event was denied or killed
// inline. false_positives: non-allow verdicts on unlabeled events,
// attributed to the responsible rule's row (unattributed rules fall back to
// the row of the scenario that produced the hit).
struct matrix_row {
    scenario_kind kind;
    std::string display;
    bool detected = false;
    bool prevented = false;
    std::uint64_t false_positives = 0;
    bool core = true; // core table rows come first, extras after
};

struct detection_matrix {
    std::vector<matrix_row> rows;
    std::uint64_t total_false_positives = 0;
    std::size_t rule_count = 0;
    std::string mode;
};

// Human-readable row titles for the evaluation table.
std::string matrix_display_name(scenario_kind kind);

// Runs every scenario through the pipeline with the given rules and folds
// the results into the evaluation table.
detection_matrix run_matrix(const engine_config& cfg,
                            std::vector<policy_rule> rules, std::uint64_t seed);

nlohmann::json matrix_to_json(const detection_matrix& matrix);
std::string render_matrix_text(const detection_matrix& matrix);

// Plain-text run summary for the replay subcommand.
std::string render_summary_text(const run_summary& summary);

} // namespace patrol
