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

#include "patrol/report.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace patrol {

namespace {

// Rules whose false positives are charged to a fixed table row, so a noisy
// rule shows up on the technique it guards rather than on whichever benign
// scenario happened to trip it.
const std::map<std::string, scenario_kind>& rule_row_map() {
    static const std::map<std::string, scenario_kind> map = {
        {"block-reverse-shell", scenario_kind::reverse_shell},
        {"fsconfig-kill", scenario_kind::container_escape},
        {"block-shadow-access", scenario_kind::sensitive_file_read},
        {"ptrace-deny", scenario_kind::ptrace_escalation},
    };
    return map;
}

bool is_core_row(scenario_kind kind) {
    switch (kind) {
    case scenario_kind::reverse_shell:
    case scenario_kind::container_escape:
    case scenario_kind::sensitive_file_read:
    case scenario_kind::ptrace_escalation:
    case scenario_kind::benign_admin:
        return true;
    default:
        return false;
    }
}

std::string mark(bool hit) { return hit ? "yes" : "no"; }

} // namespace

std::string matrix_display_name(scenario_kind kind) {
    switch (kind) {
    case scenario_kind::reverse_shell: return "Reverse Shell (bash/nc)";
    case scenario_kind::container_escape:
        return "Container Escape (CVE-2022-0185)";
    case scenario_kind::sensitive_file_read: return "Sensitive File Read";
    case scenario_kind::ptrace_escalation:
        return "Privilege Escalation via ptrace";
    case scenario_kind::benign_admin: return "Benign Admin Session";
    case scenario_kind::fileless_exec: return "Fileless Execution";
    case scenario_kind::drive_by_download: return "Drive-by Download";
    case scenario_kind::benign_background: return "Benign Background";
    }
    return "Unknown";
}

detection_matrix run_matrix(const engine_config& cfg,
                            std::vector<policy_rule> rules,
                            std::uint64_t seed) {
    detection_matrix matrix;
    matrix.rule_count = rules.size();
    matrix.mode = to_string(cfg.mode);

    std::map<scenario_kind, std::uint64_t> row_fps;
    std::map<scenario_kind, matrix_row> rows;

    engine_config run_cfg = cfg;
    run_cfg.sink_path.clear(); // matrix runs never write a sink file

    for (scenario_kind kind : all_scenarios()) {
        trace_data trace = generate_scenario(kind, seed);
        policy_handle handle(compile_policy(rules, 1));
        alert_sinks sinks;
        run_result result =
            run_pipeline(trace, run_cfg, handle, run_options{}, sinks);

        matrix_row row;
        row.kind = kind;
        row.display = matrix_display_name(kind);
        row.detected = result.summary.labeled_detected > 0;
        row.prevented = result.summary.labeled_prevented > 0;
        row.core = is_core_row(kind);
        rows[kind] = row;

        for (const auto& [rule, count] : result.summary.fp_by_rule) {
            auto charged = rule_row_map().find(rule);
            scenario_kind target =
                charged != rule_row_map().end() ? charged->second : kind;
            row_fps[target] += count;
            matrix.total_false_positives += count;
        }
    }

    for (scenario_kind kind : all_scenarios()) {
        matrix_row row = rows[kind];
        row.false_positives = row_fps[kind];
        matrix.rows.push_back(std::move(row));
    }
    // Core rows first, preserving scenario order inside each group.
    std::stable_sort(matrix.rows.begin(), matrix.rows.end(),
                     [](const matrix_row& a, const matrix_row& b) {
                         return a.core && !b.core;
                     });
    return matrix;
}

nlohmann::json matrix_to_json(const detection_matrix& matrix) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : matrix.rows) {
        rows.push_back({{"scenario", to_string(row.kind)},
                        {"display", row.display},
                        {"detected", row.detected},
                        {"prevented", row.prevented},
                        {"false_positives", row.false_positives},
                        {"core", row.core}});
    }
    nlohmann::json j;
    j["rows"] = std::move(rows);
    j["total_false_positives"] = matrix.total_false_positives;
    j["rule_count"] = matrix.rule_count;
    j["mode"] = matrix.mode;
    return j;
}

std::string render_matrix_text(const detection_matrix& matrix) {
    std::ostringstream out;
    auto line = [&] {
        out << "+----------------------------------+----------+-----------+------+\n";
    };
    auto row_out = [&](const matrix_row& r) {
        std::string name = r.display;
        if (name.size() > 32) name.resize(32);
        out << "| " << name << std::string(33 - name.size(), ' ') << "| "
            << mark(r.detected) << std::string(9 - mark(r.detected).size(), ' ')
            << "| " << mark(r.prevented)
            << std::string(10 - mark(r.prevented).size(), ' ') << "| "
            << r.false_positives
            << std::string(5 - std::to_string(r.false_positives).size(), ' ')
            << "|\n";
    };

    out << "Evaluation (" << matrix.mode << " mode, " << matrix.rule_count
        << " rules)\n";
    line();
    out << "| Scenario                         | Detected | Prevented | FPs  |\n";
    line();
    for (const auto& r : matrix.rows) {
        if (r.core) row_out(r);
    }
    line();
    out << "Additional workloads\n";
    line();
    for (const auto& r : matrix.rows) {
        if (!r.core) row_out(r);
    }
    line();
    out << "Total false positives: " << matrix.total_false_positives << "\n";
    return out.str();
}

std::string render_summary_text(const run_summary& s) {
    std::ostringstream out;
    out << "scenario:          "
        << (s.scenario.empty() ? "(unnamed)" : s.scenario) << "\n";
    out << "mode:              " << s.mode << "\n";
    out << "events:            " << s.events_processed << "/" << s.events_total
        << " processed, " << s.drop_count << " dropped\n";
    out << "decisions:        ";
    for (const auto& [name, count] : s.decisions) {
        out << " " << name << "=" << count;
    }
    out << "\n";
    out << "labeled:           " << s.labeled_detected << "/" << s.labeled_total
        << " detected, " << s.labeled_prevented << " prevented\n";
    out << "false positives:   " << s.false_positives;
    for (const auto& [rule, count] : s.fp_by_rule) {
        out << " (" << rule << "=" << count << ")";
    }
    out << "\n";
    out << "behavior flags:    " << s.flag_count;
    for (const auto& [kind, count] : s.flags_by_kind) {
        out << " (" << kind << "=" << count << ")";
    }
    out << "\n";
    out << "suppressed:        " << s.suppressed << " (kills: " << s.kill_count
        << ")\n";
    out << "watchdog:          " << s.timeout_count << " timeouts, "
        << s.late_settles << " late settles\n";
    out << "policy versions:   " << s.policy_version_first << " -> "
        << s.policy_version_last << "\n";
    out << "throughput:        " << static_cast<std::uint64_t>(s.events_per_sec)
        << " events/sec\n";
    out << "latency (ns):      p50=" << s.latency.p50_ns
        << " p90=" << s.latency.p90_ns << " p99=" << s.latency.p99_ns
        << " max=" << s.latency.max_ns << "\n";
    if (s.aborted) {
        out << "ABORTED:           " << s.abort_reason << "\n";
    }
    return out.str();
}

} // namespace patrol
