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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "patrol/compiled_policy.hpp"
#include "patrol/config.hpp"
#include "patrol/replay.hpp"

namespace patrol {

// Swap the active policy set after the event with this seq is processed.
// Later events match against the new rules.
struct reload_spec {
    std::uint64_t at_seq = 0;
    std::vector<policy_rule> rules;
};

struct run_options {
    pacing pace;
    std::optional<reload_spec> reload;
    // Test harness hook: stall the consumer this long per event to provoke
    // backpressure (observe-mode drops, inline watchdog timeouts).
    std::uint64_t consumer_delay_ns = 0;
};

// Nearest-rank percentiles over per-event decision latency.
struct latency_stats {
    std::uint64_t count = 0;
    std::uint64_t p50_ns = 0;
    std::uint64_t p90_ns = 0;
    std::uint64_t p99_ns = 0;
    std::uint64_t max_ns = 0;
    double mean_ns = 0.0;
};

struct profile_digest {
    std::uint64_t total = 0;
    bool learned = false;
};

struct run_summary {
    std::string scenario;
    std::string mode;
    std::uint64_t events_total = 0;     // events in the trace
    std::uint64_t events_processed = 0; // dequeued by the consumer
    std::uint64_t drop_count = 0;       // lost at the ring (observe mode)

    // Per-class decision counts over processed events. Keys are the verdict
    // names plus "suppressed" for events of already-killed pids, so the
    // values sum to events_processed.
    std::map<std::string, std::uint64_t> decisions;

    // Non-allow decisions on unlabeled events, by rule.
    std::map<std::string, std::uint64_t> fp_by_rule;
    std::uint64_t false_positives = 0;

    std::uint64_t labeled_total = 0;
    std::uint64_t labeled_detected = 0;  // labeled events flagged or non-allow
    std::uint64_t labeled_prevented = 0; // labeled events denied/killed inline

    std::map<std::string, std::uint64_t> flags_by_kind;
    std::uint64_t flag_count = 0;

    std::uint64_t suppressed = 0;
    std::uint64_t kill_count = 0;
    std::uint64_t timeout_count = 0;
    std::uint64_t late_settles = 0;
    std::uint64_t unknown_pid_warnings = 0;

    std::uint64_t policy_version_first = 0;
    std::uint64_t policy_version_last = 0;

    std::map<std::string, profile_digest> profiles;

    bool aborted = false;
    std::string abort_reason;

    // Timing block, excluded from the deterministic summary view.
    latency_stats latency;
    std::uint64_t wall_time_ns = 0;
    double events_per_sec = 0.0;
};

// include_timing=false omits every wall-clock derived field; the remainder
// is identical across repeated runs of the same inputs.
nlohmann::json summary_to_json(const run_summary& summary, bool include_timing);

struct run_result {
    run_summary summary;
    replay_report replay;
    std::vector<enforcement_record> records; // non-suppressed processed events
    std::vector<alert_record> alerts;        // what the sinks received
    std::vector<std::uint64_t> suppressed_seqs;
    // (seq, policy version) per processed event, in processing order.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> event_versions;
};

// Drives one trace through probe-sim -> ring -> enrich -> match -> analyze
// -> enforce. The producer runs on a spawned thread, the consumer on the
// calling thread. Policy reloads publish through the handle between events.
run_result run_pipeline(const trace_data& trace, const engine_config& cfg,
                        policy_handle& handle, const run_options& opts,
                        alert_sinks& sinks);

} // namespace patrol
