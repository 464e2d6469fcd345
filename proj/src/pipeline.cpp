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

#include "patrol/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "patrol/analyzer.hpp"
#include "patrol/errors.hpp"

namespace patrol {

namespace {

using steady = std::chrono::steady_clock;

std::uint64_t ns_between(steady::time_point a, steady::time_point b) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
}

latency_stats make_latency_stats(std::vector<std::uint64_t>& samples) {
    latency_stats stats;
    stats.count = samples.size();
    if (samples.empty()) return stats;
    std::sort(samples.begin(), samples.end());
    auto rank = [&](double q) {
        std::size_t idx = static_cast<std::size_t>(
            std::ceil(q * static_cast<double>(samples.size())));
        if (idx == 0) idx = 1;
        return samples[idx - 1];
    };
    stats.p50_ns = rank(0.50);
    stats.p90_ns = rank(0.90);
    stats.p99_ns = rank(0.99);
    stats.max_ns = samples.back();
    double sum = 0.0;
    for (std::uint64_t s : samples) sum += static_cast<double>(s);
    stats.mean_ns = sum / static_cast<double>(samples.size());
    return stats;
}

alert_record make_policy_alert(const syscall_event& ev, const decision& dec) {
    alert_record rec;
    rec.seq = ev.raw.seq;
    rec.timestamp_ns = ev.raw.timestamp_ns;
    rec.kind = "policy";
    rec.source = dec.rule_name;
    rec.verdict = to_string(dec.verdict);
    rec.syscall = ev.raw.syscall;
    rec.pid = ev.raw.pid;
    rec.uid = ev.raw.uid;
    rec.container_id = ev.container.container_id;
    rec.comm = ev.raw.comm;
    rec.matched_fields = dec.matched_fields;
    return rec;
}

alert_record make_behavior_alert(const syscall_event& ev,
                                 const deviation_flag& flag) {
    alert_record rec;
    rec.seq = ev.raw.seq;
    rec.timestamp_ns = ev.raw.timestamp_ns;
    rec.kind = "behavior";
    rec.source = flag.kind;
    rec.verdict = "flag";
    rec.syscall = ev.raw.syscall;
    rec.pid = ev.raw.pid;
    rec.uid = ev.raw.uid;
    rec.container_id = ev.container.container_id;
    rec.comm = ev.raw.comm;
    rec.frequency = flag.frequency;
    return rec;
}

} // namespace

nlohmann::json summary_to_json(const run_summary& s, bool include_timing) {
    nlohmann::json j;
    j["scenario"] = s.scenario;
    j["mode"] = s.mode;
    j["events_total"] = s.events_total;
    j["events_processed"] = s.events_processed;
    j["drop_count"] = s.drop_count;
    j["decisions"] = s.decisions;
    j["fp_by_rule"] = s.fp_by_rule;
    j["false_positives"] = s.false_positives;
    j["labeled_total"] = s.labeled_total;
    j["labeled_detected"] = s.labeled_detected;
    j["labeled_prevented"] = s.labeled_prevented;
    j["flags_by_kind"] = s.flags_by_kind;
    j["flag_count"] = s.flag_count;
    j["suppressed"] = s.suppressed;
    j["kill_count"] = s.kill_count;
    j["timeout_count"] = s.timeout_count;
    j["late_settles"] = s.late_settles;
    j["unknown_pid_warnings"] = s.unknown_pid_warnings;
    j["policy_version_first"] = s.policy_version_first;
    j["policy_version_last"] = s.policy_version_last;
    nlohmann::json profiles = nlohmann::json::object();
    for (const auto& [key, digest] : s.profiles) {
        profiles[key] = {{"total", digest.total}, {"learned", digest.learned}};
    }
    j["profiles"] = std::move(profiles);
    j["aborted"] = s.aborted;
    j["abort_reason"] = s.abort_reason;
    if (include_timing) {
        nlohmann::json timing;
        timing["wall_time_ns"] = s.wall_time_ns;
        timing["events_per_sec"] = s.events_per_sec;
        timing["latency"] = {
            {"count", s.latency.count},   {"p50_ns", s.latency.p50_ns},
            {"p90_ns", s.latency.p90_ns}, {"p99_ns", s.latency.p99_ns},
            {"max_ns", s.latency.max_ns}, {"mean_ns", s.latency.mean_ns},
        };
        j["timing"] = std::move(timing);
    }
    return j;
}

run_result run_pipeline(const trace_data& trace, const engine_config& cfg,
                        policy_handle& handle, const run_options& opts,
                        alert_sinks& sinks) {
    validate_config(cfg);

    run_result result;
    run_summary& summary = result.summary;
    summary.scenario = trace.scenario;
    summary.mode = to_string(cfg.mode);
    summary.events_total = trace.events.size();
    summary.labeled_total = trace.labels.size();

    container_registry registry(trace.registry);
    enrichment_stats enrich_stats;
    profile_store profiles(cfg.learning_window, cfg.rarity_threshold,
                           cfg.profile_by);
    sim_process_table process_table;
    ring_buffer<raw_event> ring(cfg.ring_capacity, cfg.mode);

    const bool inline_mode = cfg.mode == pipeline_mode::inline_enforce;
    std::optional<verdict_table> verdicts;
    if (inline_mode) {
        verdicts.emplace(cfg.fail_policy);
    }

    std::vector<std::uint64_t> latencies;
    latencies.reserve(trace.events.size());

    steady::time_point run_start = steady::now();

    std::thread producer([&] {
        result.replay = replay_into(ring, trace, opts.pace,
                                    inline_mode ? &*verdicts : nullptr,
                                    cfg.watchdog_ms, nullptr);
    });

    std::string consumer_failure;
    try {
        while (true) {
            std::optional<raw_event> popped = ring.pop();
            if (!popped) break;

            if (opts.consumer_delay_ns > 0) {
                std::this_thread::sleep_for(
                    std::chrono::nanoseconds(opts.consumer_delay_ns));
            }

            steady::time_point t0 = steady::now();
            const raw_event& raw = *popped;

            // One snapshot per event: a reload can only land between events.
            std::shared_ptr<const compiled_policy_set> policy = handle.current();
            std::uint64_t version = policy->version();
            if (summary.events_processed == 0) {
                summary.policy_version_first = version;
            }
            summary.policy_version_last = version;
            ++summary.events_processed;
            result.event_versions.emplace_back(raw.seq, version);

            syscall_event ev = enrich_event(raw, registry, enrich_stats);

            if (!process_table.alive(raw.pid)) {
                // The pid was killed earlier in this run; the real process
                // would never have issued this syscall. Settle so the probe
                // side is not left hanging, but record nothing.
                if (inline_mode) {
                    verdicts->settle(raw.seq,
                                     {verdict_kind::kill, kDeniedErrno});
                }
                ++summary.suppressed;
                ++summary.decisions["suppressed"];
                result.suppressed_seqs.push_back(raw.seq);
                continue;
            }

            decision dec = policy->match_event(ev);
            std::optional<deviation_flag> flag = profiles.process_event(ev);

            int err_no = 0;
            bool enforced = false;
            if (inline_mode) {
                err_no = errno_for(dec.verdict);
                enforced = dec.enforcing();
                verdicts->settle(raw.seq, {dec.verdict, err_no});
                if (dec.verdict == verdict_kind::kill) {
                    process_table.kill_pid(raw.pid);
                }
            }
            std::uint64_t latency = ns_between(t0, steady::now());
            latencies.push_back(latency);

            enforcement_record rec;
            rec.seq = raw.seq;
            rec.timestamp_ns = raw.timestamp_ns;
            rec.syscall = raw.syscall;
            rec.pid = raw.pid;
            rec.uid = raw.uid;
            rec.container_id = ev.container.container_id;
            rec.dec = dec;
            rec.err_no = err_no;
            rec.enforced = enforced;
            rec.policy_version = version;
            rec.latency_ns = latency;
            result.records.push_back(std::move(rec));

            ++summary.decisions[to_string(dec.verdict)];
            if (dec.verdict == verdict_kind::kill) {
                ++summary.kill_count;
            }

            bool labeled = trace.is_labeled(raw.seq);
            if (dec.non_allow()) {
                if (labeled) {
                    ++summary.labeled_detected;
                } else {
                    ++summary.fp_by_rule[dec.rule_name];
                    ++summary.false_positives;
                }
            }
            if (labeled && enforced) {
                ++summary.labeled_prevented;
            }

            // Sink policy: deny/kill stay in the audit records; the alert
            // stream carries advisory outcomes (alert/log) and behavior
            // flags.
            if (dec.verdict == verdict_kind::alert ||
                dec.verdict == verdict_kind::log) {
                alert_record a = make_policy_alert(ev, dec);
                result.alerts.push_back(a);
                sinks.write(a);
            }
            if (flag) {
                if (labeled && !dec.non_allow()) {
                    ++summary.labeled_detected;
                }
                ++summary.flag_count;
                ++summary.flags_by_kind[flag->kind];
                alert_record a = make_behavior_alert(ev, *flag);
                result.alerts.push_back(a);
                sinks.write(a);
            }

            if (opts.reload && raw.seq == opts.reload->at_seq) {
                auto next = compile_policy(opts.reload->rules,
                                           policy->version() + 1);
                handle.publish(std::move(next));
            }
        }
    } catch (const std::exception& e) {
        consumer_failure = e.what();
        ring.close_consumer();
        // Drain whatever the producer still manages to push so it cannot
        // block forever on a full ring.
        while (ring.pop()) {
        }
    }

    producer.join();
    sinks.flush();

    steady::time_point run_end = steady::now();
    summary.wall_time_ns = ns_between(run_start, run_end);

    summary.drop_count = result.replay.drop_count;
    summary.timeout_count = inline_mode ? verdicts->timeout_count() : 0;
    summary.late_settles = inline_mode ? verdicts->late_settle_count() : 0;
    summary.unknown_pid_warnings = enrich_stats.unknown_pid_warnings;
    summary.latency = make_latency_stats(latencies);
    if (summary.wall_time_ns > 0) {
        summary.events_per_sec =
            static_cast<double>(summary.events_processed) * 1e9 /
            static_cast<double>(summary.wall_time_ns);
    }
    for (const auto& [key, profile] : profiles.profiles()) {
        summary.profiles[key] = {profile.total, profile.learned};
    }
    if (!consumer_failure.empty() || result.replay.aborted) {
        summary.aborted = true;
        summary.abort_reason = !consumer_failure.empty()
                                   ? consumer_failure
                                   : result.replay.abort_reason;
    }
    return result;
}

} // namespace patrol
