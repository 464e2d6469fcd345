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

#include <doctest.h>

#include <set>
#include <sstream>
#include <string>

#include "patrol/compiled_policy.hpp"
#include "patrol/policy.hpp"
#include "patrol/scenario.hpp"
#include "patrol/trace.hpp"

using namespace patrol;

namespace {

std::string serialize(const trace_data& t) {
    std::ostringstream out;
    save_trace(t, out);
    return out.str();
}

// Match-level sweep: how many unlabeled / labeled events draw a non-allow
// decision from the shipped pack, after full enrichment.
struct pack_hits {
    int unlabeled = 0;
    int labeled = 0;
    std::set<std::string> unlabeled_rules;
};

pack_hits sweep(const trace_data& trace, const compiled_policy_set& pack) {
    container_registry registry(trace.registry);
    enrichment_stats stats;
    pack_hits hits;
    for (const raw_event& raw : trace.events) {
        syscall_event ev = enrich_event(raw, registry, stats);
        decision dec = pack.match_event(ev);
        if (dec.verdict == verdict_kind::allow) continue;
        if (trace.is_labeled(raw.seq)) {
            ++hits.labeled;
        } else {
            ++hits.unlabeled;
            hits.unlabeled_rules.insert(dec.rule_name);
        }
    }
    return hits;
}

} // namespace

TEST_CASE("scenario names round trip") {
    CHECK(all_scenarios().size() == 8);
    for (scenario_kind kind : all_scenarios()) {
        CHECK(scenario_from(to_string(kind)) == kind);
    }
    CHECK_FALSE(scenario_from("no-such-scenario"));
}

TEST_CASE("generation is deterministic per seed") {
    for (scenario_kind kind : all_scenarios()) {
        CAPTURE(to_string(kind));
        std::string a = serialize(generate_scenario(kind, 42));
        std::string b = serialize(generate_scenario(kind, 42));
        CHECK(a == b);
        std::string c = serialize(generate_scenario(kind, 43));
        CHECK(a != c);
    }
}

TEST_CASE("scenario traces are well formed") {
    for (scenario_kind kind : all_scenarios()) {
        CAPTURE(to_string(kind));
        trace_data t = generate_scenario(kind, 42);
        CHECK(t.scenario == to_string(kind));
        CHECK(t.events.size() > 50);
        // round trip through the serializer validates the schema
        std::istringstream in(serialize(t));
        CHECK(load_trace(in) == t);
        // seq numbering is gapless
        for (std::size_t i = 0; i < t.events.size(); ++i)
            CHECK(t.events[i].seq == i);
        // timestamps advance strictly
        for (std::size_t i = 1; i < t.events.size(); ++i)
            CHECK(t.events[i].timestamp_ns > t.events[i - 1].timestamp_ns);
    }
}

TEST_CASE("attack scenarios carry labels and benign ones do not") {
    std::set<scenario_kind> benign = {scenario_kind::benign_admin,
                                      scenario_kind::benign_background};
    for (scenario_kind kind : all_scenarios()) {
        CAPTURE(to_string(kind));
        trace_data t = generate_scenario(kind, 42);
        if (benign.count(kind)) {
            CHECK(t.labels.empty());
        } else {
            CHECK_FALSE(t.labels.empty());
        }
    }
}

TEST_CASE("background noise never trips the shipped pack") {
    auto pack = compile_policy(
        parse_policy_file(PATROL_POLICY_DIR "/patrol-pack.yaml"), 1);

    for (std::uint64_t seed : {1ULL, 42ULL, 1337ULL}) {
        for (scenario_kind kind : all_scenarios()) {
            if (kind == scenario_kind::benign_admin) continue;
            CAPTURE(to_string(kind));
            CAPTURE(seed);
            pack_hits hits = sweep(generate_scenario(kind, seed), *pack);
            CHECK(hits.unlabeled == 0);
        }
    }
}

TEST_CASE("the admin session draws exactly one false positive") {
    auto pack = compile_policy(
        parse_policy_file(PATROL_POLICY_DIR "/patrol-pack.yaml"), 1);
    pack_hits hits =
        sweep(generate_scenario(scenario_kind::benign_admin, 42), *pack);
    CHECK(hits.unlabeled == 1);
    CHECK(hits.unlabeled_rules == std::set<std::string>{"ptrace-deny"});

    // the adjusted pack scopes the ptrace rule to non-root callers
    auto adjusted = compile_policy(
        parse_policy_file(PATROL_POLICY_DIR "/patrol-pack-adjusted.yaml"), 1);
    pack_hits adj =
        sweep(generate_scenario(scenario_kind::benign_admin, 42), *adjusted);
    CHECK(adj.unlabeled == 0);
}

TEST_CASE("signature attacks hit the pack and behavioral ones do not") {
    auto pack = compile_policy(
        parse_policy_file(PATROL_POLICY_DIR "/patrol-pack.yaml"), 1);

    for (scenario_kind kind : {scenario_kind::reverse_shell,
                               scenario_kind::container_escape,
                               scenario_kind::sensitive_file_read,
                               scenario_kind::ptrace_escalation,
                               scenario_kind::drive_by_download}) {
        CAPTURE(to_string(kind));
        CHECK(sweep(generate_scenario(kind, 42), *pack).labeled > 0);
    }
    // fileless execution is invisible to the signature rules by design
    CHECK(sweep(generate_scenario(scenario_kind::fileless_exec, 42), *pack)
              .labeled == 0);
}

TEST_CASE("the fileless scenario trains its container past the window") {
    trace_data t = generate_scenario(scenario_kind::fileless_exec, 42);
    REQUIRE(t.labels.size() == 3);
    std::uint64_t first_label = t.labels.front();
    std::size_t static9_before = 0;
    for (std::uint64_t seq = 0; seq < first_label; ++seq) {
        if (t.events[seq].cgroup_id == 1005) ++static9_before;
    }
    CHECK(static9_before >= 1000);
    // the labeled execve is the container's first
    for (std::uint64_t seq = 0; seq < first_label; ++seq) {
        if (t.events[seq].cgroup_id == 1005)
            CHECK(t.events[seq].syscall != "execve");
    }
}

TEST_CASE("denied execves leave the target pid silent afterwards") {
    // These scenarios model inline enforcement: once the exec is denied the
    // payload never runs, so the pid emits nothing further.
    auto pack = compile_policy(
        parse_policy_file(PATROL_POLICY_DIR "/patrol-pack.yaml"), 1);
    for (scenario_kind kind : {scenario_kind::reverse_shell,
                               scenario_kind::drive_by_download}) {
        CAPTURE(to_string(kind));
        trace_data t = generate_scenario(kind, 42);
        container_registry registry(t.registry);
        enrichment_stats stats;
        int denied = 0;
        for (const raw_event& raw : t.events) {
            if (raw.syscall != "execve") continue;
            syscall_event ev = enrich_event(raw, registry, stats);
            if (pack->match_event(ev).verdict != verdict_kind::deny) continue;
            ++denied;
            for (std::uint64_t later = raw.seq + 1; later < t.events.size();
                 ++later) {
                CHECK(t.events[later].pid != raw.pid);
            }
        }
        CHECK(denied > 0);
    }
}

TEST_CASE("the shadow read falls back to a direct open after the exec deny") {
    // Here the attacker-controlled process survives its failed exec and
    // reads the file itself, which the path rule then denies.
    auto pack = compile_policy(
        parse_policy_file(PATROL_POLICY_DIR "/patrol-pack.yaml"), 1);
    trace_data t = generate_scenario(scenario_kind::sensitive_file_read, 42);
    container_registry registry(t.registry);
    enrichment_stats stats;

    bool saw_denied_exec = false;
    bool saw_shadow_open = false;
    for (const raw_event& raw : t.events) {
        syscall_event ev = enrich_event(raw, registry, stats);
        decision dec = pack->match_event(ev);
        if (raw.syscall == "execve" && dec.verdict == verdict_kind::deny) {
            saw_denied_exec = true;
        }
        if (raw.syscall == "open" && dec.verdict == verdict_kind::deny) {
            CHECK(dec.rule_name == "block-shadow-access");
            CHECK(saw_denied_exec); // fallback happens after the exec attempt
            CHECK(t.is_labeled(raw.seq));
            saw_shadow_open = true;
        }
    }
    CHECK(saw_shadow_open);
}

TEST_CASE("the escape scenario keeps emitting from the killed pid") {
    trace_data t = generate_scenario(scenario_kind::container_escape, 42);
    std::uint64_t kill_seq = 0;
    for (const raw_event& ev : t.events) {
        if (ev.syscall == "fsconfig") kill_seq = ev.seq;
    }
    REQUIRE(kill_seq > 0);
    std::size_t post_kill = 0;
    for (const raw_event& ev : t.events) {
        if (ev.seq > kill_seq && ev.pid == t.events[kill_seq].pid) ++post_kill;
    }
    CHECK(post_kill == 3);
}

TEST_CASE("bench traces scale and stay benign") {
    trace_data t = generate_bench_trace(5000, 7);
    CHECK(t.events.size() >= 5000);
    CHECK(t.labels.empty());
    CHECK(t.scenario == "bench");

    auto pack = compile_policy(
        parse_policy_file(PATROL_POLICY_DIR "/patrol-pack.yaml"), 1);
    CHECK(sweep(t, *pack).unlabeled == 0);

    std::string a = serialize(generate_bench_trace(1000, 9));
    std::string b = serialize(generate_bench_trace(1000, 9));
    CHECK(a == b);
}

TEST_CASE("splitmix64 is a stable reference stream") {
    // First outputs for seed 1234567, from the published reference
    // implementation of splitmix64.
    splitmix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);

    splitmix64 bounded(99);
    for (int i = 0; i < 1000; ++i) {
        CHECK(bounded.below(7) < 7);
    }
}
