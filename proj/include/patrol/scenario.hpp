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
#include <optional>
#include <string>
#include <vector>

#include "patrol/trace.hpp"

namespace patrol {

// Deterministic 64-bit generator (SplitMix64). Chosen over the standard
// distributions because its output is pinned by the algorithm, not by the
// standard library implementation, so a seed produces the same trace bytes
// on any toolchain.
class splitmix64 {
public:
    explicit splitmix64(std::uint64_t seed) : m_state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (m_state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform-enough draw in [0, bound); bound must be nonzero.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t m_state;
};

// Canned workload recordings. Each scenario is a reproducible mix of benign
// background activity and, for the attack scenarios, one labeled intrusion
// chain. The two benign scenarios carry no labels at all.
enum class scenario_kind {
    reverse_shell,       // bash/nc reverse shell from a web container
    container_escape,    // fsconfig exploit payload, post-kill events included
    sensitive_file_read, // /etc/shadow exfiltration from a container
    ptrace_escalation,   // non-root user attaching to a root daemon
    benign_admin,        // root tool tracing its own de-privileged child
    fileless_exec,       // exec from a memory fd in a no-exec workload
    drive_by_download,   // curl piped into a shell
    benign_background,   // pure noise
};

const std::vector<scenario_kind>& all_scenarios();
std::string to_string(scenario_kind kind);
std::optional<scenario_kind> scenario_from(const std::string& name);

// Builds the scenario trace for a seed. Same kind and seed, same bytes.
trace_data generate_scenario(scenario_kind kind, std::uint64_t seed);

// Large benign-only trace for throughput and latency measurements.
trace_data generate_bench_trace(std::size_t events, std::uint64_t seed);

} // namespace patrol
