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

#include "patrol/event.hpp"

namespace patrol {

// What a profile is keyed on.
enum class profile_scope {
    container, // container id, "host" for host events
    process,   // process comm, one profile per program identity
};

std::string to_string(profile_scope s);
std::optional<profile_scope> profile_scope_from(const std::string& s);

// Per-workload syscall histogram. A profile only reports deviations once its
// learning window is complete; until then it just counts.
struct behavior_profile {
    std::uint64_t total = 0;
    std::map<std::string, std::uint64_t> counts; // syscall name -> seen
    bool learned = false;
};

// Advisory deviation raised by a learned profile. Flags inform, they never
// enforce.
struct deviation_flag {
    std::uint64_t seq = 0;
    std::string profile_key;
    std::string syscall;
    std::string kind; // "novel_syscall" or "frequency_anomaly"
    double frequency = 0.0;
};

inline constexpr const char* kNovelSyscall = "novel_syscall";
inline constexpr const char* kFrequencyAnomaly = "frequency_anomaly";

// Keeps one behavior_profile per scope key and evaluates every event against
// its profile. Evaluation happens against the state before the event is
// counted, so the first occurrence of a syscall in a learned profile is
// novel, not a 1-out-of-N rarity.
class profile_store {
public:
    profile_store(std::size_t learning_window, double rarity_threshold,
                  profile_scope scope);

    // Returns at most one flag: novel_syscall when the profile is learned
    // and the syscall was never seen; frequency_anomaly when it was seen but
    // its observed frequency sits below the rarity threshold.
    std::optional<deviation_flag> process_event(const syscall_event& ev);

    std::string key_for(const syscall_event& ev) const;
    const std::map<std::string, behavior_profile>& profiles() const {
        return m_profiles;
    }

private:
    std::size_t m_learning_window;
    double m_rarity_threshold;
    profile_scope m_scope;
    std::map<std::string, behavior_profile> m_profiles;
};

} // namespace patrol
