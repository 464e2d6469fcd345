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

#include "patrol/analyzer.hpp"

namespace patrol {

std::string to_string(profile_scope s) {
    return s == profile_scope::container ? "container" : "process";
}

std::optional<profile_scope> profile_scope_from(const std::string& s) {
    if (s == "container") return profile_scope::container;
    if (s == "process") return profile_scope::process;
    return std::nullopt;
}

profile_store::profile_store(std::size_t learning_window,
                             double rarity_threshold, profile_scope scope)
    : m_learning_window(learning_window), m_rarity_threshold(rarity_threshold),
      m_scope(scope) {}

std::string profile_store::key_for(const syscall_event& ev) const {
    if (m_scope == profile_scope::container) {
        return ev.container.is_host() ? "host" : ev.container.container_id;
    }
    return ev.raw.comm;
}

std::optional<deviation_flag> profile_store::process_event(const syscall_event& ev) {
    behavior_profile& profile = m_profiles[key_for(ev)];

    std::optional<deviation_flag> flag;
    if (profile.learned) {
        auto it = profile.counts.find(ev.raw.syscall);
        std::uint64_t seen = it == profile.counts.end() ? 0 : it->second;
        if (seen == 0) {
            flag = deviation_flag{ev.raw.seq, key_for(ev), ev.raw.syscall,
                                  kNovelSyscall, 0.0};
        } else {
            double freq =
                static_cast<double>(seen) / static_cast<double>(profile.total);
            if (freq < m_rarity_threshold) {
                flag = deviation_flag{ev.raw.seq, key_for(ev), ev.raw.syscall,
                                      kFrequencyAnomaly, freq};
            }
        }
    }

    ++profile.counts[ev.raw.syscall];
    ++profile.total;
    if (!profile.learned && profile.total >= m_learning_window) {
        profile.learned = true; // flips once, stays set
    }
    return flag;
}

} // namespace patrol
