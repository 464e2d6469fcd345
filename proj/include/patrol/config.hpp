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

#include "patrol/analyzer.hpp"
#include "patrol/enforcer.hpp"
#include "patrol/ring_buffer.hpp"

namespace patrol {

// Engine settings, read from a restricted-YAML file with a single top-level
// 'engine:' mapping. Every field has a working default; a missing file means
// defaults across the board.
struct engine_config {
    pipeline_mode mode = pipeline_mode::inline_enforce;
    std::size_t ring_capacity = 8192;     // power of two, at least 64
    std::size_t learning_window = 1000;   // events before a profile learns
    double rarity_threshold = 0.001;      // open interval (0, 1)
    fail_policy_kind fail_policy = fail_policy_kind::closed;
    std::uint32_t watchdog_ms = 100;      // inline verdict deadline
    std::string sink_path;                // empty = no file sink
    std::vector<std::string> policy_paths;
    profile_scope profile_by = profile_scope::container;

    bool operator==(const engine_config&) const = default;
};

// Range and shape checks; throws config_error with the offending field.
void validate_config(const engine_config& cfg);

// Parse rejects unknown keys and bad values with file:line:col context and
// validates the result. render emits a file parse() maps back to the same
// struct: parse(render(c)) == c.
engine_config parse_config_text(std::string_view text, const std::string& source_name);
engine_config parse_config_file(const std::string& path);
std::string render_config(const engine_config& cfg);

// Name of the environment variable the CLI consults when --config is absent.
inline constexpr const char* kConfigEnvVar = "PATROL_CONFIG";

} // namespace patrol
