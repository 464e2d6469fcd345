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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace patrol::yaml {

// Restricted YAML dialect shared by policy files and the engine config:
//   - block mappings nested by space indentation (tabs rejected)
//   - scalars: bare or double-quoted ("\\", "\"", "\n", "\t" escapes)
//   - sequences in flow form only: [a, "b", c]
//   - '#' comments, '---' document separators
// Anchors, aliases, tags, block sequences and multi-line scalars are out.

struct parse_error {
    int line;  // 1-based
    int col;   // 1-based
    std::string message;
};

struct node {
    enum class type { scalar, sequence, mapping };

    type kind = type::scalar;
    std::string scalar;
    std::vector<node> items;                             // sequence
    std::vector<std::pair<std::string, node>> entries;   // mapping, source order
    int line = 0;
    int col = 0;

    bool is_scalar() const { return kind == type::scalar; }
    bool is_sequence() const { return kind == type::sequence; }
    bool is_mapping() const { return kind == type::mapping; }

    const node* find(std::string_view key) const {
        for (const auto& [k, v] : entries) {
            if (k == key) return &v;
        }
        return nullptr;
    }
};

// Parses every document in the input. Throws parse_error.
std::vector<node> parse_documents(std::string_view text);

// Quotes a scalar when rendering would otherwise change its meaning.
std::string quote_if_needed(const std::string& value);

} // namespace patrol::yaml
