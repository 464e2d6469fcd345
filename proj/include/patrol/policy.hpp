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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patrol/event.hpp"

namespace patrol {

enum class rule_action { deny, kill, alert, log };

std::string to_string(rule_action a);

// Conjunction of field constraints. A rule fires only when every present
// field matches; absent fields do not constrain.
struct match_clause {
    std::optional<std::string> path;             // glob on the path argument
    std::optional<std::string> container;        // glob; "*" = any non-host container
    std::vector<std::string> argv_contains;      // any listed substring in any token
    std::vector<std::string> argv_contains_all;  // every listed substring in some token
    std::optional<bool> argv_suspicious;         // signature predicate result
    std::optional<std::string> uid;              // "N" or "!N"
    std::optional<std::string> target_pid_owner; // "self", "!self", "N", "!N"

    bool empty() const {
        return !path && !container && argv_contains.empty() &&
               argv_contains_all.empty() && !argv_suspicious && !uid &&
               !target_pid_owner;
    }
};

struct policy_rule {
    std::string name;
    std::string syscall;
    match_clause match;
    rule_action action = rule_action::log;
    std::string source; // file the rule came from
    int line = 0;       // rule start line, for diagnostics
};

// Parses one restricted-YAML policy file: a stream of '---' separated rule
// documents, priority given by order. Throws policy_error on malformed
// input, unknown keys, bad actions, or duplicate rule names.
std::vector<policy_rule> parse_policy_text(std::string_view text,
                                           const std::string& source_name);
std::vector<policy_rule> parse_policy_file(const std::string& path);
// Loads several files in order into one rule list; duplicate names across
// files are rejected too.
std::vector<policy_rule> parse_policy_files(const std::vector<std::string>& paths);

enum class lint_severity { warning, error };

struct lint_finding {
    lint_severity severity = lint_severity::warning;
    std::string code;    // stable identifier, e.g. "empty-match"
    std::string rule;    // offending rule name
    std::string message; // human-readable detail
    int line = 0;
};

// Static rule hygiene checks:
//   empty-match (error)            rule with no match fields fires on every event
//   shadowed-rule (warning)        an earlier, broader rule always wins
//   bad-glob (warning)             malformed glob pattern can never match
//   field-inapplicable (warning)   field cannot apply to the rule's syscall
//   no-signature-predicate (warning) argv.suspicious with no registered predicate
std::vector<lint_finding> lint_rules(const std::vector<policy_rule>& rules);

std::string to_string(lint_severity s);

// Registry of per-syscall payload signature predicates backing the
// argv.suspicious matcher. Predicates are pure functions of the event.
class signature_registry {
public:
    using predicate = std::function<bool(const syscall_event&)>;

    // Process-wide instance, preloaded with the built-in fsconfig signature.
    static signature_registry& instance();

    void register_predicate(const std::string& syscall, predicate p);
    const predicate* find(const std::string& syscall) const;
    bool has(const std::string& syscall) const { return find(syscall) != nullptr; }

private:
    std::map<std::string, predicate> m_predicates;
};

// Built-in signature for fsconfig payload abuse: flags a value argument with
// an embedded NUL byte, a length over 4096 bytes, or a run of 512 or more
// identical bytes (heap-spray style filler).
bool fsconfig_payload_suspicious(const syscall_event& ev);

} // namespace patrol
