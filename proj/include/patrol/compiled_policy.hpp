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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "patrol/glob.hpp"
#include "patrol/policy.hpp"

namespace patrol {

// What the engine decided for one event. allow means no rule fired.
enum class verdict_kind { allow, deny, kill, alert, log };

std::string to_string(verdict_kind v);
verdict_kind to_verdict(rule_action a);

struct decision {
    verdict_kind verdict = verdict_kind::allow;
    std::string rule_name;                   // empty when no rule fired
    std::vector<std::string> matched_fields; // constrained fields of that rule

    bool enforcing() const {
        return verdict == verdict_kind::deny || verdict == verdict_kind::kill;
    }
    bool non_allow() const { return verdict != verdict_kind::allow; }
};

// One rule lowered to matchable form: globs precompiled, uid and owner specs
// decoded. Field evaluation order is fixed (cheap fields first) but the
// result is a pure conjunction, so order never changes the outcome.
class compiled_rule {
public:
    explicit compiled_rule(const policy_rule& src);

    bool matches(const syscall_event& ev) const;

    const std::string& name() const { return m_name; }
    const std::string& syscall() const { return m_syscall; }
    rule_action action() const { return m_action; }
    const std::vector<std::string>& constrained_fields() const {
        return m_constrained_fields;
    }

private:
    struct num_spec {
        std::uint32_t value = 0;
        bool negated = false;
    };
    enum class owner_mode { none, self, not_self, numeric };

    std::string m_name;
    std::string m_syscall;
    rule_action m_action;

    std::optional<glob_pattern> m_path;
    std::optional<glob_pattern> m_container;
    bool m_container_any = false; // container: "*", any non-host workload
    std::vector<std::string> m_argv_contains;
    std::vector<std::string> m_argv_contains_all;
    std::optional<bool> m_argv_suspicious;
    const signature_registry::predicate* m_signature = nullptr;
    std::optional<num_spec> m_uid;
    owner_mode m_owner_mode = owner_mode::none;
    num_spec m_owner_num;

    std::vector<std::string> m_constrained_fields;
};

// Immutable compiled rule set. match_event walks the per-syscall bucket in
// file order and returns the first hit; later rules never override earlier
// ones.
class compiled_policy_set {
public:
    compiled_policy_set(std::vector<policy_rule> rules, std::uint64_t version);

    decision match_event(const syscall_event& ev) const;

    std::uint64_t version() const { return m_version; }
    std::size_t rule_count() const { return m_rules.size(); }
    const std::vector<policy_rule>& source_rules() const { return m_source; }
    const std::vector<lint_finding>& findings() const { return m_findings; }

private:
    std::uint64_t m_version;
    std::vector<policy_rule> m_source;
    std::vector<compiled_rule> m_rules;                    // file order
    std::map<std::string, std::vector<std::size_t>> m_by_syscall;
    std::vector<lint_finding> m_findings;                  // warnings only
};

// Compiles and lints a rule list. Error-severity findings make compilation
// fail with policy_error::kind::compile; warnings are carried on the set.
std::shared_ptr<const compiled_policy_set>
compile_policy(std::vector<policy_rule> rules, std::uint64_t version);

// Publication point for reloads. Consumers grab one snapshot per event, so a
// reload lands atomically between events and versions observed by a single
// consumer are monotone.
class policy_handle {
public:
    explicit policy_handle(std::shared_ptr<const compiled_policy_set> initial);

    std::shared_ptr<const compiled_policy_set> current() const;
    // Replaces the active set. The new version must be strictly greater.
    void publish(std::shared_ptr<const compiled_policy_set> next);

private:
    mutable std::mutex m_mutex;
    std::shared_ptr<const compiled_policy_set> m_current;
};

} // namespace patrol
