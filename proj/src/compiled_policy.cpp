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

#include "patrol/compiled_policy.hpp"

#include <charconv>

#include "patrol/errors.hpp"

namespace patrol {

std::string to_string(verdict_kind v) {
    switch (v) {
    case verdict_kind::allow: return "allow";
    case verdict_kind::deny: return "deny";
    case verdict_kind::kill: return "kill";
    case verdict_kind::alert: return "alert";
    case verdict_kind::log: return "log";
    }
    return "allow";
}

verdict_kind to_verdict(rule_action a) {
    switch (a) {
    case rule_action::deny: return verdict_kind::deny;
    case rule_action::kill: return verdict_kind::kill;
    case rule_action::alert: return verdict_kind::alert;
    case rule_action::log: return verdict_kind::log;
    }
    return verdict_kind::log;
}

namespace {

// Decodes "N" / "!N"; the caller validated the shape at parse time.
std::pair<std::uint32_t, bool> parse_num_spec(const std::string& spec) {
    std::string_view v = spec;
    bool negated = false;
    if (!v.empty() && v[0] == '!') {
        negated = true;
        v.remove_prefix(1);
    }
    std::uint32_t value = 0;
    std::from_chars(v.data(), v.data() + v.size(), value);
    return {value, negated};
}

const std::vector<std::string>* argv_tokens(const syscall_event& ev) {
    for (const auto& arg : ev.raw.args) {
        if (arg.kind == arg_kind::string_list) return &arg.list;
    }
    return nullptr;
}

const std::string* path_argument(const syscall_event& ev) {
    for (const auto& arg : ev.raw.args) {
        if (arg.kind == arg_kind::path) return &arg.text;
    }
    return nullptr;
}

bool any_token_contains(const std::vector<std::string>& tokens,
                        const std::string& needle) {
    for (const auto& tok : tokens) {
        if (tok.find(needle) != std::string::npos) return true;
    }
    return false;
}

} // namespace

compiled_rule::compiled_rule(const policy_rule& src)
    : m_name(src.name), m_syscall(src.syscall), m_action(src.action) {
    const match_clause& m = src.match;
    if (m.path) {
        m_path.emplace(*m.path);
        m_constrained_fields.push_back("path");
    }
    if (m.container) {
        if (*m.container == "*") {
            m_container_any = true;
        } else {
            m_container.emplace(*m.container);
        }
        m_constrained_fields.push_back("container");
    }
    if (!m.argv_contains.empty()) {
        m_argv_contains = m.argv_contains;
        m_constrained_fields.push_back("argv.contains");
    }
    if (!m.argv_contains_all.empty()) {
        m_argv_contains_all = m.argv_contains_all;
        m_constrained_fields.push_back("argv.contains_all");
    }
    if (m.argv_suspicious) {
        m_argv_suspicious = m.argv_suspicious;
        m_signature = signature_registry::instance().find(src.syscall);
        m_constrained_fields.push_back("argv.suspicious");
    }
    if (m.uid) {
        auto [value, negated] = parse_num_spec(*m.uid);
        m_uid = num_spec{value, negated};
        m_constrained_fields.push_back("uid");
    }
    if (m.target_pid_owner) {
        const std::string& spec = *m.target_pid_owner;
        if (spec == "self") {
            m_owner_mode = owner_mode::self;
        } else if (spec == "!self") {
            m_owner_mode = owner_mode::not_self;
        } else {
            m_owner_mode = owner_mode::numeric;
            auto [value, negated] = parse_num_spec(spec);
            m_owner_num = num_spec{value, negated};
        }
        m_constrained_fields.push_back("target_pid_owner");
    }
}

bool compiled_rule::matches(const syscall_event& ev) const {
    if (ev.raw.syscall != m_syscall) return false;

    if (m_uid) {
        bool eq = ev.raw.uid == m_uid->value;
        if (eq == m_uid->negated) return false;
    }

    if (m_container_any) {
        if (ev.container.is_host()) return false;
    } else if (m_container) {
        if (!m_container->match(ev.container.container_id)) return false;
    }

    if (m_path) {
        const std::string* path = path_argument(ev);
        if (path == nullptr || !m_path->match(*path)) return false;
    }

    if (!m_argv_contains.empty() || !m_argv_contains_all.empty()) {
        const std::vector<std::string>* tokens = argv_tokens(ev);
        if (tokens == nullptr) return false;
        if (!m_argv_contains.empty()) {
            bool any = false;
            for (const auto& needle : m_argv_contains) {
                if (any_token_contains(*tokens, needle)) {
                    any = true;
                    break;
                }
            }
            if (!any) return false;
        }
        for (const auto& needle : m_argv_contains_all) {
            if (!any_token_contains(*tokens, needle)) return false;
        }
    }

    if (m_argv_suspicious) {
        // Without a registered predicate the field is unmatched, so the rule
        // cannot fire (lint flags this configuration).
        if (m_signature == nullptr) return false;
        if ((*m_signature)(ev) != *m_argv_suspicious) return false;
    }

    if (m_owner_mode != owner_mode::none) {
        if (!ev.target_pid_owner) return false;
        std::uint32_t owner = *ev.target_pid_owner;
        switch (m_owner_mode) {
        case owner_mode::self:
            if (owner != ev.raw.uid) return false;
            break;
        case owner_mode::not_self:
            if (owner == ev.raw.uid) return false;
            break;
        case owner_mode::numeric: {
            bool eq = owner == m_owner_num.value;
            if (eq == m_owner_num.negated) return false;
            break;
        }
        case owner_mode::none:
            break;
        }
    }
    return true;
}

compiled_policy_set::compiled_policy_set(std::vector<policy_rule> rules,
                                         std::uint64_t version)
    : m_version(version), m_source(std::move(rules)) {
    m_findings = lint_rules(m_source);
    for (const auto& f : m_findings) {
        if (f.severity == lint_severity::error) {
            throw policy_error(policy_error::kind::compile,
                               "rule '" + f.rule + "': " + f.message, f.line);
        }
    }
    m_rules.reserve(m_source.size());
    for (std::size_t i = 0; i < m_source.size(); ++i) {
        m_rules.emplace_back(m_source[i]);
        m_by_syscall[m_source[i].syscall].push_back(i);
    }
}

decision compiled_policy_set::match_event(const syscall_event& ev) const {
    auto bucket = m_by_syscall.find(ev.raw.syscall);
    if (bucket != m_by_syscall.end()) {
        for (std::size_t idx : bucket->second) {
            const compiled_rule& rule = m_rules[idx];
            if (rule.matches(ev)) {
                return decision{to_verdict(rule.action()), rule.name(),
                                rule.constrained_fields()};
            }
        }
    }
    return decision{};
}

std::shared_ptr<const compiled_policy_set>
compile_policy(std::vector<policy_rule> rules, std::uint64_t version) {
    return std::make_shared<const compiled_policy_set>(std::move(rules), version);
}

policy_handle::policy_handle(std::shared_ptr<const compiled_policy_set> initial)
    : m_current(std::move(initial)) {
    if (!m_current) {
        throw pipeline_error("policy_handle requires an initial set");
    }
}

std::shared_ptr<const compiled_policy_set> policy_handle::current() const {
    std::lock_guard lock(m_mutex);
    return m_current;
}

void policy_handle::publish(std::shared_ptr<const compiled_policy_set> next) {
    if (!next) {
        throw pipeline_error("policy_handle cannot publish a null set");
    }
    std::lock_guard lock(m_mutex);
    if (next->version() <= m_current->version()) {
        throw pipeline_error("policy reload must increase the version");
    }
    m_current = std::move(next);
}

} // namespace patrol
