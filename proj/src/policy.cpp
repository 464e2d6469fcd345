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

#include "patrol/policy.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "patrol/errors.hpp"
#include "patrol/glob.hpp"
#include "patrol/mini_yaml.hpp"

namespace patrol {

namespace {

[[noreturn]] void syntax_fail(const std::string& msg, int line, int col,
                              std::string token = {}) {
    throw policy_error(policy_error::kind::syntax, msg, line, col,
                       std::move(token));
}

bool is_uid_spec(const std::string& s) {
    std::string_view v = s;
    if (!v.empty() && v[0] == '!') v.remove_prefix(1);
    if (v.empty()) return false;
    for (char c : v) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

bool is_owner_spec(const std::string& s) {
    if (s == "self" || s == "!self") return true;
    return is_uid_spec(s);
}

const yaml::node& require_scalar(const yaml::node& n, const std::string& key) {
    if (!n.is_scalar() || n.scalar.empty()) {
        syntax_fail("'" + key + "' must be a non-empty scalar", n.line, n.col, key);
    }
    return n;
}

std::vector<std::string> read_string_seq(const yaml::node& n, const std::string& key) {
    if (!n.is_sequence() || n.items.empty()) {
        syntax_fail("'" + key + "' must be a non-empty sequence", n.line, n.col, key);
    }
    std::vector<std::string> out;
    for (const auto& item : n.items) {
        if (item.scalar.empty()) {
            syntax_fail("'" + key + "' entries must be non-empty", item.line,
                        item.col, key);
        }
        out.push_back(item.scalar);
    }
    return out;
}

void reject_unknown_keys(const yaml::node& mapping,
                         const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : mapping.entries) {
        if (allowed.count(key) == 0) {
            throw policy_error(policy_error::kind::unknown_field,
                               "unknown key '" + key + "' in " + where,
                               value.line, mapping.col, key);
        }
    }
}

match_clause parse_match(const yaml::node& n) {
    if (!n.is_mapping()) {
        syntax_fail("'match' must be a mapping", n.line, n.col, "match");
    }
    reject_unknown_keys(
        n, {"path", "container", "argv", "uid", "target_pid_owner"}, "match");

    match_clause clause;
    if (const yaml::node* v = n.find("path")) {
        clause.path = require_scalar(*v, "path").scalar;
    }
    if (const yaml::node* v = n.find("container")) {
        clause.container = require_scalar(*v, "container").scalar;
    }
    if (const yaml::node* v = n.find("uid")) {
        require_scalar(*v, "uid");
        if (!is_uid_spec(v->scalar)) {
            syntax_fail("'uid' must be \"N\" or \"!N\"", v->line, v->col,
                        v->scalar);
        }
        clause.uid = v->scalar;
    }
    if (const yaml::node* v = n.find("target_pid_owner")) {
        require_scalar(*v, "target_pid_owner");
        if (!is_owner_spec(v->scalar)) {
            syntax_fail("'target_pid_owner' must be \"self\", \"!self\", \"N\" "
                        "or \"!N\"",
                        v->line, v->col, v->scalar);
        }
        clause.target_pid_owner = v->scalar;
    }
    if (const yaml::node* argv = n.find("argv")) {
        if (!argv->is_mapping()) {
            syntax_fail("'argv' must be a mapping", argv->line, argv->col, "argv");
        }
        reject_unknown_keys(*argv, {"contains", "contains_all", "suspicious"},
                            "match.argv");
        if (const yaml::node* v = argv->find("contains")) {
            clause.argv_contains = read_string_seq(*v, "contains");
        }
        if (const yaml::node* v = argv->find("contains_all")) {
            clause.argv_contains_all = read_string_seq(*v, "contains_all");
        }
        if (const yaml::node* v = argv->find("suspicious")) {
            require_scalar(*v, "suspicious");
            if (v->scalar == "true") {
                clause.argv_suspicious = true;
            } else if (v->scalar == "false") {
                clause.argv_suspicious = false;
            } else {
                syntax_fail("'suspicious' must be true or false", v->line,
                            v->col, v->scalar);
            }
        }
    }
    return clause;
}

policy_rule parse_rule(const yaml::node& doc, const std::string& source_name) {
    if (!doc.is_mapping()) {
        syntax_fail("rule document must be a mapping", doc.line, doc.col);
    }
    reject_unknown_keys(doc, {"name", "syscall", "match", "action"}, "rule");

    policy_rule rule;
    rule.source = source_name;
    rule.line = doc.line;

    const yaml::node* name = doc.find("name");
    if (name == nullptr) {
        syntax_fail("rule is missing 'name'", doc.line, doc.col, "name");
    }
    rule.name = require_scalar(*name, "name").scalar;

    const yaml::node* syscall = doc.find("syscall");
    if (syscall == nullptr) {
        syntax_fail("rule '" + rule.name + "' is missing 'syscall'", doc.line,
                    doc.col, "syscall");
    }
    require_scalar(*syscall, "syscall");
    if (!is_monitored(syscall->scalar)) {
        syntax_fail("syscall '" + syscall->scalar + "' is not monitored",
                    syscall->line, syscall->col, syscall->scalar);
    }
    rule.syscall = syscall->scalar;

    const yaml::node* action = doc.find("action");
    if (action == nullptr) {
        syntax_fail("rule '" + rule.name + "' is missing 'action'", doc.line,
                    doc.col, "action");
    }
    require_scalar(*action, "action");
    if (action->scalar == "deny") {
        rule.action = rule_action::deny;
    } else if (action->scalar == "kill") {
        rule.action = rule_action::kill;
    } else if (action->scalar == "alert") {
        rule.action = rule_action::alert;
    } else if (action->scalar == "log") {
        rule.action = rule_action::log;
    } else {
        throw policy_error(policy_error::kind::invalid_action,
                           "action '" + action->scalar +
                               "' is not one of deny, kill, alert, log",
                           action->line, action->col, action->scalar);
    }

    if (const yaml::node* match = doc.find("match")) {
        rule.match = parse_match(*match);
    }
    return rule;
}

void check_duplicates(const std::vector<policy_rule>& rules) {
    std::set<std::string> seen;
    for (const auto& r : rules) {
        if (!seen.insert(r.name).second) {
            throw policy_error(policy_error::kind::duplicate_rule,
                               "duplicate rule name '" + r.name + "'", r.line,
                               0, r.name);
        }
    }
}

} // namespace

std::string to_string(rule_action a) {
    switch (a) {
    case rule_action::deny: return "deny";
    case rule_action::kill: return "kill";
    case rule_action::alert: return "alert";
    case rule_action::log: return "log";
    }
    return "log";
}

std::string to_string(lint_severity s) {
    return s == lint_severity::error ? "error" : "warning";
}

std::vector<policy_rule> parse_policy_text(std::string_view text,
                                           const std::string& source_name) {
    std::vector<yaml::node> docs;
    try {
        docs = yaml::parse_documents(text);
    } catch (const yaml::parse_error& e) {
        throw policy_error(policy_error::kind::syntax,
                           source_name + ":" + std::to_string(e.line) + ":" +
                               std::to_string(e.col) + ": " + e.message,
                           e.line, e.col);
    }
    std::vector<policy_rule> rules;
    for (const auto& doc : docs) {
        rules.push_back(parse_rule(doc, source_name));
    }
    check_duplicates(rules);
    return rules;
}

std::vector<policy_rule> parse_policy_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw policy_error(policy_error::kind::io,
                           "cannot open policy file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_policy_text(buf.str(), path);
}

std::vector<policy_rule> parse_policy_files(const std::vector<std::string>& paths) {
    std::vector<policy_rule> all;
    for (const auto& path : paths) {
        std::vector<policy_rule> rules = parse_policy_file(path);
        all.insert(all.end(), std::make_move_iterator(rules.begin()),
                   std::make_move_iterator(rules.end()));
    }
    check_duplicates(all);
    return all;
}

namespace {

bool constrains_argv(const match_clause& m) {
    return !m.argv_contains.empty() || !m.argv_contains_all.empty() ||
           m.argv_suspicious.has_value();
}

// True when 'earlier' matches at least every event 'later' matches, judged
// field by field: each constraint of 'earlier' is absent or identical in
// 'later'. A match-anything path glob counts as no constraint.
bool shadows(const policy_rule& earlier, const policy_rule& later) {
    if (earlier.syscall != later.syscall) return false;
    const match_clause& a = earlier.match;
    const match_clause& b = later.match;

    auto covered = [](const std::optional<std::string>& ea,
                      const std::optional<std::string>& lb) {
        return !ea.has_value() || ea == lb;
    };
    bool path_free = !a.path.has_value() || *a.path == "*";
    if (!path_free && a.path != b.path) return false;
    if (!covered(a.container, b.container)) return false;
    if (!a.argv_contains.empty() && a.argv_contains != b.argv_contains) return false;
    if (!a.argv_contains_all.empty() && a.argv_contains_all != b.argv_contains_all)
        return false;
    if (a.argv_suspicious.has_value() && a.argv_suspicious != b.argv_suspicious)
        return false;
    if (!covered(a.uid, b.uid)) return false;
    if (!covered(a.target_pid_owner, b.target_pid_owner)) return false;
    return true;
}

} // namespace

std::vector<lint_finding> lint_rules(const std::vector<policy_rule>& rules) {
    std::vector<lint_finding> findings;
    auto add = [&](lint_severity sev, std::string code, const policy_rule& r,
                   std::string msg) {
        findings.push_back({sev, std::move(code), r.name, std::move(msg), r.line});
    };

    for (std::size_t i = 0; i < rules.size(); ++i) {
        const policy_rule& r = rules[i];

        if (r.match.empty()) {
            add(lint_severity::error, "empty-match", r,
                "rule has no match fields and would fire on every '" +
                    r.syscall + "' event");
        }
        if (r.match.path && !glob_pattern(*r.match.path).well_formed()) {
            add(lint_severity::warning, "bad-glob", r,
                "path glob '" + *r.match.path + "' is malformed and never matches");
        }
        if (r.match.container && !glob_pattern(*r.match.container).well_formed()) {
            add(lint_severity::warning, "bad-glob", r,
                "container glob '" + *r.match.container +
                    "' is malformed and never matches");
        }
        if (constrains_argv(r.match) && !carries_string_list(r.syscall)) {
            add(lint_severity::warning, "field-inapplicable", r,
                "argv matchers never apply to '" + r.syscall +
                    "', which carries no token list");
        }
        if (r.match.target_pid_owner && !first_arg_is_pid(r.syscall)) {
            add(lint_severity::warning, "field-inapplicable", r,
                "target_pid_owner never applies to '" + r.syscall +
                    "', which does not target a pid");
        }
        if (r.match.argv_suspicious.has_value() &&
            carries_string_list(r.syscall) &&
            !signature_registry::instance().has(r.syscall)) {
            add(lint_severity::warning, "no-signature-predicate", r,
                "no signature predicate registered for '" + r.syscall + "'");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (shadows(rules[j], r)) {
                add(lint_severity::warning, "shadowed-rule", r,
                    "rule is unreachable: '" + rules[j].name +
                        "' matches first");
                break;
            }
        }
    }
    return findings;
}

signature_registry& signature_registry::instance() {
    static signature_registry reg = [] {
        signature_registry r;
        r.register_predicate("fsconfig", fsconfig_payload_suspicious);
        return r;
    }();
    return reg;
}

void signature_registry::register_predicate(const std::string& syscall, predicate p) {
    m_predicates[syscall] = std::move(p);
}

const signature_registry::predicate*
signature_registry::find(const std::string& syscall) const {
    auto it = m_predicates.find(syscall);
    if (it == m_predicates.end()) return nullptr;
    return &it->second;
}

namespace {

bool byte_string_suspicious(const std::string& bytes) {
    if (bytes.find('\0') != std::string::npos) return true;
    if (bytes.size() > 4096) return true;
    std::size_t run = 1;
    for (std::size_t i = 1; i < bytes.size(); ++i) {
        run = (bytes[i] == bytes[i - 1]) ? run + 1 : 1;
        if (run >= 512) return true;
    }
    return false;
}

} // namespace

bool fsconfig_payload_suspicious(const syscall_event& ev) {
    for (const auto& arg : ev.raw.args) {
        if (arg.kind == arg_kind::opaque && byte_string_suspicious(arg.text)) {
            return true;
        }
        if (arg.kind == arg_kind::string_list) {
            for (const auto& tok : arg.list) {
                if (byte_string_suspicious(tok)) return true;
            }
        }
    }
    return false;
}

} // namespace patrol
