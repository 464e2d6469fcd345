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

#include <stdexcept>
#include <string>

namespace patrol {

class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad engine configuration (file contents or value ranges).
class config_error : public error {
public:
    using error::error;
};

// Trace file problems. line is 1-based into the trace file, 0 when not tied
// to a specific line.
class trace_error : public error {
public:
    enum class kind { schema, version_mismatch, io };

    trace_error(kind k, int line, const std::string& msg)
        : error(msg), m_kind(k), m_line(line) {}

    kind error_kind() const { return m_kind; }
    int line() const { return m_line; }

private:
    kind m_kind;
    int m_line;
};

// Policy parsing / compilation failures.
class policy_error : public error {
public:
    enum class kind {
        syntax,          // malformed document, bad scalar value
        unknown_field,   // key not in the policy schema
        duplicate_rule,  // rule name reused within a set
        invalid_action,  // action outside deny|kill|alert|log
        compile,         // lint found error-severity diagnostics
        io,              // unreadable policy file
    };

    policy_error(kind k, const std::string& msg, int line = 0, int col = 0,
                 std::string token = {})
        : error(msg), m_kind(k), m_line(line), m_col(col),
          m_token(std::move(token)) {}

    kind error_kind() const { return m_kind; }
    int line() const { return m_line; }
    int col() const { return m_col; }
    const std::string& token() const { return m_token; }

private:
    kind m_kind;
    int m_line;
    int m_col;
    std::string m_token;
};

// Internal pipeline contract violations (consumer gone, missing verdict
// slot). These abort a run.
class pipeline_error : public error {
public:
    using error::error;
};

} // namespace patrol
