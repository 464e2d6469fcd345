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

#include "patrol/glob.hpp"

namespace patrol {

glob_pattern::glob_pattern(std::string_view pattern) : m_pattern(pattern) {
    size_t i = 0;
    while (i < pattern.size()) {
        char c = pattern[i];
        if (c == '*') {
            m_literal = false;
            // collapse consecutive stars
            if (m_tokens.empty() || m_tokens.back().kind != token_kind::any_run) {
                m_tokens.push_back({token_kind::any_run, {}, {}, false});
            }
            ++i;
        } else if (c == '?') {
            m_literal = false;
            m_tokens.push_back({token_kind::any_one, {}, {}, false});
            ++i;
        } else if (c == '[') {
            m_literal = false;
            token t{token_kind::char_class, {}, {}, false};
            size_t j = i + 1;
            if (j < pattern.size() && (pattern[j] == '!' || pattern[j] == '^')) {
                t.negated = true;
                ++j;
            }
            // ']' immediately after the opener (or negation) is a member
            if (j < pattern.size() && pattern[j] == ']') {
                t.class_members.push_back(']');
                ++j;
            }
            bool closed = false;
            while (j < pattern.size()) {
                if (pattern[j] == ']') {
                    closed = true;
                    ++j;
                    break;
                }
                if (j + 2 < pattern.size() && pattern[j + 1] == '-' &&
                    pattern[j + 2] != ']') {
                    char lo = pattern[j], hi = pattern[j + 2];
                    if (lo <= hi) {
                        for (char m = lo; m <= hi; ++m) t.class_members.push_back(m);
                    }
                    j += 3;
                } else {
                    t.class_members.push_back(pattern[j]);
                    ++j;
                }
            }
            if (!closed) {
                m_well_formed = false;
                m_tokens.clear();
                return;
            }
            m_tokens.push_back(std::move(t));
            i = j;
        } else {
            if (m_tokens.empty() || m_tokens.back().kind != token_kind::literal) {
                m_tokens.push_back({token_kind::literal, {}, {}, false});
            }
            m_tokens.back().text.push_back(c);
            ++i;
        }
    }
}

bool glob_pattern::match(std::string_view text) const {
    if (!m_well_formed) {
        return false;
    }

    // Iterative matcher with single-star backtracking over tokens.
    size_t ti = 0;     // token index
    size_t si = 0;     // text index
    size_t star_tok = std::string::npos;
    size_t star_si = 0;

    auto single_match = [](const token& t, char c) {
        switch (t.kind) {
        case token_kind::any_one:
            return true;
        case token_kind::char_class: {
            bool in = t.class_members.find(c) != std::string::npos;
            return t.negated ? !in : in;
        }
        default:
            return false;
        }
    };

    while (si < text.size()) {
        if (ti < m_tokens.size()) {
            const token& t = m_tokens[ti];
            if (t.kind == token_kind::any_run) {
                star_tok = ti;
                star_si = si;
                ++ti;
                continue;
            }
            if (t.kind == token_kind::literal) {
                if (text.compare(si, t.text.size(), t.text) == 0) {
                    si += t.text.size();
                    ++ti;
                    continue;
                }
            } else if (single_match(t, text[si])) {
                ++si;
                ++ti;
                continue;
            }
        }
        if (star_tok == std::string::npos) {
            return false;
        }
        // retry after the last star, consuming one more char
        ti = star_tok + 1;
        si = ++star_si;
    }
    while (ti < m_tokens.size() && m_tokens[ti].kind == token_kind::any_run) {
        ++ti;
    }
    return ti == m_tokens.size();
}

} // namespace patrol
