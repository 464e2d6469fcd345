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
#include <vector>

namespace patrol {

// Shell-style glob over full strings: '*' (any run), '?' (any one char) and
// character classes '[abc]', '[a-z]', with '!' or '^' negation. No special
// treatment of '/': patterns match the whole value, not path components.
//
// A pattern with an unterminated class is syntactically broken: it compiles,
// matches nothing, and reports !well_formed() so lint can flag it.
class glob_pattern {
public:
    glob_pattern() = default;
    explicit glob_pattern(std::string_view pattern);

    bool match(std::string_view text) const;

    const std::string& pattern() const { return m_pattern; }
    bool well_formed() const { return m_well_formed; }
    // True when the pattern contains no metacharacters; match() then degrades
    // to string equality.
    bool literal() const { return m_literal; }

private:
    enum class token_kind { literal, any_one, any_run, char_class };
    struct token {
        token_kind kind;
        std::string text;            // literal run
        std::string class_members;   // expanded class members
        bool negated = false;
    };

    std::string m_pattern;
    std::vector<token> m_tokens;
    bool m_well_formed = true;
    bool m_literal = true;
};

inline bool glob_match(std::string_view pattern, std::string_view text) {
    return glob_pattern(pattern).match(text);
}

} // namespace patrol
