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

#include "patrol/mini_yaml.hpp"

#include <cctype>

namespace patrol::yaml {

namespace {

struct src_line {
    int no;           // 1-based line number
    int indent;       // leading spaces
    std::string text; // content with indentation and comments removed
};

[[noreturn]] void fail(int line, int col, std::string msg) {
    throw parse_error{line, col, std::move(msg)};
}

bool is_blank(std::string_view s) {
    for (char c : s) {
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

std::string rstrip(std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.pop_back();
    }
    return s;
}

// Cuts a trailing comment. '#' starts a comment only outside quotes and when
// at the start of the remaining content or preceded by whitespace.
std::string strip_comment(const std::string& s) {
    bool in_quote = false;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_quote) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_quote = false;
            }
            continue;
        }
        if (c == '"') {
            in_quote = true;
        } else if (c == '#' && (i == 0 || s[i - 1] == ' ' || s[i - 1] == '\t')) {
            return s.substr(0, i);
        }
    }
    return s;
}

std::vector<src_line> scan_lines(std::string_view text) {
    std::vector<src_line> out;
    int no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string raw(nl == std::string_view::npos ? text.substr(pos)
                                                     : text.substr(pos, nl - pos));
        ++no;
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;

        if (is_blank(raw)) continue;

        int indent = 0;
        for (char c : raw) {
            if (c == ' ') {
                ++indent;
            } else if (c == '\t') {
                fail(no, indent + 1, "tab in indentation");
            } else {
                break;
            }
        }
        std::string content = rstrip(strip_comment(raw.substr(indent)));
        if (content.empty()) continue;
        out.push_back({no, indent, std::move(content)});
    }
    return out;
}

// Parses a double-quoted scalar starting at s[i] == '"'. Returns the decoded
// value and leaves i one past the closing quote.
std::string parse_quoted(const std::string& s, size_t& i, int line, int col_base) {
    std::string out;
    ++i; // opening quote
    while (i < s.size()) {
        char c = s[i];
        if (c == '"') {
            ++i;
            return out;
        }
        if (c == '\\') {
            ++i;
            if (i >= s.size()) break;
            switch (s[i]) {
            case '\\': out.push_back('\\'); break;
            case '"': out.push_back('"'); break;
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            default:
                fail(line, col_base + static_cast<int>(i),
                     "unsupported escape in quoted scalar");
            }
            ++i;
        } else {
            out.push_back(c);
            ++i;
        }
    }
    fail(line, col_base + static_cast<int>(i), "unterminated quoted scalar");
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return std::string(s.substr(b, e - b));
}

node parse_flow_sequence(const std::string& s, int line, int col) {
    node seq;
    seq.kind = node::type::sequence;
    seq.line = line;
    seq.col = col;

    size_t i = 1; // past '['
    bool expect_item = true;
    while (true) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        if (i >= s.size()) {
            fail(line, col + static_cast<int>(i), "unterminated flow sequence");
        }
        if (s[i] == ']') {
            if (expect_item && !seq.items.empty()) {
                fail(line, col + static_cast<int>(i), "trailing comma in sequence");
            }
            ++i;
            break;
        }
        if (!expect_item) {
            if (s[i] != ',') {
                fail(line, col + static_cast<int>(i), "expected ',' or ']'");
            }
            ++i;
            expect_item = true;
            continue;
        }
        node item;
        item.kind = node::type::scalar;
        item.line = line;
        item.col = col + static_cast<int>(i);
        if (s[i] == '"') {
            item.scalar = parse_quoted(s, i, line, col);
        } else {
            size_t start = i;
            while (i < s.size() && s[i] != ',' && s[i] != ']') ++i;
            item.scalar = trim(s.substr(start, i - start));
            if (item.scalar.empty()) {
                fail(line, col + static_cast<int>(start), "empty sequence item");
            }
        }
        seq.items.push_back(std::move(item));
        expect_item = false;
    }
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i < s.size()) {
        fail(line, col + static_cast<int>(i), "content after sequence close");
    }
    return seq;
}

node parse_value(const std::string& s, int line, int col) {
    if (s[0] == '[') {
        return parse_flow_sequence(s, line, col);
    }
    node v;
    v.kind = node::type::scalar;
    v.line = line;
    v.col = col;
    if (s[0] == '"') {
        size_t i = 0;
        v.scalar = parse_quoted(s, i, line, col);
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        if (i < s.size()) {
            fail(line, col + static_cast<int>(i), "content after quoted scalar");
        }
    } else {
        v.scalar = s;
    }
    return v;
}

node parse_mapping(const std::vector<src_line>& lines, size_t& i, int indent);

node parse_entry_value(const std::vector<src_line>& lines, size_t& i, int indent,
                       const src_line& ln, size_t value_off) {
    std::string rest = trim(std::string_view(ln.text).substr(value_off));
    if (!rest.empty()) {
        ++i;
        if (i < lines.size() && lines[i].indent > indent &&
            lines[i].text != "---") {
            fail(lines[i].no, lines[i].indent + 1,
                 "unexpected indent under scalar value");
        }
        return parse_value(rest, ln.no, ln.indent + static_cast<int>(value_off) + 1);
    }
    // nested mapping
    ++i;
    if (i >= lines.size() || lines[i].indent <= indent || lines[i].text == "---") {
        fail(ln.no, ln.indent + 1, "expected nested mapping or value");
    }
    return parse_mapping(lines, i, lines[i].indent);
}

node parse_mapping(const std::vector<src_line>& lines, size_t& i, int indent) {
    node m;
    m.kind = node::type::mapping;
    m.line = lines[i].no;
    m.col = indent + 1;

    while (i < lines.size()) {
        const src_line& ln = lines[i];
        if (ln.text == "---") break;
        if (ln.indent < indent) break;
        if (ln.indent > indent) {
            fail(ln.no, ln.indent + 1, "inconsistent indentation");
        }

        size_t colon = std::string::npos;
        for (size_t p = 0; p < ln.text.size(); ++p) {
            char c = ln.text[p];
            if (c == ':') {
                colon = p;
                break;
            }
            if (c == '"' || c == '[') break;
        }
        if (colon == std::string::npos || colon == 0) {
            fail(ln.no, ln.indent + 1, "expected 'key: value'");
        }
        if (colon + 1 < ln.text.size() && ln.text[colon + 1] != ' ') {
            fail(ln.no, ln.indent + static_cast<int>(colon) + 2,
                 "expected space after ':'");
        }
        std::string key = trim(std::string_view(ln.text).substr(0, colon));
        for (char c : key) {
            if (c == ' ' || c == '\t' || c == '"') {
                fail(ln.no, ln.indent + 1, "malformed key");
            }
        }
        if (m.find(key) != nullptr) {
            fail(ln.no, ln.indent + 1, "duplicate key '" + key + "'");
        }

        node v = parse_entry_value(lines, i, indent, ln,
                                   colon + 1 < ln.text.size() ? colon + 2
                                                              : ln.text.size());
        m.entries.emplace_back(std::move(key), std::move(v));
    }
    return m;
}

} // namespace

std::vector<node> parse_documents(std::string_view text) {
    std::vector<src_line> lines = scan_lines(text);
    std::vector<node> docs;
    size_t i = 0;
    while (i < lines.size()) {
        if (lines[i].text == "---") {
            ++i;
            continue;
        }
        if (lines[i].indent != 0) {
            fail(lines[i].no, lines[i].indent + 1,
                 "document must start at column 1");
        }
        docs.push_back(parse_mapping(lines, i, 0));
    }
    return docs;
}

std::string quote_if_needed(const std::string& value) {
    auto bare_safe = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s) {
            bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                      c == '-' || c == '.' || c == '/' || c == '+' || c == '@' ||
                      c == '%';
            if (!ok) return false;
        }
        // a leading '-' or digit-only content is fine for our readers, but a
        // bare value must not look like a comment or sequence
        return s[0] != '#' && s[0] != '[';
    };
    if (bare_safe(value)) return value;

    std::string out = "\"";
    for (char c : value) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

} // namespace patrol::yaml
