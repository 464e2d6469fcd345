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

#include "patrol/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "patrol/errors.hpp"
#include "patrol/mini_yaml.hpp"

namespace patrol {

namespace {

[[noreturn]] void fail_at(const std::string& source, int line, int col,
                          const std::string& msg) {
    throw config_error(source + ":" + std::to_string(line) + ":" +
                       std::to_string(col) + ": " + msg);
}

std::uint64_t parse_uint(const yaml::node& n, const std::string& source,
                         const char* key) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(n.scalar.data(),
                                     n.scalar.data() + n.scalar.size(), value);
    if (ec != std::errc{} || ptr != n.scalar.data() + n.scalar.size()) {
        fail_at(source, n.line, n.col,
                std::string("'") + key + "' must be a non-negative integer");
    }
    return value;
}

double parse_double(const yaml::node& n, const std::string& source,
                    const char* key) {
    try {
        std::size_t used = 0;
        double value = std::stod(n.scalar, &used);
        if (used != n.scalar.size()) throw std::invalid_argument("trail");
        return value;
    } catch (const std::exception&) {
        fail_at(source, n.line, n.col,
                std::string("'") + key + "' must be a number");
    }
}

} // namespace

void validate_config(const engine_config& cfg) {
    if (cfg.ring_capacity < 64 ||
        (cfg.ring_capacity & (cfg.ring_capacity - 1)) != 0) {
        throw config_error("ring_capacity must be a power of two >= 64 (got " +
                           std::to_string(cfg.ring_capacity) + ")");
    }
    if (cfg.learning_window == 0) {
        throw config_error("learning_window must be at least 1");
    }
    if (!(cfg.rarity_threshold > 0.0 && cfg.rarity_threshold < 1.0)) {
        throw config_error("rarity_threshold must lie strictly between 0 and 1");
    }
    if (cfg.watchdog_ms == 0) {
        throw config_error("watchdog_ms must be at least 1");
    }
}

engine_config parse_config_text(std::string_view text,
                                const std::string& source_name) {
    std::vector<yaml::node> docs;
    try {
        docs = yaml::parse_documents(text);
    } catch (const yaml::parse_error& e) {
        fail_at(source_name, e.line, e.col, e.message);
    }
    if (docs.size() != 1) {
        throw config_error(source_name + ": expected exactly one document");
    }
    const yaml::node& root = docs[0];
    if (root.entries.size() != 1 || root.entries[0].first != "engine") {
        fail_at(source_name, root.line, root.col,
                "top level must be a single 'engine' mapping");
    }
    const yaml::node& engine = root.entries[0].second;
    if (!engine.is_mapping()) {
        fail_at(source_name, engine.line, engine.col,
                "'engine' must be a mapping");
    }

    engine_config cfg;
    for (const auto& [key, value] : engine.entries) {
        if (key == "mode") {
            auto mode = pipeline_mode_from(value.scalar);
            if (!mode) {
                fail_at(source_name, value.line, value.col,
                        "'mode' must be \"observe\" or \"inline\"");
            }
            cfg.mode = *mode;
        } else if (key == "ring_capacity") {
            cfg.ring_capacity = static_cast<std::size_t>(
                parse_uint(value, source_name, "ring_capacity"));
        } else if (key == "learning_window") {
            cfg.learning_window = static_cast<std::size_t>(
                parse_uint(value, source_name, "learning_window"));
        } else if (key == "rarity_threshold") {
            cfg.rarity_threshold =
                parse_double(value, source_name, "rarity_threshold");
        } else if (key == "fail_policy") {
            auto fp = fail_policy_from(value.scalar);
            if (!fp) {
                fail_at(source_name, value.line, value.col,
                        "'fail_policy' must be \"open\" or \"closed\"");
            }
            cfg.fail_policy = *fp;
        } else if (key == "watchdog_ms") {
            cfg.watchdog_ms = static_cast<std::uint32_t>(
                parse_uint(value, source_name, "watchdog_ms"));
        } else if (key == "sink_path") {
            cfg.sink_path = value.scalar;
        } else if (key == "policy_paths") {
            if (!value.is_sequence()) {
                fail_at(source_name, value.line, value.col,
                        "'policy_paths' must be a sequence");
            }
            cfg.policy_paths.clear();
            for (const auto& item : value.items) {
                cfg.policy_paths.push_back(item.scalar);
            }
        } else if (key == "profile_by") {
            auto scope = profile_scope_from(value.scalar);
            if (!scope) {
                fail_at(source_name, value.line, value.col,
                        "'profile_by' must be \"container\" or \"process\"");
            }
            cfg.profile_by = *scope;
        } else {
            fail_at(source_name, value.line, value.col,
                    "unknown engine setting '" + key + "'");
        }
    }
    validate_config(cfg);
    return cfg;
}

engine_config parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw config_error("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string render_config(const engine_config& cfg) {
    std::ostringstream out;
    out << "engine:\n";
    out << "  mode: " << to_string(cfg.mode) << "\n";
    out << "  ring_capacity: " << cfg.ring_capacity << "\n";
    out << "  learning_window: " << cfg.learning_window << "\n";

    // Shortest round-trip form so parse(render(c)) preserves the value.
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), cfg.rarity_threshold);
    (void)ec;
    out << "  rarity_threshold: " << std::string_view(buf, end - buf) << "\n";

    out << "  fail_policy: " << to_string(cfg.fail_policy) << "\n";
    out << "  watchdog_ms: " << cfg.watchdog_ms << "\n";
    if (!cfg.sink_path.empty()) {
        out << "  sink_path: " << yaml::quote_if_needed(cfg.sink_path) << "\n";
    }
    if (!cfg.policy_paths.empty()) {
        out << "  policy_paths: [";
        for (std::size_t i = 0; i < cfg.policy_paths.size(); ++i) {
            if (i > 0) out << ", ";
            out << yaml::quote_if_needed(cfg.policy_paths[i]);
        }
        out << "]\n";
    }
    out << "  profile_by: " << to_string(cfg.profile_by) << "\n";
    return out.str();
}

} // namespace patrol
