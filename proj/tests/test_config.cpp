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

#include <doctest.h>

#include <string>

#include "patrol/config.hpp"
#include "patrol/errors.hpp"

using namespace patrol;

TEST_CASE("defaults are valid") {
    engine_config cfg;
    CHECK(cfg.mode == pipeline_mode::inline_enforce);
    CHECK(cfg.ring_capacity == 8192);
    CHECK(cfg.learning_window == 1000);
    CHECK(cfg.rarity_threshold == doctest::Approx(0.001));
    CHECK(cfg.fail_policy == fail_policy_kind::closed);
    CHECK(cfg.watchdog_ms == 100);
    CHECK(cfg.profile_by == profile_scope::container);
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("a full config file parses") {
    engine_config cfg = parse_config_text("engine:\n"
                                          "  mode: observe\n"
                                          "  ring_capacity: 256\n"
                                          "  learning_window: 50\n"
                                          "  rarity_threshold: 0.01\n"
                                          "  fail_policy: open\n"
                                          "  watchdog_ms: 250\n"
                                          "  sink_path: \"alerts.jsonl\"\n"
                                          "  policy_paths: [a.yaml, b.yaml]\n"
                                          "  profile_by: process\n",
                                          "<memory>");
    CHECK(cfg.mode == pipeline_mode::observe);
    CHECK(cfg.ring_capacity == 256);
    CHECK(cfg.learning_window == 50);
    CHECK(cfg.rarity_threshold == doctest::Approx(0.01));
    CHECK(cfg.fail_policy == fail_policy_kind::open);
    CHECK(cfg.watchdog_ms == 250);
    CHECK(cfg.sink_path == "alerts.jsonl");
    CHECK(cfg.policy_paths == std::vector<std::string>{"a.yaml", "b.yaml"});
    CHECK(cfg.profile_by == profile_scope::process);
}

TEST_CASE("partial configs keep defaults for absent keys") {
    engine_config cfg = parse_config_text("engine:\n  mode: observe\n",
                                          "<memory>");
    engine_config defaults;
    CHECK(cfg.mode == pipeline_mode::observe);
    CHECK(cfg.ring_capacity == defaults.ring_capacity);
    CHECK(cfg.watchdog_ms == defaults.watchdog_ms);
}

TEST_CASE("render and parse are inverse") {
    engine_config cfg;
    cfg.mode = pipeline_mode::observe;
    cfg.ring_capacity = 1024;
    cfg.learning_window = 77;
    cfg.rarity_threshold = 0.0625;
    cfg.fail_policy = fail_policy_kind::open;
    cfg.watchdog_ms = 9;
    cfg.sink_path = "out dir/alerts.jsonl"; // needs quoting
    cfg.policy_paths = {"p1.yaml", "p 2.yaml"};
    cfg.profile_by = profile_scope::process;

    engine_config back = parse_config_text(render_config(cfg), "<render>");
    CHECK(back == cfg);

    // awkward double values survive the round trip bit-exactly
    for (double rarity : {0.001, 0.1, 1.0 / 3.0, 0.30000000000000004}) {
        cfg.rarity_threshold = rarity;
        back = parse_config_text(render_config(cfg), "<render>");
        CHECK(back.rarity_threshold == rarity);
    }

    engine_config defaults;
    CHECK(parse_config_text(render_config(defaults), "<render>") == defaults);
}

TEST_CASE("unknown keys are rejected with position info") {
    try {
        parse_config_text("engine:\n  ring_cap: 64\n", "cfg.yaml");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("ring_cap") != std::string::npos);
        CHECK(msg.find("cfg.yaml:2") != std::string::npos);
    }
}

TEST_CASE("the top level must be a single engine mapping") {
    CHECK_THROWS_AS(parse_config_text("mode: observe\n", "<memory>"),
                    config_error);
    CHECK_THROWS_AS(parse_config_text("engine:\n  mode: observe\n"
                                      "extra:\n  a: b\n",
                                      "<memory>"),
                    config_error);
    CHECK_THROWS_AS(
        parse_config_text("engine:\n  mode: observe\n---\nengine:\n  mode: observe\n",
                          "<memory>"),
        config_error);
}

TEST_CASE("bad values are rejected") {
    CHECK_THROWS_AS(parse_config_text("engine:\n  mode: turbo\n", "<memory>"),
                    config_error);
    CHECK_THROWS_AS(
        parse_config_text("engine:\n  ring_capacity: banana\n", "<memory>"),
        config_error);
    CHECK_THROWS_AS(
        parse_config_text("engine:\n  rarity_threshold: often\n", "<memory>"),
        config_error);
    CHECK_THROWS_AS(
        parse_config_text("engine:\n  watchdog_ms: -5\n", "<memory>"),
        config_error);
    CHECK_THROWS_AS(
        parse_config_text("engine:\n  profile_by: pod\n", "<memory>"),
        config_error);
    CHECK_THROWS_AS(
        parse_config_text("engine:\n  fail_policy: ajar\n", "<memory>"),
        config_error);
}

TEST_CASE("validation enforces ranges") {
    engine_config cfg;

    cfg.ring_capacity = 100; // not a power of two
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.ring_capacity = 32; // below the floor
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.ring_capacity = 64;
    CHECK_NOTHROW(validate_config(cfg));

    cfg.learning_window = 0;
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.learning_window = 1;
    CHECK_NOTHROW(validate_config(cfg));

    for (double bad : {0.0, 1.0, -0.5, 1.5}) {
        cfg.rarity_threshold = bad;
        CHECK_THROWS_AS(validate_config(cfg), config_error);
    }
    cfg.rarity_threshold = 0.999;
    CHECK_NOTHROW(validate_config(cfg));

    cfg.watchdog_ms = 0;
    CHECK_THROWS_AS(validate_config(cfg), config_error);
    cfg.watchdog_ms = 1;
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("parse validates the assembled config") {
    CHECK_THROWS_AS(
        parse_config_text("engine:\n  ring_capacity: 100\n", "<memory>"),
        config_error);
    CHECK_THROWS_AS(
        parse_config_text("engine:\n  rarity_threshold: 1.0\n", "<memory>"),
        config_error);
}

TEST_CASE("missing config files fail loudly") {
    CHECK_THROWS_AS(parse_config_file("/nonexistent/engine.yaml"),
                    config_error);
}

TEST_CASE("the env var name is stable") {
    CHECK(std::string(kConfigEnvVar) == "PATROL_CONFIG");
}
