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

#include <cstdio>
#include <sstream>
#include <string>

#include "patrol/errors.hpp"
#include "patrol/scenario.hpp"
#include "patrol/trace.hpp"

using namespace patrol;

namespace {

// A fixture written by hand, independent of the serializer.
const char* kFixture =
    R"({"version":1,"scenario":"demo","registry":{"containers":[{"cgroup_id":77,"container_id":"web-1","image":"nginx:1.25","pod":"frontend"}],"processes":[{"pid":10,"ppid":1,"comm":"nginx","exe":"/usr/sbin/nginx","uid":33}]},"labels":[2]})"
    "\n"
    R"({"seq":0,"timestamp_ns":1000,"syscall":"open","args":[{"kind":"path","value":"/var/www/index.html"},{"kind":"flags","value":0}],"pid":10,"tid":10,"uid":33,"cgroup_id":77,"comm":"nginx"})"
    "\n"
    R"({"seq":1,"timestamp_ns":2000,"syscall":"execve","args":[{"kind":"path","value":"/bin/id"},{"kind":"string_list","value":["id","-u"]}],"pid":11,"tid":11,"uid":33,"cgroup_id":77,"comm":"a-very-long-process-name"})"
    "\n"
    R"({"seq":2,"timestamp_ns":3000,"syscall":"fsconfig","args":[{"kind":"fd","value":3},{"kind":"opaque","hex":"41004242"}],"pid":11,"tid":11,"uid":33,"cgroup_id":77,"comm":"id"})"
    "\n";

trace_data tiny_trace() {
    trace_data t;
    t.version = kTraceVersion;
    t.scenario = "tiny";
    container_context web;
    web.container_id = "web-1";
    web.image = "nginx:1.25";
    web.pod = "frontend";
    t.registry.containers.emplace_back(77, web);
    t.registry.processes.push_back({10, 1, "nginx", "/usr/sbin/nginx", 33});

    raw_event ev;
    ev.seq = 0;
    ev.timestamp_ns = 42;
    ev.syscall = "open";
    ev.args = {syscall_arg::make_path("/etc/hosts"), syscall_arg::make_flags(0)};
    ev.pid = 10;
    ev.tid = 10;
    ev.uid = 33;
    ev.cgroup_id = 77;
    ev.comm = "nginx";
    t.events.push_back(ev);

    ev.seq = 1;
    ev.timestamp_ns = 43;
    ev.syscall = "fsconfig";
    ev.args = {syscall_arg::make_fd(3),
               syscall_arg::make_opaque(std::string("\x00\xff\x41", 3))};
    t.events.push_back(ev);
    t.labels = {1};
    return t;
}

} // namespace

TEST_CASE("hand written fixture loads with every field intact") {
    std::istringstream in(kFixture);
    trace_data t = load_trace(in);

    CHECK(t.version == 1);
    CHECK(t.scenario == "demo");
    REQUIRE(t.registry.containers.size() == 1);
    CHECK(t.registry.containers[0].first == 77);
    CHECK(t.registry.containers[0].second.container_id == "web-1");
    CHECK(t.registry.containers[0].second.image == "nginx:1.25");
    CHECK(t.registry.containers[0].second.pod == "frontend");
    REQUIRE(t.registry.processes.size() == 1);
    CHECK(t.registry.processes[0].pid == 10);
    CHECK(t.registry.processes[0].exe == "/usr/sbin/nginx");

    REQUIRE(t.events.size() == 3);
    const raw_event& open_ev = t.events[0];
    CHECK(open_ev.seq == 0);
    CHECK(open_ev.timestamp_ns == 1000);
    CHECK(open_ev.syscall == "open");
    REQUIRE(open_ev.args.size() == 2);
    CHECK(open_ev.args[0].kind == arg_kind::path);
    CHECK(open_ev.args[0].text == "/var/www/index.html");
    CHECK(open_ev.args[1].kind == arg_kind::flags);
    CHECK(open_ev.args[1].num == 0);

    const raw_event& exec_ev = t.events[1];
    CHECK(exec_ev.args[1].kind == arg_kind::string_list);
    CHECK(exec_ev.args[1].list == std::vector<std::string>{"id", "-u"});
    // comm is truncated to the kernel limit on load
    CHECK(exec_ev.comm == "a-very-long-pro");
    CHECK(exec_ev.comm.size() == kCommLen);

    const raw_event& fs_ev = t.events[2];
    CHECK(fs_ev.args[0].kind == arg_kind::fd);
    CHECK(fs_ev.args[0].num == 3);
    CHECK(fs_ev.args[1].kind == arg_kind::opaque);
    CHECK(fs_ev.args[1].text == std::string("A\x00\x42\x42", 4));

    CHECK(t.labels == std::vector<std::uint64_t>{2});
    CHECK(t.is_labeled(2));
    CHECK_FALSE(t.is_labeled(1));
}

TEST_CASE("save and load round trip is the identity") {
    trace_data t = tiny_trace();
    std::ostringstream out;
    save_trace(t, out);
    std::istringstream in(out.str());
    trace_data back = load_trace(in);
    CHECK(back == t);
}

TEST_CASE("serialization is byte deterministic") {
    trace_data t = tiny_trace();
    std::ostringstream a, b;
    save_trace(t, a);
    save_trace(t, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("opaque payloads survive binary bytes") {
    trace_data t = tiny_trace();
    std::string bytes;
    for (int i = 0; i < 256; ++i) bytes.push_back(static_cast<char>(i));
    t.events[1].args[1] = syscall_arg::make_opaque(bytes);

    std::ostringstream out;
    save_trace(t, out);
    std::istringstream in(out.str());
    trace_data back = load_trace(in);
    CHECK(back.events[1].args[1].text == bytes);
}

TEST_CASE("generated traces round trip through files") {
    trace_data t = generate_scenario(scenario_kind::reverse_shell, 7);
    const std::string path = "trace_roundtrip_test.jsonl";
    save_trace_file(t, path);
    trace_data back = load_trace_file(path);
    CHECK(back == t);
    std::remove(path.c_str());
}

TEST_CASE("loader rejects structural violations") {
    auto load_text = [](const std::string& text) {
        std::istringstream in(text);
        return load_trace(in);
    };
    const std::string header =
        R"({"version":1,"registry":{"containers":[],"processes":[]},"labels":[]})"
        "\n";
    auto event_line = [](std::uint64_t seq, const std::string& syscall) {
        return R"({"seq":)" + std::to_string(seq) + R"(,"timestamp_ns":1,"syscall":")" +
               syscall +
               R"(","args":[],"pid":1,"tid":1,"uid":0,"cgroup_id":0,"comm":"x"})" "\n";
    };

    SUBCASE("empty input") {
        CHECK_THROWS_AS(load_text(""), trace_error);
    }
    SUBCASE("header must be JSON") {
        CHECK_THROWS_AS(load_text("not json\n"), trace_error);
    }
    SUBCASE("version mismatch carries its own kind") {
        try {
            load_text(R"({"version":99,"registry":{"containers":[],"processes":[]},"labels":[]})" "\n");
            FAIL("expected trace_error");
        } catch (const trace_error& e) {
            CHECK(e.error_kind() == trace_error::kind::version_mismatch);
        }
    }
    SUBCASE("registry is mandatory") {
        CHECK_THROWS_AS(load_text(R"({"version":1,"labels":[]})" "\n"),
                        trace_error);
    }
    SUBCASE("seq gaps are rejected") {
        try {
            load_text(header + event_line(0, "open") + event_line(2, "open"));
            FAIL("expected trace_error");
        } catch (const trace_error& e) {
            CHECK(e.error_kind() == trace_error::kind::schema);
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("seq must start at zero") {
        CHECK_THROWS_AS(load_text(header + event_line(1, "open")), trace_error);
    }
    SUBCASE("unmonitored syscalls are rejected") {
        CHECK_THROWS_AS(load_text(header + event_line(0, "readv")), trace_error);
        CHECK_NOTHROW(load_text(header + event_line(0, "other")));
    }
    SUBCASE("more than six args is rejected") {
        std::string args;
        for (int i = 0; i < 7; ++i) {
            if (i) args += ",";
            args += R"({"kind":"fd","value":1})";
        }
        std::string line =
            R"({"seq":0,"timestamp_ns":1,"syscall":"open","args":[)" + args +
            R"(],"pid":1,"tid":1,"uid":0,"cgroup_id":0,"comm":"x"})" "\n";
        CHECK_THROWS_AS(load_text(header + line), trace_error);
    }
    SUBCASE("unknown arg kinds are rejected") {
        std::string line =
            R"({"seq":0,"timestamp_ns":1,"syscall":"open","args":[{"kind":"blob","value":1}],"pid":1,"tid":1,"uid":0,"cgroup_id":0,"comm":"x"})" "\n";
        CHECK_THROWS_AS(load_text(header + line), trace_error);
    }
    SUBCASE("odd length hex is rejected") {
        std::string line =
            R"({"seq":0,"timestamp_ns":1,"syscall":"open","args":[{"kind":"opaque","hex":"abc"}],"pid":1,"tid":1,"uid":0,"cgroup_id":0,"comm":"x"})" "\n";
        CHECK_THROWS_AS(load_text(header + line), trace_error);
    }
    SUBCASE("labels must reference events") {
        std::string bad_header =
            R"({"version":1,"registry":{"containers":[],"processes":[]},"labels":[5]})"
            "\n";
        CHECK_THROWS_AS(load_text(bad_header + event_line(0, "open")),
                        trace_error);
    }
    SUBCASE("labels must be sorted") {
        std::string bad_header =
            R"({"version":1,"registry":{"containers":[],"processes":[]},"labels":[1,0]})"
            "\n";
        CHECK_THROWS_AS(load_text(bad_header + event_line(0, "open") +
                                  event_line(1, "open")),
                        trace_error);
    }
    SUBCASE("missing event fields are rejected") {
        std::string line =
            R"({"seq":0,"timestamp_ns":1,"syscall":"open","args":[],"pid":1,"tid":1,"uid":0,"cgroup_id":0})" "\n";
        CHECK_THROWS_AS(load_text(header + line), trace_error);
    }
    SUBCASE("wrongly typed fields are rejected") {
        std::string line =
            R"({"seq":"zero","timestamp_ns":1,"syscall":"open","args":[],"pid":1,"tid":1,"uid":0,"cgroup_id":0,"comm":"x"})" "\n";
        CHECK_THROWS_AS(load_text(header + line), trace_error);
    }
}

TEST_CASE("io failures carry the io kind") {
    try {
        load_trace_file("/nonexistent/trace.jsonl");
        FAIL("expected trace_error");
    } catch (const trace_error& e) {
        CHECK(e.error_kind() == trace_error::kind::io);
    }
}
