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
#include <fstream>
#include <sstream>
#include <thread>

#include "patrol/enforcer.hpp"
#include "patrol/errors.hpp"

using namespace patrol;

TEST_CASE("errno mapping blocks only deny and kill") {
    CHECK(errno_for(verdict_kind::allow) == 0);
    CHECK(errno_for(verdict_kind::alert) == 0);
    CHECK(errno_for(verdict_kind::log) == 0);
    CHECK(errno_for(verdict_kind::deny) == kDeniedErrno);
    CHECK(errno_for(verdict_kind::kill) == kDeniedErrno);
    CHECK(kDeniedErrno == 13); // EACCES
}

TEST_CASE("verdict table round trips expect await settle") {
    verdict_table table(fail_policy_kind::closed);
    table.expect(7);

    std::thread settler([&table] {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
        table.settle(7, {verdict_kind::deny, kDeniedErrno});
    });
    syscall_verdict v = table.await(7, 1000);
    settler.join();

    CHECK(v.verdict == verdict_kind::deny);
    CHECK(v.err_no == kDeniedErrno);
    CHECK(table.timeout_count() == 0);
    CHECK(table.late_settle_count() == 0);
}

TEST_CASE("await returns immediately when already settled") {
    verdict_table table(fail_policy_kind::closed);
    table.expect(1);
    table.settle(1, {verdict_kind::allow, 0});
    syscall_verdict v = table.await(1, 1000);
    CHECK(v.verdict == verdict_kind::allow);
    CHECK(v.err_no == 0);
}

TEST_CASE("watchdog timeout applies the fail policy") {
    verdict_table open_table(fail_policy_kind::open);
    open_table.expect(1);
    syscall_verdict v = open_table.await(1, 1);
    CHECK(v.verdict == verdict_kind::allow);
    CHECK(v.err_no == 0);
    CHECK(open_table.timeout_count() == 1);

    verdict_table closed_table(fail_policy_kind::closed);
    closed_table.expect(1);
    v = closed_table.await(1, 1);
    CHECK(v.verdict == verdict_kind::deny);
    CHECK(v.err_no == kDeniedErrno);
    CHECK(closed_table.timeout_count() == 1);
}

TEST_CASE("a settle after the watchdog gave up is tolerated and counted") {
    verdict_table table(fail_policy_kind::open);
    table.expect(3);
    (void)table.await(3, 1); // abandons the slot
    CHECK_NOTHROW(table.settle(3, {verdict_kind::deny, kDeniedErrno}));
    CHECK(table.late_settle_count() == 1);
}

TEST_CASE("protocol violations throw") {
    verdict_table table(fail_policy_kind::closed);
    table.expect(5);
    CHECK_THROWS_AS(table.expect(5), pipeline_error);

    table.settle(5, {verdict_kind::allow, 0});
    CHECK_THROWS_AS(table.settle(5, {verdict_kind::allow, 0}), pipeline_error);
}

TEST_CASE("verdict table sustains a long alternating stream") {
    verdict_table table(fail_policy_kind::closed);
    // expect always precedes settle in the pipeline protocol, so register
    // every slot before the settler thread starts
    for (std::uint64_t seq = 0; seq < 10'000; ++seq)
        table.expect(seq);
    std::thread settler([&table] {
        for (std::uint64_t seq = 0; seq < 10'000; ++seq) {
            verdict_kind v =
                seq % 3 == 0 ? verdict_kind::deny : verdict_kind::allow;
            table.settle(seq, {v, errno_for(v)});
        }
    });
    std::uint64_t denies = 0;
    for (std::uint64_t seq = 0; seq < 10'000; ++seq) {
        syscall_verdict v = table.await(seq, 5'000);
        if (v.verdict == verdict_kind::deny) ++denies;
    }
    settler.join();
    CHECK(denies == 3334);
    CHECK(table.timeout_count() == 0);
    CHECK(table.late_settle_count() == 0);
}

TEST_CASE("sim process table retires killed pids") {
    sim_process_table table;
    CHECK(table.alive(100));
    table.kill_pid(100);
    CHECK_FALSE(table.alive(100));
    CHECK(table.alive(101));
    table.kill_pid(100); // idempotent
    CHECK(table.kill_count() == 1);
    table.kill_pid(101);
    CHECK(table.kill_count() == 2);
}

TEST_CASE("alert records serialize stable JSON") {
    alert_record rec;
    rec.seq = 12;
    rec.timestamp_ns = 1700000000000000123ULL;
    rec.kind = "policy";
    rec.source = "block-shadow-access";
    rec.verdict = "alert";
    rec.syscall = "open";
    rec.pid = 42;
    rec.uid = 33;
    rec.container_id = "web-1";
    rec.comm = "nginx";
    rec.matched_fields = {"path", "container"};

    nlohmann::json j = alert_to_json(rec);
    CHECK(j["seq"] == 12);
    CHECK(j["timestamp_ns"] == 1700000000000000123ULL);
    CHECK(j["kind"] == "policy");
    CHECK(j["source"] == "block-shadow-access");
    CHECK(j["verdict"] == "alert");
    CHECK(j["syscall"] == "open");
    CHECK(j["pid"] == 42);
    CHECK(j["uid"] == 33);
    CHECK(j["container_id"] == "web-1");
    CHECK(j["comm"] == "nginx");
    CHECK(j["matched_fields"] ==
          nlohmann::json(std::vector<std::string>{"path", "container"}));
    CHECK_FALSE(j.contains("frequency"));

    alert_record flag;
    flag.kind = "behavior";
    flag.source = "novel_syscall";
    flag.verdict = "flag";
    flag.frequency = 0.0;
    nlohmann::json fj = alert_to_json(flag);
    CHECK(fj["kind"] == "behavior");
    CHECK(fj["source"] == "novel_syscall");
    CHECK(fj.contains("frequency"));
    CHECK_FALSE(fj.contains("matched_fields"));

    // two renders of the same record are byte identical
    CHECK(alert_to_json(rec).dump() == alert_to_json(rec).dump());
}

TEST_CASE("file sink writes one JSON line per record") {
    const std::string path = "sink_test.jsonl";
    {
        file_sink sink(path);
        alert_record rec;
        rec.seq = 1;
        rec.kind = "policy";
        rec.source = "r";
        rec.verdict = "log";
        rec.syscall = "open";
        sink.write(rec);
        rec.seq = 2;
        sink.write(rec);
        sink.flush();
    }
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        nlohmann::json j = nlohmann::json::parse(line);
        CHECK(j["seq"] == lines);
    }
    CHECK(lines == 2);
    std::remove(path.c_str());
}

TEST_CASE("file sink truncates a previous file") {
    const std::string path = "sink_trunc_test.jsonl";
    {
        file_sink sink(path);
        alert_record rec;
        rec.kind = "policy";
        for (int i = 0; i < 5; ++i) {
            rec.seq = static_cast<std::uint64_t>(i);
            sink.write(rec);
        }
    }
    {
        file_sink sink(path);
        alert_record rec;
        rec.kind = "policy";
        rec.seq = 99;
        sink.write(rec);
        sink.flush();
    }
    std::ifstream in(path);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 1);
    std::remove(path.c_str());
}

TEST_CASE("sink fan out reaches every sink") {
    class counting_sink : public alert_sink {
    public:
        void write(const alert_record&) override { ++count; }
        int count = 0;
    };
    auto a = std::make_shared<counting_sink>();
    auto b = std::make_shared<counting_sink>();
    alert_sinks sinks;
    sinks.add(a);
    sinks.add(b);
    alert_record rec;
    sinks.write(rec);
    sinks.write(rec);
    CHECK(a->count == 2);
    CHECK(b->count == 2);
}

TEST_CASE("fail policy strings round trip") {
    CHECK(to_string(fail_policy_kind::open) == "open");
    CHECK(to_string(fail_policy_kind::closed) == "closed");
    CHECK(fail_policy_from("open") == fail_policy_kind::open);
    CHECK(fail_policy_from("closed") == fail_policy_kind::closed);
    CHECK_FALSE(fail_policy_from("ajar"));
}
