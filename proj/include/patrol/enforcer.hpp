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

#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "patrol/compiled_policy.hpp"

namespace patrol {

// errno returned for any syscall the engine blocks (EACCES).
inline constexpr int kDeniedErrno = 13;

// Behavior when an inline verdict misses the watchdog deadline.
enum class fail_policy_kind {
    open,   // let the syscall through
    closed, // deny the syscall
};

std::string to_string(fail_policy_kind f);
std::optional<fail_policy_kind> fail_policy_from(const std::string& s);

// What the blocked syscall finally returns.
struct syscall_verdict {
    verdict_kind verdict = verdict_kind::allow;
    int err_no = 0; // kDeniedErrno when blocked, else 0
};

int errno_for(verdict_kind v);

// Rendezvous between the probe side, which holds a syscall open, and the
// enforcement side, which decides it. Inline mode only.
//
// Protocol per event: the producer calls expect(seq) before pushing, then
// await(seq). The consumer calls settle(seq, verdict) exactly once. A second
// settle on a live slot is a logic error and throws; settling a slot the
// watchdog already abandoned is tolerated and only counted, because a slow
// verdict losing its race is an expected overload symptom, not a bug.
class verdict_table {
public:
    explicit verdict_table(fail_policy_kind on_timeout);

    void expect(std::uint64_t seq);

    // Blocks up to timeout_ms. On timeout the slot is abandoned and the
    // fail policy decides the returned verdict.
    syscall_verdict await(std::uint64_t seq, std::uint32_t timeout_ms);

    void settle(std::uint64_t seq, syscall_verdict v);

    std::uint64_t timeout_count() const;
    std::uint64_t late_settle_count() const;

private:
    struct slot {
        syscall_verdict verdict;
        bool settled = false;
    };

    fail_policy_kind m_on_timeout;
    mutable std::mutex m_mutex;
    std::condition_variable m_settled_cv;
    std::map<std::uint64_t, slot> m_slots;
    std::uint64_t m_timeout_count = 0;
    std::uint64_t m_late_settles = 0;
};

// Simulated process liveness: a kill verdict retires the pid, and every
// later event it would have produced is suppressed instead of matched.
class sim_process_table {
public:
    void kill_pid(std::uint32_t pid);
    bool alive(std::uint32_t pid) const;
    std::uint64_t kill_count() const;

private:
    std::set<std::uint32_t> m_killed;
};

// One line in the alert sink. kind is "policy" for alert/log rule hits and
// "behavior" for profile deviations. Timestamps come from the trace clock,
// never the wall clock, so identical runs serialize identically.
struct alert_record {
    std::uint64_t seq = 0;
    std::uint64_t timestamp_ns = 0;
    std::string kind;
    std::string source;  // rule name, or deviation kind for behavior records
    std::string verdict; // "alert" / "log" / "flag"
    std::string syscall;
    std::uint32_t pid = 0;
    std::uint32_t uid = 0;
    std::string container_id; // empty for host
    std::string comm;
    std::vector<std::string> matched_fields; // policy records
    double frequency = 0.0;                  // behavior records
};

nlohmann::json alert_to_json(const alert_record& rec);

class alert_sink {
public:
    virtual ~alert_sink() = default;
    virtual void write(const alert_record& rec) = 0;
    virtual void flush() {}
};

// JSONL sink, one record per line.
class file_sink : public alert_sink {
public:
    explicit file_sink(const std::string& path);
    ~file_sink() override;

    void write(const alert_record& rec) override;
    void flush() override;

private:
    struct impl;
    std::unique_ptr<impl> m_impl;
};

class null_sink : public alert_sink {
public:
    void write(const alert_record&) override {}
};

// Fan-out wrapper; the pipeline talks to exactly one of these.
class alert_sinks {
public:
    void add(std::shared_ptr<alert_sink> sink);
    void write(const alert_record& rec);
    void flush();

private:
    std::vector<std::shared_ptr<alert_sink>> m_sinks;
};

// Full audit entry for one processed (non-suppressed) event.
struct enforcement_record {
    std::uint64_t seq = 0;
    std::uint64_t timestamp_ns = 0;
    std::string syscall;
    std::uint32_t pid = 0;
    std::uint32_t uid = 0;
    std::string container_id;
    decision dec;
    int err_no = 0;      // errno the syscall returned (inline mode)
    bool enforced = false; // true when a deny/kill was applied inline
    std::uint64_t policy_version = 0;
    std::uint64_t latency_ns = 0; // dequeue-to-settle, consumer side
};

} // namespace patrol
