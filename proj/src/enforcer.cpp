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

#include "patrol/enforcer.hpp"

#include <chrono>
#include <fstream>

#include "patrol/errors.hpp"

namespace patrol {

std::string to_string(fail_policy_kind f) {
    return f == fail_policy_kind::open ? "open" : "closed";
}

std::optional<fail_policy_kind> fail_policy_from(const std::string& s) {
    if (s == "open") return fail_policy_kind::open;
    if (s == "closed") return fail_policy_kind::closed;
    return std::nullopt;
}

int errno_for(verdict_kind v) {
    return (v == verdict_kind::deny || v == verdict_kind::kill) ? kDeniedErrno
                                                                : 0;
}

verdict_table::verdict_table(fail_policy_kind on_timeout)
    : m_on_timeout(on_timeout) {}

void verdict_table::expect(std::uint64_t seq) {
    std::lock_guard lock(m_mutex);
    auto [it, inserted] = m_slots.emplace(seq, slot{});
    (void)it;
    if (!inserted) {
        throw pipeline_error("verdict slot " + std::to_string(seq) +
                             " expected twice");
    }
}

syscall_verdict verdict_table::await(std::uint64_t seq, std::uint32_t timeout_ms) {
    std::unique_lock lock(m_mutex);
    auto it = m_slots.find(seq);
    if (it == m_slots.end()) {
        throw pipeline_error("await on unexpected verdict slot " +
                             std::to_string(seq));
    }
    bool settled = m_settled_cv.wait_for(
        lock, std::chrono::milliseconds(timeout_ms),
        [&] { return it->second.settled; });
    if (settled) {
        syscall_verdict v = it->second.verdict;
        m_slots.erase(it);
        return v;
    }
    // Watchdog fired: abandon the slot and apply the fail policy.
    m_slots.erase(it);
    ++m_timeout_count;
    if (m_on_timeout == fail_policy_kind::open) {
        return {verdict_kind::allow, 0};
    }
    return {verdict_kind::deny, kDeniedErrno};
}

void verdict_table::settle(std::uint64_t seq, syscall_verdict v) {
    {
        std::lock_guard lock(m_mutex);
        auto it = m_slots.find(seq);
        if (it == m_slots.end()) {
            // The producer stopped waiting for this seq; nothing to deliver.
            ++m_late_settles;
            return;
        }
        if (it->second.settled) {
            throw pipeline_error("verdict slot " + std::to_string(seq) +
                                 " settled twice");
        }
        it->second.verdict = v;
        it->second.settled = true;
    }
    m_settled_cv.notify_all();
}

std::uint64_t verdict_table::timeout_count() const {
    std::lock_guard lock(m_mutex);
    return m_timeout_count;
}

std::uint64_t verdict_table::late_settle_count() const {
    std::lock_guard lock(m_mutex);
    return m_late_settles;
}

void sim_process_table::kill_pid(std::uint32_t pid) { m_killed.insert(pid); }

bool sim_process_table::alive(std::uint32_t pid) const {
    return m_killed.count(pid) == 0;
}

std::uint64_t sim_process_table::kill_count() const { return m_killed.size(); }

nlohmann::json alert_to_json(const alert_record& rec) {
    nlohmann::json j;
    j["seq"] = rec.seq;
    j["timestamp_ns"] = rec.timestamp_ns;
    j["kind"] = rec.kind;
    j["source"] = rec.source;
    j["verdict"] = rec.verdict;
    j["syscall"] = rec.syscall;
    j["pid"] = rec.pid;
    j["uid"] = rec.uid;
    j["container_id"] = rec.container_id;
    j["comm"] = rec.comm;
    if (rec.kind == "policy") {
        j["matched_fields"] = rec.matched_fields;
    } else {
        j["frequency"] = rec.frequency;
    }
    return j;
}

struct file_sink::impl {
    std::ofstream out;
};

file_sink::file_sink(const std::string& path) : m_impl(new impl) {
    m_impl->out.open(path, std::ios::binary | std::ios::trunc);
    if (!m_impl->out) {
        throw error("cannot open alert sink '" + path + "' for writing");
    }
}

file_sink::~file_sink() = default;

void file_sink::write(const alert_record& rec) {
    m_impl->out << alert_to_json(rec).dump() << '\n';
}

void file_sink::flush() { m_impl->out.flush(); }

void alert_sinks::add(std::shared_ptr<alert_sink> sink) {
    m_sinks.push_back(std::move(sink));
}

void alert_sinks::write(const alert_record& rec) {
    for (auto& sink : m_sinks) {
        sink->write(rec);
    }
}

void alert_sinks::flush() {
    for (auto& sink : m_sinks) {
        sink->flush();
    }
}

} // namespace patrol
