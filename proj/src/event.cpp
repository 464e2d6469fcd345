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

#include "patrol/event.hpp"

#include <mutex>

namespace patrol {

syscall_arg syscall_arg::make_path(std::string p) {
    syscall_arg a;
    a.kind = arg_kind::path;
    a.text = std::move(p);
    return a;
}

syscall_arg syscall_arg::make_list(std::vector<std::string> v) {
    syscall_arg a;
    a.kind = arg_kind::string_list;
    a.list = std::move(v);
    return a;
}

syscall_arg syscall_arg::make_int(std::int64_t v) {
    syscall_arg a;
    a.kind = arg_kind::integer;
    a.num = v;
    return a;
}

syscall_arg syscall_arg::make_fd(std::int64_t v) {
    syscall_arg a;
    a.kind = arg_kind::fd;
    a.num = v;
    return a;
}

syscall_arg syscall_arg::make_flags(std::int64_t v) {
    syscall_arg a;
    a.kind = arg_kind::flags;
    a.num = v;
    return a;
}

syscall_arg syscall_arg::make_opaque(std::string bytes) {
    syscall_arg a;
    a.kind = arg_kind::opaque;
    a.text = std::move(bytes);
    return a;
}

container_registry::container_registry(const registry_snapshot& snap) {
    for (const auto& [cgroup_id, ctx] : snap.containers) {
        m_containers.emplace(cgroup_id, ctx);
    }
    for (const auto& p : snap.processes) {
        m_processes[p.pid] = p;
    }
}

void container_registry::set_container(std::uint64_t cgroup_id, container_context ctx) {
    std::unique_lock lock(m_mutex);
    m_containers[cgroup_id] = std::move(ctx);
}

void container_registry::upsert_process(process_entry entry) {
    std::unique_lock lock(m_mutex);
    m_processes[entry.pid] = std::move(entry);
}

container_context container_registry::resolve_container(std::uint64_t cgroup_id) const {
    std::shared_lock lock(m_mutex);
    auto it = m_containers.find(cgroup_id);
    if (it == m_containers.end()) return container_context{};
    return it->second;
}

process_lineage container_registry::resolve_lineage(std::uint32_t pid,
                                                    std::size_t max_depth) const {
    std::shared_lock lock(m_mutex);
    process_lineage out;
    std::uint32_t cur = pid;
    for (std::size_t depth = 0; depth < max_depth; ++depth) {
        auto it = m_processes.find(cur);
        if (it == m_processes.end()) break;
        out.chain.push_back({it->second.pid, it->second.comm, it->second.exe});
        if (it->second.ppid == 0 || it->second.ppid == cur) break;
        cur = it->second.ppid;
    }
    return out;
}

std::optional<std::uint32_t> container_registry::owner_of(std::uint32_t pid) const {
    std::shared_lock lock(m_mutex);
    auto it = m_processes.find(pid);
    if (it == m_processes.end()) return std::nullopt;
    return it->second.uid;
}

registry_snapshot container_registry::snapshot() const {
    std::shared_lock lock(m_mutex);
    registry_snapshot snap;
    for (const auto& [cgroup_id, ctx] : m_containers) {
        snap.containers.emplace_back(cgroup_id, ctx);
    }
    for (const auto& [pid, entry] : m_processes) {
        (void)pid;
        snap.processes.push_back(entry);
    }
    return snap;
}

const std::set<std::string>& monitored_syscalls() {
    static const std::set<std::string> names = {
        "execve", "open",    "openat", "clone",  "ptrace", "kill",
        "mount",  "socket",  "connect", "fsconfig", "setuid", "capset",
    };
    return names;
}

bool is_monitored(const std::string& syscall) {
    return monitored_syscalls().count(syscall) != 0;
}

bool carries_string_list(const std::string& syscall) {
    return syscall == "execve" || syscall == "fsconfig";
}

bool first_arg_is_pid(const std::string& syscall) {
    return syscall == "ptrace" || syscall == "kill";
}

std::string truncate_comm(std::string_view comm) {
    return std::string(comm.substr(0, kCommLen));
}

syscall_event enrich_event(const raw_event& raw, const container_registry& registry,
                           enrichment_stats& stats) {
    syscall_event ev;
    ev.raw = raw;
    ev.raw.comm = truncate_comm(raw.comm);
    ev.container = registry.resolve_container(raw.cgroup_id);
    ev.lineage = registry.resolve_lineage(raw.pid);
    if (ev.lineage.unknown()) {
        ++stats.unknown_pid_warnings;
    }
    if (first_arg_is_pid(raw.syscall) && !raw.args.empty() &&
        raw.args[0].kind == arg_kind::integer && raw.args[0].num >= 0) {
        ev.target_pid_owner =
            registry.owner_of(static_cast<std::uint32_t>(raw.args[0].num));
    }
    return ev;
}

} // namespace patrol
