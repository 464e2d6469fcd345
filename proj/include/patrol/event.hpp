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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

namespace patrol {

// Maximum argument slots carried per event, mirroring the fixed-size record
// layout a kernel probe would emit.
inline constexpr std::size_t kMaxArgs = 6;

// Length limit for the process short name (kernel TASK_COMM_LEN minus the
// trailing NUL).
inline constexpr std::size_t kCommLen = 15;

enum class arg_kind {
    path,        // filesystem path
    string_list, // argv-style token list
    integer,     // signed integer value
    fd,          // file descriptor number
    flags,       // bitmask, stored as integer
    opaque       // raw payload bytes (may contain NULs)
};

// One decoded syscall argument. Exactly one of text / list / num is
// meaningful, selected by kind; the others hold their default value so that
// equality stays structural.
struct syscall_arg {
    arg_kind kind = arg_kind::opaque;
    std::string text;
    std::vector<std::string> list;
    std::int64_t num = 0;

    static syscall_arg make_path(std::string p);
    static syscall_arg make_list(std::vector<std::string> v);
    static syscall_arg make_int(std::int64_t v);
    static syscall_arg make_fd(std::int64_t v);
    static syscall_arg make_flags(std::int64_t v);
    static syscall_arg make_opaque(std::string bytes);

    bool operator==(const syscall_arg&) const = default;
};

// Event as emitted by the probe layer, before any enrichment.
struct raw_event {
    std::uint64_t seq = 0;          // per-trace, gapless from 0
    std::uint64_t timestamp_ns = 0; // logical trace clock
    std::string syscall;
    std::vector<syscall_arg> args;  // at most kMaxArgs entries
    std::uint32_t pid = 0;
    std::uint32_t tid = 0;
    std::uint32_t uid = 0;
    std::uint64_t cgroup_id = 0;
    std::string comm;               // truncated to kCommLen

    bool operator==(const raw_event&) const = default;
};

// Workload identity resolved from the cgroup id. An empty container_id means
// the event came from the host.
struct container_context {
    std::string container_id;
    std::string image;
    std::string pod;

    bool is_host() const { return container_id.empty(); }
    bool operator==(const container_context&) const = default;
};

struct lineage_entry {
    std::uint32_t pid = 0;
    std::string comm;
    std::string exe;

    bool operator==(const lineage_entry&) const = default;
};

// Ancestor chain, self first. An empty chain marks a pid the process table
// does not know about.
struct process_lineage {
    std::vector<lineage_entry> chain;

    bool unknown() const { return chain.empty(); }
    bool operator==(const process_lineage&) const = default;
};

// Fully enriched event, the unit the policy engine and analyzer consume.
struct syscall_event {
    raw_event raw;
    container_context container;
    process_lineage lineage;
    // uid owning the pid named by the first argument, for pid-targeting
    // syscalls (ptrace, kill). Unset when inapplicable or unresolvable.
    std::optional<std::uint32_t> target_pid_owner;
};

// Row of the simulated process table.
struct process_entry {
    std::uint32_t pid = 0;
    std::uint32_t ppid = 0;
    std::string comm;
    std::string exe;
    std::uint32_t uid = 0;

    bool operator==(const process_entry&) const = default;
};

// Plain copyable seed for a registry, embedded in trace headers so a replay
// reconstructs the same enrichment state.
struct registry_snapshot {
    std::vector<std::pair<std::uint64_t, container_context>> containers;
    std::vector<process_entry> processes;

    bool operator==(const registry_snapshot&) const = default;
};

// Lookup state backing enrichment: cgroup id to container context plus a
// process table for lineage walks and target-pid ownership. Reads take a
// shared lock so the consumer thread can enrich while a control thread
// updates entries.
class container_registry {
public:
    container_registry() = default;
    explicit container_registry(const registry_snapshot& snap);

    void set_container(std::uint64_t cgroup_id, container_context ctx);
    void upsert_process(process_entry entry);

    // Unknown cgroup ids resolve to the host context.
    container_context resolve_container(std::uint64_t cgroup_id) const;
    // Walks the ppid chain, self first, stopping at the root or after
    // max_depth hops. Unknown starting pid yields an empty chain.
    process_lineage resolve_lineage(std::uint32_t pid, std::size_t max_depth = 16) const;
    std::optional<std::uint32_t> owner_of(std::uint32_t pid) const;

    registry_snapshot snapshot() const;

private:
    mutable std::shared_mutex m_mutex;
    std::map<std::uint64_t, container_context> m_containers;
    std::map<std::uint32_t, process_entry> m_processes;
};

struct enrichment_stats {
    std::uint64_t unknown_pid_warnings = 0;
};

// The fixed syscall surface the probe layer instruments.
const std::set<std::string>& monitored_syscalls();
bool is_monitored(const std::string& syscall);

// True for syscalls whose first string_list argument is an argv-style token
// vector (execve command line, fsconfig key/value payload).
bool carries_string_list(const std::string& syscall);

// True for syscalls whose first argument names a target pid.
bool first_arg_is_pid(const std::string& syscall);

std::string truncate_comm(std::string_view comm);

// Resolves container context, lineage, and target-pid ownership for one raw
// event. Never fails: unknown pids degrade to host / empty lineage and bump
// the warning counter.
syscall_event enrich_event(const raw_event& raw, const container_registry& registry,
                           enrichment_stats& stats);

} // namespace patrol
