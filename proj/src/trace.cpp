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

#include "patrol/trace.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "patrol/errors.hpp"

namespace patrol {

namespace {

using nlohmann::json;

std::string hex_encode(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

std::string hex_decode(const std::string& hex, int line) {
    if (hex.size() % 2 != 0) {
        throw trace_error(trace_error::kind::schema, line,
                          "opaque hex payload has odd length");
    }
    std::string out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw trace_error(trace_error::kind::schema, line,
                              "opaque hex payload has a non-hex digit");
        }
        out.push_back(static_cast<char>((hi << 4) | lo));
    }
    return out;
}

[[noreturn]] void schema_fail(int line, const std::string& msg) {
    throw trace_error(trace_error::kind::schema, line, msg);
}

template <typename T>
T get_field(const json& j, const char* key, int line) {
    auto it = j.find(key);
    if (it == j.end()) {
        schema_fail(line, std::string("missing field '") + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        schema_fail(line, std::string("field '") + key + "' has the wrong type");
    }
}

const char* arg_kind_name(arg_kind k) {
    switch (k) {
    case arg_kind::path: return "path";
    case arg_kind::string_list: return "string_list";
    case arg_kind::integer: return "integer";
    case arg_kind::fd: return "fd";
    case arg_kind::flags: return "flags";
    case arg_kind::opaque: return "opaque";
    }
    return "opaque";
}

json arg_to_json(const syscall_arg& arg) {
    json j;
    j["kind"] = arg_kind_name(arg.kind);
    switch (arg.kind) {
    case arg_kind::path:
        j["value"] = arg.text;
        break;
    case arg_kind::string_list:
        j["value"] = arg.list;
        break;
    case arg_kind::integer:
    case arg_kind::fd:
    case arg_kind::flags:
        j["value"] = arg.num;
        break;
    case arg_kind::opaque:
        j["hex"] = hex_encode(arg.text);
        break;
    }
    return j;
}

syscall_arg arg_from_json(const json& j, int line) {
    std::string kind = get_field<std::string>(j, "kind", line);
    if (kind == "path") {
        return syscall_arg::make_path(get_field<std::string>(j, "value", line));
    }
    if (kind == "string_list") {
        return syscall_arg::make_list(
            get_field<std::vector<std::string>>(j, "value", line));
    }
    if (kind == "integer") {
        return syscall_arg::make_int(get_field<std::int64_t>(j, "value", line));
    }
    if (kind == "fd") {
        return syscall_arg::make_fd(get_field<std::int64_t>(j, "value", line));
    }
    if (kind == "flags") {
        return syscall_arg::make_flags(get_field<std::int64_t>(j, "value", line));
    }
    if (kind == "opaque") {
        return syscall_arg::make_opaque(
            hex_decode(get_field<std::string>(j, "hex", line), line));
    }
    schema_fail(line, "unknown arg kind '" + kind + "'");
}

} // namespace

bool trace_data::is_labeled(std::uint64_t seq) const {
    return std::binary_search(labels.begin(), labels.end(), seq);
}

json event_to_json(const raw_event& ev) {
    json j;
    j["seq"] = ev.seq;
    j["timestamp_ns"] = ev.timestamp_ns;
    j["syscall"] = ev.syscall;
    json args = json::array();
    for (const auto& arg : ev.args) {
        args.push_back(arg_to_json(arg));
    }
    j["args"] = std::move(args);
    j["pid"] = ev.pid;
    j["tid"] = ev.tid;
    j["uid"] = ev.uid;
    j["cgroup_id"] = ev.cgroup_id;
    j["comm"] = ev.comm;
    return j;
}

raw_event event_from_json(const json& j, int line) {
    if (!j.is_object()) {
        schema_fail(line, "event line is not a JSON object");
    }
    raw_event ev;
    ev.seq = get_field<std::uint64_t>(j, "seq", line);
    ev.timestamp_ns = get_field<std::uint64_t>(j, "timestamp_ns", line);
    ev.syscall = get_field<std::string>(j, "syscall", line);
    if (!is_monitored(ev.syscall) && ev.syscall != "other") {
        schema_fail(line, "syscall '" + ev.syscall +
                              "' is outside the monitored set");
    }
    auto args = j.find("args");
    if (args == j.end() || !args->is_array()) {
        schema_fail(line, "missing or non-array 'args'");
    }
    if (args->size() > kMaxArgs) {
        schema_fail(line, "event carries more than " +
                              std::to_string(kMaxArgs) + " args");
    }
    for (const auto& a : *args) {
        ev.args.push_back(arg_from_json(a, line));
    }
    ev.pid = get_field<std::uint32_t>(j, "pid", line);
    ev.tid = get_field<std::uint32_t>(j, "tid", line);
    ev.uid = get_field<std::uint32_t>(j, "uid", line);
    ev.cgroup_id = get_field<std::uint64_t>(j, "cgroup_id", line);
    ev.comm = truncate_comm(get_field<std::string>(j, "comm", line));
    return ev;
}

json registry_to_json(const registry_snapshot& snap) {
    json containers = json::array();
    for (const auto& [cgroup_id, ctx] : snap.containers) {
        json c;
        c["cgroup_id"] = cgroup_id;
        c["container_id"] = ctx.container_id;
        c["image"] = ctx.image;
        c["pod"] = ctx.pod;
        containers.push_back(std::move(c));
    }
    json processes = json::array();
    for (const auto& p : snap.processes) {
        json e;
        e["pid"] = p.pid;
        e["ppid"] = p.ppid;
        e["comm"] = p.comm;
        e["exe"] = p.exe;
        e["uid"] = p.uid;
        processes.push_back(std::move(e));
    }
    json j;
    j["containers"] = std::move(containers);
    j["processes"] = std::move(processes);
    return j;
}

registry_snapshot registry_from_json(const json& j, int line) {
    if (!j.is_object()) {
        schema_fail(line, "'registry' is not an object");
    }
    registry_snapshot snap;
    auto containers = j.find("containers");
    auto processes = j.find("processes");
    if (containers == j.end() || !containers->is_array() ||
        processes == j.end() || !processes->is_array()) {
        schema_fail(line, "'registry' needs 'containers' and 'processes' arrays");
    }
    for (const auto& c : *containers) {
        container_context ctx;
        ctx.container_id = get_field<std::string>(c, "container_id", line);
        ctx.image = get_field<std::string>(c, "image", line);
        ctx.pod = get_field<std::string>(c, "pod", line);
        snap.containers.emplace_back(get_field<std::uint64_t>(c, "cgroup_id", line),
                                     std::move(ctx));
    }
    for (const auto& p : *processes) {
        process_entry entry;
        entry.pid = get_field<std::uint32_t>(p, "pid", line);
        entry.ppid = get_field<std::uint32_t>(p, "ppid", line);
        entry.comm = get_field<std::string>(p, "comm", line);
        entry.exe = get_field<std::string>(p, "exe", line);
        entry.uid = get_field<std::uint32_t>(p, "uid", line);
        snap.processes.push_back(std::move(entry));
    }
    return snap;
}

void save_trace(const trace_data& trace, std::ostream& out) {
    json header;
    header["version"] = trace.version;
    if (!trace.scenario.empty()) {
        header["scenario"] = trace.scenario;
    }
    header["registry"] = registry_to_json(trace.registry);
    header["labels"] = trace.labels;
    out << header.dump() << '\n';
    for (const auto& ev : trace.events) {
        out << event_to_json(ev).dump() << '\n';
    }
}

void save_trace_file(const trace_data& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw trace_error(trace_error::kind::io, 0,
                          "cannot open '" + path + "' for writing");
    }
    save_trace(trace, out);
    out.flush();
    if (!out) {
        throw trace_error(trace_error::kind::io, 0,
                          "short write to '" + path + "'");
    }
}

trace_data load_trace(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw trace_error(trace_error::kind::schema, 1, "trace has no header line");
    }
    json header = json::parse(line, nullptr, false);
    if (header.is_discarded() || !header.is_object()) {
        schema_fail(1, "header line is not a JSON object");
    }
    trace_data trace;
    trace.version = get_field<int>(header, "version", 1);
    if (trace.version != kTraceVersion) {
        throw trace_error(trace_error::kind::version_mismatch, 1,
                          "trace version " + std::to_string(trace.version) +
                              " is not supported (expected " +
                              std::to_string(kTraceVersion) + ")");
    }
    if (auto it = header.find("scenario"); it != header.end()) {
        if (!it->is_string()) schema_fail(1, "'scenario' must be a string");
        trace.scenario = it->get<std::string>();
    }
    auto reg = header.find("registry");
    if (reg == header.end()) schema_fail(1, "header is missing 'registry'");
    trace.registry = registry_from_json(*reg, 1);
    trace.labels = get_field<std::vector<std::uint64_t>>(header, "labels", 1);
    if (!std::is_sorted(trace.labels.begin(), trace.labels.end())) {
        schema_fail(1, "'labels' must be sorted");
    }

    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            schema_fail(line_no, "event line is not valid JSON");
        }
        raw_event ev = event_from_json(j, line_no);
        if (ev.seq != trace.events.size()) {
            schema_fail(line_no, "seq " + std::to_string(ev.seq) +
                                     " breaks the gapless order (expected " +
                                     std::to_string(trace.events.size()) + ")");
        }
        trace.events.push_back(std::move(ev));
    }
    for (std::uint64_t seq : trace.labels) {
        if (seq >= trace.events.size()) {
            schema_fail(1, "label seq " + std::to_string(seq) +
                               " does not reference an event");
        }
    }
    return trace;
}

trace_data load_trace_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw trace_error(trace_error::kind::io, 0,
                          "cannot open trace file '" + path + "'");
    }
    return load_trace(in);
}

} // namespace patrol
