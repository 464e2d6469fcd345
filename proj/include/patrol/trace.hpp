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
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "patrol/event.hpp"

namespace patrol {

inline constexpr int kTraceVersion = 1;

// In-memory form of a JSONL trace file.
//
// Line 1 is a header object: {"version", "scenario"?, "registry", "labels"}.
// Every following line is one raw event. labels lists the seq numbers of
// events that belong to injected attack behavior; everything else is
// background noise. The registry snapshot seeds enrichment so replays see
// the same container and process state the recorder saw.
struct trace_data {
    int version = kTraceVersion;
    std::string scenario; // empty = not recorded from a named scenario
    registry_snapshot registry;
    std::vector<std::uint64_t> labels; // sorted, each a valid event seq
    std::vector<raw_event> events;     // seq == position, gapless from 0

    bool is_labeled(std::uint64_t seq) const;
    bool operator==(const trace_data&) const = default;
};

// Event (de)serialization used for traces. Opaque argument bytes are hex
// encoded so payloads with NULs or invalid UTF-8 survive the JSON layer.
nlohmann::json event_to_json(const raw_event& ev);
raw_event event_from_json(const nlohmann::json& j, int line);

nlohmann::json registry_to_json(const registry_snapshot& snap);
registry_snapshot registry_from_json(const nlohmann::json& j, int line);

// Serialization is deterministic: same trace_data, same bytes.
void save_trace(const trace_data& trace, std::ostream& out);
void save_trace_file(const trace_data& trace, const std::string& path);

// Validates while loading: header shape, version, gapless seqs, args within
// the slot limit, syscall within the monitored set (plus "other" for noise
// the probe layer saw but does not decode), labels referencing real seqs.
// Throws trace_error with the offending 1-based line.
trace_data load_trace(std::istream& in);
trace_data load_trace_file(const std::string& path);

} // namespace patrol
