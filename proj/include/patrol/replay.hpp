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
#include <string>
#include <vector>

#include "patrol/enforcer.hpp"
#include "patrol/ring_buffer.hpp"
#include "patrol/trace.hpp"

namespace patrol {

// Producer-side pacing. Default is as fast as the ring accepts; timestamped
// mode sleeps the recorded inter-event gap, capped so pathological gaps in a
// trace cannot stall a replay.
struct pacing {
    bool timestamped = false;
    std::uint64_t max_gap_ns = 10'000'000; // 10ms cap per gap
};

struct replay_report {
    std::uint64_t events_pushed = 0; // accepted by the ring
    std::uint64_t drop_count = 0;    // observe-mode drops at the ring
    std::vector<std::uint64_t> dropped_seqs;
    bool aborted = false;            // consumer went away mid-replay
    std::string abort_reason;
};

// Feeds a trace into the ring on the calling thread, closing the producer
// side when done. In inline mode (verdicts given) each event is registered
// in the verdict table before the push and the call blocks until its
// verdict settles or the watchdog expires; per-event syscall returns are
// appended to *returns when requested.
replay_report replay_into(ring_buffer<raw_event>& ring, const trace_data& trace,
                          const pacing& pace, verdict_table* verdicts,
                          std::uint32_t watchdog_ms,
                          std::vector<syscall_verdict>* returns = nullptr);

} // namespace patrol
