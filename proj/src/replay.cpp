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

#include "patrol/replay.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

namespace patrol {

replay_report replay_into(ring_buffer<raw_event>& ring, const trace_data& trace,
                          const pacing& pace, verdict_table* verdicts,
                          std::uint32_t watchdog_ms,
                          std::vector<syscall_verdict>* returns) {
    replay_report report;
    std::uint64_t prev_ts = 0;
    bool first = true;

    for (const raw_event& ev : trace.events) {
        if (pace.timestamped && !first) {
            std::uint64_t gap = ev.timestamp_ns > prev_ts
                                    ? ev.timestamp_ns - prev_ts
                                    : 0;
            gap = std::min(gap, pace.max_gap_ns);
            if (gap > 0) {
                std::this_thread::sleep_for(std::chrono::nanoseconds(gap));
            }
        }
        prev_ts = ev.timestamp_ns;
        first = false;

        // Inline mode: register interest before the consumer can possibly
        // settle, then hold the "syscall" open until the verdict lands.
        if (verdicts != nullptr) {
            verdicts->expect(ev.seq);
        }
        std::uint64_t seq = ev.seq;
        push_status status = ring.push(ev);
        if (status == push_status::closed) {
            report.aborted = true;
            report.abort_reason = "consumer closed the ring";
            break;
        }
        if (status == push_status::dropped) {
            ++report.drop_count;
            report.dropped_seqs.push_back(seq);
            continue;
        }
        ++report.events_pushed;
        if (verdicts != nullptr) {
            syscall_verdict v = verdicts->await(seq, watchdog_ms);
            if (returns != nullptr) {
                returns->push_back(v);
            }
        }
    }
    ring.close_producer();
    return report;
}

} // namespace patrol
