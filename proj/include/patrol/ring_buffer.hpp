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
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "patrol/errors.hpp"

namespace patrol {

// How the transport reacts when the buffer is full.
//
//   observe        the producer never blocks; a push into a full buffer
//                  drops the arriving element and bumps drop_count
//   inline_enforce the producer blocks until space frees up; no element is
//                  ever dropped
enum class pipeline_mode { observe, inline_enforce };

inline std::string to_string(pipeline_mode m) {
    return m == pipeline_mode::observe ? "observe" : "inline";
}

inline std::optional<pipeline_mode> pipeline_mode_from(const std::string& s) {
    if (s == "observe") return pipeline_mode::observe;
    if (s == "inline") return pipeline_mode::inline_enforce;
    return std::nullopt;
}

enum class push_status {
    pushed,  // element stored
    dropped, // observe mode, buffer full, element discarded
    closed,  // consumer closed its end, element discarded
};

// Bounded single-producer single-consumer queue modeling the kernel-to-user
// ring. One producer thread pushes, one consumer thread pops; no other
// concurrent use is supported.
//
// Shutdown protocol:
//   - close_producer(): no more pushes will come. The consumer drains what
//     is buffered, then pop() returns nullopt.
//   - close_consumer(): the consumer abandoned the queue (pipeline abort).
//     A blocked producer wakes immediately and push() reports closed.
//
// The implementation is a mutex with two condition variables. The box this
// targets schedules producer and consumer on shared cores, where spinning
// only steals cycles from the peer thread, so every wait is a real wait.
template <typename T>
class ring_buffer {
public:
    ring_buffer(std::size_t capacity, pipeline_mode mode)
        : m_mode(mode), m_capacity(checked_capacity(capacity)),
          m_mask(m_capacity - 1), m_slots(m_capacity) {}

    ring_buffer(const ring_buffer&) = delete;
    ring_buffer& operator=(const ring_buffer&) = delete;

    push_status push(T value) {
        std::unique_lock lock(m_mutex);
        if (m_mode == pipeline_mode::inline_enforce) {
            m_not_full.wait(lock, [&] {
                return m_count < m_capacity || m_consumer_closed;
            });
        }
        if (m_consumer_closed) return push_status::closed;
        if (m_count == m_capacity) {
            // observe mode: the arriving element is the one that is lost
            ++m_drop_count;
            return push_status::dropped;
        }
        m_slots[(m_head + m_count) & m_mask] = std::move(value);
        ++m_count;
        lock.unlock();
        m_not_empty.notify_one();
        return push_status::pushed;
    }

    // Blocks until an element arrives or the producer closed with the buffer
    // empty (then nullopt, the end-of-stream signal).
    std::optional<T> pop() {
        std::unique_lock lock(m_mutex);
        m_not_empty.wait(lock, [&] { return m_count > 0 || m_producer_closed; });
        if (m_count == 0) return std::nullopt;
        T value = std::move(m_slots[m_head]);
        m_head = (m_head + 1) & m_mask;
        --m_count;
        lock.unlock();
        m_not_full.notify_one();
        return value;
    }

    void close_producer() {
        {
            std::lock_guard lock(m_mutex);
            m_producer_closed = true;
        }
        m_not_empty.notify_all();
    }

    void close_consumer() {
        {
            std::lock_guard lock(m_mutex);
            m_consumer_closed = true;
        }
        m_not_full.notify_all();
    }

    std::uint64_t drop_count() const {
        std::lock_guard lock(m_mutex);
        return m_drop_count;
    }

    std::size_t size() const {
        std::lock_guard lock(m_mutex);
        return m_count;
    }

    std::size_t capacity() const { return m_capacity; }
    pipeline_mode mode() const { return m_mode; }

private:
    static std::size_t checked_capacity(std::size_t c) {
        if (c < 2 || (c & (c - 1)) != 0) {
            throw config_error(
                "ring capacity must be a power of two, at least 2");
        }
        return c;
    }

    const pipeline_mode m_mode;
    const std::size_t m_capacity;
    const std::size_t m_mask;

    mutable std::mutex m_mutex;
    std::condition_variable m_not_empty;
    std::condition_variable m_not_full;

    std::vector<T> m_slots;
    std::size_t m_head = 0;
    std::size_t m_count = 0;
    std::uint64_t m_drop_count = 0;
    bool m_producer_closed = false;
    bool m_consumer_closed = false;
};

} // namespace patrol
