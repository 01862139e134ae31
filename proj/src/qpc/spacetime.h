// Copyright 2026 The qpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QPC_SPACETIME_H
#define QPC_SPACETIME_H

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpc {

/// Meters per second. Not configurable: position soundness rests on it.
inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Coordinate on the line shared by all parties, in meters.
struct Position1D {
    double meters = 0;

    /// Fails with std::invalid_argument for a non-finite coordinate.
    static Position1D at(double meters);
    bool operator==(const Position1D &) const = default;
};

/// Simulated seconds since the commitment message left Alice.
struct TimeStamp {
    double seconds = 0;

    /// Fails with std::invalid_argument unless finite and non-negative.
    static TimeStamp at(double seconds);
    auto operator<=>(const TimeStamp &) const = default;
};

double distance(Position1D p1, Position1D p2);

/// |p1 - p2| / c.
double latency(Position1D p1, Position1D p2);

/// One party's record of when it first heard from Alice (`start`) and when
/// her reveal arrived (`end`), for an expected one-way distance.
struct TimingWindow {
    TimeStamp start;
    TimeStamp end;
    double distance_m = 0;

    double elapsed() const {
        return end.seconds - start.seconds;
    }
};

/// Passes iff |(T - t) - d/c| <= epsilon. A few ulps of T are allowed on
/// top of epsilon so that exact-arithmetic schedules are not failed by the
/// rounding of the subtraction.
bool check_window(TimeStamp t, TimeStamp T, double distance_m, double epsilon);
bool check_window(const TimingWindow &window, double epsilon);

/// Both windows pass individually and their elapsed times agree within
/// epsilon.
bool cross_check_clocks(const TimingWindow &bob_window, const TimingWindow &agent_window, double epsilon);

/// A handler rejected an event payload; aborts the run.
class MalformedMessage : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Pending events ordered by (time, insertion sequence).
template <typename Event>
class EventQueue {
   public:
    struct Entry {
        TimeStamp time;
        uint64_t sequence;
        Event event;
    };

    /// Events may not be scheduled before the last dequeued time.
    uint64_t schedule(TimeStamp at, Event event) {
        if (at < now_) {
            throw std::logic_error(
                "event scheduled at " + std::to_string(at.seconds) + " s, before current time " +
                std::to_string(now_.seconds) + " s");
        }
        uint64_t sequence = next_sequence_++;
        heap_.push(Entry{at, sequence, std::move(event)});
        return sequence;
    }

    bool empty() const {
        return heap_.empty();
    }
    size_t size() const {
        return heap_.size();
    }
    TimeStamp now() const {
        return now_;
    }

    Entry pop() {
        Entry entry = heap_.top();
        heap_.pop();
        now_ = entry.time;
        return entry;
    }

   private:
    struct Later {
        bool operator()(const Entry &a, const Entry &b) const {
            if (a.time.seconds != b.time.seconds) {
                return a.time.seconds > b.time.seconds;
            }
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    uint64_t next_sequence_ = 0;
    TimeStamp now_{};
};

struct ProcessedEvent {
    TimeStamp time;
    uint64_t sequence;
    bool operator==(const ProcessedEvent &) const = default;
};

/// Drains the queue in order, calling handler(entry, queue) for each event.
/// Handlers may schedule further events. MalformedMessage from a handler
/// propagates to the caller.
template <typename Event, typename Handler>
std::vector<ProcessedEvent> run_until_idle(EventQueue<Event> &queue, Handler &&handler) {
    std::vector<ProcessedEvent> log;
    while (!queue.empty()) {
        auto entry = queue.pop();
        log.push_back({entry.time, entry.sequence});
        handler(entry, queue);
    }
    return log;
}

}  // namespace qpc

#endif
