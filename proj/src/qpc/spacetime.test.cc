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

#include "qpc/spacetime.h"

#include <cmath>

#include "gtest/gtest.h"

using namespace qpc;

TEST(spacetime, latency) {
    ASSERT_EQ(latency(Position1D::at(0), Position1D::at(299792458)), 1.0);
    ASSERT_EQ(latency(Position1D::at(12.5), Position1D::at(12.5)), 0.0);
    ASSERT_NEAR(latency(Position1D::at(0), Position1D::at(3.0e5)), 1.0007e-3, 1e-7);
    ASSERT_EQ(latency(Position1D::at(-3.0e5), Position1D::at(0)), latency(Position1D::at(0), Position1D::at(3.0e5)));
}

TEST(spacetime, validation) {
    ASSERT_THROW(Position1D::at(INFINITY), std::invalid_argument);
    ASSERT_THROW(Position1D::at(NAN), std::invalid_argument);
    ASSERT_THROW(TimeStamp::at(-1), std::invalid_argument);
    ASSERT_THROW(TimeStamp::at(INFINITY), std::invalid_argument);
    ASSERT_NO_THROW(TimeStamp::at(0));
}

TEST(spacetime, check_window) {
    double d = 3.0e5;
    double dt = d / kSpeedOfLight;
    TimeStamp t = TimeStamp::at(dt);
    ASSERT_TRUE(check_window(t, TimeStamp::at(t.seconds + dt), d, 0));
    // Revealing from twice as far.
    ASSERT_FALSE(check_window(t, TimeStamp::at(t.seconds + 2 * dt), d, 0));
    // One millisecond late.
    ASSERT_FALSE(check_window(t, TimeStamp::at(t.seconds + dt + 1e-3), d, 0));
    ASSERT_TRUE(check_window(t, TimeStamp::at(t.seconds + dt + 1e-3), d, 2e-3));
    // Early answers fail too.
    ASSERT_FALSE(check_window(t, TimeStamp::at(t.seconds + dt / 2), d, 0));
    // T < t
    ASSERT_FALSE(check_window(TimeStamp::at(1), TimeStamp::at(0.5), 0, 10));
}

TEST(spacetime, cross_check_clocks) {
    double d = 3.0e5;
    double dt = d / kSpeedOfLight;
    TimingWindow bob{TimeStamp::at(dt), TimeStamp::at(2 * dt), d};
    TimingWindow agent{TimeStamp::at(dt), TimeStamp::at(2 * dt), d};
    ASSERT_TRUE(cross_check_clocks(bob, agent, 0));
    TimingWindow late_agent{TimeStamp::at(dt), TimeStamp::at(2 * dt + 1e-4), d};
    ASSERT_FALSE(cross_check_clocks(bob, late_agent, 0));
    // Each window passes on its own distance but elapsed times differ.
    TimingWindow far_agent{TimeStamp::at(dt), TimeStamp::at(3 * dt), 2 * d};
    ASSERT_TRUE(check_window(far_agent, 0));
    ASSERT_FALSE(cross_check_clocks(bob, far_agent, 0));
}

TEST(event_queue, empty) {
    EventQueue<int> q;
    auto log = run_until_idle(q, [](const EventQueue<int>::Entry &, EventQueue<int> &) {});
    ASSERT_TRUE(log.empty());
}

TEST(event_queue, time_then_sequence_order) {
    EventQueue<int> q;
    q.schedule(TimeStamp::at(2), 0);
    q.schedule(TimeStamp::at(1), 1);
    q.schedule(TimeStamp::at(2), 2);
    q.schedule(TimeStamp::at(1), 3);
    std::vector<int> seen;
    run_until_idle(q, [&](const EventQueue<int>::Entry &e, EventQueue<int> &) { seen.push_back(e.event); });
    ASSERT_EQ(seen, (std::vector<int>{1, 3, 0, 2}));
}

TEST(event_queue, delivery_after_latency) {
    EventQueue<std::string> q;
    auto a = Position1D::at(0);
    auto c = Position1D::at(-3.0e5);
    q.schedule(TimeStamp::at(0), "send");
    std::vector<std::pair<std::string, double>> seen;
    run_until_idle(q, [&](const EventQueue<std::string>::Entry &e, EventQueue<std::string> &queue) {
        seen.push_back({e.event, e.time.seconds});
        if (e.event == "send") {
            queue.schedule(TimeStamp::at(e.time.seconds + latency(a, c)), "deliver");
        }
    });
    ASSERT_EQ(seen.size(), 2u);
    ASSERT_EQ(seen[1].second, 3.0e5 / kSpeedOfLight);
}

TEST(event_queue, rejects_past_events) {
    EventQueue<int> q;
    q.schedule(TimeStamp::at(1), 0);
    ASSERT_THROW(
        run_until_idle(q, [](const EventQueue<int>::Entry &, EventQueue<int> &queue) {
            queue.schedule(TimeStamp::at(0.5), 1);
        }),
        std::logic_error);
}

TEST(event_queue, malformed_propagates) {
    EventQueue<int> q;
    q.schedule(TimeStamp::at(0), 0);
    ASSERT_THROW(
        run_until_idle(q, [](const EventQueue<int>::Entry &, EventQueue<int> &) { throw MalformedMessage("bad"); }),
        MalformedMessage);
}

TEST(event_queue, deterministic_log) {
    auto run = [] {
        EventQueue<int> q;
        for (int k = 0; k < 10; k++) {
            q.schedule(TimeStamp::at((k * 7) % 3), k);
        }
        return run_until_idle(q, [](const EventQueue<int>::Entry &, EventQueue<int> &) {});
    };
    ASSERT_EQ(run(), run());
}
