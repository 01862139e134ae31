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

#include <algorithm>
#include <cmath>
#include <limits>

namespace qpc {

Position1D Position1D::at(double meters) {
    if (!std::isfinite(meters)) {
        throw std::invalid_argument("position must be finite");
    }
    return Position1D{meters};
}

TimeStamp TimeStamp::at(double seconds) {
    if (!std::isfinite(seconds) || seconds < 0) {
        throw std::invalid_argument("time stamp must be finite and non-negative");
    }
    return TimeStamp{seconds};
}

double distance(Position1D p1, Position1D p2) {
    return std::abs(p1.meters - p2.meters);
}

double latency(Position1D p1, Position1D p2) {
    return distance(p1, p2) / kSpeedOfLight;
}

bool check_window(TimeStamp t, TimeStamp T, double distance_m, double epsilon) {
    if (T < t) {
        return false;
    }
    double rounding = 4 * std::numeric_limits<double>::epsilon() * T.seconds;
    return std::abs((T.seconds - t.seconds) - distance_m / kSpeedOfLight) <= epsilon + rounding;
}

bool check_window(const TimingWindow &window, double epsilon) {
    return check_window(window.start, window.end, window.distance_m, epsilon);
}

bool cross_check_clocks(const TimingWindow &bob_window, const TimingWindow &agent_window, double epsilon) {
    if (!check_window(bob_window, epsilon) || !check_window(agent_window, epsilon)) {
        return false;
    }
    double rounding = 4 * std::numeric_limits<double>::epsilon() *
                      std::max(bob_window.end.seconds, agent_window.end.seconds);
    return std::abs(bob_window.elapsed() - agent_window.elapsed()) <= epsilon + rounding;
}

}  // namespace qpc
