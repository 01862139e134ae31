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

#ifndef QPC_HARNESS_H
#define QPC_HARNESS_H

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qpc/adversary.h"
#include "qpc/protocol.h"

namespace qpc {

struct RunConfig {
    size_t pairs = 1;
    RunMode mode = RunMode::kSymbolic;
    Geometry geometry = canonical_geometry(3.0e5);
    /// Permit |A - B| != |A - C|.
    bool allow_asymmetric_geometry = false;
    CommitmentValue commitment = CommitmentValue::kBit0;
    AdversarySpec adversary;
    UnitaryDistribution unitaries = UnitaryDistribution::kClifford;
    std::vector<PauliLabel> charlie_paulis = {kPauliX, kPauliZ, kPauliZX};
    size_t trials = 1;
    uint64_t seed = 0;
    double epsilon_s = 0;
    double processing_delay_s = 0;
    /// Worker threads for run_trials; results do not depend on it.
    size_t threads = 1;

    /// Fails with ConfigError.
    void validate() const;
    ProtocolSettings protocol_settings() const;

    nlohmann::ordered_json to_json() const;
    /// Unknown fields and ill-typed values fail with ConfigError. Missing
    /// fields keep their defaults.
    static RunConfig from_json(const nlohmann::ordered_json &j);
};

struct Interval {
    double low = 0;
    double high = 0;
};

/// 95% Wilson score interval for `successes` out of `n`.
Interval wilson(size_t successes, size_t n);

struct RateEstimate {
    size_t count = 0;
    size_t n = 0;
    double rate = 0;
    Interval ci95;
};

RateEstimate estimate_rate(size_t count, size_t n);

struct SummaryStats {
    size_t n = 0;
    double mean = 0;
    double min = 0;
    double max = 0;
};

struct RunReport {
    RunConfig config;
    size_t trials = 0;
    /// Keyed by Verdict::str(), e.g. "ACCEPT:BIT0", "REJECT:TIMING_VIOLATION".
    std::map<std::string, size_t> verdict_counts;
    std::map<std::string, size_t> reject_reasons;
    RateEstimate acceptance;
    /// REJECT of any kind.
    RateEstimate detection;
    /// Runs in which any pair's state check failed.
    size_t state_mismatch_runs = 0;
    size_t timing_violation_runs = 0;
    size_t intercepted_qubits = 0;
    /// (T - t) - d/c and (T' - t') - d/c over runs that reached the timing checks.
    SummaryStats bob_window_excess_s;
    SummaryStats agent_window_excess_s;
};

/// Runs `config.trials` independent protocol runs; trial k uses seed
/// derive_seed(config.seed, k). Deterministic for any thread count.
RunReport run_trials(const RunConfig &config);

/// One run with the config's adversary and seed derive_seed(config.seed, trial).
ProtocolTranscript run_single(const RunConfig &config, uint64_t trial = 0);

enum class ReportFormat { kJson, kText };
std::optional<ReportFormat> parse_report_format(std::string_view text);

nlohmann::ordered_json to_json(const RunReport &report);
std::string emit_report(const RunReport &report, ReportFormat format);

// ---------------------------------------------------------------------------
// Worked example.

enum class PaperVariant { kHonest, kCheating };
std::optional<PaperVariant> parse_paper_variant(std::string_view text);

struct NamedCheck {
    std::string name;
    std::string expected;
    std::string actual;
    bool ok = false;
};

struct PaperExampleResult {
    ProtocolTranscript transcript;
    std::vector<NamedCheck> checks;
    bool passed = false;
};

/// The N=3 worked example with every random choice forced. Bob's private
/// choices (bits, U_n, his outcomes), which the example leaves symbolic, are
/// fixed constants.
PaperExampleResult paper_example(PaperVariant variant, RunMode mode = RunMode::kSymbolic);
nlohmann::ordered_json to_json(const PaperExampleResult &result);
/// One line per check, then PASS or FAIL.
std::string to_text(const PaperExampleResult &result);

// ---------------------------------------------------------------------------
// Hiding test.

struct HidingTestOptions {
    CommitmentValue value_a = CommitmentValue::kBit0;
    CommitmentValue value_b = CommitmentValue::kBit1;
    size_t trials = 10000;
    size_t bootstrap = 200;
    /// Appends Alice's committed label of pair 0 to Bob's view (control).
    bool leak = false;
};

struct HidingTestResult {
    HidingTestOptions options;
    size_t distinct_views = 0;
    /// Raw total-variation distance between the two empirical view laws.
    double tv_observed = 0;
    /// Mean TV between two samples drawn from the pooled views.
    double tv_null_mean = 0;
    /// tv_observed - tv_null_mean: the distance beyond sampling noise.
    double tv_excess = 0;
    /// 95% interval for the excess from the pooled bootstrap.
    Interval excess_ci95;
};

/// Collects Bob's pre-reveal view (dummy arrival time and, per pair, his B-C
/// label, prepared bit and teleport outcome) over honest runs for each
/// value. Uses `config` for everything except commitment and adversary.
HidingTestResult hiding_test(const RunConfig &config, const HidingTestOptions &options);
nlohmann::ordered_json to_json(const HidingTestResult &result);
std::string to_text(const HidingTestResult &result);
/// The 95% interval of the excess contains 0.
bool views_indistinguishable(const HidingTestResult &result);

/// TV distance between two samples of equal weight.
double total_variation(const std::map<std::string, size_t> &a, size_t n_a, const std::map<std::string, size_t> &b,
                       size_t n_b);

// ---------------------------------------------------------------------------
// Algebra self-check.

struct AlgebraSuite {
    std::string name;
    size_t cases = 0;
    size_t failures = 0;
    double min_fidelity = 1;
};

struct AlgebraReport {
    std::vector<AlgebraSuite> suites;
    bool passed = false;
};

/// Checks every symbolic rule against the statevector simulator: swap (64),
/// teleport correction (16), reveal Pauli (4), Pauli side independence (16)
/// and Clifford conjugation (24 x 4).
AlgebraReport validate_algebra();
nlohmann::ordered_json to_json(const AlgebraReport &report);
std::string to_text(const AlgebraReport &report);

}  // namespace qpc

#endif
