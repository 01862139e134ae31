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

#include "qpc/harness.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

namespace qpc {

namespace {

using json = nlohmann::ordered_json;

constexpr double kZ95 = 1.959963984540054;
constexpr uint64_t kBootstrapStream = 0xB0075742;
constexpr uint64_t kMaxPairs = 4096;

template <typename T>
T require_number(const json &value, const std::string &field) {
    if constexpr (std::is_floating_point_v<T>) {
        if (!value.is_number()) {
            throw ConfigError(field, "must be a number");
        }
        double x = value.get<double>();
        if (!std::isfinite(x)) {
            throw ConfigError(field, "must be finite");
        }
        return x;
    } else {
        if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<int64_t>() >= 0)) {
            throw ConfigError(field, "must be a non-negative integer");
        }
        return value.get<T>();
    }
}

std::string require_string(const json &value, const std::string &field) {
    if (!value.is_string()) {
        throw ConfigError(field, "must be a string");
    }
    return value.get<std::string>();
}

template <typename T, typename Parser>
T require_enum(const json &value, const std::string &field, Parser parse) {
    auto text = require_string(value, field);
    auto parsed = parse(text);
    if (!parsed) {
        throw ConfigError(field, "unknown value \"" + text + "\"");
    }
    return *parsed;
}

Geometry parse_geometry(const json &value) {
    if (!value.is_object()) {
        throw ConfigError("geometry", "must be an object");
    }
    if (value.contains("d_m")) {
        if (value.size() != 1) {
            throw ConfigError("geometry", "give either d_m or alice_m/bob_m/charlie_m");
        }
        return canonical_geometry(require_number<double>(value["d_m"], "geometry.d_m"));
    }
    Geometry g;
    for (const auto &key : {"alice_m", "bob_m", "charlie_m"}) {
        if (!value.contains(key)) {
            throw ConfigError(std::string("geometry.") + key, "required");
        }
    }
    for (const auto &[key, item] : value.items()) {
        double x = require_number<double>(item, "geometry." + key);
        if (key == "alice_m") {
            g.alice = Position1D::at(x);
        } else if (key == "bob_m") {
            g.bob = Position1D::at(x);
        } else if (key == "charlie_m") {
            g.charlie = Position1D::at(x);
        } else {
            throw ConfigError("geometry." + key, "unknown field");
        }
    }
    return g;
}

SummaryStats summarize(const std::vector<double> &values) {
    SummaryStats s;
    s.n = values.size();
    if (values.empty()) {
        return s;
    }
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    double total = 0;
    for (double v : values) {
        total += v;
    }
    s.mean = total / values.size();
    return s;
}

json stats_json(const SummaryStats &s) {
    return {{"n", s.n}, {"mean", s.mean}, {"min", s.min}, {"max", s.max}};
}

json rate_json(const RateEstimate &r) {
    return {{"count", r.count}, {"n", r.n}, {"rate", r.rate}, {"ci95", {r.ci95.low, r.ci95.high}}};
}

std::string fixed(double x, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << x;
    return out.str();
}

std::string scientific(double x) {
    std::ostringstream out;
    out << std::scientific << std::setprecision(3) << x;
    return out.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

void RunConfig::validate() const {
    if (pairs < 1 || pairs > kMaxPairs) {
        throw ConfigError("pairs", "must be in [1, " + std::to_string(kMaxPairs) + "]");
    }
    if (trials < 1) {
        throw ConfigError("trials", "must be >= 1");
    }
    if (threads < 1) {
        throw ConfigError("threads", "must be >= 1");
    }
    if (!(std::isfinite(epsilon_s) && epsilon_s >= 0)) {
        throw ConfigError("epsilon_s", "must be finite and >= 0");
    }
    if (!(std::isfinite(processing_delay_s) && processing_delay_s >= 0)) {
        throw ConfigError("processing_delay_s", "must be finite and >= 0");
    }
    if (charlie_paulis.empty()) {
        throw ConfigError("charlie_paulis", "must not be empty");
    }
    double ab = distance(geometry.alice, geometry.bob);
    double ac = distance(geometry.alice, geometry.charlie);
    if (ab == 0 || ac == 0) {
        throw ConfigError("geometry", "Bob and Charlie must be away from Alice");
    }
    if (!allow_asymmetric_geometry && ab != ac) {
        throw ConfigError("geometry", "|A-B| != |A-C|; set allow_asymmetric_geometry to permit this");
    }
    if (mode == RunMode::kSymbolic && unitaries != UnitaryDistribution::kClifford) {
        throw ConfigError("unitaries", "haar unitaries need oracle mode");
    }
    adversary.validate();
    if (adversary.kind == AdversaryKind::kEavesdropIntercept && mode != RunMode::kOracle) {
        throw ConfigError("adversary.kind", "EAVESDROP_INTERCEPT needs oracle mode");
    }
    if (!adversary.pauli_guesses.empty() && adversary.pauli_guesses.size() != pairs) {
        throw ConfigError("adversary.pauli_guesses", "needs one guess per pair");
    }
}

ProtocolSettings RunConfig::protocol_settings() const {
    ProtocolSettings s;
    s.pairs = pairs;
    s.mode = mode;
    s.geometry = geometry;
    s.commitment = commitment;
    s.unitaries = unitaries;
    s.charlie_paulis = charlie_paulis;
    s.epsilon_s = epsilon_s;
    s.processing_delay_s = processing_delay_s;
    return s;
}

json RunConfig::to_json() const {
    json out;
    out["pairs"] = pairs;
    out["mode"] = to_string(mode);
    out["geometry"] = {
        {"alice_m", geometry.alice.meters},
        {"bob_m", geometry.bob.meters},
        {"charlie_m", geometry.charlie.meters},
    };
    out["allow_asymmetric_geometry"] = allow_asymmetric_geometry;
    out["commitment"] = to_string(commitment);
    out["adversary"] = adversary.to_json();
    out["unitaries"] = to_string(unitaries);
    auto paulis = json::array();
    for (auto p : charlie_paulis) {
        paulis.push_back(p.str());
    }
    out["charlie_paulis"] = paulis;
    out["trials"] = trials;
    out["seed"] = seed;
    out["epsilon_s"] = epsilon_s;
    out["processing_delay_s"] = processing_delay_s;
    out["threads"] = threads;
    return out;
}

RunConfig RunConfig::from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("", "config must be a JSON object");
    }
    RunConfig c;
    for (const auto &[key, value] : j.items()) {
        if (key == "pairs") {
            c.pairs = require_number<size_t>(value, key);
        } else if (key == "mode") {
            c.mode = require_enum<RunMode>(value, key, parse_run_mode);
        } else if (key == "geometry") {
            c.geometry = parse_geometry(value);
        } else if (key == "allow_asymmetric_geometry") {
            if (!value.is_boolean()) {
                throw ConfigError(key, "must be a boolean");
            }
            c.allow_asymmetric_geometry = value.get<bool>();
        } else if (key == "commitment") {
            c.commitment = require_enum<CommitmentValue>(value, key, parse_commitment);
        } else if (key == "adversary") {
            c.adversary = AdversarySpec::from_json(value);
        } else if (key == "unitaries") {
            c.unitaries = require_enum<UnitaryDistribution>(value, key, parse_unitary_distribution);
        } else if (key == "charlie_paulis") {
            if (!value.is_array()) {
                throw ConfigError(key, "must be an array");
            }
            c.charlie_paulis.clear();
            for (const auto &item : value) {
                c.charlie_paulis.push_back(require_enum<PauliLabel>(item, key, PauliLabel::parse));
            }
        } else if (key == "trials") {
            c.trials = require_number<size_t>(value, key);
        } else if (key == "seed") {
            c.seed = require_number<uint64_t>(value, key);
        } else if (key == "epsilon_s") {
            c.epsilon_s = require_number<double>(value, key);
        } else if (key == "processing_delay_s") {
            c.processing_delay_s = require_number<double>(value, key);
        } else if (key == "threads") {
            c.threads = require_number<size_t>(value, key);
        } else {
            throw ConfigError(key, "unknown field");
        }
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Statistics

Interval wilson(size_t successes, size_t n) {
    if (n == 0) {
        return {0, 1};
    }
    double p = double(successes) / n;
    double z2 = kZ95 * kZ95;
    double denom = 1 + z2 / n;
    double center = (p + z2 / (2 * n)) / denom;
    double half = kZ95 * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

RateEstimate estimate_rate(size_t count, size_t n) {
    return {count, n, n == 0 ? 0 : double(count) / n, wilson(count, n)};
}

// ---------------------------------------------------------------------------
// Trials

ProtocolTranscript run_single(const RunConfig &config, uint64_t trial) {
    config.validate();
    auto adversary = make_adversary(config.adversary);
    return run_protocol(config.protocol_settings(), *adversary.alice, adversary.tap.get(), derive_seed(config.seed, trial));
}

namespace {

struct TrialOutcome {
    Verdict verdict;
    bool state_mismatch = false;
    size_t intercepted = 0;
    std::optional<double> bob_excess;
    std::optional<double> agent_excess;
};

TrialOutcome run_one(const RunConfig &config, const ProtocolSettings &settings, uint64_t trial) {
    auto adversary = make_adversary(config.adversary);
    auto t = run_protocol(settings, *adversary.alice, adversary.tap.get(), derive_seed(config.seed, trial));
    TrialOutcome out;
    out.verdict = *t.verdict;
    for (const auto &check : t.bob_checks) {
        out.state_mismatch = out.state_mismatch || !check.ok;
    }
    for (const auto &truth : t.truth) {
        out.intercepted += truth.intercepted;
    }
    bool reached_timing = t.verdict->accepted || t.verdict->reason == RejectReason::kTimingViolation;
    if (reached_timing && t.bob_window && t.agent_window) {
        out.bob_excess = t.bob_window->elapsed() - t.bob_window->distance_m / kSpeedOfLight;
        out.agent_excess = t.agent_window->elapsed() - t.agent_window->distance_m / kSpeedOfLight;
    }
    return out;
}

}  // namespace

RunReport run_trials(const RunConfig &config) {
    config.validate();
    ProtocolSettings settings = config.protocol_settings();
    std::vector<TrialOutcome> outcomes(config.trials);

    size_t workers = std::min(config.threads, config.trials);
    if (workers <= 1) {
        for (size_t k = 0; k < config.trials; k++) {
            outcomes[k] = run_one(config, settings, k);
        }
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; w++) {
            pool.emplace_back([&, w] {
                try {
                    for (size_t k = w; k < config.trials; k += workers) {
                        outcomes[k] = run_one(config, settings, k);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
        for (auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    RunReport report;
    report.config = config;
    report.trials = config.trials;
    size_t accepted = 0;
    std::vector<double> bob_excess, agent_excess;
    for (const auto &o : outcomes) {
        report.verdict_counts[o.verdict.str()]++;
        if (o.verdict.accepted) {
            accepted++;
        } else {
            report.reject_reasons[to_string(o.verdict.reason)]++;
            report.timing_violation_runs += o.verdict.reason == RejectReason::kTimingViolation;
        }
        report.state_mismatch_runs += o.state_mismatch;
        report.intercepted_qubits += o.intercepted;
        if (o.bob_excess) {
            bob_excess.push_back(*o.bob_excess);
            agent_excess.push_back(*o.agent_excess);
        }
    }
    report.acceptance = estimate_rate(accepted, config.trials);
    report.detection = estimate_rate(config.trials - accepted, config.trials);
    report.bob_window_excess_s = summarize(bob_excess);
    report.agent_window_excess_s = summarize(agent_excess);
    return report;
}

std::optional<ReportFormat> parse_report_format(std::string_view text) {
    if (text == "json") {
        return ReportFormat::kJson;
    }
    if (text == "text") {
        return ReportFormat::kText;
    }
    return std::nullopt;
}

json to_json(const RunReport &report) {
    json out;
    out["schema"] = "qpc.report/1";
    out["config"] = report.config.to_json();
    out["trials"] = report.trials;
    out["verdict_counts"] = report.verdict_counts;
    out["reject_reasons"] = report.reject_reasons;
    out["acceptance"] = rate_json(report.acceptance);
    out["detection"] = rate_json(report.detection);
    out["state_mismatch_runs"] = report.state_mismatch_runs;
    out["timing_violation_runs"] = report.timing_violation_runs;
    out["intercepted_qubits"] = report.intercepted_qubits;
    out["timing"] = {
        {"bob_window_excess_s", stats_json(report.bob_window_excess_s)},
        {"agent_window_excess_s", stats_json(report.agent_window_excess_s)},
    };
    return out;
}

std::string emit_report(const RunReport &report, ReportFormat format) {
    if (format == ReportFormat::kJson) {
        return to_json(report).dump(2) + "\n";
    }
    std::ostringstream out;
    const auto &c = report.config;
    out << "mode " << to_string(c.mode) << ", pairs " << c.pairs << ", commitment " << to_string(c.commitment)
        << ", adversary " << to_string(c.adversary.kind) << ", trials " << report.trials << ", seed " << c.seed
        << "\n\n";
    auto row = [&](const std::string &name, const RateEstimate &r) {
        out << std::left << std::setw(12) << name << std::right << std::setw(10) << r.count << std::setw(10)
            << fixed(r.rate, 6) << "  [" << fixed(r.ci95.low, 6) << ", " << fixed(r.ci95.high, 6) << "]\n";
    };
    out << std::left << std::setw(12) << "metric" << std::right << std::setw(10) << "count" << std::setw(10)
        << "rate"
        << "  95% Wilson CI\n";
    row("acceptance", report.acceptance);
    row("detection", report.detection);
    out << "\n";
    for (const auto &[verdict, count] : report.verdict_counts) {
        out << std::left << std::setw(32) << verdict << std::right << std::setw(10) << count << "\n";
    }
    out << "\nstate mismatch runs   " << report.state_mismatch_runs << "\n";
    out << "timing violation runs " << report.timing_violation_runs << "\n";
    if (report.intercepted_qubits > 0) {
        out << "intercepted qubits    " << report.intercepted_qubits << "\n";
    }
    const auto &b = report.bob_window_excess_s;
    const auto &a = report.agent_window_excess_s;
    if (b.n > 0) {
        out << "(T - t) - d/c         mean " << scientific(b.mean) << " s, max " << scientific(b.max) << " s\n";
        out << "(T' - t') - d/c       mean " << scientific(a.mean) << " s, max " << scientific(a.max) << " s\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Worked example

std::optional<PaperVariant> parse_paper_variant(std::string_view text) {
    if (text == "honest") {
        return PaperVariant::kHonest;
    }
    if (text == "cheating") {
        return PaperVariant::kCheating;
    }
    return std::nullopt;
}

namespace {

BellLabel label(const char *text) {
    return *BellLabel::parse(text);
}

void add_check(std::vector<NamedCheck> &checks, std::string name, std::string expected, std::string actual) {
    bool ok = expected == actual;
    checks.push_back({std::move(name), std::move(expected), std::move(actual), ok});
}

std::string optional_str(const std::optional<BellLabel> &l) {
    return l ? l->str() : "none";
}

std::string bits(bool a, bool b) {
    return std::string{a ? '1' : '0', b ? '1' : '0'};
}

}  // namespace

PaperExampleResult paper_example(PaperVariant variant, RunMode mode) {
    ProtocolSettings s;
    s.pairs = 3;
    s.mode = mode;
    s.commitment = CommitmentValue::kBit1;
    s.forced.bc_labels = {label("01"), label("11"), label("10")};
    s.forced.charlie_paulis = {kPauliZX, kPauliZ, kPauliX};
    s.forced.charlie_outcomes = {label("00"), label("10"), label("11")};
    // Bob's private choices. The example keeps them symbolic.
    s.forced.bob_bits = {true, false, true};
    s.forced.bob_cliffords = {5, 0, 17};
    s.forced.bob_outcomes = {label("10"), label("01"), label("11")};

    PaperExampleResult result;
    std::vector<NamedCheck> &checks = result.checks;
    if (variant == PaperVariant::kHonest) {
        AliceBehavior honest;
        result.transcript = run_protocol(s, honest, nullptr, 0);
        const auto &t = result.transcript;
        const char *ac[] = {"10", "11", "00"};
        const char *swapped[] = {"11", "10", "01"};
        for (size_t k = 0; k < 3; k++) {
            std::string n = "[" + std::to_string(k + 1) + "]";
            add_check(checks, "ac_label_after_charlie" + n, ac[k], optional_str(t.truth[k].ac_label_at_bsm));
            add_check(checks, "swapped_label" + n, swapped[k], optional_str(t.truth[k].swapped_label));
            add_check(checks, "bob_swapped_label" + n, swapped[k],
                      k < t.bob_checks.size() ? t.bob_checks[k].claimed_swapped_label.str() : "none");
        }
        // [(1+ub)(1+ub')][(1+ub)ub'][ub(1+ub')]
        bool expected_k[3][2];
        for (size_t k = 0; k < 3; k++) {
            bool ub = s.forced.bob_outcomes[k].phase;
            bool ub2 = s.forced.bob_outcomes[k].parity;
            bool kk[3][2] = {{!ub, !ub2}, {!ub, ub2}, {ub, !ub2}};
            expected_k[k][0] = kk[k][0];
            expected_k[k][1] = kk[k][1];
        }
        for (size_t k = 0; k < 3; k++) {
            std::string actual = "none";
            if (k < t.bob_checks.size()) {
                actual = bits(t.bob_checks[k].correction.k, t.bob_checks[k].correction.k_prime);
            }
            add_check(checks, "k_k_prime[" + std::to_string(k + 1) + "]", bits(expected_k[k][0], expected_k[k][1]),
                      actual);
        }
        add_check(checks, "verdict", "ACCEPT:BIT1", t.verdict ? t.verdict->str() : "none");
    } else {
        FakeRevealAlice cheat(CommitmentValue::kQubitMinus, {kPauliZ, kPauliX, kPauliZX});
        result.transcript = run_protocol(s, cheat, nullptr, 0);
        const auto &t = result.transcript;
        const char *claimed_ac[] = {"00", "01", "10"};
        const char *claimed_swapped[] = {"01", "00", "11"};
        const char *actual_swapped[] = {"01", "11", "10"};
        for (size_t k = 0; k < 3; k++) {
            std::string n = "[" + std::to_string(k + 1) + "]";
            add_check(checks, "announced_label" + n, "11",
                      k < t.alice_announced_labels.size() ? t.alice_announced_labels[k].str() : "none");
            add_check(checks, "bob_ac_label" + n, claimed_ac[k],
                      k < t.bob_checks.size() ? t.bob_checks[k].claimed_ac_label.str() : "none");
            add_check(checks, "bob_swapped_label" + n, claimed_swapped[k],
                      k < t.bob_checks.size() ? t.bob_checks[k].claimed_swapped_label.str() : "none");
            add_check(checks, "actual_swapped_label" + n, actual_swapped[k], optional_str(t.truth[k].swapped_label));
        }
        bool rejected = t.verdict && !t.verdict->accepted && t.verdict->reason != RejectReason::kTimingViolation;
        checks.push_back(
            {"verdict", "REJECT (not timing)", t.verdict ? t.verdict->str() : "none", rejected});
    }
    result.passed = std::all_of(checks.begin(), checks.end(), [](const NamedCheck &c) { return c.ok; });
    return result;
}

json to_json(const PaperExampleResult &result) {
    json checks = json::array();
    for (const auto &c : result.checks) {
        checks.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"ok", c.ok}});
    }
    return {{"passed", result.passed}, {"checks", checks}, {"transcript", to_json(result.transcript)}};
}

std::string to_text(const PaperExampleResult &result) {
    std::ostringstream out;
    for (const auto &c : result.checks) {
        out << (c.ok ? "ok   " : "FAIL ") << std::left << std::setw(28) << c.name << " expected " << c.expected
            << ", got " << c.actual << "\n";
    }
    out << (result.passed ? "PASS" : "FAIL") << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Hiding test

double total_variation(const std::map<std::string, size_t> &a, size_t n_a, const std::map<std::string, size_t> &b,
                       size_t n_b) {
    double total = 0;
    for (const auto &[key, count] : a) {
        auto it = b.find(key);
        double pb = it == b.end() ? 0 : double(it->second) / n_b;
        total += std::abs(double(count) / n_a - pb);
    }
    for (const auto &[key, count] : b) {
        if (!a.contains(key)) {
            total += double(count) / n_b;
        }
    }
    return total / 2;
}

namespace {

std::string bob_view(const ProtocolTranscript &t, bool leak) {
    std::ostringstream out;
    out << std::setprecision(17);
    for (const auto &m : t.messages) {
        if (m.kind == "dummy") {
            out << m.recv_time_s;
        }
    }
    for (const auto &p : t.pairs) {
        out << '|' << p.bc_label.str() << (p.bob_prepared_bit ? '1' : '0') << p.bob_teleport_bsm.str();
    }
    if (leak) {
        out << "|leak:" << t.pairs.at(0).alice_label.str();
    }
    return out.str();
}

}  // namespace

HidingTestResult hiding_test(const RunConfig &config, const HidingTestOptions &options) {
    if (options.trials < 1 || options.bootstrap < 1) {
        throw std::invalid_argument("hiding test needs trials >= 1 and bootstrap >= 1");
    }
    RunConfig c = config;
    c.adversary = AdversarySpec{};
    c.validate();
    size_t n = options.trials;

    std::map<std::string, size_t> views[2];
    std::vector<size_t> pooled;
    std::map<std::string, size_t> index_of;
    std::vector<std::string> keys;
    AliceBehavior honest;
    for (int side = 0; side < 2; side++) {
        ProtocolSettings s = c.protocol_settings();
        s.commitment = side == 0 ? options.value_a : options.value_b;
        for (size_t k = 0; k < n; k++) {
            auto t = run_protocol(s, honest, nullptr, derive_seed(c.seed, 2 * k + side));
            std::string view = bob_view(t, options.leak);
            views[side][view]++;
            auto [it, inserted] = index_of.emplace(view, keys.size());
            if (inserted) {
                keys.push_back(view);
            }
            pooled.push_back(it->second);
        }
    }

    HidingTestResult result;
    result.options = options;
    result.distinct_views = keys.size();
    result.tv_observed = total_variation(views[0], n, views[1], n);

    // Null distribution: both samples drawn from the pooled empirical law.
    RandomStream rng(derive_seed(c.seed, kBootstrapStream));
    std::vector<double> null_tv;
    std::vector<size_t> counts_a(keys.size()), counts_b(keys.size());
    for (size_t rep = 0; rep < options.bootstrap; rep++) {
        std::fill(counts_a.begin(), counts_a.end(), 0);
        std::fill(counts_b.begin(), counts_b.end(), 0);
        for (size_t k = 0; k < n; k++) {
            counts_a[pooled[rng.below(pooled.size())]]++;
            counts_b[pooled[rng.below(pooled.size())]]++;
        }
        double tv = 0;
        for (size_t i = 0; i < keys.size(); i++) {
            tv += std::abs(double(counts_a[i]) - double(counts_b[i]));
        }
        null_tv.push_back(tv / (2.0 * n));
    }
    std::sort(null_tv.begin(), null_tv.end());
    double mean = 0;
    for (double x : null_tv) {
        mean += x;
    }
    mean /= null_tv.size();
    auto quantile = [&](double q) {
        double pos = q * (null_tv.size() - 1);
        size_t lo = static_cast<size_t>(std::floor(pos));
        size_t hi = std::min(lo + 1, null_tv.size() - 1);
        return null_tv[lo] + (pos - lo) * (null_tv[hi] - null_tv[lo]);
    };
    result.tv_null_mean = mean;
    result.tv_excess = result.tv_observed - mean;
    result.excess_ci95 = {result.tv_observed - quantile(0.975), result.tv_observed - quantile(0.025)};
    return result;
}

json to_json(const HidingTestResult &r) {
    return {
        {"schema", "qpc.hiding/1"},
        {"value_a", to_string(r.options.value_a)},
        {"value_b", to_string(r.options.value_b)},
        {"trials_per_value", r.options.trials},
        {"bootstrap", r.options.bootstrap},
        {"leak", r.options.leak},
        {"distinct_views", r.distinct_views},
        {"tv_observed", r.tv_observed},
        {"tv_null_mean", r.tv_null_mean},
        {"tv_excess", r.tv_excess},
        {"excess_ci95", {r.excess_ci95.low, r.excess_ci95.high}},
    };
}

std::string to_text(const HidingTestResult &r) {
    std::ostringstream out;
    out << to_string(r.options.value_a) << " vs " << to_string(r.options.value_b) << ", " << r.options.trials
        << " runs each, " << r.options.bootstrap << " bootstrap samples" << (r.options.leak ? ", leak control" : "")
        << "\n";
    out << "distinct views    " << r.distinct_views << "\n";
    out << "TV observed       " << fixed(r.tv_observed, 6) << "\n";
    out << "TV null mean      " << fixed(r.tv_null_mean, 6) << "\n";
    out << "TV excess         " << fixed(r.tv_excess, 6) << "  95% CI [" << fixed(r.excess_ci95.low, 6) << ", "
        << fixed(r.excess_ci95.high, 6) << "]\n";
    out << (views_indistinguishable(r) ? "indistinguishable" : "distinguishable") << "\n";
    return out.str();
}

bool views_indistinguishable(const HidingTestResult &r) {
    return r.excess_ci95.low <= 0 && 0 <= r.excess_ci95.high;
}

// ---------------------------------------------------------------------------
// Algebra self-check

namespace {

void record(AlgebraSuite &suite, double fidelity) {
    suite.cases++;
    suite.min_fidelity = std::min(suite.min_fidelity, fidelity);
    if (fidelity < 1 - kStateTolerance) {
        suite.failures++;
    }
}

std::vector<StateVector> test_inputs() {
    std::vector<StateVector> inputs{StateVector::basis(1, 0), StateVector::basis(1, 1)};
    inputs.push_back(apply_single_qubit(StateVector::basis(1), 0, Unitary2::hadamard()));
    inputs.push_back(apply_single_qubit(inputs.back(), 0, Unitary2::phase_s()));
    RandomStream rng(20240601);
    inputs.push_back(apply_single_qubit(StateVector::basis(1), 0, random_unitary(rng)));
    return inputs;
}

/// Re tr(a^dagger b) / 2: 1 exactly when a = b for unitaries.
double matrix_overlap(const Unitary2 &a, const Unitary2 &b) {
    Complex tr = 0;
    for (int k = 0; k < 4; k++) {
        tr += std::conj(a.m[k]) * b.m[k];
    }
    return tr.real() / 2;
}

}  // namespace

AlgebraReport validate_algebra() {
    AlgebraReport report;

    AlgebraSuite swap{"swap_labels"};
    for (uint8_t a = 0; a < 4; a++) {
        for (uint8_t b = 0; b < 4; b++) {
            auto la = BellLabel::from_code(a);
            auto lb = BellLabel::from_code(b);
            auto s = prepare_bell(la).tensor(prepare_bell(lb));
            for (uint8_t m = 0; m < 4; m++) {
                auto lm = BellLabel::from_code(m);
                auto r = bsm(s, 1, 3, OutcomeSource<BellLabel>::forced(lm));
                double f = r.collapsed ? bell_probabilities(*r.collapsed, 0, 2)[swap_labels(la, lb, lm).code()] : 0;
                record(swap, f);
            }
        }
    }
    report.suites.push_back(swap);

    AlgebraSuite teleport{"teleport_correction"};
    auto inputs = test_inputs();
    for (uint8_t sh = 0; sh < 4; sh++) {
        for (uint8_t o = 0; o < 4; o++) {
            auto shared = BellLabel::from_code(sh);
            auto outcome = BellLabel::from_code(o);
            auto correction = Unitary2::from_pauli(teleport_correction(shared, outcome).as_pauli());
            double worst = 1;
            for (const auto &input : inputs) {
                auto r = bsm(input.tensor(prepare_bell(shared)), 0, 1, OutcomeSource<BellLabel>::forced(outcome));
                double f = 0;
                if (r.collapsed) {
                    f = fidelity(extract_qubit(*r.collapsed, 2), apply_single_qubit(input, 0, correction));
                }
                worst = std::min(worst, f);
            }
            record(teleport, worst);
        }
    }
    report.suites.push_back(teleport);

    AlgebraSuite reveal{"reveal_pauli"};
    for (uint8_t c = 0; c < 4; c++) {
        auto l = BellLabel::from_code(c);
        Unitary2 expected = (l.phase ? Unitary2::identity() : Unitary2::pauli_z()) *
                            (l.parity ? Unitary2::pauli_x() : Unitary2::identity());
        double worst = 1;
        for (const auto &input : inputs) {
            worst = std::min(worst, fidelity(apply_single_qubit(input, 0, expected),
                                             apply_single_qubit(input, 0, Unitary2::from_pauli(reveal_pauli(l)))));
        }
        record(reveal, worst);
    }
    report.suites.push_back(reveal);

    AlgebraSuite side{"pauli_side_independence"};
    for (uint8_t c = 0; c < 4; c++) {
        for (uint8_t p = 0; p < 4; p++) {
            auto l = BellLabel::from_code(c);
            auto u = Unitary2::from_pauli(PauliLabel::from_code(p));
            auto expected = prepare_bell(apply_pauli_to_label(l, PauliLabel::from_code(p)));
            double f0 = fidelity(apply_single_qubit(prepare_bell(l), 0, u), expected);
            double f1 = fidelity(apply_single_qubit(prepare_bell(l), 1, u), expected);
            record(side, std::min(f0, f1));
        }
    }
    report.suites.push_back(side);

    AlgebraSuite conj{"clifford_conjugation"};
    for (const auto &op : CliffordOp::all()) {
        const auto &u = clifford_matrix(op);
        for (uint8_t p = 0; p < 4; p++) {
            auto label = PauliLabel::from_code(p);
            auto actual = u.adjoint() * Unitary2::from_signed_pauli({label, false}) * u;
            record(conj, matrix_overlap(Unitary2::from_signed_pauli(conjugate_pauli(op, label)), actual));
        }
    }
    report.suites.push_back(conj);

    report.passed = std::all_of(report.suites.begin(), report.suites.end(),
                                [](const AlgebraSuite &s) { return s.failures == 0; });
    return report;
}

json to_json(const AlgebraReport &report) {
    json suites = json::array();
    for (const auto &s : report.suites) {
        suites.push_back(
            {{"name", s.name}, {"cases", s.cases}, {"failures", s.failures}, {"min_fidelity", s.min_fidelity}});
    }
    return {{"schema", "qpc.algebra/1"}, {"passed", report.passed}, {"suites", suites}};
}

std::string to_text(const AlgebraReport &report) {
    std::ostringstream out;
    out << std::left << std::setw(26) << "suite" << std::right << std::setw(7) << "cases" << std::setw(10)
        << "failures" << std::setw(16) << "min fidelity\n";
    for (const auto &s : report.suites) {
        out << std::left << std::setw(26) << s.name << std::right << std::setw(7) << s.cases << std::setw(10)
            << s.failures << std::setw(15) << fixed(s.min_fidelity, 12) << "\n";
    }
    out << (report.passed ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace qpc
