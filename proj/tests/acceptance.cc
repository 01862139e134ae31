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

// End-to-end acceptance checks. Prints one line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "qpc/harness.h"
#include "qpc/oracle.test.h"

using namespace qpc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double x, int digits = 6) {
    std::ostringstream out;
    out.precision(digits);
    out << x;
    return out.str();
}

std::string failed_checks(const PaperExampleResult &r) {
    std::string out;
    for (const auto &c : r.checks) {
        if (!c.ok) {
            out += " " + c.name + "=" + c.actual + "(want " + c.expected + ")";
        }
    }
    return out;
}

Outcome worked_example(PaperVariant variant) {
    auto start = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    for (auto mode : {RunMode::kSymbolic, RunMode::kOracle}) {
        auto r = paper_example(variant, mode);
        pass = pass && r.passed;
        detail += to_string(mode) + " " + std::to_string(r.checks.size()) + " checks " +
                  (r.passed ? "match" : "differ:" + failed_checks(r)) + ", verdict " + r.transcript.verdict->str() +
                  "; ";
    }
    double t = seconds_since(start);
    pass = pass && t < 1;
    return {pass, detail + "runtime " + fmt(t, 3) + " s"};
}

Outcome swap_equivalence() {
    auto start = std::chrono::steady_clock::now();
    double worst = 1;
    size_t cases = 0;
    for (uint8_t a = 0; a < 4; a++) {
        for (uint8_t b = 0; b < 4; b++) {
            for (uint8_t m = 0; m < 4; m++) {
                auto la = BellLabel::from_code(a);
                auto lb = BellLabel::from_code(b);
                auto lm = BellLabel::from_code(m);
                // A half, C half | B half, C half; Charlie measures qubits 1 and 3.
                auto v = oracle::kron(oracle::bell(la), oracle::bell(lb));
                auto rest = oracle::project_pair(v, 4, 1, 3, lm);
                worst = std::min(worst, oracle::fidelity(rest, oracle::bell(swap_labels(la, lb, lm))));
                cases++;
            }
        }
    }
    auto library = validate_algebra();
    bool library_ok = library.suites.at(0).name == "swap_labels" && library.suites.at(0).failures == 0;
    double t = seconds_since(start);
    bool pass = cases == 64 && worst >= 1 - 1e-9 && library_ok && t < 10;
    return {pass, std::to_string(cases) + " triples, min fidelity " + fmt(worst, 12) + ", simulator suite " +
                      (library_ok ? "ok" : "FAILED") + ", runtime " + fmt(t, 3) + " s"};
}

Outcome teleport_equivalence() {
    auto start = std::chrono::steady_clock::now();
    std::vector<oracle::Vec> inputs{
        oracle::basis(1, 0),
        oracle::basis(1, 1),
        {oracle::kHalfRoot, oracle::kHalfRoot},
        {oracle::kHalfRoot, oracle::C(0, oracle::kHalfRoot)},
        oracle::normalized({oracle::C(0.3, -0.2), oracle::C(-0.5, 0.7)}),
    };
    double worst = 1;
    size_t cases = 0;
    for (uint8_t s = 0; s < 4; s++) {
        for (uint8_t o = 0; o < 4; o++) {
            auto shared = BellLabel::from_code(s);
            auto outcome = BellLabel::from_code(o);
            auto correction = oracle::pauli_matrix(teleport_correction(shared, outcome).as_pauli());
            for (const auto &input : inputs) {
                auto v = oracle::kron(input, oracle::bell(shared));
                auto received = oracle::project_pair(v, 3, 0, 1, outcome);
                auto expected = oracle::apply(input, 1, 0, correction);
                worst = std::min(worst, oracle::fidelity(received, expected));
            }
            cases++;
        }
    }
    double reveal_worst = 0;
    for (uint8_t c = 0; c < 4; c++) {
        auto l = BellLabel::from_code(c);
        oracle::Mat z = oracle::pauli_matrix(kPauliZ);
        oracle::Mat x = oracle::pauli_matrix(kPauliX);
        oracle::Mat one{1, 0, 0, 1};
        auto expected = oracle::matmul(l.phase ? one : z, l.parity ? x : one);
        reveal_worst =
            std::max(reveal_worst, oracle::distance_up_to_phase(expected, oracle::pauli_matrix(reveal_pauli(l))));
    }
    auto library = validate_algebra();
    bool library_ok = true;
    for (const auto &suite : library.suites) {
        if (suite.name == "teleport_correction" || suite.name == "reveal_pauli") {
            library_ok = library_ok && suite.failures == 0;
        }
    }
    double t = seconds_since(start);
    bool pass = cases == 16 && worst >= 1 - 1e-9 && reveal_worst < 1e-9 && library_ok && t < 10;
    return {pass, std::to_string(cases) + " corrections, min fidelity " + fmt(worst, 12) +
                      "; 4 reveal Paulis, max distance " + fmt(reveal_worst, 3) + "; simulator suites " +
                      (library_ok ? "ok" : "FAILED") + ", runtime " + fmt(t, 3) + " s"};
}

Outcome honest_sweep() {
    size_t runs = 0;
    size_t accepted = 0;
    for (auto mode : {RunMode::kSymbolic, RunMode::kOracle}) {
        for (auto value : {CommitmentValue::kBit0, CommitmentValue::kBit1, CommitmentValue::kQubitPlus,
                           CommitmentValue::kQubitMinus}) {
            for (size_t n = 1; n <= 8; n++) {
                RunConfig c;
                c.mode = mode;
                c.commitment = value;
                c.pairs = n;
                c.trials = 100;
                c.seed = 1000 + n;
                auto r = run_trials(c);
                runs += r.trials;
                accepted += r.verdict_counts[Verdict::accept(value).str()];
            }
        }
    }
    return {accepted == runs && runs == 6400,
            std::to_string(accepted) + "/" + std::to_string(runs) + " accepted with the committed value"};
}

Outcome timing_soundness() {
    RunConfig base;
    base.pairs = 3;
    base.trials = 1000;
    base.epsilon_s = 1e-9;
    base.seed = 6;

    std::string detail;
    bool pass = true;
    auto check = [&](const std::string &name, RunConfig c) {
        auto r = run_trials(c);
        bool ok = r.timing_violation_runs == r.trials && r.trials == 1000;
        pass = pass && ok;
        detail += name + " " + std::to_string(r.timing_violation_runs) + "/" + std::to_string(r.trials) + "; ";
    };
    for (double delay : {2e-9, 1e-6, 1e-3}) {
        RunConfig c = base;
        c.adversary.kind = AdversaryKind::kDelayedReveal;
        c.adversary.delay_s = delay;
        check("delay " + fmt(delay, 3) + " s", c);
    }
    // Any displacement lengthens one leg: toward Bob, toward Charlie, beyond either.
    for (double x : {1.0, 1.5e5, -1.0, -1.5e5, 4e5, -4e5}) {
        RunConfig c = base;
        c.adversary.kind = AdversaryKind::kRemoteReveal;
        c.adversary.true_position_m = x;
        check("remote " + fmt(x, 3) + " m", c);
    }
    return {pass, detail + "rejected as TIMING_VIOLATION"};
}

Outcome fake_commit_detection() {
    const std::vector<PauliLabel> guesses{kPauliI, kPauliX, kPauliZ, kPauliZX};
    const std::vector<PauliLabel> paulis{kPauliX, kPauliZ, kPauliZX};
    double exact = oracle::single_pair_accept_probability(
        encode_commitment(CommitmentValue::kBit0), encode_commitment(CommitmentValue::kBit1), guesses, paulis);

    RunConfig c;
    c.commitment = CommitmentValue::kBit0;
    c.adversary.kind = AdversaryKind::kFakeReveal;
    c.adversary.announced = CommitmentValue::kBit1;
    c.trials = 100000;
    c.seed = 7;
    c.threads = 4;
    c.pairs = 1;
    auto one = run_trials(c);
    double p1 = one.acceptance.rate;
    double sigma1 = std::sqrt(exact * (1 - exact) / c.trials);
    bool ok1 = std::abs(p1 - exact) <= 3 * sigma1;

    c.pairs = 3;
    c.seed = 8;
    auto three = run_trials(c);
    double p3 = three.acceptance.rate;
    double bound = p1 * p1 * p1;
    double sigma3 = std::sqrt(bound * (1 - bound) / c.trials);
    bool ok3 = p3 <= bound + 3 * sigma3;

    return {ok1 && ok3, "N=1 undetected " + fmt(p1) + " vs enumeration " + fmt(exact) + " (3 sigma " +
                            fmt(3 * sigma1, 3) + "); N=3 undetected " + fmt(p3) + " <= " + fmt(bound) + " + " +
                            fmt(3 * sigma3, 3) + "; detection N=3 " + fmt(three.detection.rate)};
}

Outcome hiding() {
    RunConfig c;
    c.seed = 8;
    HidingTestOptions options;
    options.trials = 10000;
    options.bootstrap = 200;
    auto r = hiding_test(c, options);
    options.leak = true;
    auto leaked = hiding_test(c, options);
    bool ci_has_zero = r.excess_ci95.low <= 0 && 0 <= r.excess_ci95.high;
    bool pass = ci_has_zero && r.tv_excess < 0.05 && leaked.tv_excess > 0.9;
    return {pass, "excess TV " + fmt(r.tv_excess, 4) + " (raw " + fmt(r.tv_observed, 4) + ", null mean " +
                      fmt(r.tv_null_mean, 4) + "), 95% CI [" + fmt(r.excess_ci95.low, 4) + ", " +
                      fmt(r.excess_ci95.high, 4) + "]; leak control excess " + fmt(leaked.tv_excess, 4)};
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Outcome reproducibility(const std::string &cli) {
    RunConfig c;
    c.pairs = 3;
    c.trials = 200;
    c.seed = 99;
    c.mode = RunMode::kOracle;
    c.adversary.kind = AdversaryKind::kFakeReveal;
    c.adversary.announced = CommitmentValue::kQubitPlus;
    bool in_process = dump_transcript(run_single(c, 4)) == dump_transcript(run_single(c, 4)) &&
                      emit_report(run_trials(c), ReportFormat::kJson) == emit_report(run_trials(c), ReportFormat::kJson);

    auto dir = std::filesystem::temp_directory_path() / ("qpc_acceptance_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "config.json") << c.to_json().dump(2);
    }
    bool same_files = true;
    size_t compared = 0;
    for (const auto &[name, args] : std::vector<std::pair<std::string, std::string>>{
             {"transcript", "run --transcript 4"}, {"report", "run"}, {"report_threads", "--threads 3 run"}}) {
        std::string outputs[2];
        for (int k = 0; k < 2; k++) {
            auto out = dir / (name + std::to_string(k) + ".json");
            std::string cmd = "\"" + cli + "\" --format json --out \"" + out.string() + "\" " + args + " \"" +
                              (dir / "config.json").string() + "\"";
            if (std::system(cmd.c_str()) != 0) {
                same_files = false;
            }
            outputs[k] = slurp(out);
        }
        same_files = same_files && !outputs[0].empty() && outputs[0] == outputs[1];
        if (name == "report_threads" && same_files) {
            // The report records the thread count; nothing else may change.
            auto threaded = nlohmann::ordered_json::parse(outputs[0]);
            auto single = nlohmann::ordered_json::parse(slurp(dir / "report0.json"));
            threaded["config"]["threads"] = single["config"]["threads"];
            same_files = threaded == single;
        }
        compared++;
    }
    std::filesystem::remove_all(dir);
    return {in_process && same_files, std::string("in-process ") + (in_process ? "identical" : "DIFFERENT") +
                                          "; CLI transcript and report files over two invocations " +
                                          (same_files ? "byte-identical (report also equal for 1 vs 3 threads)" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char **argv) {
    if (argc != 2) {
        std::cerr << "usage: qpc_acceptance PATH_TO_QPC_CLI\n";
        return 2;
    }
    std::string cli = argv[1];
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"honest worked example", [] { return worked_example(PaperVariant::kHonest); }},
        {"cheating worked example", [] { return worked_example(PaperVariant::kCheating); }},
        {"swap rule vs statevector", swap_equivalence},
        {"teleport correction and reveal vs statevector", teleport_equivalence},
        {"honest completeness sweep", honest_sweep},
        {"timing soundness", timing_soundness},
        {"fake-commit detection", fake_commit_detection},
        {"hiding statistic", hiding},
        {"reproducibility", [&] { return reproducibility(cli); }},
    };
    int failures = 0;
    for (size_t k = 0; k < criteria.size(); k++) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << "criterion " << (k + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[k].first
                  << ": " << o.detail << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
