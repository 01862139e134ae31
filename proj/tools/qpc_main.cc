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

// Command line front end. Talks to the simulator only through the C API.
//
// Exit codes: 0 success, 1 a check failed, 2 bad usage or configuration.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qpc/qpc.h"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

struct Globals {
    std::optional<uint64_t> seed;
    std::optional<uint64_t> threads;
    std::string format = "text";
    std::string out_path;
};

int report_error(qpc_status status) {
    std::cerr << "error (" << qpc_status_name(status) << "): " << qpc_last_error() << "\n";
    return kExitError;
}

qpc_format format_of(const Globals &g) {
    return g.format == "json" ? QPC_FORMAT_JSON : QPC_FORMAT_TEXT;
}

// Writes the result, frees it, and maps its pass flag to an exit code.
int finish(const Globals &g, qpc_result *result, bool check) {
    bool passed = qpc_result_passed(result) != 0;
    if (g.out_path.empty()) {
        std::fwrite(qpc_result_text(result), 1, qpc_result_size(result), stdout);
    } else {
        std::ofstream out(g.out_path, std::ios::binary);
        out.write(qpc_result_text(result), static_cast<std::streamsize>(qpc_result_size(result)));
        if (!out) {
            qpc_result_free(result);
            std::cerr << "error: cannot write " << g.out_path << "\n";
            return kExitError;
        }
    }
    qpc_result_free(result);
    return check && !passed ? kExitCheckFailed : 0;
}

qpc_status load_config(const std::string &path, const Globals &g, qpc_config **config) {
    qpc_status s = path.empty() ? qpc_config_new(config) : qpc_config_from_file(path.c_str(), config);
    if (s == QPC_OK && g.seed) {
        s = qpc_config_set_seed(*config, *g.seed);
    }
    if (s == QPC_OK && g.threads) {
        s = qpc_config_set_threads(*config, *g.threads);
    }
    return s;
}

const std::map<std::string, qpc_value> kValues{
    {"BIT0", QPC_BIT0}, {"BIT1", QPC_BIT1}, {"QUBIT_PLUS", QPC_QUBIT_PLUS}, {"QUBIT_MINUS", QPC_QUBIT_MINUS}};

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Position-based quantum commitment simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "Master seed (overrides the config)");
    app.add_option("--threads", g.threads, "Worker threads for Monte Carlo runs");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", g.out_path, "Write output here instead of stdout");

    auto *run = app.add_subcommand("run", "Monte Carlo runs from a JSON config");
    std::string config_path;
    std::optional<uint64_t> trials;
    std::optional<uint64_t> transcript_trial;
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--trials", trials, "Override the config's trial count");
    run->add_option("--transcript", transcript_trial, "Print the JSON transcript of this one trial instead");

    auto *paper = app.add_subcommand("paper-example", "Replay the three-pair worked example");
    std::string variant = "honest";
    std::string mode = "symbolic";
    paper->add_option("--variant", variant)->check(CLI::IsMember({"honest", "cheating"}));
    paper->add_option("--mode", mode)->check(CLI::IsMember({"symbolic", "oracle"}));

    auto *hiding = app.add_subcommand("hiding-test", "Compare Bob's pre-reveal views for two values");
    std::string hiding_config;
    std::string value_a = "BIT0";
    std::string value_b = "BIT1";
    uint64_t hiding_trials = 10000;
    uint64_t bootstrap = 200;
    bool leak = false;
    hiding->add_option("--config", hiding_config, "Config file (defaults otherwise)")->check(CLI::ExistingFile);
    hiding->add_option("--value-a", value_a)->check(CLI::IsMember({"BIT0", "BIT1", "QUBIT_PLUS", "QUBIT_MINUS"}));
    hiding->add_option("--value-b", value_b)->check(CLI::IsMember({"BIT0", "BIT1", "QUBIT_PLUS", "QUBIT_MINUS"}));
    hiding->add_option("--trials", hiding_trials, "Runs per value");
    hiding->add_option("--bootstrap", bootstrap, "Bootstrap resamples");
    hiding->add_flag("--leak", leak, "Let Bob see Alice's first label (control)");

    auto *algebra = app.add_subcommand("validate-algebra", "Check the label algebra against the statevector simulator");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitError;
    }

    qpc_result *result = nullptr;
    qpc_status status = QPC_OK;
    if (run->parsed()) {
        qpc_config *config = nullptr;
        status = load_config(config_path, g, &config);
        if (status == QPC_OK && trials) {
            status = qpc_config_set_trials(config, *trials);
        }
        if (status == QPC_OK) {
            status = transcript_trial ? qpc_run_transcript(config, *transcript_trial, &result)
                                      : qpc_run_trials(config, format_of(g), &result);
        }
        qpc_config_free(config);
        if (status != QPC_OK) {
            return report_error(status);
        }
        return finish(g, result, false);
    }
    if (paper->parsed()) {
        status = qpc_paper_example(
            variant == "honest" ? QPC_VARIANT_HONEST : QPC_VARIANT_CHEATING,
            mode == "symbolic" ? QPC_MODE_SYMBOLIC : QPC_MODE_ORACLE,
            format_of(g),
            &result);
        return status == QPC_OK ? finish(g, result, true) : report_error(status);
    }
    if (hiding->parsed()) {
        qpc_config *config = nullptr;
        status = load_config(hiding_config, g, &config);
        if (status == QPC_OK) {
            status = qpc_hiding_test(
                config, kValues.at(value_a), kValues.at(value_b), hiding_trials, bootstrap, leak, format_of(g),
                &result);
        }
        qpc_config_free(config);
        return status == QPC_OK ? finish(g, result, !leak) : report_error(status);
    }
    if (algebra->parsed()) {
        status = qpc_validate_algebra(format_of(g), &result);
        return status == QPC_OK ? finish(g, result, true) : report_error(status);
    }
    return kExitError;
}
