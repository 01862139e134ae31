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

#include "qpc/qpc.h"

#include <fstream>
#include <sstream>

#include "qpc/harness.h"

struct qpc_config {
    qpc::RunConfig config;
};

struct qpc_result {
    std::string text;
    bool passed = false;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_error_field;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

qpc_status fail(qpc_status status, const std::string &message, const std::string &field = "") {
    last_error = message;
    last_error_field = field;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
qpc_status guarded(Body &&body) {
    last_error.clear();
    last_error_field.clear();
    try {
        body();
        return QPC_OK;
    } catch (const qpc::ConfigError &e) {
        return fail(QPC_ERR_CONFIG, e.what(), e.field());
    } catch (const nlohmann::json::parse_error &e) {
        return fail(QPC_ERR_PARSE, e.what());
    } catch (const IoError &e) {
        return fail(QPC_ERR_IO, e.what());
    } catch (const std::invalid_argument &e) {
        return fail(QPC_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception &e) {
        return fail(QPC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(QPC_ERR_INTERNAL, "unknown error");
    }
}

void require(const void *p, const char *name) {
    if (p == nullptr) {
        throw std::invalid_argument(std::string(name) + " is null");
    }
}

qpc::ReportFormat format_of(qpc_format format) {
    switch (format) {
        case QPC_FORMAT_JSON:
            return qpc::ReportFormat::kJson;
        case QPC_FORMAT_TEXT:
            return qpc::ReportFormat::kText;
    }
    throw std::invalid_argument("unknown format");
}

qpc::CommitmentValue value_of(qpc_value value) {
    switch (value) {
        case QPC_BIT0:
            return qpc::CommitmentValue::kBit0;
        case QPC_BIT1:
            return qpc::CommitmentValue::kBit1;
        case QPC_QUBIT_PLUS:
            return qpc::CommitmentValue::kQubitPlus;
        case QPC_QUBIT_MINUS:
            return qpc::CommitmentValue::kQubitMinus;
    }
    throw std::invalid_argument("unknown commitment value");
}

std::string dump(const nlohmann::ordered_json &j) {
    return j.dump(2) + "\n";
}

void emit(qpc_result **out, std::string text, bool passed) {
    *out = new qpc_result{std::move(text), passed};
}

}  // namespace

extern "C" {

const char *qpc_version(void) {
    return "0.1.0";
}

const char *qpc_last_error(void) {
    return last_error.c_str();
}

const char *qpc_last_error_field(void) {
    return last_error_field.c_str();
}

const char *qpc_status_name(qpc_status status) {
    switch (status) {
        case QPC_OK:
            return "OK";
        case QPC_ERR_INVALID_ARGUMENT:
            return "INVALID_ARGUMENT";
        case QPC_ERR_CONFIG:
            return "CONFIG";
        case QPC_ERR_IO:
            return "IO";
        case QPC_ERR_PARSE:
            return "PARSE";
        case QPC_ERR_INTERNAL:
            return "INTERNAL";
    }
    return "UNKNOWN";
}

qpc_status qpc_config_new(qpc_config **out) {
    return guarded([&] {
        require(out, "out");
        *out = new qpc_config{};
    });
}

qpc_status qpc_config_from_json(const char *json, qpc_config **out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        auto config = qpc::RunConfig::from_json(nlohmann::ordered_json::parse(json));
        *out = new qpc_config{std::move(config)};
    });
}

qpc_status qpc_config_from_file(const char *path, qpc_config **out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        std::ifstream in(path);
        if (!in) {
            throw IoError(std::string("cannot read ") + path);
        }
        std::stringstream buffer;
        buffer << in.rdbuf();
        auto config = qpc::RunConfig::from_json(nlohmann::ordered_json::parse(buffer.str()));
        *out = new qpc_config{std::move(config)};
    });
}

qpc_status qpc_config_set_seed(qpc_config *config, uint64_t seed) {
    return guarded([&] {
        require(config, "config");
        config->config.seed = seed;
    });
}

qpc_status qpc_config_set_trials(qpc_config *config, uint64_t trials) {
    return guarded([&] {
        require(config, "config");
        auto copy = config->config;
        copy.trials = trials;
        copy.validate();
        config->config = copy;
    });
}

qpc_status qpc_config_set_threads(qpc_config *config, uint64_t threads) {
    return guarded([&] {
        require(config, "config");
        auto copy = config->config;
        copy.threads = threads;
        copy.validate();
        config->config = copy;
    });
}

qpc_status qpc_config_to_json(const qpc_config *config, qpc_result **out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        emit(out, dump(config->config.to_json()), true);
    });
}

void qpc_config_free(qpc_config *config) {
    delete config;
}

qpc_status qpc_run_trials(const qpc_config *config, qpc_format format, qpc_result **out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        auto f = format_of(format);
        emit(out, qpc::emit_report(qpc::run_trials(config->config), f), true);
    });
}

qpc_status qpc_run_transcript(const qpc_config *config, uint64_t trial, qpc_result **out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        auto t = qpc::run_single(config->config, trial);
        emit(out, qpc::dump_transcript(t), t.verdict && t.verdict->accepted);
    });
}

qpc_status qpc_paper_example(qpc_variant variant, qpc_mode mode, qpc_format format, qpc_result **out) {
    return guarded([&] {
        require(out, "out");
        if (variant != QPC_VARIANT_HONEST && variant != QPC_VARIANT_CHEATING) {
            throw std::invalid_argument("unknown variant");
        }
        if (mode != QPC_MODE_SYMBOLIC && mode != QPC_MODE_ORACLE) {
            throw std::invalid_argument("unknown mode");
        }
        auto f = format_of(format);
        auto r = qpc::paper_example(
            variant == QPC_VARIANT_HONEST ? qpc::PaperVariant::kHonest : qpc::PaperVariant::kCheating,
            mode == QPC_MODE_SYMBOLIC ? qpc::RunMode::kSymbolic : qpc::RunMode::kOracle);
        emit(out, f == qpc::ReportFormat::kJson ? dump(qpc::to_json(r)) : qpc::to_text(r), r.passed);
    });
}

qpc_status qpc_hiding_test(
    const qpc_config *config,
    qpc_value value_a,
    qpc_value value_b,
    uint64_t trials,
    uint64_t bootstrap,
    int leak,
    qpc_format format,
    qpc_result **out) {
    return guarded([&] {
        require(config, "config");
        require(out, "out");
        auto f = format_of(format);
        qpc::HidingTestOptions options;
        options.value_a = value_of(value_a);
        options.value_b = value_of(value_b);
        options.trials = trials;
        options.bootstrap = bootstrap;
        options.leak = leak != 0;
        auto r = qpc::hiding_test(config->config, options);
        emit(out, f == qpc::ReportFormat::kJson ? dump(qpc::to_json(r)) : qpc::to_text(r),
             qpc::views_indistinguishable(r));
    });
}

qpc_status qpc_validate_algebra(qpc_format format, qpc_result **out) {
    return guarded([&] {
        require(out, "out");
        auto f = format_of(format);
        auto r = qpc::validate_algebra();
        emit(out, f == qpc::ReportFormat::kJson ? dump(qpc::to_json(r)) : qpc::to_text(r), r.passed);
    });
}

const char *qpc_result_text(const qpc_result *result) {
    return result == nullptr ? "" : result->text.c_str();
}

size_t qpc_result_size(const qpc_result *result) {
    return result == nullptr ? 0 : result->text.size();
}

int qpc_result_passed(const qpc_result *result) {
    return result != nullptr && result->passed ? 1 : 0;
}

void qpc_result_free(qpc_result *result) {
    delete result;
}

}  // extern "C"
