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
#include <string>

#include "gtest/gtest.h"

namespace {

std::string take(qpc_result *r) {
    std::string text = qpc_result_text(r);
    qpc_result_free(r);
    return text;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

TEST(c_api, version_and_status_names) {
    ASSERT_STREQ(qpc_version(), "0.1.0");
    ASSERT_STREQ(qpc_status_name(QPC_OK), "OK");
    ASSERT_STREQ(qpc_status_name(QPC_ERR_CONFIG), "CONFIG");
}

TEST(c_api, config_round_trip) {
    qpc_config *config = nullptr;
    ASSERT_EQ(qpc_config_from_json(R"({"pairs": 3, "seed": 5, "mode": "oracle"})", &config), QPC_OK);
    ASSERT_EQ(qpc_config_set_trials(config, 7), QPC_OK);
    qpc_result *r = nullptr;
    ASSERT_EQ(qpc_config_to_json(config, &r), QPC_OK);
    std::string text = take(r);
    ASSERT_NE(text.find("\"pairs\": 3"), std::string::npos);
    ASSERT_NE(text.find("\"trials\": 7"), std::string::npos);
    ASSERT_NE(text.find("\"mode\": \"oracle\""), std::string::npos);

    qpc_config *again = nullptr;
    ASSERT_EQ(qpc_config_from_json(text.c_str(), &again), QPC_OK);
    ASSERT_EQ(qpc_config_to_json(again, &r), QPC_OK);
    ASSERT_EQ(take(r), text);
    qpc_config_free(config);
    qpc_config_free(again);
}

TEST(c_api, error_codes) {
    qpc_config *config = nullptr;
    ASSERT_EQ(qpc_config_from_json(R"({"pairs": 0})", &config), QPC_ERR_CONFIG);
    ASSERT_EQ(config, nullptr);
    ASSERT_STREQ(qpc_last_error_field(), "pairs");
    ASSERT_NE(std::string(qpc_last_error()).find("pairs"), std::string::npos);

    ASSERT_EQ(qpc_config_from_json(R"({"adversary": {"kind": "DELAYED_REVEAL"}})", &config), QPC_ERR_CONFIG);
    ASSERT_STREQ(qpc_last_error_field(), "adversary.delay_s");

    ASSERT_EQ(qpc_config_from_json("{not json", &config), QPC_ERR_PARSE);
    ASSERT_EQ(qpc_config_from_file("/nonexistent/qpc.json", &config), QPC_ERR_IO);
    ASSERT_EQ(qpc_config_from_json(nullptr, &config), QPC_ERR_INVALID_ARGUMENT);

    ASSERT_EQ(qpc_config_new(&config), QPC_OK);
    ASSERT_STREQ(qpc_last_error(), "");
    ASSERT_EQ(qpc_config_set_trials(config, 0), QPC_ERR_CONFIG);
    ASSERT_EQ(qpc_config_set_threads(config, 0), QPC_ERR_CONFIG);
    qpc_result *r = nullptr;
    ASSERT_EQ(qpc_run_trials(config, static_cast<qpc_format>(9), &r), QPC_ERR_INVALID_ARGUMENT);
    ASSERT_EQ(r, nullptr);
    ASSERT_EQ(qpc_run_trials(nullptr, QPC_FORMAT_JSON, &r), QPC_ERR_INVALID_ARGUMENT);
    qpc_config_free(config);

    ASSERT_EQ(qpc_result_text(nullptr), std::string());
    ASSERT_EQ(qpc_result_passed(nullptr), 0);
    qpc_result_free(nullptr);
    qpc_config_free(nullptr);
}

TEST(c_api, run_trials_and_transcript) {
    qpc_config *config = nullptr;
    ASSERT_EQ(qpc_config_from_json(R"({"pairs": 2, "trials": 25, "commitment": "BIT1"})", &config), QPC_OK);
    qpc_result *r = nullptr;
    ASSERT_EQ(qpc_run_trials(config, QPC_FORMAT_JSON, &r), QPC_OK);
    ASSERT_EQ(qpc_result_passed(r), 1);
    std::string report = take(r);
    ASSERT_NE(report.find("\"ACCEPT:BIT1\": 25"), std::string::npos);

    ASSERT_EQ(qpc_run_transcript(config, 3, &r), QPC_OK);
    ASSERT_EQ(qpc_result_passed(r), 1);
    ASSERT_EQ(qpc_result_size(r), std::string(qpc_result_text(r)).size());
    std::string transcript = take(r);
    ASSERT_NE(transcript.find("\"schema\": \"qpc.transcript/1\""), std::string::npos);
    ASSERT_EQ(qpc_run_transcript(config, 3, &r), QPC_OK);
    ASSERT_EQ(take(r), transcript);
    qpc_config_free(config);
}

TEST(c_api, worked_example_matches_golden_files) {
    struct Case {
        qpc_variant variant;
        const char *file;
    } cases[] = {{QPC_VARIANT_HONEST, "worked_honest.json"}, {QPC_VARIANT_CHEATING, "worked_cheating.json"}};
    for (const auto &c : cases) {
        std::string golden = read_file(std::string(QPC_GOLDEN_DIR) + "/" + c.file);
        ASSERT_FALSE(golden.empty()) << c.file;
        qpc_result *r = nullptr;
        ASSERT_EQ(qpc_paper_example(c.variant, QPC_MODE_SYMBOLIC, QPC_FORMAT_JSON, &r), QPC_OK);
        ASSERT_EQ(qpc_result_passed(r), 1);
        ASSERT_EQ(take(r), golden) << c.file;
    }
    qpc_result *r = nullptr;
    ASSERT_EQ(qpc_paper_example(QPC_VARIANT_CHEATING, QPC_MODE_ORACLE, QPC_FORMAT_TEXT, &r), QPC_OK);
    std::string text = take(r);
    ASSERT_NE(text.find("PASS"), std::string::npos);
    ASSERT_EQ(qpc_paper_example(static_cast<qpc_variant>(5), QPC_MODE_ORACLE, QPC_FORMAT_TEXT, &r),
              QPC_ERR_INVALID_ARGUMENT);
}

TEST(c_api, hiding_test_and_algebra) {
    qpc_config *config = nullptr;
    ASSERT_EQ(qpc_config_new(&config), QPC_OK);
    qpc_result *r = nullptr;
    ASSERT_EQ(qpc_hiding_test(config, QPC_BIT0, QPC_BIT1, 2000, 50, 0, QPC_FORMAT_JSON, &r), QPC_OK);
    ASSERT_NE(std::string(qpc_result_text(r)).find("\"tv_excess\""), std::string::npos);
    qpc_result_free(r);
    ASSERT_EQ(qpc_hiding_test(config, QPC_BIT0, QPC_BIT1, 2000, 50, 1, QPC_FORMAT_TEXT, &r), QPC_OK);
    ASSERT_EQ(qpc_result_passed(r), 0);
    qpc_result_free(r);
    ASSERT_EQ(qpc_hiding_test(config, QPC_BIT0, QPC_BIT1, 0, 50, 0, QPC_FORMAT_TEXT, &r), QPC_ERR_INVALID_ARGUMENT);
    qpc_config_free(config);

    ASSERT_EQ(qpc_validate_algebra(QPC_FORMAT_TEXT, &r), QPC_OK);
    ASSERT_EQ(qpc_result_passed(r), 1);
    ASSERT_NE(take(r).find("clifford_conjugation"), std::string::npos);
}
