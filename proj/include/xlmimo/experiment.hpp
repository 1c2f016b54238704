// SPDX-License-Identifier: Apache-2.0
//
// xlmimo: uplink analysis library for extra-large scale antenna arrays
// Copyright (C) 2026 The xlmimo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef XLMIMO_EXPERIMENT_HPP
#define XLMIMO_EXPERIMENT_HPP

#include "xlmimo/energy.hpp"
#include "xlmimo/receivers.hpp"
#include "xlmimo/scenario.hpp"
#include "xlmimo/scheduling.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace xlmimo
{
    constexpr int result_schema_version = 1;

    // Validation failure listing every offending field
    class ConfigError : public std::invalid_argument
    {
    public:
        explicit ConfigError(std::vector<std::string> issues);
        const std::vector<std::string> &issues() const { return issues_; }

    private:
        std::vector<std::string> issues_;
    };

    struct UserSpec
    {
        double aoa = 0.0;         // radians
        double angular_std = 0.0; // radians
        uword vr_start = 0;
        uword vr_length = 1;
        std::vector<double> amplitudes;
    };

    struct ScenarioSpec
    {
        std::string kind = "random"; // random, partial-overlap, no-overlap, completely-overlapped, explicit
        uword n_users = 0;
        uword vr_length = 0;
        AngleSettings angles;
        double aoa = 0.0; // common angle of the completely-overlapped scenario
        std::uint64_t placement_seed = 1;
        uword placements = 1;
        std::vector<UserSpec> users; // explicit scenarios
    };

    struct EnergySpec
    {
        double bandwidth_hz = 20e6;
        PowerProfile profile;
        bool gate_elements = false;
    };

    struct ScheduleSpec
    {
        std::string algorithm = "greedy-user"; // greedy-user, greedy-joint
        uword max_users = 0;
        SubarrayBounds bounds;
        SubsetSearch search = SubsetSearch::RankTopJ;
    };

    struct ExperimentConfig
    {
        std::string experiment;
        uword n_antennas = 0;
        uword n_subarrays = 0;
        double spacing = 0.5;
        ScenarioSpec scenario;
        std::vector<Receiver> receivers;
        std::vector<Architecture> architectures;
        std::vector<Method> methods;
        std::vector<double> snr_db;
        uword trials = 1000;
        std::uint64_t seed = 1;
        int threads = 0;
        std::string output = "results";
        std::optional<EnergySpec> energy;
        std::optional<ScheduleSpec> schedule;

        ArrayGeometry geometry() const { return ArrayGeometry(n_antennas, n_subarrays, spacing); }
        bool has_method(Method m) const;
        nlohmann::json to_json() const; // fully resolved form
    };

    ExperimentConfig parse_config(const nlohmann::json &j);
    ExperimentConfig load_config(const std::filesystem::path &file);

    // Semantic checks that need more than one field; throws ConfigError
    void validate(const ExperimentConfig &config);

    // One scenario per placement
    std::vector<Scenario> build_scenarios(const ExperimentConfig &config);

    // Identifier of placement p in the experiment column
    std::string experiment_id(const ExperimentConfig &config, uword placement);

    struct ResultRow
    {
        std::string experiment;
        double snr_db = 0.0;
        Method method = Method::ClosedForm;
        Receiver receiver = Receiver::MRC;
        Architecture architecture = Architecture::PhaseShifter;
        std::optional<uword> user; // 1-based; empty for the SUM row
        double se = 0.0;
        double stderr_se = 0.0;
        std::optional<double> power_mw;
        std::optional<double> ee;
        std::uint64_t seed = 0;
    };

    std::string csv_header();
    std::string csv_line(const ResultRow &row);
    std::string format_number(double v); // %.10g

    struct ScheduleRow
    {
        std::string experiment;
        double snr_db = 0.0;
        Receiver receiver = Receiver::MRC;
        Architecture architecture = Architecture::PhaseShifter;
        std::string algorithm;
        uword user = 0; // 1-based
        uword vr_first = 0, vr_last = 0; // 1-based antenna indices, inclusive
        double aoa_deg = 0.0;
        std::optional<uword> order; // 1-based selection order, empty when not scheduled
        std::vector<uword> subarrays; // 1-based
    };

    std::string schedule_csv_header();
    std::string schedule_csv_line(const ScheduleRow &row);

    struct OracleRow
    {
        std::string experiment;
        double snr_db = 0.0;
        Receiver receiver = Receiver::MRC;
        Architecture architecture = Architecture::PhaseShifter;
        std::string quantity; // "sum-se" for sweeps, "schedule" for scheduling
        double reference = 0.0; // Monte-Carlo or exhaustive optimum
        double candidate = 0.0; // closed-form or greedy
        double stderr_ref = 0.0;
        double ratio = 0.0;     // candidate / reference
        std::string detail;
    };

    std::string oracle_csv_header();
    std::string oracle_csv_line(const OracleRow &row);

    struct SweepResult
    {
        std::vector<ResultRow> rows;
    };

    struct ScheduleResult
    {
        std::vector<ResultRow> rows;
        std::vector<ScheduleRow> schedule;
        std::vector<std::string> notes;
    };

    struct OracleResult
    {
        std::vector<OracleRow> rows;
    };

    SweepResult run_sweep(const ExperimentConfig &config);
    ScheduleResult run_schedule(const ExperimentConfig &config);
    OracleResult run_oracle(const ExperimentConfig &config);

    // Files written to config.output; returns their paths
    std::vector<std::filesystem::path> write_sweep(const ExperimentConfig &config, const SweepResult &result,
                                                   const std::string &command = "sweep");
    std::vector<std::filesystem::path> write_schedule(const ExperimentConfig &config, const ScheduleResult &result);
    std::vector<std::filesystem::path> write_oracle(const ExperimentConfig &config, const OracleResult &result);
}

#endif
