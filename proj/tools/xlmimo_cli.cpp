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

#include "xlmimo/errors.hpp"
#include "xlmimo/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace
{
    struct Overrides
    {
        std::optional<std::uint64_t> seed;
        std::optional<arma::uword> trials;
        std::optional<std::string> out;
        std::optional<int> threads;
    };

    void add_common(CLI::App *cmd, std::string &config, Overrides &o)
    {
        cmd->add_option("config", config, "Experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
        cmd->add_option("--seed", o.seed, "Master seed for Monte-Carlo draws");
        cmd->add_option("--trials", o.trials, "Monte-Carlo trials per point");
        cmd->add_option("--out", o.out, "Output directory");
        cmd->add_option("--threads", o.threads, "Worker threads (0 = all)")->check(CLI::NonNegativeNumber);
    }

    xlmimo::ExperimentConfig resolve(const std::string &file, const Overrides &o)
    {
        auto c = xlmimo::load_config(file);
        if (o.seed)
            c.seed = *o.seed;
        if (o.trials)
            c.trials = *o.trials;
        if (o.out)
            c.output = *o.out;
        if (o.threads)
            c.threads = *o.threads;
        xlmimo::validate(c);
        return c;
    }

    void report(const std::vector<std::filesystem::path> &files)
    {
        for (const auto &f : files)
            std::cout << "wrote " << f.string() << '\n';
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Uplink spectral and energy efficiency of extra-large scale arrays"};
    app.require_subcommand(1);

    std::string config;
    Overrides o;
    auto *sweep = app.add_subcommand("sweep", "SE (and EE) versus SNR by Monte-Carlo and closed form");
    auto *schedule = app.add_subcommand("schedule", "Greedy user or joint user/subarray scheduling");
    auto *validate = app.add_subcommand("validate", "Check a configuration and print its resolved form");
    auto *oracle = app.add_subcommand("oracle", "Compare closed forms with Monte-Carlo, or greedy with exhaustive search");
    for (auto *cmd : {sweep, schedule, validate, oracle})
        add_common(cmd, config, o);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try
    {
        const auto c = resolve(config, o);
        if (validate->parsed())
            std::cout << c.to_json().dump(2) << '\n';
        else if (sweep->parsed())
            report(xlmimo::write_sweep(c, xlmimo::run_sweep(c)));
        else if (schedule->parsed())
        {
            auto result = xlmimo::run_schedule(c);
            for (const auto &n : result.notes)
                std::cerr << "note: " << n << '\n';
            report(xlmimo::write_schedule(c, result));
        }
        else if (oracle->parsed())
        {
            auto result = xlmimo::run_oracle(c);
            for (const auto &r : result.rows)
                std::cout << xlmimo::oracle_csv_line(r) << '\n';
            report(xlmimo::write_oracle(c, result));
        }
        return 0;
    }
    catch (const xlmimo::ConfigError &e)
    {
        for (const auto &issue : e.issues())
            std::cerr << "error: " << issue << '\n';
        return 1;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    catch (const xlmimo::numerical_error &e)
    {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 2;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
