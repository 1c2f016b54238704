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

#include "xlmimo/experiment.hpp"
#include "xlmimo/closed_form.hpp"
#include "xlmimo/rng.hpp"

#include <fstream>
#include <numbers>
#include <numeric>

using arma::uword;
using nlohmann::json;

namespace
{
    std::uint64_t closed_form_seed(const xlmimo::ExperimentConfig &c, uword placement, xlmimo::Architecture a)
    {
        if (c.scenario.kind == "random" || a == xlmimo::Architecture::RandomPhase)
            return c.scenario.placement_seed + placement;
        return 0;
    }

    xlmimo::Combiner make_combiner(xlmimo::Architecture a, const std::vector<xlmimo::ChannelStats> &stats,
                                   const xlmimo::ArrayGeometry &g, std::uint64_t seed)
    {
        switch (a)
        {
        case xlmimo::Architecture::PhaseShifter:
            return xlmimo::phase_design_multiuser(stats, g);
        case xlmimo::Architecture::OnOffSwitch:
            return xlmimo::onoff_combiner(g);
        case xlmimo::Architecture::RandomPhase:
        default:
        {
            auto rng = xlmimo::make_stream(seed, xlmimo::combiner_stream_offset);
            return xlmimo::random_phase_combiner(g, rng);
        }
        }
    }

    void append_rows(std::vector<xlmimo::ResultRow> &rows, const xlmimo::ResultRow &base, const xlmimo::SeResult &res,
                     const std::vector<uword> &user_ids, const std::optional<double> &power, double bandwidth)
    {
        for (uword k = 0; k < res.per_user_se.size(); ++k)
        {
            auto r = base;
            r.user = user_ids[k] + 1;
            r.se = res.per_user_se[k];
            r.stderr_se = res.per_user_stderr[k];
            r.power_mw = power;
            rows.push_back(r);
        }
        auto r = base;
        r.se = res.sum_se;
        r.stderr_se = res.sum_stderr;
        r.power_mw = power;
        if (power)
            r.ee = xlmimo::energy_efficiency(res.sum_se, *power, bandwidth);
        rows.push_back(r);
    }

    std::string join_ids(const std::vector<uword> &ids)
    {
        std::string s;
        for (size_t i = 0; i < ids.size(); ++i)
            s += (i ? ";" : "") + std::to_string(ids[i] + 1);
        return s.empty() ? "-" : s;
    }

    void write_lines(const std::filesystem::path &file, const std::string &header, const std::vector<std::string> &lines)
    {
        std::ofstream out(file, std::ios::binary);
        if (!out)
            throw std::runtime_error("Cannot write '" + file.string() + "'.");
        out << header << '\n';
        for (const auto &l : lines)
            out << l << '\n';
    }

    void write_sidecar(const std::filesystem::path &file, const xlmimo::ExperimentConfig &c, const std::string &command,
                       const std::vector<std::filesystem::path> &outputs)
    {
        json j;
        j["schema_version"] = xlmimo::result_schema_version;
        j["command"] = command;
        j["columns"] = json::array();
        for (const auto &col : {"experiment", "snr_db", "method", "receiver", "architecture", "user", "se", "stderr", "power_mw", "ee", "seed"})
            j["columns"].push_back(col);
        j["files"] = json::array();
        for (const auto &p : outputs)
            j["files"].push_back(p.filename().string());
        j["config"] = c.to_json();
        std::ofstream out(file, std::ios::binary);
        if (!out)
            throw std::runtime_error("Cannot write '" + file.string() + "'.");
        out << j.dump(2) << '\n';
    }
}

xlmimo::SweepResult xlmimo::run_sweep(const ExperimentConfig &c)
{
    validate(c);
    const ArrayGeometry g = c.geometry();
    const auto scenarios = build_scenarios(c);
    const bool mc = c.has_method(Method::MonteCarlo);
    SweepResult out;

    for (uword p = 0; p < scenarios.size(); ++p)
    {
        const auto stats = scenarios[p].stats();
        std::vector<uword> ids(stats.size());
        std::iota(ids.begin(), ids.end(), 0);

        std::vector<Combiner> combiners;
        for (auto a : c.architectures)
            combiners.push_back(make_combiner(a, stats, g, closed_form_seed(c, p, Architecture::RandomPhase)));

        std::optional<MonteCarloTable> table;
        if (mc)
        {
            MonteCarloPlan plan;
            plan.combiners = combiners;
            plan.receivers = c.receivers;
            plan.snr_db = c.snr_db;
            plan.trials = c.trials;
            plan.seed = c.seed;
            plan.threads = c.threads;
            table = run_monte_carlo(stats, plan);
        }

        // Reduced correlations do not depend on SNR or receiver
        std::vector<std::vector<ProjectedCorrelation>> projected(combiners.size());
        if (c.has_method(Method::ClosedForm))
            for (uword a = 0; a < combiners.size(); ++a)
                for (const auto &s : stats)
                    projected[a].push_back(project(combiners[a], s));

        for (uword s = 0; s < c.snr_db.size(); ++s)
            for (uword r = 0; r < c.receivers.size(); ++r)
                for (uword a = 0; a < c.architectures.size(); ++a)
                {
                    std::optional<double> power;
                    if (c.energy)
                        power = uplink_power(c.architectures[a], g.n_antennas(), g.n_subarrays(), c.energy->profile);
                    const double bandwidth = c.energy ? c.energy->bandwidth_hz : 0.0;

                    for (auto m : c.methods)
                    {
                        ResultRow base;
                        base.experiment = experiment_id(c, p);
                        base.snr_db = c.snr_db[s];
                        base.method = m;
                        base.receiver = c.receivers[r];
                        base.architecture = c.architectures[a];
                        if (m == Method::MonteCarlo)
                        {
                            base.seed = c.seed;
                            append_rows(out.rows, base, table->at(a, r, s), ids, power, bandwidth);
                        }
                        else
                        {
                            base.seed = closed_form_seed(c, p, c.architectures[a]);
                            append_rows(out.rows, base, closed_form_se(projected[a], c.receivers[r], snr_to_power(c.snr_db[s])),
                                        ids, power, bandwidth);
                        }
                    }
                }
    }
    return out;
}

xlmimo::ScheduleResult xlmimo::run_schedule(const ExperimentConfig &c)
{
    validate(c);
    if (!c.schedule)
        throw ConfigError({"schedule: required for scheduling runs"});
    const auto &spec = *c.schedule;
    const ArrayGeometry g = c.geometry();
    const auto scenarios = build_scenarios(c);
    ScheduleResult out;

    for (uword p = 0; p < scenarios.size(); ++p)
    {
        const auto stats = scenarios[p].stats();
        for (double snr : c.snr_db)
            for (auto rx : c.receivers)
                for (auto arch : c.architectures)
                {
                    const double p_u = snr_to_power(snr);
                    SumSeObjective objective(g, stats, rx, arch, p_u);
                    ScheduleOutcome sched = spec.algorithm == "greedy-joint"
                                                ? greedy_joint_schedule(objective, spec.max_users, spec.bounds, spec.search)
                                                : greedy_user_schedule(objective, spec.max_users);
                    for (const auto &n : sched.notes)
                        out.notes.push_back(experiment_id(c, p) + " " + format_number(snr) + " dB " + to_string(rx) + " " +
                                            to_string(arch) + ": " + n);

                    uword active = g.n_subarrays();
                    if (spec.algorithm == "greedy-joint")
                    {
                        active = 0;
                        for (const auto &[u, subs] : sched.subarray_assignment)
                            active += subs.size();
                    }
                    std::optional<double> power;
                    if (c.energy)
                        power = uplink_power(arch, g.n_antennas(), g.n_subarrays(), c.energy->profile, active,
                                             c.energy->gate_elements);
                    const double bandwidth = c.energy ? c.energy->bandwidth_hz : 0.0;

                    std::vector<ChannelStats> chosen;
                    for (uword u : sched.scheduled_users)
                        chosen.push_back(stats[u]);

                    for (auto m : c.methods)
                    {
                        ResultRow base;
                        base.experiment = experiment_id(c, p);
                        base.snr_db = snr;
                        base.method = m;
                        base.receiver = rx;
                        base.architecture = arch;
                        SeResult res;
                        res.method = m;
                        res.snr_db = snr;
                        if (m == Method::ClosedForm)
                        {
                            base.seed = closed_form_seed(c, p, arch);
                            res.per_user_se = objective.per_user_se(sched.scheduled_users, sched.subarray_assignment);
                            res.per_user_stderr.assign(res.per_user_se.size(), 0.0);
                            res.sum_se = std::accumulate(res.per_user_se.begin(), res.per_user_se.end(), 0.0);
                        }
                        else
                        {
                            base.seed = c.seed;
                            if (!chosen.empty())
                            {
                                MonteCarloPlan plan;
                                plan.combiners = {objective.combiner_for(sched.scheduled_users, sched.subarray_assignment)};
                                plan.receivers = {rx};
                                plan.snr_db = {snr};
                                plan.trials = c.trials;
                                plan.seed = c.seed;
                                plan.threads = c.threads;
                                res = run_monte_carlo(chosen, plan).at(0, 0, 0);
                            }
                        }
                        append_rows(out.rows, base, res, sched.scheduled_users, power, bandwidth);
                    }

                    for (uword k = 0; k < stats.size(); ++k)
                    {
                        ScheduleRow row;
                        row.experiment = experiment_id(c, p);
                        row.snr_db = snr;
                        row.receiver = rx;
                        row.architecture = arch;
                        row.algorithm = spec.algorithm;
                        row.user = k + 1;
                        row.vr_first = stats[k].support_begin() + 1;
                        row.vr_last = stats[k].support_end();
                        row.aoa_deg = scenarios[p].users[k].mean_aoa() * 180.0 / std::numbers::pi;
                        auto it = std::find(sched.scheduled_users.begin(), sched.scheduled_users.end(), k);
                        if (it != sched.scheduled_users.end())
                            row.order = uword(it - sched.scheduled_users.begin()) + 1;
                        if (auto a = sched.subarray_assignment.find(k); a != sched.subarray_assignment.end())
                            for (uword j : a->second)
                                row.subarrays.push_back(j + 1);
                        out.schedule.push_back(row);
                    }
                }
    }
    return out;
}

xlmimo::OracleResult xlmimo::run_oracle(const ExperimentConfig &c)
{
    validate(c);
    const ArrayGeometry g = c.geometry();
    const auto scenarios = build_scenarios(c);
    OracleResult out;

    for (uword p = 0; p < scenarios.size(); ++p)
    {
        const auto stats = scenarios[p].stats();
        if (c.schedule)
        {
            const auto &spec = *c.schedule;
            const bool joint = spec.algorithm == "greedy-joint";
            for (double snr : c.snr_db)
                for (auto rx : c.receivers)
                    for (auto arch : c.architectures)
                    {
                        SumSeObjective objective(g, stats, rx, arch, snr_to_power(snr));
                        auto greedy = joint ? greedy_joint_schedule(objective, spec.max_users, spec.bounds, spec.search)
                                            : greedy_user_schedule(objective, spec.max_users);
                        auto best = exhaustive_schedule(objective, spec.max_users,
                                                        joint ? std::optional<SubarrayBounds>(spec.bounds) : std::nullopt);
                        OracleRow row;
                        row.experiment = experiment_id(c, p);
                        row.snr_db = snr;
                        row.receiver = rx;
                        row.architecture = arch;
                        row.quantity = "schedule";
                        row.reference = best.sum_se;
                        row.candidate = greedy.sum_se;
                        row.ratio = best.sum_se > 0.0 ? greedy.sum_se / best.sum_se : 1.0;
                        row.detail = "greedy=" + join_ids(greedy.scheduled_users) + " oracle=" + join_ids(best.scheduled_users) +
                                     " evaluations=" + std::to_string(best.evaluations);
                        out.rows.push_back(row);
                    }
            continue;
        }

        if (c.trials == 0)
            throw ConfigError({"trials: the Monte-Carlo oracle needs at least one trial"});
        std::vector<Combiner> combiners;
        for (auto a : c.architectures)
            combiners.push_back(make_combiner(a, stats, g, closed_form_seed(c, p, Architecture::RandomPhase)));
        MonteCarloPlan plan;
        plan.combiners = combiners;
        plan.receivers = c.receivers;
        plan.snr_db = c.snr_db;
        plan.trials = c.trials;
        plan.seed = c.seed;
        plan.threads = c.threads;
        const auto table = run_monte_carlo(stats, plan);

        for (uword s = 0; s < c.snr_db.size(); ++s)
            for (uword r = 0; r < c.receivers.size(); ++r)
                for (uword a = 0; a < combiners.size(); ++a)
                {
                    const auto &mcr = table.at(a, r, s);
                    const auto cf = closed_form_se(stats, combiners[a], c.receivers[r], snr_to_power(c.snr_db[s]));
                    OracleRow row;
                    row.experiment = experiment_id(c, p);
                    row.snr_db = c.snr_db[s];
                    row.receiver = c.receivers[r];
                    row.architecture = c.architectures[a];
                    row.quantity = "sum-se";
                    row.reference = mcr.sum_se;
                    row.candidate = cf.sum_se;
                    row.stderr_ref = mcr.sum_stderr;
                    row.ratio = mcr.sum_se > 0.0 ? cf.sum_se / mcr.sum_se : 1.0;
                    row.detail = "relative_error=" + format_number(mcr.sum_se > 0.0 ? std::abs(cf.sum_se - mcr.sum_se) / mcr.sum_se : 0.0);
                    out.rows.push_back(row);
                }
    }
    return out;
}

std::vector<std::filesystem::path> xlmimo::write_sweep(const ExperimentConfig &c, const SweepResult &result, const std::string &command)
{
    std::filesystem::create_directories(c.output);
    const auto csv = std::filesystem::path(c.output) / (c.experiment + ".csv");
    std::vector<std::string> lines;
    for (const auto &r : result.rows)
        lines.push_back(csv_line(r));
    write_lines(csv, csv_header(), lines);
    const auto sidecar = std::filesystem::path(c.output) / (c.experiment + ".json");
    write_sidecar(sidecar, c, command, {csv});
    return {csv, sidecar};
}

std::vector<std::filesystem::path> xlmimo::write_schedule(const ExperimentConfig &c, const ScheduleResult &result)
{
    auto files = write_sweep(c, SweepResult{result.rows}, "schedule");
    const auto map = std::filesystem::path(c.output) / (c.experiment + "_schedule.csv");
    std::vector<std::string> lines;
    for (const auto &r : result.schedule)
        lines.push_back(schedule_csv_line(r));
    write_lines(map, schedule_csv_header(), lines);
    write_sidecar(files[1], c, "schedule", {files[0], map});
    files.push_back(map);
    return files;
}

std::vector<std::filesystem::path> xlmimo::write_oracle(const ExperimentConfig &c, const OracleResult &result)
{
    std::filesystem::create_directories(c.output);
    const auto csv = std::filesystem::path(c.output) / (c.experiment + "_oracle.csv");
    std::vector<std::string> lines;
    for (const auto &r : result.rows)
        lines.push_back(oracle_csv_line(r));
    write_lines(csv, oracle_csv_header(), lines);
    return {csv};
}
