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

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

using arma::uword;
using nlohmann::json;

namespace
{
    constexpr double deg = std::numbers::pi / 180.0;

    // Radians back to degrees, rounded so that configured values round-trip exactly
    double to_deg(double rad)
    {
        return std::round(rad / deg * 1e9) / 1e9;
    }

    std::string join(const std::vector<std::string> &v, const std::string &sep)
    {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i)
            s += (i ? sep : "") + v[i];
        return s;
    }

    // Field reader that records problems instead of stopping at the first one
    class Reader
    {
    public:
        Reader(const json &j, std::string path, std::vector<std::string> &issues, std::set<std::string> allowed)
            : j_(j), path_(std::move(path)), issues_(issues)
        {
            if (!j.is_object())
            {
                fail("", "must be an object");
                return;
            }
            for (const auto &[key, value] : j.items())
                if (!allowed.contains(key))
                    fail(key, "unknown field");
        }

        bool has(const std::string &key) const { return j_.is_object() && j_.contains(key); }
        const json &at(const std::string &key) const { return j_.at(key); }
        std::string path(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

        void fail(const std::string &key, const std::string &msg) { issues_.push_back(path(key) + ": " + msg); }

        double number(const std::string &key, double fallback, bool required = false)
        {
            if (!has(key))
            {
                if (required)
                    fail(key, "required");
                return fallback;
            }
            if (!j_[key].is_number())
            {
                fail(key, "must be a number");
                return fallback;
            }
            return j_[key].get<double>();
        }

        uword count(const std::string &key, uword fallback, bool required = false)
        {
            if (!has(key))
            {
                if (required)
                    fail(key, "required");
                return fallback;
            }
            if (!j_[key].is_number_integer() || j_[key].get<long long>() < 0)
            {
                fail(key, "must be a non-negative integer");
                return fallback;
            }
            return j_[key].get<uword>();
        }

        std::uint64_t u64(const std::string &key, std::uint64_t fallback)
        {
            if (!has(key))
                return fallback;
            if (!j_[key].is_number_unsigned() && !(j_[key].is_number_integer() && j_[key].get<long long>() >= 0))
            {
                fail(key, "must be a non-negative integer");
                return fallback;
            }
            return j_[key].get<std::uint64_t>();
        }

        std::string text(const std::string &key, const std::string &fallback, bool required = false)
        {
            if (!has(key))
            {
                if (required)
                    fail(key, "required");
                return fallback;
            }
            if (!j_[key].is_string())
            {
                fail(key, "must be a string");
                return fallback;
            }
            return j_[key].get<std::string>();
        }

        bool flag(const std::string &key, bool fallback)
        {
            if (!has(key))
                return fallback;
            if (!j_[key].is_boolean())
            {
                fail(key, "must be true or false");
                return fallback;
            }
            return j_[key].get<bool>();
        }

        template <typename T, typename Parse>
        std::vector<T> list(const std::string &key, Parse parse, bool required = true)
        {
            std::vector<T> out;
            if (!has(key))
            {
                if (required)
                    fail(key, "required");
                return out;
            }
            if (!j_[key].is_array() || j_[key].empty())
            {
                fail(key, "must be a non-empty list");
                return out;
            }
            for (const auto &v : j_[key])
            {
                if (!v.is_string())
                {
                    fail(key, "entries must be strings");
                    continue;
                }
                try
                {
                    out.push_back(parse(v.get<std::string>()));
                }
                catch (const std::invalid_argument &e)
                {
                    fail(key, e.what());
                }
            }
            return out;
        }

    private:
        const json &j_;
        std::string path_;
        std::vector<std::string> &issues_;
    };

    std::vector<double> parse_snr(const json &j, std::vector<std::string> &issues)
    {
        std::vector<double> out;
        if (j.is_array())
        {
            for (const auto &v : j)
            {
                if (!v.is_number())
                {
                    issues.push_back("snr_db: entries must be numbers");
                    return {};
                }
                out.push_back(v.get<double>());
            }
        }
        else if (j.is_object())
        {
            Reader r(j, "snr_db", issues, {"start", "stop", "step"});
            const double a = r.number("start", 0.0, true), b = r.number("stop", 0.0, true), s = r.number("step", 0.0, true);
            if (!(s > 0.0))
            {
                r.fail("step", "must be positive");
                return {};
            }
            if (b < a)
            {
                r.fail("stop", "must not be below start");
                return {};
            }
            const long n = long(std::floor((b - a) / s + 1e-9));
            for (long i = 0; i <= n; ++i)
                out.push_back(a + double(i) * s);
        }
        else
            issues.push_back("snr_db: must be a list of numbers or {start, stop, step}");
        if (out.empty() && issues.empty())
            issues.push_back("snr_db: must not be empty");
        for (double v : out)
            if (!std::isfinite(v))
                issues.push_back("snr_db: entries must be finite");
        return out;
    }
}

xlmimo::ConfigError::ConfigError(std::vector<std::string> issues)
    : std::invalid_argument("Invalid configuration: " + join(issues, "; ")), issues_(std::move(issues))
{
}

bool xlmimo::ExperimentConfig::has_method(Method m) const
{
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

xlmimo::ExperimentConfig xlmimo::parse_config(const json &j)
{
    std::vector<std::string> issues;
    ExperimentConfig c;
    Reader root(j, "", issues, {"experiment", "geometry", "scenario", "receivers", "architectures", "methods", "snr_db",
                                "trials", "seed", "threads", "output", "energy", "schedule"});
    if (!j.is_object())
        throw ConfigError(issues);

    c.experiment = root.text("experiment", "", true);

    if (!root.has("geometry"))
        root.fail("geometry", "required");
    else
    {
        Reader g(root.at("geometry"), "geometry", issues, {"antennas", "subarrays", "spacing"});
        c.n_antennas = g.count("antennas", 0, true);
        c.n_subarrays = g.count("subarrays", 0, true);
        c.spacing = g.number("spacing", 0.5);
    }

    if (!root.has("scenario"))
        root.fail("scenario", "required");
    else
    {
        Reader s(root.at("scenario"), "scenario", issues, {"kind", "users", "vr_length", "aoa_max_deg", "angular_std_deg", "aoa_deg", "placement_seed", "placements"});
        auto &sc = c.scenario;
        sc.kind = s.text("kind", "", true);
        sc.angles.aoa_max = s.number("aoa_max_deg", 60.0) * deg;
        sc.angles.angular_std = s.number("angular_std_deg", 10.0) * deg;
        sc.aoa = s.number("aoa_deg", 0.0) * deg;
        sc.placement_seed = s.u64("placement_seed", 1);
        sc.placements = s.count("placements", 1);
        if (sc.kind == "explicit")
        {
            if (!s.has("users") || !s.at("users").is_array() || s.at("users").empty())
                s.fail("users", "explicit scenarios need a non-empty list of users");
            else
            {
                uword i = 0;
                for (const auto &u : s.at("users"))
                {
                    Reader r(u, "scenario.users[" + std::to_string(i++) + "]", issues,
                             {"aoa_deg", "angular_std_deg", "vr_start", "vr_length", "amplitudes"});
                    UserSpec spec;
                    spec.aoa = r.number("aoa_deg", 0.0, true) * deg;
                    spec.angular_std = r.number("angular_std_deg", 10.0) * deg;
                    spec.vr_start = r.count("vr_start", 0, true);
                    spec.vr_length = r.count("vr_length", 1, true);
                    if (r.has("amplitudes"))
                    {
                        if (!r.at("amplitudes").is_array())
                            r.fail("amplitudes", "must be a list of numbers");
                        else
                            for (const auto &a : r.at("amplitudes"))
                                if (a.is_number())
                                    spec.amplitudes.push_back(a.get<double>());
                                else
                                    r.fail("amplitudes", "must be a list of numbers");
                    }
                    sc.users.push_back(spec);
                }
                sc.n_users = sc.users.size();
            }
        }
        else
        {
            sc.n_users = s.count("users", 0, true);
            sc.vr_length = s.count("vr_length", 0, true);
        }
    }

    c.receivers = root.list<Receiver>("receivers", [](const std::string &v)
                                      { return parse_receiver(v); });
    c.architectures = root.list<Architecture>("architectures", [](const std::string &v)
                                              { return parse_architecture(v); });
    c.methods = root.list<Method>("methods", [](const std::string &v)
                                  { return parse_method(v); });
    if (!root.has("snr_db"))
        root.fail("snr_db", "required");
    else
        c.snr_db = parse_snr(root.at("snr_db"), issues);
    c.trials = root.count("trials", 1000);
    c.seed = root.u64("seed", 1);
    c.threads = int(root.count("threads", 0));
    c.output = root.text("output", "results");

    if (root.has("energy"))
    {
        Reader e(root.at("energy"), "energy", issues, {"bandwidth_hz", "gate_elements", "profile"});
        EnergySpec spec;
        spec.bandwidth_hz = e.number("bandwidth_hz", 20e6);
        spec.gate_elements = e.flag("gate_elements", false);
        if (e.has("profile"))
        {
            Reader p(e.at("profile"), "energy.profile", issues,
                     {"phase_shifter_mw", "switch_mw", "lna_mw", "rf_chain_mw", "adc_mw", "baseband_mw"});
            auto &pp = spec.profile;
            pp.phase_shifter_mw = p.number("phase_shifter_mw", pp.phase_shifter_mw);
            pp.switch_mw = p.number("switch_mw", pp.switch_mw);
            pp.lna_mw = p.number("lna_mw", pp.lna_mw);
            pp.rf_chain_mw = p.number("rf_chain_mw", pp.rf_chain_mw);
            pp.adc_mw = p.number("adc_mw", pp.adc_mw);
            pp.baseband_mw = p.number("baseband_mw", pp.baseband_mw);
        }
        c.energy = spec;
    }

    if (root.has("schedule"))
    {
        Reader s(root.at("schedule"), "schedule", issues, {"algorithm", "max_users", "sub_min", "sub_max", "search"});
        ScheduleSpec spec;
        spec.algorithm = s.text("algorithm", "greedy-user");
        spec.max_users = s.count("max_users", 0, true);
        spec.bounds.min = s.count("sub_min", 1);
        spec.bounds.max = s.count("sub_max", spec.bounds.min);
        try
        {
            spec.search = parse_subset_search(s.text("search", "rank-topj"));
        }
        catch (const std::invalid_argument &e)
        {
            s.fail("search", e.what());
        }
        c.schedule = spec;
    }

    if (!issues.empty())
        throw ConfigError(issues);
    validate(c);
    return c;
}

void xlmimo::validate(const ExperimentConfig &c)
{
    std::vector<std::string> issues;
    if (c.experiment.empty())
        issues.push_back("experiment: must not be empty");
    for (char ch : c.experiment)
        if (!(std::isalnum((unsigned char)ch) || ch == '_' || ch == '-' || ch == '.'))
        {
            issues.push_back("experiment: only letters, digits, '_', '-' and '.' are allowed");
            break;
        }

    bool geometry_ok = false;
    try
    {
        (void)c.geometry();
        geometry_ok = true;
    }
    catch (const std::invalid_argument &e)
    {
        issues.push_back(std::string("geometry: ") + e.what());
    }

    const auto &s = c.scenario;
    static const std::set<std::string> kinds = {"random", "partial-overlap", "no-overlap", "completely-overlapped", "explicit"};
    if (!kinds.contains(s.kind))
        issues.push_back("scenario.kind: must be one of random, partial-overlap, no-overlap, completely-overlapped, explicit");
    if (s.n_users == 0)
        issues.push_back("scenario.users: at least one user is required");
    if (s.kind != "explicit" && geometry_ok && (s.vr_length == 0 || s.vr_length > c.n_antennas))
        issues.push_back("scenario.vr_length: must lie in [1, antennas]");
    if (s.placements == 0)
        issues.push_back("scenario.placements: must be positive");
    if (s.placements > 1 && s.kind != "random")
        issues.push_back("scenario.placements: only random scenarios have more than one placement");
    if (!(s.angles.aoa_max >= 0.0) || !(s.angles.angular_std >= 0.0))
        issues.push_back("scenario: angles must be non-negative");

    if (c.has_method(Method::MonteCarlo) && c.trials == 0)
        issues.push_back("trials: Monte-Carlo evaluation needs at least one trial");
    if (c.threads < 0)
        issues.push_back("threads: must be non-negative");
    if (c.output.empty())
        issues.push_back("output: must not be empty");

    if (c.energy)
    {
        try
        {
            c.energy->profile.validate();
        }
        catch (const std::invalid_argument &e)
        {
            issues.push_back(std::string("energy.profile: ") + e.what());
        }
        if (!(c.energy->bandwidth_hz >= 0.0))
            issues.push_back("energy.bandwidth_hz: must be non-negative");
    }

    if (c.schedule)
    {
        const auto &sc = *c.schedule;
        if (sc.algorithm != "greedy-user" && sc.algorithm != "greedy-joint")
            issues.push_back("schedule.algorithm: must be greedy-user or greedy-joint");
        if (sc.max_users > s.n_users)
            issues.push_back("schedule.max_users: exceeds the number of users");
        for (auto a : c.architectures)
            if (a == Architecture::RandomPhase)
                issues.push_back("architectures: scheduling supports phase-shifter and on-off only");
        if (sc.algorithm == "greedy-joint" && geometry_ok)
        {
            if (sc.bounds.min == 0 || sc.bounds.min > sc.bounds.max || sc.bounds.max > c.n_subarrays)
                issues.push_back("schedule.sub_min/sub_max: must satisfy 1 <= sub_min <= sub_max <= subarrays");
            else if (sc.max_users * sc.bounds.min > c.n_subarrays)
                issues.push_back("schedule.max_users: max_users * sub_min exceeds the number of subarrays");
        }
    }

    // Building the scenarios catches region and spacing problems
    if (issues.empty())
    {
        try
        {
            (void)build_scenarios(c);
        }
        catch (const std::invalid_argument &e)
        {
            issues.push_back(std::string("scenario: ") + e.what());
        }
    }
    if (!issues.empty())
        throw ConfigError(issues);
}

xlmimo::ExperimentConfig xlmimo::load_config(const std::filesystem::path &file)
{
    std::ifstream in(file);
    if (!in)
        throw ConfigError({"cannot open configuration file '" + file.string() + "'"});
    json j;
    try
    {
        in >> j;
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError({"malformed JSON in '" + file.string() + "': " + e.what()});
    }
    return parse_config(j);
}

std::vector<xlmimo::Scenario> xlmimo::build_scenarios(const ExperimentConfig &c)
{
    const ArrayGeometry g = c.geometry();
    const auto &s = c.scenario;
    std::vector<Scenario> out;
    if (s.kind == "random")
        for (uword p = 0; p < s.placements; ++p)
            out.push_back(random_scenario(g, s.n_users, s.vr_length, s.placement_seed + p, s.angles));
    else if (s.kind == "partial-overlap")
        out.push_back(partial_overlap_scenario(g, s.n_users, s.vr_length, s.angles));
    else if (s.kind == "no-overlap")
        out.push_back(no_overlap_scenario(g, s.n_users, s.vr_length, s.angles));
    else if (s.kind == "completely-overlapped")
        out.push_back(completely_overlapped_scenario(g, s.n_users, s.vr_length, s.aoa, s.angles.angular_std));
    else if (s.kind == "explicit")
    {
        Scenario sc{g, {}};
        for (const auto &u : s.users)
            sc.users.emplace_back(g, u.aoa, u.angular_std, u.vr_start, u.vr_length, arma::vec(u.amplitudes));
        out.push_back(sc);
    }
    else
        throw std::invalid_argument("Unknown scenario kind '" + s.kind + "'.");
    return out;
}

std::string xlmimo::experiment_id(const ExperimentConfig &c, uword placement)
{
    if (c.scenario.placements <= 1)
        return c.experiment;
    return c.experiment + ".p" + std::to_string(placement + 1);
}

json xlmimo::ExperimentConfig::to_json() const
{
    json j;
    j["experiment"] = experiment;
    j["geometry"] = {{"antennas", n_antennas}, {"subarrays", n_subarrays}, {"spacing", spacing}};

    json s;
    s["kind"] = scenario.kind;
    s["users"] = scenario.n_users;
    if (scenario.kind == "explicit")
    {
        s["users"] = json::array();
        for (const auto &u : scenario.users)
            s["users"].push_back({{"aoa_deg", to_deg(u.aoa)}, {"angular_std_deg", to_deg(u.angular_std)}, {"vr_start", u.vr_start}, {"vr_length", u.vr_length}, {"amplitudes", u.amplitudes}});
    }
    else
    {
        s["vr_length"] = scenario.vr_length;
        s["aoa_max_deg"] = to_deg(scenario.angles.aoa_max);
        s["angular_std_deg"] = to_deg(scenario.angles.angular_std);
    }
    if (scenario.kind == "completely-overlapped")
        s["aoa_deg"] = to_deg(scenario.aoa);
    if (scenario.kind == "random")
    {
        s["placement_seed"] = scenario.placement_seed;
        s["placements"] = scenario.placements;
    }
    j["scenario"] = s;

    j["receivers"] = json::array();
    for (auto r : receivers)
        j["receivers"].push_back(to_string(r));
    j["architectures"] = json::array();
    for (auto a : architectures)
        j["architectures"].push_back(to_string(a));
    j["methods"] = json::array();
    for (auto m : methods)
        j["methods"].push_back(to_string(m));
    j["snr_db"] = snr_db;
    j["trials"] = trials;
    j["seed"] = seed;
    j["threads"] = threads;
    j["output"] = output;
    if (energy)
    {
        const auto &p = energy->profile;
        j["energy"] = {{"bandwidth_hz", energy->bandwidth_hz},
                       {"gate_elements", energy->gate_elements},
                       {"profile", {{"phase_shifter_mw", p.phase_shifter_mw}, {"switch_mw", p.switch_mw}, {"lna_mw", p.lna_mw}, {"rf_chain_mw", p.rf_chain_mw}, {"adc_mw", p.adc_mw}, {"baseband_mw", p.baseband_mw}}}};
    }
    if (schedule)
        j["schedule"] = {{"algorithm", schedule->algorithm},
                         {"max_users", schedule->max_users},
                         {"sub_min", schedule->bounds.min},
                         {"sub_max", schedule->bounds.max},
                         {"search", to_string(schedule->search)}};
    return j;
}
