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

#include "xlmimo/scheduling.hpp"
#include "xlmimo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

using arma::uword;

std::string xlmimo::to_string(SubsetSearch s)
{
    return s == SubsetSearch::RankTopJ ? "rank-topj" : "exhaustive-vr";
}

xlmimo::SubsetSearch xlmimo::parse_subset_search(std::string_view name)
{
    if (name == "rank-topj")
        return SubsetSearch::RankTopJ;
    if (name == "exhaustive-vr")
        return SubsetSearch::ExhaustiveVr;
    throw std::invalid_argument("Unknown subset search '" + std::string(name) + "'.");
}

xlmimo::SumSeObjective::SumSeObjective(const ArrayGeometry &geometry, std::vector<ChannelStats> stats,
                                       Receiver receiver, Architecture architecture, double p_u)
    : geometry_(geometry), stats_(std::move(stats)), receiver_(receiver), architecture_(architecture), p_u_(p_u)
{
    if (architecture == Architecture::RandomPhase)
        throw std::invalid_argument("Scheduling supports the phase-shifter and on-off architectures only.");
    if (!(p_u > 0.0))
        throw std::invalid_argument("Transmit power must be positive.");

    const uword N = geometry.n_subarrays(), S = geometry.subarray_size();
    angles_.assign(stats_.size(), std::vector<arma::vec>(N));
    gain_.zeros(stats_.size(), N);
    const arma::cx_vec all_on(S, arma::fill::value(1.0 / std::sqrt(double(S))));

    for (uword k = 0; k < stats_.size(); ++k)
    {
        if (stats_[k].n_antennas() != geometry.n_antennas())
            throw std::invalid_argument("User statistics do not match the array.");
        for (uword j = 0; j < N; ++j)
        {
            if (stats_[k].coverage(geometry.subarray_begin(j), S) == 0)
                continue;
            const arma::cx_mat block = stats_[k].diagonal_block(geometry.subarray_begin(j), S);
            arma::cx_vec w = all_on;
            if (architecture == Architecture::PhaseShifter)
            {
                angles_[k][j] = eigen_phase_angles(block);
                for (uword m = 0; m < S; ++m)
                    w[m] = std::polar(1.0 / std::sqrt(double(S)), angles_[k][j][m]);
            }
            gain_(k, j) = std::real(arma::cdot(w, block * w));
        }
    }
}

bool xlmimo::SumSeObjective::covers(uword user, uword subarray) const
{
    return stats_.at(user).coverage(geometry_.subarray_begin(subarray), geometry_.subarray_size()) > 0;
}

double xlmimo::SumSeObjective::subarray_gain(uword user, uword subarray) const
{
    return gain_(user, subarray);
}

xlmimo::Combiner xlmimo::SumSeObjective::combiner_for(const std::vector<uword> &users, const Assignment &assignment) const
{
    const uword N = geometry_.n_subarrays(), S = geometry_.subarray_size();
    for (uword u : users)
        if (u >= stats_.size())
            throw std::invalid_argument("User index " + std::to_string(u) + " out of range.");

    std::vector<arma::vec> angles(N, arma::vec(S, arma::fill::zeros));
    std::vector<uword> active;
    if (assignment.empty())
    {
        active.resize(N);
        std::iota(active.begin(), active.end(), 0);
        if (architecture_ == Architecture::PhaseShifter)
            for (uword u : users)
                for (uword j = 0; j < N; ++j)
                    if (!angles_[u][j].is_empty())
                        angles[j] += angles_[u][j];
    }
    else
    {
        std::vector<bool> used(N, false);
        for (const auto &[u, subs] : assignment)
        {
            if (std::find(users.begin(), users.end(), u) == users.end())
                throw std::invalid_argument("Assignment names an unscheduled user.");
            for (uword j : subs)
            {
                if (j >= N)
                    throw std::invalid_argument("Subarray index " + std::to_string(j) + " out of range.");
                if (used[j])
                    throw std::invalid_argument("Subarray " + std::to_string(j) + " assigned twice.");
                used[j] = true;
                if (architecture_ == Architecture::PhaseShifter && !angles_[u][j].is_empty())
                    angles[j] = angles_[u][j];
            }
        }
        for (uword j = 0; j < N; ++j)
            if (used[j])
                active.push_back(j);
    }

    Combiner full = architecture_ == Architecture::PhaseShifter ? phase_shifter_from_angles(geometry_, angles)
                                                                : onoff_combiner(geometry_);
    return assignment.empty() ? full : full.with_active(active);
}

std::vector<double> xlmimo::SumSeObjective::per_user_se(const std::vector<uword> &users, const Assignment &assignment) const
{
    if (users.empty())
        return {};
    const Combiner c = combiner_for(users, assignment);
    std::vector<ProjectedCorrelation> projected;
    projected.reserve(users.size());
    for (uword u : users)
        projected.push_back(project(c, stats_[u]));
    return closed_form_se(projected, receiver_, p_u_).per_user_se;
}

double xlmimo::SumSeObjective::operator()(const std::vector<uword> &users, const Assignment &assignment) const
{
    auto se = per_user_se(users, assignment);
    return std::accumulate(se.begin(), se.end(), 0.0);
}

xlmimo::ScheduleOutcome xlmimo::greedy_user_schedule(const SumSeObjective &objective, uword max_users)
{
    const uword K = objective.n_users();
    if (max_users > K)
        throw std::invalid_argument("Target number of users exceeds the number of candidates.");

    ScheduleOutcome out;
    std::vector<bool> scheduled(K, false);
    double current = 0.0;

    while (out.scheduled_users.size() < max_users)
    {
        IterationRecord rec;
        double best = -1.0;
        for (uword u = 0; u < K; ++u)
        {
            if (scheduled[u])
                continue;
            auto trial = out.scheduled_users;
            trial.push_back(u);
            const double r = objective(trial);
            ++out.evaluations;
            rec.candidates.push_back(u);
            rec.candidate_se.push_back(r);
            if (r > best)
            {
                best = r;
                rec.best_user = u;
            }
        }
        if (rec.candidates.empty())
            break;
        rec.best_se = best;
        rec.accepted = current <= best;
        out.iterations.push_back(rec);
        if (!rec.accepted)
            break;
        scheduled[rec.best_user] = true;
        out.scheduled_users.push_back(rec.best_user);
        current = best;
    }
    out.sum_se = current;
    return out;
}

namespace
{
    // All k-subsets of pool in lexicographic order
    void for_each_combination(const std::vector<uword> &pool, uword k, const std::function<void(const std::vector<uword> &)> &fn)
    {
        if (k > pool.size())
            return;
        std::vector<uword> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<uword> pick(k);
        while (true)
        {
            for (uword i = 0; i < k; ++i)
                pick[i] = pool[idx[i]];
            fn(pick);
            if (k == 0)
                return;
            uword i = k;
            while (i > 0 && idx[i - 1] == pool.size() - k + i - 1)
                --i;
            if (i == 0)
                return;
            ++idx[i - 1];
            for (uword j = i; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }

    std::vector<uword> ranked(const xlmimo::SumSeObjective &obj, uword user, const std::vector<uword> &pool)
    {
        std::vector<uword> r = pool;
        std::stable_sort(r.begin(), r.end(), [&](uword a, uword b)
                         { return obj.subarray_gain(user, a) > obj.subarray_gain(user, b); });
        return r;
    }

    std::vector<std::vector<uword>> candidate_sets(const xlmimo::SumSeObjective &obj, uword user,
                                                   const std::vector<uword> &remaining,
                                                   const xlmimo::SubarrayBounds &bounds, xlmimo::SubsetSearch search)
    {
        std::vector<std::vector<uword>> sets;
        const auto order = ranked(obj, user, remaining);
        if (search == xlmimo::SubsetSearch::RankTopJ)
        {
            for (uword j = bounds.min; j <= std::min<uword>(bounds.max, order.size()); ++j)
            {
                std::vector<uword> s(order.begin(), order.begin() + j);
                std::sort(s.begin(), s.end());
                sets.push_back(std::move(s));
            }
            return sets;
        }

        std::vector<uword> pool;
        for (uword j : remaining)
            if (obj.covers(user, j))
                pool.push_back(j);
        // Too few covered subarrays: pad with the best-ranked others
        for (uword j : order)
        {
            if (pool.size() >= bounds.min)
                break;
            if (std::find(pool.begin(), pool.end(), j) == pool.end())
                pool.push_back(j);
        }
        std::sort(pool.begin(), pool.end());

        double count = 0.0;
        for (uword j = bounds.min; j <= std::min<uword>(bounds.max, pool.size()); ++j)
        {
            double c = 1.0;
            for (uword i = 0; i < j; ++i)
                c = c * double(pool.size() - i) / double(i + 1);
            count += c;
        }
        if (count > 1e7)
            throw xlmimo::numerical_error("Subset enumeration for user " + std::to_string(user + 1) + " needs " +
                                          std::to_string(count) + " evaluations (limit 1e7).");
        for (uword j = bounds.min; j <= std::min<uword>(bounds.max, pool.size()); ++j)
            for_each_combination(pool, j, [&](const std::vector<uword> &s)
                                 { sets.push_back(s); });
        return sets;
    }

    void check_bounds(const xlmimo::SumSeObjective &obj, uword max_users, const xlmimo::SubarrayBounds &b)
    {
        const uword N = obj.geometry().n_subarrays();
        if (max_users > obj.n_users())
            throw std::invalid_argument("Target number of users exceeds the number of candidates.");
        if (b.min == 0 || b.min > b.max || b.max > N)
            throw std::invalid_argument("Subarray bounds must satisfy 1 <= min <= max <= N.");
        if (max_users * b.min > N)
            throw std::invalid_argument("Target users times the minimum subarray count exceeds N.");
    }
}

xlmimo::ScheduleOutcome xlmimo::greedy_joint_schedule(const SumSeObjective &objective, uword max_users,
                                                      const SubarrayBounds &bounds, SubsetSearch search)
{
    check_bounds(objective, max_users, bounds);
    const uword K = objective.n_users();

    ScheduleOutcome out;
    std::vector<bool> scheduled(K, false);
    std::vector<uword> remaining(objective.geometry().n_subarrays());
    std::iota(remaining.begin(), remaining.end(), 0);
    double current = 0.0;

    while (out.scheduled_users.size() < max_users)
    {
        IterationRecord rec;
        double best = -1.0;
        std::vector<uword> best_set;
        for (uword u = 0; u < K; ++u)
        {
            if (scheduled[u])
                continue;
            if (remaining.size() < bounds.min)
            {
                out.notes.push_back("user " + std::to_string(u + 1) + " skipped: " + std::to_string(remaining.size()) +
                                    " subarrays remain, minimum is " + std::to_string(bounds.min));
                continue;
            }
            double user_best = -1.0;
            std::vector<uword> user_set;
            for (const auto &s : candidate_sets(objective, u, remaining, bounds, search))
            {
                auto users = out.scheduled_users;
                users.push_back(u);
                Assignment a = out.subarray_assignment;
                a[u] = s;
                const double r = objective(users, a);
                ++out.evaluations;
                if (r > user_best)
                {
                    user_best = r;
                    user_set = s;
                }
            }
            rec.candidates.push_back(u);
            rec.candidate_se.push_back(user_best);
            rec.candidate_sets.push_back(user_set);
            if (user_best > best)
            {
                best = user_best;
                best_set = user_set;
                rec.best_user = u;
            }
        }
        if (rec.candidates.empty())
            break;
        rec.best_se = best;
        rec.accepted = current <= best;
        out.iterations.push_back(rec);
        if (!rec.accepted)
            break;

        scheduled[rec.best_user] = true;
        out.scheduled_users.push_back(rec.best_user);
        out.subarray_assignment[rec.best_user] = best_set;
        std::erase_if(remaining, [&](uword j)
                      { return std::binary_search(best_set.begin(), best_set.end(), j); });
        current = best;
    }
    out.sum_se = current;
    return out;
}

static double binomial(uword n, uword k)
{
    if (k > n)
        return 0.0;
    double c = 1.0;
    for (uword i = 0; i < k; ++i)
        c = c * double(n - i) / double(i + 1);
    return c;
}

double xlmimo::exhaustive_search_size(uword n_users, uword n_subarrays, uword max_users,
                                      const std::optional<SubarrayBounds> &bounds)
{
    double total = 0.0;
    for (uword u = 0; u <= std::min(max_users, n_users); ++u)
    {
        double ways = 1.0;
        if (bounds && u > 0)
        {
            // ordered disjoint sets with sizes in [min, max], by total size used
            std::vector<double> w(n_subarrays + 1, 0.0);
            w[0] = 1.0;
            for (uword step = 0; step < u; ++step)
            {
                std::vector<double> next(n_subarrays + 1, 0.0);
                for (uword t = 0; t <= n_subarrays; ++t)
                    for (uword s = bounds->min; s <= bounds->max && t + s <= n_subarrays; ++s)
                        next[t + s] += w[t] * binomial(n_subarrays - t, s);
                w = next;
            }
            ways = std::accumulate(w.begin(), w.end(), 0.0);
        }
        total += binomial(n_users, u) * ways;
    }
    return total;
}

xlmimo::ScheduleOutcome xlmimo::exhaustive_schedule(const SumSeObjective &objective, uword max_users,
                                                    const std::optional<SubarrayBounds> &bounds, double max_combinations)
{
    const uword K = objective.n_users(), N = objective.geometry().n_subarrays();
    if (bounds)
        check_bounds(objective, max_users, *bounds);
    else if (max_users > K)
        throw std::invalid_argument("Target number of users exceeds the number of candidates.");

    const double size = exhaustive_search_size(K, N, max_users, bounds);
    if (size > max_combinations)
    {
        std::ostringstream msg;
        msg << "Exhaustive search needs about " << size << " evaluations, above the limit of " << max_combinations << ".";
        throw xlmimo::numerical_error(msg.str());
    }

    ScheduleOutcome out;
    out.evaluations = 1; // the empty set
    std::vector<uword> all(K);
    std::iota(all.begin(), all.end(), 0);

    auto consider = [&](const std::vector<uword> &users, const Assignment &a)
    {
        const double r = objective(users, a);
        ++out.evaluations;
        if (r > out.sum_se)
        {
            out.sum_se = r;
            out.scheduled_users = users;
            out.subarray_assignment = a;
        }
    };

    for (uword n = 1; n <= max_users; ++n)
        for_each_combination(all, n, [&](const std::vector<uword> &users)
                             {
            if (!bounds)
            {
                consider(users, {});
                return;
            }
            Assignment a;
            std::function<void(uword, std::vector<uword> &)> assign = [&](uword pos, std::vector<uword> &free)
            {
                if (pos == users.size())
                {
                    consider(users, a);
                    return;
                }
                for (uword s = bounds->min; s <= std::min<uword>(bounds->max, free.size()); ++s)
                    for_each_combination(free, s, [&](const std::vector<uword> &pick)
                                         {
                        a[users[pos]] = pick;
                        std::vector<uword> rest;
                        std::set_difference(free.begin(), free.end(), pick.begin(), pick.end(), std::back_inserter(rest));
                        assign(pos + 1, rest); });
                a.erase(users[pos]);
            };
            std::vector<uword> free(N);
            std::iota(free.begin(), free.end(), 0);
            assign(0, free); });
    return out;
}
