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

#ifndef XLMIMO_SCHEDULING_HPP
#define XLMIMO_SCHEDULING_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/closed_form.hpp"
#include "xlmimo/combiner.hpp"
#include "xlmimo/receivers.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace xlmimo
{
    // user -> subarrays assigned to that user (sorted)
    using Assignment = std::map<uword, std::vector<uword>>;

    struct SubarrayBounds
    {
        uword min = 1;
        uword max = 1;
    };

    enum class SubsetSearch
    {
        RankTopJ,    // top-j subarrays by per-subarray gain, j = min..max
        ExhaustiveVr // all subsets of the remaining subarrays that intersect the user's VR
    };

    std::string to_string(SubsetSearch s); // "rank-topj", "exhaustive-vr"
    SubsetSearch parse_subset_search(std::string_view name);

    struct IterationRecord
    {
        std::vector<uword> candidates;                   // unscheduled users evaluated
        std::vector<double> candidate_se;                // objective with that user added
        std::vector<std::vector<uword>> candidate_sets;  // best subarray set per candidate (joint only)
        uword best_user = 0;
        double best_se = 0.0;
        bool accepted = false;
    };

    struct ScheduleOutcome
    {
        std::vector<uword> scheduled_users; // in order of selection
        Assignment subarray_assignment;     // empty for user-only scheduling
        double sum_se = 0.0;
        std::vector<IterationRecord> iterations;
        std::vector<std::string> notes;
        std::uint64_t evaluations = 0;
    };

    // Sum of closed-form SEs over a user set. Without an assignment all subarrays are
    // active and shared subarrays carry the sum of the users' eigen phases. With an
    // assignment only assigned subarrays are active, each steered to its own user, and
    // every scheduled user is received on all active subarrays.
    class SumSeObjective
    {
    public:
        SumSeObjective(const ArrayGeometry &geometry, std::vector<ChannelStats> stats,
                       Receiver receiver, Architecture architecture, double p_u);

        double operator()(const std::vector<uword> &users, const Assignment &assignment = {}) const;
        std::vector<double> per_user_se(const std::vector<uword> &users, const Assignment &assignment = {}) const;
        Combiner combiner_for(const std::vector<uword> &users, const Assignment &assignment = {}) const;

        // w_j^H Theta_k,jj w_j with the user's own design on subarray j
        double subarray_gain(uword user, uword subarray) const;
        bool covers(uword user, uword subarray) const;

        const ArrayGeometry &geometry() const { return geometry_; }
        const std::vector<ChannelStats> &stats() const { return stats_; }
        uword n_users() const { return stats_.size(); }
        Receiver receiver() const { return receiver_; }
        Architecture architecture() const { return architecture_; }
        double power() const { return p_u_; }

    private:
        ArrayGeometry geometry_;
        std::vector<ChannelStats> stats_;
        Receiver receiver_;
        Architecture architecture_;
        double p_u_;
        std::vector<std::vector<arma::vec>> angles_; // [user][subarray], empty when not covered
        arma::mat gain_;                             // [user, subarray]
    };

    // Greedy user selection with all subarrays active
    ScheduleOutcome greedy_user_schedule(const SumSeObjective &objective, uword max_users);

    // Greedy joint user and subarray selection; chosen subarrays leave the pool
    ScheduleOutcome greedy_joint_schedule(const SumSeObjective &objective, uword max_users,
                                          const SubarrayBounds &bounds, SubsetSearch search = SubsetSearch::RankTopJ);

    // Number of objective evaluations an exhaustive search would need
    double exhaustive_search_size(uword n_users, uword n_subarrays, uword max_users,
                                  const std::optional<SubarrayBounds> &bounds);

    // Optimum by enumeration over all user sets of size <= max_users (and, with bounds,
    // all disjoint subarray assignments). Refuses with numerical_error above the limit.
    ScheduleOutcome exhaustive_schedule(const SumSeObjective &objective, uword max_users,
                                        const std::optional<SubarrayBounds> &bounds = std::nullopt,
                                        double max_combinations = 1e7);
}

#endif
