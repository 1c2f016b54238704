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

#ifndef XLMIMO_SCENARIO_HPP
#define XLMIMO_SCENARIO_HPP

#include "xlmimo/channel.hpp"

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace xlmimo
{
    struct Scenario
    {
        ArrayGeometry geometry;
        std::vector<UserProfile> users;

        std::vector<ChannelStats> stats() const { return channel_stats(users, geometry); }
    };

    struct AngleSettings
    {
        double aoa_max = std::numbers::pi / 3.0;             // angles drawn or spread on [-aoa_max, aoa_max]
        double angular_std = 10.0 * std::numbers::pi / 180.0; // radians
    };

    // K users with uniform angles on [-aoa_max, aoa_max] and VR start uniform on [0, M-E]
    Scenario random_scenario(const ArrayGeometry &geometry, uword n_users, uword vr_length,
                             std::uint64_t seed, const AngleSettings &angles = {});

    // Evenly spaced angles (centres of K equal bins on [-aoa_max, aoa_max])
    arma::vec canned_angles(uword n_users, double aoa_max);

    // VR starts evenly spaced from 0 to M-E; neighbouring regions overlap when K*E > M
    Scenario partial_overlap_scenario(const ArrayGeometry &geometry, uword n_users, uword vr_length,
                                      const AngleSettings &angles = {});

    // Disjoint regions separated by equal gaps of at least one subarray, so no two users
    // share a subarray. Throws if the array is too short.
    Scenario no_overlap_scenario(const ArrayGeometry &geometry, uword n_users, uword vr_length,
                                 const AngleSettings &angles = {});

    // All users share one centred region, the same angle and the same spread
    Scenario completely_overlapped_scenario(const ArrayGeometry &geometry, uword n_users, uword vr_length,
                                            double aoa = 0.0, double angular_std = 10.0 * std::numbers::pi / 180.0);
}

#endif
