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

#include "xlmimo/scenario.hpp"
#include "xlmimo/rng.hpp"

#include <random>

using arma::uword;

static void check_common(const xlmimo::ArrayGeometry &geometry, uword n_users, uword vr_length)
{
    if (n_users == 0)
        throw std::invalid_argument("Scenario needs at least one user.");
    if (vr_length == 0 || vr_length > geometry.n_antennas())
        throw std::invalid_argument("Visibility-region length must lie in [1, M].");
}

xlmimo::Scenario xlmimo::random_scenario(const ArrayGeometry &geometry, uword n_users, uword vr_length,
                                         std::uint64_t seed, const AngleSettings &angles)
{
    check_common(geometry, n_users, vr_length);
    if (!(angles.aoa_max >= 0.0))
        throw std::invalid_argument("Angle range must be non-negative.");

    auto rng = make_stream(seed, placement_stream_offset);
    std::uniform_real_distribution<double> aoa(-angles.aoa_max, angles.aoa_max);
    std::uniform_int_distribution<uword> start(0, geometry.n_antennas() - vr_length);

    Scenario s{geometry, {}};
    for (uword k = 0; k < n_users; ++k)
    {
        const double theta = aoa(rng);
        const uword first = start(rng);
        s.users.emplace_back(geometry, theta, angles.angular_std, first, vr_length);
    }
    return s;
}

arma::vec xlmimo::canned_angles(uword n_users, double aoa_max)
{
    arma::vec theta(n_users);
    for (uword k = 0; k < n_users; ++k)
        theta[k] = -aoa_max + 2.0 * aoa_max * (double(k) + 0.5) / double(n_users);
    return theta;
}

xlmimo::Scenario xlmimo::partial_overlap_scenario(const ArrayGeometry &geometry, uword n_users, uword vr_length,
                                                  const AngleSettings &angles)
{
    check_common(geometry, n_users, vr_length);
    const arma::vec theta = canned_angles(n_users, angles.aoa_max);
    const uword span = geometry.n_antennas() - vr_length;

    Scenario s{geometry, {}};
    for (uword k = 0; k < n_users; ++k)
    {
        uword first = n_users == 1 ? span / 2 : (k * span + (n_users - 1) / 2) / (n_users - 1);
        s.users.emplace_back(geometry, theta[k], angles.angular_std, first, vr_length);
    }
    return s;
}

xlmimo::Scenario xlmimo::no_overlap_scenario(const ArrayGeometry &geometry, uword n_users, uword vr_length,
                                             const AngleSettings &angles)
{
    check_common(geometry, n_users, vr_length);
    const uword M = geometry.n_antennas();
    if (n_users * vr_length > M)
        throw std::invalid_argument("Disjoint regions do not fit into the array.");
    const uword gap = (M - n_users * vr_length) / (n_users + 1);
    if (n_users > 1 && gap < geometry.subarray_size())
        throw std::invalid_argument("Gaps between disjoint regions are shorter than one subarray.");

    const arma::vec theta = canned_angles(n_users, angles.aoa_max);
    Scenario s{geometry, {}};
    for (uword k = 0; k < n_users; ++k)
        s.users.emplace_back(geometry, theta[k], angles.angular_std, gap + k * (vr_length + gap), vr_length);
    return s;
}

xlmimo::Scenario xlmimo::completely_overlapped_scenario(const ArrayGeometry &geometry, uword n_users, uword vr_length,
                                                        double aoa, double angular_std)
{
    check_common(geometry, n_users, vr_length);
    const uword first = (geometry.n_antennas() - vr_length) / 2;
    Scenario s{geometry, {}};
    for (uword k = 0; k < n_users; ++k)
        s.users.emplace_back(geometry, aoa, angular_std, first, vr_length);
    return s;
}
