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

#ifndef XLMIMO_COMBINER_HPP
#define XLMIMO_COMBINER_HPP

#include "xlmimo/channel.hpp"

#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace xlmimo
{
    enum class Architecture
    {
        PhaseShifter,
        OnOffSwitch,
        RandomPhase
    };

    std::string to_string(Architecture a);        // "phase-shifter", "on-off", "random-phase"
    Architecture parse_architecture(std::string_view name);

    // Block-diagonal analog combiner W = blkdiag(w_1, ..., w_N) with unit-norm blocks.
    // Inactive subarrays carry no stream and are dropped from W.
    class Combiner
    {
    public:
        Combiner(Architecture architecture, const ArrayGeometry &geometry,
                 std::vector<arma::cx_vec> blocks, std::vector<bool> active = {});

        Architecture architecture() const { return architecture_; }
        const ArrayGeometry &geometry() const { return geometry_; }

        const arma::cx_vec &block(uword subarray) const { return blocks_.at(subarray); }
        bool is_active(uword subarray) const { return active_.at(subarray); }
        const std::vector<uword> &active_subarrays() const { return active_list_; }
        uword n_active() const { return active_list_.size(); }

        arma::cx_mat matrix() const;     // W, M x n_active
        arma::cx_mat projection() const; // B = W W^H, M x M

        // Same blocks with only the listed subarrays active
        Combiner with_active(const std::vector<uword> &subarrays) const;

    private:
        Architecture architecture_;
        ArrayGeometry geometry_;
        std::vector<arma::cx_vec> blocks_;
        std::vector<bool> active_;
        std::vector<uword> active_list_;
    };

    // Principal eigenvector of a Hermitian block, rotated so that its first
    // non-zero entry is real and positive
    arma::cx_vec principal_eigenvector(const arma::cx_mat &block);

    // Angles of the principal eigenvector; all zeros for a zero block
    arma::vec eigen_phase_angles(const arma::cx_mat &block);

    // sqrt(N/M) exp(j angles) for each subarray
    Combiner phase_shifter_from_angles(const ArrayGeometry &geometry, const std::vector<arma::vec> &angles,
                                       Architecture architecture = Architecture::PhaseShifter);

    // Eigen design on the targeted subarrays, zero phase elsewhere
    Combiner phase_design_eigen(const ChannelStats &stats, const ArrayGeometry &geometry,
                                const std::vector<uword> &target_subarrays);

    // Subarrays covered by several users get the sum of their angle vectors;
    // uncovered subarrays keep zero phase
    Combiner phase_design_multiuser(const std::vector<ChannelStats> &stats, const ArrayGeometry &geometry);

    // 1/sqrt(M_on) on switched-on antennas. switch_mask has one entry per antenna.
    Combiner onoff_combiner(const ArrayGeometry &geometry, const std::vector<bool> &switch_mask);
    Combiner onoff_combiner(const ArrayGeometry &geometry); // all switches on

    Combiner random_phase_combiner(const ArrayGeometry &geometry, std::mt19937_64 &rng);

    // tr(B Theta) from dense matrices
    double trace_metric(const arma::cx_mat &B, const arma::cx_mat &Theta);

    // tr(B Theta) as sum of w_i^H Theta_ii w_i over active subarrays
    double trace_metric(const Combiner &combiner, const ChannelStats &stats);

    // Reduced correlation T = W^H Theta W. Only subarrays touching the user support
    // are kept: index lists their positions among the active subarrays.
    struct ProjectedCorrelation
    {
        arma::uvec index;
        arma::cx_mat matrix;

        double trace() const;
    };

    ProjectedCorrelation project(const Combiner &combiner, const ChannelStats &stats);

    // tr(T_a T_b) for two users seen through the same combiner
    double trace_product(const ProjectedCorrelation &a, const ProjectedCorrelation &b);
}

#endif
