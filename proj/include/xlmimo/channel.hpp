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

#ifndef XLMIMO_CHANNEL_HPP
#define XLMIMO_CHANNEL_HPP

#include <armadillo>
#include <random>
#include <vector>

namespace xlmimo
{
    using arma::uword;

    // Uniform linear array split into equal subarrays; each subarray feeds one RF chain
    class ArrayGeometry
    {
    public:
        ArrayGeometry(uword n_antennas, uword n_subarrays, double element_spacing = 0.5);

        uword n_antennas() const { return n_antennas_; }
        uword n_subarrays() const { return n_subarrays_; }
        uword subarray_size() const { return n_antennas_ / n_subarrays_; }
        double element_spacing() const { return spacing_; }

        uword subarray_begin(uword subarray) const { return subarray * subarray_size(); }
        uword subarray_of(uword antenna) const { return antenna / subarray_size(); }

        bool operator==(const ArrayGeometry &) const = default;

    private:
        uword n_antennas_;
        uword n_subarrays_;
        double spacing_;
    };

    // Statistical description of one user: mean angle of arrival, angular spread (both
    // radians) and a contiguous visibility region with optional per-antenna amplitudes.
    class UserProfile
    {
    public:
        UserProfile(const ArrayGeometry &geometry, double mean_aoa, double angular_std,
                    uword vr_start, uword vr_length, arma::vec vr_amplitudes = {});

        double mean_aoa() const { return aoa_; }
        double angular_std() const { return std_; }
        uword vr_start() const { return start_; }
        uword vr_length() const { return length_; }
        uword vr_end() const { return start_ + length_; } // one past the last antenna
        const arma::vec &vr_amplitudes() const { return amplitudes_; }

    private:
        double aoa_;
        double std_;
        uword start_;
        uword length_;
        arma::vec amplitudes_;
    };

    // exp(j 2 pi d m sin(theta)), m = 0..M-1
    arma::cx_vec steering_vector(double theta, uword n_antennas, double spacing = 0.5);

    // exp(-2 pi d (m-n)^2 sigma^2 cos^2(theta))
    arma::mat angular_spread_matrix(double theta, double sigma, uword n_antennas, double spacing = 0.5);

    // R = (a a^H) .* P, unit diagonal
    arma::cx_mat stationary_correlation(double theta, double sigma, uword n_antennas, double spacing = 0.5);
    arma::cx_mat stationary_correlation(double theta, double sigma, const ArrayGeometry &geometry);

    // Diagonal of D
    arma::vec vr_mask(const UserProfile &profile, uword n_antennas);

    // D^(1/2) R D^(1/2)
    arma::cx_mat effective_correlation(const arma::cx_mat &R, const arma::vec &D);

    // Hermitian PSD square root. Eigenvalues in [-eps, 0) with eps = 1e-9 * lambda_max
    // are clamped to zero; anything more negative raises numerical_error.
    arma::cx_mat psd_sqrt(const arma::cx_mat &Theta);

    // Correlation of one user. Only the VR block is stored since the effective
    // correlation is zero outside it; dense M x M views are built on request.
    class ChannelStats
    {
    public:
        ChannelStats(const UserProfile &profile, const ArrayGeometry &geometry);

        uword n_antennas() const { return n_antennas_; }
        uword support_begin() const { return begin_; }
        uword support_size() const { return theta_block_.n_rows; }
        uword support_end() const { return begin_ + theta_block_.n_rows; }

        const arma::cx_mat &theta_block() const { return theta_block_; }
        const arma::cx_mat &theta_sqrt_block() const { return theta_sqrt_block_; }

        arma::cx_mat correlation() const; // R
        arma::vec mask() const;           // diag(D)
        arma::cx_mat theta() const;       // Theta
        arma::cx_mat theta_sqrt() const;  // Theta^(1/2)

        // Theta restricted to antennas [first, first + count) on both sides (zero-padded)
        arma::cx_mat diagonal_block(uword first, uword count) const;

        // Number of antennas in [first, first + count) with non-zero amplitude
        uword coverage(uword first, uword count) const;

    private:
        uword n_antennas_;
        uword begin_;
        double aoa_, std_, spacing_;
        arma::vec amplitudes_;
        arma::cx_mat theta_block_;
        arma::cx_mat theta_sqrt_block_;
    };

    std::vector<ChannelStats> channel_stats(const std::vector<UserProfile> &profiles, const ArrayGeometry &geometry);

    // Channel realization restricted to the support of each user: column k holds
    // Theta_k^(1/2) g_k on antennas [support_begin, support_end).
    std::vector<arma::cx_vec> sample_supports(const std::vector<ChannelStats> &stats, std::mt19937_64 &rng);

    // Dense M x K realization H
    arma::cx_mat sample_channels(const std::vector<ChannelStats> &stats, std::mt19937_64 &rng);
}

#endif
