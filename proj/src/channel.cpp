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

#include "xlmimo/channel.hpp"
#include "xlmimo/errors.hpp"
#include "xlmimo/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

using arma::uword;

xlmimo::ArrayGeometry::ArrayGeometry(uword n_antennas, uword n_subarrays, double element_spacing)
    : n_antennas_(n_antennas), n_subarrays_(n_subarrays), spacing_(element_spacing)
{
    if (n_antennas == 0)
        throw std::invalid_argument("Number of antennas must be positive.");
    if (n_subarrays == 0)
        throw std::invalid_argument("Number of subarrays must be positive.");
    if (n_antennas % n_subarrays != 0)
        throw std::invalid_argument("Number of antennas must be a multiple of the number of subarrays.");
    if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
        throw std::invalid_argument("Element spacing must be positive.");
}

xlmimo::UserProfile::UserProfile(const ArrayGeometry &geometry, double mean_aoa, double angular_std,
                                 uword vr_start, uword vr_length, arma::vec vr_amplitudes)
    : aoa_(mean_aoa), std_(angular_std), start_(vr_start), length_(vr_length), amplitudes_(std::move(vr_amplitudes))
{
    if (!std::isfinite(mean_aoa))
        throw std::invalid_argument("Mean angle of arrival must be finite.");
    if (!(angular_std >= 0.0) || !std::isfinite(angular_std))
        throw std::invalid_argument("Angular spread must be non-negative.");
    if (vr_length == 0)
        throw std::invalid_argument("Visibility region must contain at least one antenna.");
    if (vr_start + vr_length > geometry.n_antennas())
        throw std::invalid_argument("Visibility region [" + std::to_string(vr_start) + ", " +
                                    std::to_string(vr_start + vr_length) + ") exceeds the array of " +
                                    std::to_string(geometry.n_antennas()) + " antennas.");
    if (amplitudes_.is_empty())
        amplitudes_.ones(vr_length);
    if (amplitudes_.n_elem != vr_length)
        throw std::invalid_argument("Visibility-region amplitudes must have one entry per antenna in the region.");
    if (!amplitudes_.is_finite() || arma::any(amplitudes_ < 0.0))
        throw std::invalid_argument("Visibility-region amplitudes must be finite and non-negative.");
}

arma::cx_vec xlmimo::steering_vector(double theta, uword n_antennas, double spacing)
{
    const double phase = 2.0 * std::numbers::pi * spacing * std::sin(theta);
    arma::cx_vec a(n_antennas);
    for (uword m = 0; m < n_antennas; ++m)
        a[m] = std::polar(1.0, phase * double(m));
    return a;
}

arma::mat xlmimo::angular_spread_matrix(double theta, double sigma, uword n_antennas, double spacing)
{
    if (!(sigma >= 0.0))
        throw std::invalid_argument("Angular spread must be non-negative.");
    const double c = std::cos(theta);
    const double scale = -2.0 * std::numbers::pi * spacing * sigma * sigma * c * c;
    arma::mat P(n_antennas, n_antennas);
    for (uword n = 0; n < n_antennas; ++n)
        for (uword m = 0; m < n_antennas; ++m)
        {
            const double diff = double(m) - double(n);
            P(m, n) = std::exp(scale * diff * diff);
        }
    return P;
}

arma::cx_mat xlmimo::stationary_correlation(double theta, double sigma, uword n_antennas, double spacing)
{
    arma::cx_vec a = steering_vector(theta, n_antennas, spacing);
    arma::cx_mat R = (a * a.t()) % angular_spread_matrix(theta, sigma, n_antennas, spacing);
    R.diag().ones();
    return R;
}

arma::cx_mat xlmimo::stationary_correlation(double theta, double sigma, const ArrayGeometry &geometry)
{
    return stationary_correlation(theta, sigma, geometry.n_antennas(), geometry.element_spacing());
}

arma::vec xlmimo::vr_mask(const UserProfile &profile, uword n_antennas)
{
    if (profile.vr_end() > n_antennas)
        throw std::invalid_argument("Visibility region exceeds the array.");
    arma::vec D(n_antennas, arma::fill::zeros);
    D.subvec(profile.vr_start(), profile.vr_end() - 1) = profile.vr_amplitudes();
    return D;
}

arma::cx_mat xlmimo::effective_correlation(const arma::cx_mat &R, const arma::vec &D)
{
    if (!R.is_square() || R.n_rows != D.n_elem)
        throw std::invalid_argument("Correlation matrix and mask dimensions do not agree.");
    if (arma::any(D < 0.0))
        throw std::invalid_argument("Mask entries must be non-negative.");
    arma::vec s = arma::sqrt(D);
    arma::cx_mat Theta = R;
    Theta.each_col() %= arma::conv_to<arma::cx_vec>::from(s);
    Theta.each_row() %= arma::conv_to<arma::cx_rowvec>::from(s.t());
    return Theta;
}

arma::cx_mat xlmimo::psd_sqrt(const arma::cx_mat &Theta)
{
    if (!Theta.is_square())
        throw std::invalid_argument("Matrix must be square.");
    if (Theta.is_empty())
        return Theta;

    const double scale = arma::norm(Theta, "fro");
    if (scale == 0.0)
        return arma::cx_mat(arma::size(Theta), arma::fill::zeros);
    if (arma::norm(Theta - Theta.t(), "fro") > 1e-10 * scale)
        throw std::invalid_argument("Matrix must be Hermitian.");

    arma::vec lambda;
    arma::cx_mat V;
    if (!arma::eig_sym(lambda, V, arma::cx_mat(0.5 * (Theta + Theta.t()))))
        throw xlmimo::numerical_error("Eigendecomposition failed.");

    const double eps = 1e-9 * std::max(lambda.max(), 0.0);
    if (lambda.min() < -eps)
        throw xlmimo::numerical_error("Matrix is not PSD: eigenvalue " + std::to_string(lambda.min()) + ".");

    arma::vec root = arma::sqrt(arma::clamp(lambda, 0.0, arma::datum::inf));
    arma::cx_mat S = V * arma::diagmat(root) * V.t();
    return 0.5 * (S + S.t());
}

xlmimo::ChannelStats::ChannelStats(const UserProfile &profile, const ArrayGeometry &geometry)
    : n_antennas_(geometry.n_antennas()), begin_(profile.vr_start()),
      aoa_(profile.mean_aoa()), std_(profile.angular_std()), spacing_(geometry.element_spacing()),
      amplitudes_(profile.vr_amplitudes())
{
    if (profile.vr_end() > n_antennas_)
        throw std::invalid_argument("Visibility region exceeds the array.");

    // R(m, n) depends on m - n only, so the VR block equals the correlation of a
    // length-E array irrespective of where the region starts.
    arma::cx_mat R = stationary_correlation(aoa_, std_, profile.vr_length(), spacing_);
    theta_block_ = effective_correlation(R, amplitudes_);
    theta_sqrt_block_ = psd_sqrt(theta_block_);
}

arma::cx_mat xlmimo::ChannelStats::correlation() const
{
    return stationary_correlation(aoa_, std_, n_antennas_, spacing_);
}

arma::vec xlmimo::ChannelStats::mask() const
{
    arma::vec D(n_antennas_, arma::fill::zeros);
    D.subvec(begin_, support_end() - 1) = amplitudes_;
    return D;
}

arma::cx_mat xlmimo::ChannelStats::theta() const
{
    arma::cx_mat T(n_antennas_, n_antennas_, arma::fill::zeros);
    T.submat(begin_, begin_, support_end() - 1, support_end() - 1) = theta_block_;
    return T;
}

arma::cx_mat xlmimo::ChannelStats::theta_sqrt() const
{
    arma::cx_mat T(n_antennas_, n_antennas_, arma::fill::zeros);
    T.submat(begin_, begin_, support_end() - 1, support_end() - 1) = theta_sqrt_block_;
    return T;
}

arma::cx_mat xlmimo::ChannelStats::diagonal_block(uword first, uword count) const
{
    arma::cx_mat out(count, count, arma::fill::zeros);
    const uword lo = std::max(first, begin_);
    const uword hi = std::min(first + count, support_end());
    if (lo < hi)
        out.submat(lo - first, lo - first, hi - first - 1, hi - first - 1) =
            theta_block_.submat(lo - begin_, lo - begin_, hi - begin_ - 1, hi - begin_ - 1);
    return out;
}

uword xlmimo::ChannelStats::coverage(uword first, uword count) const
{
    const uword lo = std::max(first, begin_);
    const uword hi = std::min(first + count, support_end());
    uword n = 0;
    for (uword m = lo; m < hi; ++m)
        n += amplitudes_[m - begin_] > 0.0 ? 1 : 0;
    return n;
}

std::vector<xlmimo::ChannelStats> xlmimo::channel_stats(const std::vector<UserProfile> &profiles, const ArrayGeometry &geometry)
{
    std::vector<ChannelStats> stats;
    stats.reserve(profiles.size());
    for (const auto &p : profiles)
        stats.emplace_back(p, geometry);
    return stats;
}

std::vector<arma::cx_vec> xlmimo::sample_supports(const std::vector<ChannelStats> &stats, std::mt19937_64 &rng)
{
    std::vector<arma::cx_vec> h;
    h.reserve(stats.size());
    for (const auto &s : stats)
    {
        if (!stats.empty() && s.n_antennas() != stats.front().n_antennas())
            throw std::invalid_argument("All users must share the same array.");
        h.push_back(s.theta_sqrt_block() * complex_normal(s.support_size(), rng));
    }
    return h;
}

arma::cx_mat xlmimo::sample_channels(const std::vector<ChannelStats> &stats, std::mt19937_64 &rng)
{
    if (stats.empty())
        return {};
    auto h = sample_supports(stats, rng);
    arma::cx_mat H(stats.front().n_antennas(), stats.size(), arma::fill::zeros);
    for (uword k = 0; k < stats.size(); ++k)
        H.col(k).subvec(stats[k].support_begin(), stats[k].support_end() - 1) = h[k];
    return H;
}
