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

#include "xlmimo/combiner.hpp"
#include "xlmimo/errors.hpp"

#include <cmath>
#include <numbers>

using arma::uword;

std::string xlmimo::to_string(Architecture a)
{
    switch (a)
    {
    case Architecture::PhaseShifter:
        return "phase-shifter";
    case Architecture::OnOffSwitch:
        return "on-off";
    case Architecture::RandomPhase:
        return "random-phase";
    }
    return "unknown";
}

xlmimo::Architecture xlmimo::parse_architecture(std::string_view name)
{
    if (name == "phase-shifter")
        return Architecture::PhaseShifter;
    if (name == "on-off")
        return Architecture::OnOffSwitch;
    if (name == "random-phase")
        return Architecture::RandomPhase;
    throw std::invalid_argument("Unknown architecture '" + std::string(name) + "'.");
}

xlmimo::Combiner::Combiner(Architecture architecture, const ArrayGeometry &geometry,
                           std::vector<arma::cx_vec> blocks, std::vector<bool> active)
    : architecture_(architecture), geometry_(geometry), blocks_(std::move(blocks)), active_(std::move(active))
{
    const uword N = geometry_.n_subarrays();
    if (blocks_.size() != N)
        throw std::invalid_argument("Combiner needs one block per subarray.");
    if (active_.empty())
        active_.assign(N, true);
    if (active_.size() != N)
        throw std::invalid_argument("Activity mask needs one entry per subarray.");

    for (uword i = 0; i < N; ++i)
    {
        if (blocks_[i].n_elem != geometry_.subarray_size())
            throw std::invalid_argument("Combiner block " + std::to_string(i) + " has the wrong length.");
        if (std::abs(arma::norm(blocks_[i]) - 1.0) > 1e-12)
            throw std::invalid_argument("Combiner block " + std::to_string(i) + " is not unit norm.");
        if (active_[i])
            active_list_.push_back(i);
    }
}

arma::cx_mat xlmimo::Combiner::matrix() const
{
    const uword S = geometry_.subarray_size();
    arma::cx_mat W(geometry_.n_antennas(), active_list_.size(), arma::fill::zeros);
    for (uword c = 0; c < active_list_.size(); ++c)
    {
        const uword j = active_list_[c];
        W.col(c).subvec(j * S, j * S + S - 1) = blocks_[j];
    }
    return W;
}

arma::cx_mat xlmimo::Combiner::projection() const
{
    const uword S = geometry_.subarray_size();
    arma::cx_mat B(geometry_.n_antennas(), geometry_.n_antennas(), arma::fill::zeros);
    for (uword j : active_list_)
        B.submat(j * S, j * S, j * S + S - 1, j * S + S - 1) = blocks_[j] * blocks_[j].t();
    return B;
}

xlmimo::Combiner xlmimo::Combiner::with_active(const std::vector<uword> &subarrays) const
{
    std::vector<bool> mask(geometry_.n_subarrays(), false);
    for (uword j : subarrays)
    {
        if (j >= mask.size())
            throw std::invalid_argument("Subarray index " + std::to_string(j) + " out of range.");
        mask[j] = true;
    }
    return Combiner(architecture_, geometry_, blocks_, mask);
}

arma::cx_vec xlmimo::principal_eigenvector(const arma::cx_mat &block)
{
    arma::vec lambda;
    arma::cx_mat V;
    if (!arma::eig_sym(lambda, V, arma::cx_mat(0.5 * (block + block.t()))))
        throw xlmimo::numerical_error("Eigendecomposition failed.");

    // eig_sym sorts ascending; the last column spans the top eigenspace
    arma::cx_vec v = V.col(V.n_cols - 1);
    for (uword m = 0; m < v.n_elem; ++m)
        if (std::abs(v[m]) > 1e-12)
        {
            v *= std::conj(v[m]) / std::abs(v[m]);
            break;
        }
    return v;
}

arma::vec xlmimo::eigen_phase_angles(const arma::cx_mat &block)
{
    if (!arma::any(arma::vectorise(block) != std::complex<double>(0.0, 0.0)))
        return arma::vec(block.n_rows, arma::fill::zeros);
    return arma::arg(principal_eigenvector(block));
}

xlmimo::Combiner xlmimo::phase_shifter_from_angles(const ArrayGeometry &geometry, const std::vector<arma::vec> &angles,
                                                   Architecture architecture)
{
    if (angles.size() != geometry.n_subarrays())
        throw std::invalid_argument("Need one angle vector per subarray.");
    const double amplitude = std::sqrt(1.0 / double(geometry.subarray_size()));
    std::vector<arma::cx_vec> blocks;
    blocks.reserve(angles.size());
    for (const auto &a : angles)
    {
        if (a.n_elem != geometry.subarray_size())
            throw std::invalid_argument("Angle vector has the wrong length.");
        arma::cx_vec w(a.n_elem);
        for (uword m = 0; m < a.n_elem; ++m)
            w[m] = std::polar(amplitude, a[m]);
        blocks.push_back(std::move(w));
    }
    return Combiner(architecture, geometry, std::move(blocks));
}

xlmimo::Combiner xlmimo::phase_design_eigen(const ChannelStats &stats, const ArrayGeometry &geometry,
                                            const std::vector<uword> &target_subarrays)
{
    const uword S = geometry.subarray_size();
    std::vector<arma::vec> angles(geometry.n_subarrays(), arma::vec(S, arma::fill::zeros));
    for (uword j : target_subarrays)
    {
        if (j >= geometry.n_subarrays())
            throw std::invalid_argument("Target subarray " + std::to_string(j) + " out of range.");
        angles[j] = eigen_phase_angles(stats.diagonal_block(geometry.subarray_begin(j), S));
    }
    return phase_shifter_from_angles(geometry, angles);
}

xlmimo::Combiner xlmimo::phase_design_multiuser(const std::vector<ChannelStats> &stats, const ArrayGeometry &geometry)
{
    const uword S = geometry.subarray_size();
    std::vector<arma::vec> angles(geometry.n_subarrays(), arma::vec(S, arma::fill::zeros));
    for (const auto &s : stats)
    {
        if (s.n_antennas() != geometry.n_antennas())
            throw std::invalid_argument("User statistics do not match the array.");
        for (uword j = geometry.subarray_of(s.support_begin()); j <= geometry.subarray_of(s.support_end() - 1); ++j)
            if (s.coverage(geometry.subarray_begin(j), S) > 0)
                angles[j] += eigen_phase_angles(s.diagonal_block(geometry.subarray_begin(j), S));
    }
    return phase_shifter_from_angles(geometry, angles);
}

xlmimo::Combiner xlmimo::onoff_combiner(const ArrayGeometry &geometry, const std::vector<bool> &switch_mask)
{
    if (switch_mask.size() != geometry.n_antennas())
        throw std::invalid_argument("Switch mask needs one entry per antenna.");
    const uword S = geometry.subarray_size();
    std::vector<arma::cx_vec> blocks;
    for (uword j = 0; j < geometry.n_subarrays(); ++j)
    {
        arma::cx_vec w(S, arma::fill::zeros);
        uword n_on = 0;
        for (uword m = 0; m < S; ++m)
            n_on += switch_mask[j * S + m] ? 1 : 0;
        if (n_on == 0)
            throw std::invalid_argument("Dead subarray " + std::to_string(j) + ": all switches are off.");
        for (uword m = 0; m < S; ++m)
            if (switch_mask[j * S + m])
                w[m] = 1.0 / std::sqrt(double(n_on));
        blocks.push_back(std::move(w));
    }
    return Combiner(Architecture::OnOffSwitch, geometry, std::move(blocks));
}

xlmimo::Combiner xlmimo::onoff_combiner(const ArrayGeometry &geometry)
{
    return onoff_combiner(geometry, std::vector<bool>(geometry.n_antennas(), true));
}

xlmimo::Combiner xlmimo::random_phase_combiner(const ArrayGeometry &geometry, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<arma::vec> angles(geometry.n_subarrays(), arma::vec(geometry.subarray_size()));
    for (auto &a : angles)
        for (auto &x : a)
            x = phase(rng);
    return phase_shifter_from_angles(geometry, angles, Architecture::RandomPhase);
}

double xlmimo::trace_metric(const arma::cx_mat &B, const arma::cx_mat &Theta)
{
    if (!B.is_square() || arma::size(B) != arma::size(Theta))
        throw std::invalid_argument("Dimensions of B and Theta do not agree.");
    return std::real(arma::accu(B % Theta.st()));
}

double xlmimo::trace_metric(const Combiner &combiner, const ChannelStats &stats)
{
    const uword S = combiner.geometry().subarray_size();
    double t = 0.0;
    for (uword j : combiner.active_subarrays())
    {
        const uword first = combiner.geometry().subarray_begin(j);
        if (first + S <= stats.support_begin() || first >= stats.support_end())
            continue;
        const arma::cx_vec &w = combiner.block(j);
        t += std::real(arma::cdot(w, stats.diagonal_block(first, S) * w));
    }
    return t;
}

double xlmimo::ProjectedCorrelation::trace() const
{
    return std::real(arma::trace(matrix));
}

xlmimo::ProjectedCorrelation xlmimo::project(const Combiner &combiner, const ChannelStats &stats)
{
    const auto &g = combiner.geometry();
    if (stats.n_antennas() != g.n_antennas())
        throw std::invalid_argument("User statistics do not match the array.");
    const uword S = g.subarray_size();
    const uword b0 = stats.support_begin(), b1 = stats.support_end();

    // Active subarrays touching the support and their overlap ranges (support coordinates)
    std::vector<uword> pos, lo, hi, subarray;
    const auto &active = combiner.active_subarrays();
    for (uword c = 0; c < active.size(); ++c)
    {
        const uword first = g.subarray_begin(active[c]);
        const uword a = std::max(first, b0), b = std::min(first + S, b1);
        if (a < b)
        {
            pos.push_back(c);
            lo.push_back(a - b0);
            hi.push_back(b - b0);
            subarray.push_back(active[c]);
        }
    }

    const uword n = pos.size();
    ProjectedCorrelation out;
    out.index = arma::conv_to<arma::uvec>::from(pos);
    out.matrix.zeros(n, n);
    if (n == 0)
        return out;

    // Y = Theta_block * W_sub column by column, then T = W_sub^H Y using block sparsity
    const arma::cx_mat &Th = stats.theta_block();
    std::vector<arma::cx_vec> wpart(n);
    arma::cx_mat Y(Th.n_rows, n);
    for (uword c = 0; c < n; ++c)
    {
        const uword first = g.subarray_begin(subarray[c]);
        wpart[c] = combiner.block(subarray[c]).subvec(lo[c] + b0 - first, hi[c] + b0 - first - 1);
        Y.col(c) = Th.cols(lo[c], hi[c] - 1) * wpart[c];
    }
    for (uword c = 0; c < n; ++c)
        for (uword r = 0; r < n; ++r)
            out.matrix(r, c) = arma::cdot(wpart[r], Y.col(c).subvec(lo[r], hi[r] - 1));
    out.matrix = 0.5 * (out.matrix + out.matrix.t());
    return out;
}

double xlmimo::trace_product(const ProjectedCorrelation &a, const ProjectedCorrelation &b)
{
    // Map positions of b into a; only common positions contribute
    std::vector<uword> ia, ib;
    uword i = 0, j = 0;
    while (i < a.index.n_elem && j < b.index.n_elem)
    {
        if (a.index[i] == b.index[j])
        {
            ia.push_back(i++);
            ib.push_back(j++);
        }
        else if (a.index[i] < b.index[j])
            ++i;
        else
            ++j;
    }
    if (ia.empty())
        return 0.0;
    arma::uvec ua = arma::conv_to<arma::uvec>::from(ia), ub = arma::conv_to<arma::uvec>::from(ib);
    arma::cx_mat A = a.matrix.submat(ua, ua), B = b.matrix.submat(ub, ub);
    // tr(A B) = sum_ij A_ij B_ji
    return std::real(arma::accu(A % B.st()));
}
