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

#include "xlmimo/receivers.hpp"
#include "xlmimo/errors.hpp"
#include "xlmimo/rng.hpp"

#include <cmath>
#include <omp.h>

using arma::uword;

std::string xlmimo::to_string(Receiver r)
{
    return r == Receiver::MRC ? "MRC" : "LMMSE";
}

std::string xlmimo::to_string(Method m)
{
    return m == Method::MonteCarlo ? "monte-carlo" : "closed-form";
}

xlmimo::Receiver xlmimo::parse_receiver(std::string_view name)
{
    if (name == "MRC" || name == "mrc")
        return Receiver::MRC;
    if (name == "LMMSE" || name == "lmmse")
        return Receiver::LMMSE;
    throw std::invalid_argument("Unknown receiver '" + std::string(name) + "'.");
}

xlmimo::Method xlmimo::parse_method(std::string_view name)
{
    if (name == "monte-carlo")
        return Method::MonteCarlo;
    if (name == "closed-form")
        return Method::ClosedForm;
    throw std::invalid_argument("Unknown method '" + std::string(name) + "'.");
}

arma::cx_mat xlmimo::effective_channel(const Combiner &combiner, const arma::cx_mat &H)
{
    if (H.n_rows != combiner.geometry().n_antennas())
        throw std::invalid_argument("Channel matrix does not match the array.");
    return combiner.matrix().t() * H;
}

arma::cx_mat xlmimo::detector(const arma::cx_mat &F, Receiver receiver, double p_u)
{
    if (receiver == Receiver::MRC)
        return F;
    if (!(p_u > 0.0))
        throw std::invalid_argument("Transmit power must be positive for the LMMSE receiver.");
    arma::cx_mat Z = F.t() * F;
    Z.diag() += 1.0 / p_u;
    Z = 0.5 * (Z + Z.t());
    arma::cx_mat Zi;
    if (!arma::inv_sympd(Zi, Z))
        throw xlmimo::numerical_error("Regularized Gram matrix is singular.");
    return F * Zi;
}

double xlmimo::instantaneous_sinr(const arma::cx_mat &A, const arma::cx_mat &W, const arma::cx_mat &H, double p_u, uword k)
{
    if (k >= H.n_cols || k >= A.n_cols)
        throw std::invalid_argument("User index out of range.");
    if (A.n_rows != W.n_cols || W.n_rows != H.n_rows)
        throw std::invalid_argument("Dimensions of A, W and H do not agree.");

    arma::cx_rowvec v = A.col(k).t() * W.t();
    const double noise = std::real(arma::cdot(v.t(), v.t()));
    if (noise == 0.0)
        return 0.0;
    arma::cx_rowvec g = v * H;
    double interference = 0.0;
    for (uword i = 0; i < H.n_cols; ++i)
        if (i != k)
            interference += std::norm(g[i]);
    return p_u * std::norm(g[k]) / (p_u * interference + noise);
}

arma::vec xlmimo::sinr_from_gram(const arma::cx_mat &G, Receiver receiver, double p_u)
{
    const uword K = G.n_rows;
    arma::vec sinr(K, arma::fill::zeros);

    // P = A^H F and N = diag(A^H A) for the chosen detector
    arma::cx_mat P;
    arma::vec noise;
    if (receiver == Receiver::MRC)
    {
        P = G;
        noise = arma::real(G.diag());
    }
    else
    {
        arma::cx_mat Z = G;
        Z.diag() += 1.0 / p_u;
        Z = 0.5 * (Z + Z.t());
        arma::cx_mat Q;
        if (!arma::inv_sympd(Q, Z))
            throw xlmimo::numerical_error("Regularized Gram matrix is singular.");
        P = Q * G;
        noise = arma::real(arma::sum(P % Q.st(), 1)); // diag(Q G Q)
    }

    for (uword k = 0; k < K; ++k)
    {
        if (noise[k] <= 0.0)
            continue;
        double interference = 0.0;
        for (uword i = 0; i < K; ++i)
            if (i != k)
                interference += std::norm(P(k, i));
        sinr[k] = p_u * std::norm(P(k, k)) / (p_u * interference + noise[k]);
    }
    return sinr;
}

xlmimo::MonteCarloTable::MonteCarloTable(uword n_combiners, uword n_receivers, uword n_snr)
    : n_rx_(n_receivers), n_snr_(n_snr), data_(n_combiners * n_receivers * n_snr)
{
}

xlmimo::SeResult &xlmimo::MonteCarloTable::at(uword combiner, uword receiver, uword snr)
{
    return data_.at((combiner * n_rx_ + receiver) * n_snr_ + snr);
}

const xlmimo::SeResult &xlmimo::MonteCarloTable::at(uword combiner, uword receiver, uword snr) const
{
    return data_.at((combiner * n_rx_ + receiver) * n_snr_ + snr);
}

namespace
{
    // Part of one combiner column that overlaps one user's support
    struct Overlap
    {
        uword column;  // position in W
        uword first;   // offset into the support vector
        arma::cx_vec w; // conj not applied
    };

    std::vector<std::vector<Overlap>> overlaps(const xlmimo::Combiner &c, const std::vector<xlmimo::ChannelStats> &stats)
    {
        const auto &g = c.geometry();
        const uword S = g.subarray_size();
        std::vector<std::vector<Overlap>> out(stats.size());
        for (uword k = 0; k < stats.size(); ++k)
        {
            const uword b0 = stats[k].support_begin(), b1 = stats[k].support_end();
            const auto &active = c.active_subarrays();
            for (uword col = 0; col < active.size(); ++col)
            {
                const uword first = g.subarray_begin(active[col]);
                const uword a = std::max(first, b0), b = std::min(first + S, b1);
                if (a < b)
                    out[k].push_back({col, a - b0, c.block(active[col]).subvec(a - first, b - first - 1)});
            }
        }
        return out;
    }
}

xlmimo::MonteCarloTable xlmimo::run_monte_carlo(const std::vector<ChannelStats> &stats, const MonteCarloPlan &plan)
{
    if (plan.trials == 0)
        throw std::invalid_argument("Monte-Carlo evaluation needs at least one trial.");
    for (const auto &c : plan.combiners)
        for (const auto &s : stats)
            if (s.n_antennas() != c.geometry().n_antennas())
                throw std::invalid_argument("User statistics do not match the combiner's array.");

    const uword K = stats.size();
    const uword C = plan.combiners.size(), R = plan.receivers.size(), P = plan.snr_db.size();
    const uword T = plan.trials;
    const uword per_trial = C * R * P * K;

    std::vector<std::vector<std::vector<Overlap>>> ov;
    for (const auto &c : plan.combiners)
        ov.push_back(overlaps(c, stats));

    std::vector<double> p_u(P);
    for (uword s = 0; s < P; ++s)
        p_u[s] = snr_to_power(plan.snr_db[s]);

    // Per-trial values are kept so that the reduction runs in trial order
    std::vector<double> se(T * per_trial, 0.0);
    const int threads = plan.threads > 0 ? plan.threads : omp_get_max_threads();
    bool failed = false;
    std::string failure;

#pragma omp parallel for schedule(static) num_threads(threads)
    for (uword t = 0; t < T; ++t)
    {
        try
        {
            auto rng = make_stream(plan.seed, t);
            auto h = sample_supports(stats, rng);
            double *out = se.data() + t * per_trial;
            for (uword c = 0; c < C; ++c)
            {
                arma::cx_mat F(plan.combiners[c].n_active(), K, arma::fill::zeros);
                for (uword k = 0; k < K; ++k)
                    for (const auto &o : ov[c][k])
                        F(o.column, k) = arma::cdot(o.w, h[k].subvec(o.first, o.first + o.w.n_elem - 1));
                arma::cx_mat G = F.t() * F;
                for (uword r = 0; r < R; ++r)
                    for (uword s = 0; s < P; ++s)
                    {
                        arma::vec sinr = sinr_from_gram(G, plan.receivers[r], p_u[s]);
                        double *dst = out + ((c * R + r) * P + s) * K;
                        for (uword k = 0; k < K; ++k)
                            dst[k] = std::log2(1.0 + sinr[k]);
                    }
            }
        }
        catch (const std::exception &e)
        {
#pragma omp critical
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed)
        throw xlmimo::numerical_error("Monte-Carlo trial failed: " + failure);

    MonteCarloTable table(C, R, P);
    for (uword c = 0; c < C; ++c)
        for (uword r = 0; r < R; ++r)
            for (uword s = 0; s < P; ++s)
            {
                const uword offset = ((c * R + r) * P + s) * K;
                arma::mat v(T, K);
                for (uword t = 0; t < T; ++t)
                    for (uword k = 0; k < K; ++k)
                        v(t, k) = se[t * per_trial + offset + k];

                SeResult &res = table.at(c, r, s);
                res.method = Method::MonteCarlo;
                res.trials = T;
                res.snr_db = plan.snr_db[s];
                const double root_t = std::sqrt(double(T));
                arma::vec sums = arma::sum(v, 1);
                for (uword k = 0; k < K; ++k)
                {
                    res.per_user_se.push_back(arma::mean(v.col(k)));
                    res.per_user_stderr.push_back(T > 1 ? arma::stddev(v.col(k)) / root_t : 0.0);
                }
                res.sum_se = arma::mean(sums);
                res.sum_stderr = T > 1 ? arma::stddev(sums) / root_t : 0.0;
            }
    return table;
}

xlmimo::SeResult xlmimo::monte_carlo_se(const std::vector<ChannelStats> &stats, const Combiner &combiner, Receiver receiver,
                                        double p_u, uword trials, std::uint64_t master_seed)
{
    if (!(p_u > 0.0))
        throw std::invalid_argument("Transmit power must be positive.");
    MonteCarloPlan plan;
    plan.combiners = {combiner};
    plan.receivers = {receiver};
    plan.snr_db = {10.0 * std::log10(p_u)};
    plan.trials = trials;
    plan.seed = master_seed;
    return run_monte_carlo(stats, plan).at(0, 0, 0);
}
