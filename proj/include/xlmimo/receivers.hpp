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

#ifndef XLMIMO_RECEIVERS_HPP
#define XLMIMO_RECEIVERS_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/combiner.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace xlmimo
{
    enum class Receiver
    {
        MRC,
        LMMSE
    };

    enum class Method
    {
        MonteCarlo,
        ClosedForm
    };

    std::string to_string(Receiver r); // "MRC", "LMMSE"
    std::string to_string(Method m);   // "monte-carlo", "closed-form"
    Receiver parse_receiver(std::string_view name);
    Method parse_method(std::string_view name);

    // Transmit SNR in dB with unit noise power
    inline double snr_to_power(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

    struct SeResult
    {
        std::vector<double> per_user_se;     // bits/s/Hz
        std::vector<double> per_user_stderr; // zero for closed-form values
        double sum_se = 0.0;
        double sum_stderr = 0.0;
        double snr_db = 0.0;
        Method method = Method::ClosedForm;
        uword trials = 0;
    };

    // F = W^H H
    arma::cx_mat effective_channel(const Combiner &combiner, const arma::cx_mat &H);

    // MRC: A = F. LMMSE: A = F (F^H F + I/p)^-1
    arma::cx_mat detector(const arma::cx_mat &F, Receiver receiver, double p_u);

    // p |a_k^H W^H h_k|^2 / (p sum_{i != k} |a_k^H W^H h_i|^2 + ||a_k^H W^H||^2)
    double instantaneous_sinr(const arma::cx_mat &A, const arma::cx_mat &W, const arma::cx_mat &H, double p_u, uword k);

    // Same SINR for all users from the Gram matrix G = F^H F, assuming W^H W = I
    arma::vec sinr_from_gram(const arma::cx_mat &G, Receiver receiver, double p_u);

    struct MonteCarloPlan
    {
        std::vector<Combiner> combiners;
        std::vector<Receiver> receivers;
        std::vector<double> snr_db;
        uword trials = 1000;
        std::uint64_t seed = 1;
        int threads = 0; // 0 keeps the OpenMP default
    };

    // Results for every (combiner, receiver, SNR) of a plan. All entries share the
    // same channel draws.
    class MonteCarloTable
    {
    public:
        MonteCarloTable(uword n_combiners, uword n_receivers, uword n_snr);

        SeResult &at(uword combiner, uword receiver, uword snr);
        const SeResult &at(uword combiner, uword receiver, uword snr) const;

    private:
        uword n_rx_, n_snr_;
        std::vector<SeResult> data_;
    };

    MonteCarloTable run_monte_carlo(const std::vector<ChannelStats> &stats, const MonteCarloPlan &plan);

    SeResult monte_carlo_se(const std::vector<ChannelStats> &stats, const Combiner &combiner, Receiver receiver,
                            double p_u, uword trials, std::uint64_t master_seed);
}

#endif
