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

#ifndef XLMIMO_CLOSED_FORM_HPP
#define XLMIMO_CLOSED_FORM_HPP

#include "xlmimo/channel.hpp"
#include "xlmimo/combiner.hpp"
#include "xlmimo/receivers.hpp"

#include <vector>

namespace xlmimo
{
    // Moments of the quadratic forms entering the MRC approximation for user k
    struct MomentSet
    {
        double mean_quadratic = 0.0;      // tr(B Theta_k)
        double second_moment = 0.0;       // tr(B Theta_k B Theta_k) + tr(B Theta_k)^2
        std::vector<double> cross_moment; // tr(B Theta_i B Theta_k), one per interferer
        double noise_term = 0.0;          // tr(B B^H Theta_k)
    };

    MomentSet gaussian_moments(const arma::cx_mat &B, const arma::cx_mat &Theta_k,
                               const std::vector<arma::cx_mat> &interferers);

    // Same moments from reduced correlations; the noise term uses W^H W = I
    MomentSet gaussian_moments(const ProjectedCorrelation &user, const std::vector<const ProjectedCorrelation *> &interferers);

    // log2(1 + second / (sum cross + noise / p)); zero when tr(B Theta_k) = 0
    double mrc_se_approx(const MomentSet &moments, double p_u);
    double mrc_se_approx(const arma::cx_mat &B, const arma::cx_mat &Theta_k,
                         const std::vector<arma::cx_mat> &interferers, double p_u);

    // log2(1 + p tr(B Theta_k))
    double lmmse_se_approx(double trace_b_theta, double p_u);
    double lmmse_se_approx(const arma::cx_mat &B, const arma::cx_mat &Theta_k, double p_u);

    // Closed-form SE for every user of a scenario under one combiner
    SeResult closed_form_se(const std::vector<ChannelStats> &stats, const Combiner &combiner, Receiver receiver, double p_u);
    SeResult closed_form_se(const std::vector<ProjectedCorrelation> &projected, Receiver receiver, double p_u);

    // E_h(x) = int_1^inf exp(-x t) / t^h dt for h >= 1, x > 0
    double exp_integral(int h, double x);

    // exp(x) E_h(x), finite for large x
    double scaled_exp_integral(int h, double x);

    // Ergodic per-user SE for K users sharing one correlation whose non-zero
    // eigenvalues are given, under the LMMSE receiver. Throws numerical_error when
    // two eigenvalues are closer than 1e-6 relative.
    double completely_overlapped_se(const arma::vec &eigenvalues, uword n_users, double p_u);

    // E[log2 det(I_n + p G^H diag(beta) G)] with G of size M~ x n, i.i.d. CN(0,1)
    double log_det_capacity(const arma::vec &eigenvalues, uword n, double p_u);

    // Non-zero eigenvalues (descending) of a Hermitian PSD matrix, relative cut 1e-10
    arma::vec nonzero_eigenvalues(const arma::cx_mat &A);

    // Z = I + p F^H F
    arma::cx_mat interference_gram(const arma::cx_mat &F, double p_u);

    // sum_{n=0}^{L} (I - Lambda Z)^n Lambda with Lambda = diag(Z)^-1
    arma::cx_mat neumann_inverse(const arma::cx_mat &Z, uword order = 1);

    // min_i |z_ii| / sum_{j != i} |z_ij|; DBL_MAX when Z is diagonal
    double diagonal_dominance_ratio(const arma::cx_mat &Z);
}

#endif
