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

#include "xlmimo/closed_form.hpp"
#include "xlmimo/errors.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

using arma::uword;

static double trace_product_dense(const arma::cx_mat &A, const arma::cx_mat &B)
{
    return std::real(arma::accu(A % B.st()));
}

xlmimo::MomentSet xlmimo::gaussian_moments(const arma::cx_mat &B, const arma::cx_mat &Theta_k,
                                           const std::vector<arma::cx_mat> &interferers)
{
    if (!B.is_square() || arma::size(B) != arma::size(Theta_k))
        throw std::invalid_argument("Dimensions of B and Theta do not agree.");

    MomentSet m;
    const arma::cx_mat BTk = B * Theta_k;
    m.mean_quadratic = std::real(arma::trace(BTk));
    m.second_moment = trace_product_dense(BTk, BTk) + m.mean_quadratic * m.mean_quadratic;
    m.noise_term = trace_product_dense(B * B.t(), Theta_k);
    for (const auto &Ti : interferers)
    {
        if (arma::size(Ti) != arma::size(B))
            throw std::invalid_argument("Interferer correlation has the wrong size.");
        m.cross_moment.push_back(trace_product_dense(B * Ti, BTk));
    }
    return m;
}

xlmimo::MomentSet xlmimo::gaussian_moments(const ProjectedCorrelation &user,
                                           const std::vector<const ProjectedCorrelation *> &interferers)
{
    MomentSet m;
    m.mean_quadratic = user.trace();
    m.second_moment = trace_product(user, user) + m.mean_quadratic * m.mean_quadratic;
    m.noise_term = m.mean_quadratic;
    for (const auto *Ti : interferers)
        m.cross_moment.push_back(trace_product(*Ti, user));
    return m;
}

double xlmimo::mrc_se_approx(const MomentSet &moments, double p_u)
{
    if (!(p_u > 0.0))
        throw std::invalid_argument("Transmit power must be positive.");
    if (moments.mean_quadratic <= 0.0)
        return 0.0;
    double interference = 0.0;
    for (double c : moments.cross_moment)
        interference += c;
    const double denominator = interference + moments.noise_term / p_u;
    if (denominator <= 0.0)
        return 0.0;
    return std::log2(1.0 + moments.second_moment / denominator);
}

double xlmimo::mrc_se_approx(const arma::cx_mat &B, const arma::cx_mat &Theta_k,
                             const std::vector<arma::cx_mat> &interferers, double p_u)
{
    return mrc_se_approx(gaussian_moments(B, Theta_k, interferers), p_u);
}

double xlmimo::lmmse_se_approx(double trace_b_theta, double p_u)
{
    if (!(p_u > 0.0))
        throw std::invalid_argument("Transmit power must be positive.");
    return std::log2(1.0 + p_u * std::max(trace_b_theta, 0.0));
}

double xlmimo::lmmse_se_approx(const arma::cx_mat &B, const arma::cx_mat &Theta_k, double p_u)
{
    return lmmse_se_approx(trace_metric(B, Theta_k), p_u);
}

xlmimo::SeResult xlmimo::closed_form_se(const std::vector<ProjectedCorrelation> &projected, Receiver receiver, double p_u)
{
    SeResult res;
    res.method = Method::ClosedForm;
    res.snr_db = 10.0 * std::log10(p_u);
    for (uword k = 0; k < projected.size(); ++k)
    {
        double se;
        if (receiver == Receiver::LMMSE)
            se = lmmse_se_approx(projected[k].trace(), p_u);
        else
        {
            std::vector<const ProjectedCorrelation *> others;
            for (uword i = 0; i < projected.size(); ++i)
                if (i != k)
                    others.push_back(&projected[i]);
            se = mrc_se_approx(gaussian_moments(projected[k], others), p_u);
        }
        res.per_user_se.push_back(se);
        res.per_user_stderr.push_back(0.0);
        res.sum_se += se;
    }
    return res;
}

xlmimo::SeResult xlmimo::closed_form_se(const std::vector<ChannelStats> &stats, const Combiner &combiner, Receiver receiver, double p_u)
{
    std::vector<ProjectedCorrelation> projected;
    projected.reserve(stats.size());
    for (const auto &s : stats)
        projected.push_back(project(combiner, s));
    return closed_form_se(projected, receiver, p_u);
}

arma::vec xlmimo::nonzero_eigenvalues(const arma::cx_mat &A)
{
    if (!A.is_square())
        throw std::invalid_argument("Matrix must be square.");
    if (A.is_empty())
        return {};
    arma::vec lambda = arma::eig_sym(arma::cx_mat(0.5 * (A + A.t())));
    const double cut = 1e-10 * std::max(lambda.max(), 0.0);
    arma::vec kept = lambda.elem(arma::find(lambda > cut));
    return arma::sort(kept, "descend");
}

double xlmimo::log_det_capacity(const arma::vec &eigenvalues, uword n, double p_u)
{
    const uword m = eigenvalues.n_elem;
    if (!(p_u > 0.0))
        throw std::invalid_argument("Transmit power must be positive.");
    if (n > m)
        throw std::invalid_argument("Number of streams exceeds the number of non-zero eigenvalues.");
    if (n == 0)
        return 0.0;
    if (arma::any(eigenvalues <= 0.0))
        throw std::invalid_argument("Eigenvalues must be strictly positive.");

    arma::vec beta = arma::sort(eigenvalues, "descend");
    for (uword s = 1; s < m; ++s)
        if (beta[s - 1] - beta[s] <= 1e-6 * beta[s - 1])
            throw xlmimo::numerical_error("Degenerate spectrum: eigenvalues " + std::to_string(beta[s - 1]) + " and " +
                                          std::to_string(beta[s]) + " coincide; use the Monte-Carlo path.");

    // Columns scaled by powers of beta_max; the scaling cancels in det(E_i) / det(V)
    const arma::vec r = beta / beta[0];
    arma::mat V(m, m);
    for (uword s = 0; s < m; ++s)
        for (uword t = 0; t < m; ++t)
            V(s, t) = std::pow(r[s], double(t));

    double log_v, sign_v;
    if (!arma::log_det(log_v, sign_v, V) || !std::isfinite(log_v))
        throw xlmimo::numerical_error("Vandermonde determinant underflows.");

    double total = 0.0;
    for (uword i = m - n; i < m; ++i) // 0-based column i, 1-based i+1 in [m-n+1, m]
    {
        const int h_max = int(n) - int(m) + int(i) + 1;
        arma::mat E = V;
        for (uword s = 0; s < m; ++s)
        {
            const double x = 1.0 / (beta[s] * p_u);
            double sum = 0.0;
            for (int h = 1; h <= h_max; ++h)
                sum += scaled_exp_integral(h, x);
            E(s, i) = V(s, i) * sum;
        }
        double log_e, sign_e;
        if (!arma::log_det(log_e, sign_e, E))
            throw xlmimo::numerical_error("Determinant evaluation failed.");
        if (std::isfinite(log_e))
            total += sign_e * sign_v * std::exp(log_e - log_v);
    }
    return std::numbers::log2e * total;
}

double xlmimo::completely_overlapped_se(const arma::vec &eigenvalues, uword n_users, double p_u)
{
    if (n_users == 0)
        throw std::invalid_argument("Number of users must be positive.");
    return log_det_capacity(eigenvalues, n_users, p_u) - log_det_capacity(eigenvalues, n_users - 1, p_u);
}

arma::cx_mat xlmimo::interference_gram(const arma::cx_mat &F, double p_u)
{
    arma::cx_mat Z = p_u * (F.t() * F);
    Z.diag() += 1.0;
    return 0.5 * (Z + Z.t());
}

arma::cx_mat xlmimo::neumann_inverse(const arma::cx_mat &Z, uword order)
{
    if (!Z.is_square())
        throw std::invalid_argument("Matrix must be square.");
    arma::cx_vec d = Z.diag();
    if (arma::any(arma::abs(d) == 0.0))
        throw std::domain_error("Neumann inverse needs a non-zero diagonal.");

    const arma::cx_mat Lambda = arma::diagmat(1.0 / d);
    const arma::cx_mat step = arma::eye<arma::cx_mat>(Z.n_rows, Z.n_cols) - Lambda * Z;
    arma::cx_mat term = Lambda, sum = Lambda;
    for (uword n = 1; n <= order; ++n)
    {
        term = step * term;
        sum += term;
    }
    return sum;
}

double xlmimo::diagonal_dominance_ratio(const arma::cx_mat &Z)
{
    if (!Z.is_square())
        throw std::invalid_argument("Matrix must be square.");
    double ratio = DBL_MAX;
    for (uword i = 0; i < Z.n_rows; ++i)
    {
        double off = 0.0;
        for (uword j = 0; j < Z.n_cols; ++j)
            if (j != i)
                off += std::abs(Z(i, j));
        if (off > 0.0)
            ratio = std::min(ratio, std::abs(Z(i, i)) / off);
    }
    return ratio;
}
