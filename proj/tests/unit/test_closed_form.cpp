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

#include <catch_amalgamated.hpp>

#include "xlmimo/closed_form.hpp"
#include "xlmimo/errors.hpp"
#include "xlmimo/rng.hpp"
#include "xlmimo/scenario.hpp"

#include "../support/oracles.hpp"

#include <boost/math/special_functions/expint.hpp>

#include <cfloat>
#include <numbers>

using namespace xlmimo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Exponential integral values")
{
    CHECK_THAT(exp_integral(1, 1.0), WithinAbs(0.2193839, 5e-8));
    CHECK_THAT(exp_integral(1, 1.0), WithinRel(oracle::expint(1, 1.0), 1e-9));
    CHECK_THAT(exp_integral(2, 1e-12), WithinAbs(1.0, 1e-9));
    CHECK_THAT(exp_integral(3, 1e-12), WithinAbs(0.5, 1e-9));
    CHECK_THROWS_AS(exp_integral(1, 0.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral(1, -1.0), std::domain_error);
    CHECK_THROWS_AS(exp_integral(0, 1.0), std::domain_error);
}

TEST_CASE("Exponential integral accuracy against independent references")
{
    // Boost provides E_n for integer n; quadrature covers the rest of the grid
    for (int h = 1; h <= 12; ++h)
        for (double x : {1e-8, 1e-3, 0.05, 0.5, 0.99, 1.0, 1.01, 2.5, 7.0, 20.0, 60.0, 300.0})
        {
            const double ref = boost::math::expint(h, x);
            if (ref < 1e-280)
                continue;
            CHECK_THAT(exp_integral(h, x), WithinRel(ref, 1e-10));
            CHECK_THAT(scaled_exp_integral(h, x), WithinRel(std::exp(x) * ref, 1e-10));
        }
    for (int h = 1; h <= 4; ++h)
        for (double x : {0.3, 1.5, 4.0})
            CHECK_THAT(exp_integral(h, x), WithinRel(oracle::expint(h, x), 1e-8));

    // Scaled form stays finite where E_h underflows: e^x E_1(x) ~ 1/x
    CHECK_THAT(scaled_exp_integral(1, 1e4), WithinRel(1.0 / (1e4 + 1.0), 1e-6));
}

TEST_CASE("Exponential integral recurrence")
{
    for (int h = 1; h <= 10; ++h)
        for (double x = 0.05; x < 30.0; x *= 1.7)
        {
            const double lhs = exp_integral(h + 1, x);
            const double rhs = (std::exp(-x) - x * exp_integral(h, x)) / h;
            CHECK_THAT(lhs, WithinAbs(rhs, 1e-9 * std::max(1e-300, std::abs(lhs)) + 1e-18));
        }
}

TEST_CASE("Gaussian moments")
{
    SECTION("identity correlation")
    {
        const arma::uword M = 6;
        arma::cx_mat I = arma::eye<arma::cx_mat>(M, M);
        auto m = gaussian_moments(I, I, {});
        CHECK_THAT(m.mean_quadratic, WithinAbs(6.0, 1e-12));
        CHECK_THAT(m.second_moment, WithinAbs(42.0, 1e-12));
        CHECK_THAT(m.noise_term, WithinAbs(6.0, 1e-12));
    }
    SECTION("disjoint supports")
    {
        ArrayGeometry g(32, 4);
        ChannelStats a(UserProfile(g, 0.2, 0.1, 0, 10), g), b(UserProfile(g, -0.3, 0.1, 20, 10), g);
        auto c = onoff_combiner(g);
        arma::cx_mat B = c.projection();
        auto m = gaussian_moments(B, a.theta(), {b.theta()});
        CHECK(m.cross_moment.size() == 1);
        CHECK(m.cross_moment[0] == 0.0);
        CHECK(trace_product(project(c, a), project(c, b)) == 0.0);
    }
    SECTION("dense and projected forms agree")
    {
        ArrayGeometry g(64, 8);
        auto users = random_scenario(g, 4, 30, 41).stats();
        auto c = phase_design_multiuser(users, g);
        arma::cx_mat B = c.projection();
        std::vector<ProjectedCorrelation> proj;
        for (const auto &s : users)
            proj.push_back(project(c, s));
        for (size_t k = 0; k < users.size(); ++k)
        {
            std::vector<arma::cx_mat> dense_i;
            std::vector<const ProjectedCorrelation *> proj_i;
            for (size_t i = 0; i < users.size(); ++i)
                if (i != k)
                {
                    dense_i.push_back(users[i].theta());
                    proj_i.push_back(&proj[i]);
                }
            auto d = gaussian_moments(B, users[k].theta(), dense_i);
            auto p = gaussian_moments(proj[k], proj_i);
            const double tol = 1e-10 * std::max(1.0, d.second_moment);
            CHECK_THAT(p.mean_quadratic, WithinAbs(d.mean_quadratic, tol));
            CHECK_THAT(p.second_moment, WithinAbs(d.second_moment, tol));
            CHECK_THAT(p.noise_term, WithinAbs(d.noise_term, tol));
            CHECK_THAT(d.noise_term, WithinAbs(d.mean_quadratic, tol));
            for (size_t i = 0; i < dense_i.size(); ++i)
                CHECK_THAT(p.cross_moment[i], WithinAbs(d.cross_moment[i], tol));
            CHECK(d.mean_quadratic >= 0.0);
            for (double v : d.cross_moment)
                CHECK(v >= -1e-12);
        }
    }
}

TEST_CASE("Gaussian moments match sample moments")
{
    // 16 x 16 random instance with two interferers
    std::mt19937_64 rng(123);
    const arma::uword M = 16;
    arma::cx_mat Tk = oracle::random_psd(M, rng, 5), T1 = oracle::random_psd(M, rng, 4), T2 = oracle::random_psd(M, rng, 8);
    ArrayGeometry g(M, 4);
    ChannelStats dummy(UserProfile(g, 0.1, 0.2, 0, M), g);
    auto c = phase_design_eigen(dummy, g, {0, 1, 2, 3});
    arma::cx_mat B = c.projection();
    arma::cx_mat Sk = psd_sqrt(Tk), S1 = psd_sqrt(T1), S2 = psd_sqrt(T2);
    auto m = gaussian_moments(B, Tk, {T1, T2});

    const arma::uword trials = 10000;
    arma::vec q(trials), q2(trials), c1(trials), c2(trials), nz(trials);
    auto stream = make_stream(55, 0);
    for (arma::uword t = 0; t < trials; ++t)
    {
        arma::cx_vec hk = Sk * oracle::cn(M, stream), h1 = S1 * oracle::cn(M, stream), h2 = S2 * oracle::cn(M, stream);
        const double qk = std::real(arma::cdot(hk, B * hk));
        q(t) = qk;
        q2(t) = qk * qk;
        c1(t) = std::norm(arma::cdot(hk, B * h1));
        c2(t) = std::norm(arma::cdot(hk, B * h2));
        nz(t) = std::real(arma::cdot(hk, B * B.t() * hk));
    }
    auto within = [](const arma::vec &v, double target)
    {
        auto s = oracle::stat(v);
        return std::abs(s.mean - target) <= 3.0 * s.se;
    };
    CHECK(within(q, m.mean_quadratic));
    CHECK(within(q2, m.second_moment));
    CHECK(within(c1, m.cross_moment[0]));
    CHECK(within(c2, m.cross_moment[1]));
    CHECK(within(nz, m.noise_term));
}

TEST_CASE("MRC closed form")
{
    const arma::uword M = 8;
    arma::cx_mat I = arma::eye<arma::cx_mat>(M, M);
    for (double p : {0.1, 1.0, 100.0})
    {
        CHECK_THAT(mrc_se_approx(I, I, {}, p), WithinRel(std::log2(1.0 + p * (M + 1.0)), 1e-12));
        CHECK_THAT(mrc_se_approx(I, I, {I}, p), WithinRel(std::log2(1.0 + (M + M * M) / (M + M / p)), 1e-12));
    }
    arma::cx_mat Z(M, M, arma::fill::zeros);
    CHECK(mrc_se_approx(I, Z, {I}, 10.0) == 0.0);
    CHECK_THROWS_AS(mrc_se_approx(I, I, {}, 0.0), std::invalid_argument);

    // Non-increasing in each interferer's cross moment
    MomentSet ms{3.0, 20.0, {1.0, 2.0}, 3.0};
    double prev = mrc_se_approx(ms, 10.0);
    for (double extra = 0.5; extra < 10.0; extra += 0.5)
    {
        ms.cross_moment[1] = 2.0 + extra;
        const double now = mrc_se_approx(ms, 10.0);
        CHECK(now <= prev);
        prev = now;
    }
}

TEST_CASE("LMMSE closed form")
{
    const arma::uword M = 8;
    arma::cx_mat I = arma::eye<arma::cx_mat>(M, M);
    CHECK_THAT(lmmse_se_approx(I, I, 10.0), WithinRel(std::log2(1.0 + 80.0), 1e-12));
    CHECK(lmmse_se_approx(0.0, 10.0) == 0.0);
    CHECK_THROWS_AS(lmmse_se_approx(1.0, 0.0), std::invalid_argument);

    // Independent of the interferers
    ArrayGeometry g(64, 8);
    auto users = random_scenario(g, 4, 30, 17).stats();
    auto c = onoff_combiner(g);
    auto all = closed_form_se(users, c, Receiver::LMMSE, 50.0);
    std::vector<ChannelStats> alone{users[2]};
    auto solo = closed_form_se(alone, c, Receiver::LMMSE, 50.0);
    CHECK_THAT(all.per_user_se[2], WithinRel(solo.per_user_se[0], 1e-14));
}

TEST_CASE("Closed-form SE over a scenario")
{
    ArrayGeometry g(64, 8);
    auto users = random_scenario(g, 4, 30, 5).stats();
    auto c = phase_design_multiuser(users, g);
    arma::cx_mat B = c.projection();
    for (auto rx : {Receiver::MRC, Receiver::LMMSE})
    {
        auto r = closed_form_se(users, c, rx, 20.0);
        CHECK(r.method == Method::ClosedForm);
        CHECK(r.trials == 0);
        double sum = 0.0;
        for (size_t k = 0; k < users.size(); ++k)
        {
            std::vector<arma::cx_mat> others;
            for (size_t i = 0; i < users.size(); ++i)
                if (i != k)
                    others.push_back(users[i].theta());
            const double ref = rx == Receiver::MRC ? mrc_se_approx(B, users[k].theta(), others, 20.0)
                                                   : lmmse_se_approx(B, users[k].theta(), 20.0);
            CHECK_THAT(r.per_user_se[k], WithinAbs(ref, 1e-10 * std::max(1.0, ref)));
            CHECK(r.per_user_stderr[k] == 0.0);
            sum += r.per_user_se[k];
        }
        CHECK_THAT(r.sum_se, WithinAbs(sum, 1e-12));
    }
}

TEST_CASE("Completely overlapped SE")
{
    SECTION("single eigenvalue reduces to the Rayleigh capacity")
    {
        for (double beta : {0.3, 2.0, 40.0})
            for (double p : {0.1, 1.0, 10.0, 1000.0})
            {
                const double x = 1.0 / (beta * p);
                const double direct = std::numbers::log2e * std::exp(x) * exp_integral(1, x);
                const double se = completely_overlapped_se(arma::vec{beta}, 1, p);
                CHECK_THAT(se, WithinAbs(direct, 1e-10 * direct));
                CHECK_THAT(se, WithinAbs(oracle::rayleigh_capacity(beta * p), 1e-6));
            }
    }
    SECTION("vanishing power")
    {
        CHECK(std::abs(completely_overlapped_se(arma::vec{4, 3, 2, 1}, 2, 1e-9)) < 1e-6);
    }
    SECTION("errors")
    {
        CHECK_THROWS_AS(completely_overlapped_se(arma::vec{2.0, 2.0 * (1 + 1e-8)}, 2, 10.0), numerical_error);
        CHECK_THROWS_AS(completely_overlapped_se(arma::vec{2.0, 1.0}, 3, 10.0), std::invalid_argument);
        CHECK_THROWS_AS(completely_overlapped_se(arma::vec{2.0, 0.0}, 1, 10.0), std::invalid_argument);
        CHECK_THROWS_AS(completely_overlapped_se(arma::vec{2.0, 1.0}, 1, 0.0), std::invalid_argument);
    }
    SECTION("frozen capacity values")
    {
        // Reference values computed once by 10^6-trial Monte-Carlo of log2 det(I + p G^H diag(beta) G)
        const arma::vec beta{4, 3, 2, 1};
        CHECK_THAT(log_det_capacity(beta, 1, 10.0), WithinAbs(6.4412, 0.02));
        CHECK_THAT(log_det_capacity(beta, 2, 10.0), WithinAbs(12.348, 0.02));
        CHECK_THAT(log_det_capacity(beta, 3, 10.0), WithinAbs(17.500, 0.02));
        CHECK_THAT(log_det_capacity(beta, 4, 10.0), WithinAbs(21.557, 0.02));
    }
    SECTION("log-det capacity for one stream equals the single-stream expectation")
    {
        // n = 1: E log2(1 + p sum_i beta_i |g_i|^2), a hypoexponential mixture
        const arma::vec beta{3.0, 1.0};
        const double p = 2.0;
        // Density of beta_1 X_1 + beta_2 X_2 with X_i ~ Exp(1)
        auto f = [&](double s)
        {
            if (s <= 0.0 || s >= 1.0)
                return 0.0;
            const double t = s / (1.0 - s);
            const double pdf = (std::exp(-t / beta(0)) - std::exp(-t / beta(1))) / (beta(0) - beta(1));
            return std::log2(1.0 + p * t) * pdf / ((1.0 - s) * (1.0 - s));
        };
        CHECK_THAT(log_det_capacity(beta, 1, p), WithinAbs(oracle::simpson(f, 0.0, 1.0, 1e-13), 1e-8));
    }
}

TEST_CASE("Non-zero eigenvalues")
{
    arma::cx_mat A(4, 4, arma::fill::zeros);
    A.diag() = arma::cx_vec{1.0, 0.0, 3.0, 1e-14};
    arma::vec e = nonzero_eigenvalues(A);
    REQUIRE(e.n_elem == 2);
    CHECK_THAT(e(0), WithinAbs(3.0, 1e-14));
    CHECK_THAT(e(1), WithinAbs(1.0, 1e-14));
}

TEST_CASE("Neumann inverse")
{
    arma::cx_mat I = arma::eye<arma::cx_mat>(3, 3);
    CHECK(arma::approx_equal(neumann_inverse(I), I, "absdiff", 0.0));

    arma::cx_mat D(3, 3, arma::fill::zeros);
    D.diag() = arma::cx_vec{2.0, 5.0, 0.5};
    CHECK(arma::approx_equal(neumann_inverse(D), arma::inv(D), "absdiff", 1e-15));

    arma::cx_mat Z = arma::conv_to<arma::cx_mat>::from(arma::mat({{2.0, 0.1}, {0.1, 2.0}}));
    arma::cx_mat exact = arma::conv_to<arma::cx_mat>::from(arma::mat({{2.0, -0.1}, {-0.1, 2.0}}));
    exact /= 2.0 * 2.0 - 0.1 * 0.1;
    CHECK(arma::norm(neumann_inverse(Z) - exact, "fro") / arma::norm(exact, "fro") < 0.01);

    // Second order is the generic summation and improves on first order here
    CHECK(arma::norm(neumann_inverse(Z, 2) - exact, "fro") < arma::norm(neumann_inverse(Z, 1) - exact, "fro"));
    arma::cx_mat L(2, 2, arma::fill::zeros);
    L.diag() = arma::cx_vec{0.5, 0.5};
    CHECK(arma::approx_equal(neumann_inverse(Z, 1), arma::cx_mat(2.0 * L - L * Z * L), "absdiff", 1e-15));
    CHECK(arma::approx_equal(neumann_inverse(Z, 0), L, "absdiff", 0.0));

    arma::cx_mat bad = arma::conv_to<arma::cx_mat>::from(arma::mat({{0.0, 1.0}, {1.0, 2.0}}));
    CHECK_THROWS_AS(neumann_inverse(bad), std::domain_error);
}

TEST_CASE("Diagonal dominance ratio")
{
    CHECK(diagonal_dominance_ratio(arma::eye<arma::cx_mat>(4, 4)) == DBL_MAX);
    arma::cx_mat Z = arma::conv_to<arma::cx_mat>::from(arma::mat({{2.0, 1.0}, {1.0, 2.0}}));
    CHECK_THAT(diagonal_dominance_ratio(Z), WithinAbs(2.0, 1e-15));
    arma::cx_mat Y = arma::conv_to<arma::cx_mat>::from(arma::mat({{3.0, 1.0, 1.0}, {0.5, 4.0, 0.5}, {2.0, 2.0, 1.0}}));
    CHECK_THAT(diagonal_dominance_ratio(Y), WithinAbs(0.25, 1e-15));
}

TEST_CASE("Interference Gram")
{
    auto rng = make_stream(2, 0);
    arma::cx_mat F(4, 3);
    for (auto &v : F)
        v = complex_normal(1, rng)(0);
    arma::cx_mat Z = interference_gram(F, 10.0);
    CHECK(arma::approx_equal(Z, arma::cx_mat(arma::eye<arma::cx_mat>(3, 3) + 10.0 * F.t() * F), "absdiff", 1e-12));
    CHECK(Z.is_hermitian(1e-12));
}
