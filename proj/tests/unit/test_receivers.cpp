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
#include "xlmimo/receivers.hpp"
#include "xlmimo/rng.hpp"
#include "xlmimo/scenario.hpp"

#include "../support/oracles.hpp"

using namespace xlmimo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    // Identity-correlated user over a full array
    ChannelStats white_user(const ArrayGeometry &g)
    {
        return ChannelStats(UserProfile(g, 0.0, 1e9, 0, g.n_antennas()), g);
    }

    // Combiner with one antenna per subarray, so W = I
    Combiner identity_combiner(const ArrayGeometry &g)
    {
        return onoff_combiner(g);
    }
}

TEST_CASE("Receiver and method names round-trip")
{
    CHECK(parse_receiver(to_string(Receiver::MRC)) == Receiver::MRC);
    CHECK(parse_receiver(to_string(Receiver::LMMSE)) == Receiver::LMMSE);
    CHECK(parse_method(to_string(Method::MonteCarlo)) == Method::MonteCarlo);
    CHECK(parse_method(to_string(Method::ClosedForm)) == Method::ClosedForm);
    CHECK_THROWS_AS(parse_receiver("ZF"), std::invalid_argument);
    CHECK_THROWS_AS(parse_method("analytic"), std::invalid_argument);
    CHECK_THAT(snr_to_power(30.0), WithinRel(1000.0, 1e-14));
}

TEST_CASE("Detector")
{
    auto rng = make_stream(4, 0);
    arma::cx_mat F(4, 3);
    for (auto &v : F)
        v = oracle::cn(1, rng)(0);
    CHECK(arma::approx_equal(detector(F, Receiver::MRC, 10.0), F, "absdiff", 0.0));

    arma::cx_mat f(1, 1);
    f(0, 0) = {0.6, -0.8};
    const double p = 5.0;
    arma::cx_mat a = detector(f, Receiver::LMMSE, p);
    CHECK(std::abs(a(0, 0) - f(0, 0) / (std::norm(f(0, 0)) + 1.0 / p)) < 1e-15);

    arma::cx_mat A = detector(F, Receiver::LMMSE, p);
    arma::cx_mat ref = F * arma::inv(F.t() * F + arma::eye<arma::cx_mat>(3, 3) / p);
    CHECK(arma::approx_equal(A, ref, "absdiff", 1e-12));
    CHECK_THROWS_AS(detector(F, Receiver::LMMSE, 0.0), std::invalid_argument);
}

TEST_CASE("Instantaneous SINR")
{
    const double p = 7.0;
    arma::cx_mat W = arma::eye<arma::cx_mat>(2, 2);
    arma::cx_mat H = arma::eye<arma::cx_mat>(2, 2);
    arma::cx_mat A = detector(W.t() * H, Receiver::MRC, p);
    CHECK_THAT(instantaneous_sinr(A, W, H, p, 0), WithinRel(p, 1e-14));

    // Single user, no interference: p ||W^H h||^2
    auto rng = make_stream(8, 0);
    ArrayGeometry g(16, 4);
    auto c = phase_design_eigen(ChannelStats(UserProfile(g, 0.3, 0.1, 0, 16), g), g, {0, 1, 2, 3});
    arma::cx_mat Wc = c.matrix();
    arma::cx_mat h = arma::cx_mat(complex_normal(16, rng));
    arma::cx_mat a1 = detector(Wc.t() * h, Receiver::MRC, p);
    CHECK_THAT(instantaneous_sinr(a1, Wc, h, p, 0), WithinRel(p * std::pow(arma::norm(Wc.t() * h), 2), 1e-12));

    arma::cx_mat zero(16, 1, arma::fill::zeros);
    CHECK(instantaneous_sinr(detector(Wc.t() * zero, Receiver::MRC, p), Wc, zero, p, 0) == 0.0);
    CHECK(instantaneous_sinr(detector(Wc.t() * zero, Receiver::LMMSE, p), Wc, zero, p, 0) == 0.0);
    CHECK_THROWS_AS(instantaneous_sinr(a1, Wc, h, p, 1), std::invalid_argument);
}

TEST_CASE("Orthogonal effective channels give equal MRC and LMMSE SINR")
{
    auto rng = make_stream(12, 0);
    arma::cx_mat X(6, 3);
    for (auto &v : X)
        v = oracle::cn(1, rng)(0);
    arma::cx_mat Q, R;
    arma::qr_econ(Q, R, X);
    arma::cx_mat F = Q * arma::diagmat(arma::cx_vec{1.0, 2.0, 0.5});
    arma::cx_mat W = arma::eye<arma::cx_mat>(6, 6);
    const double p = 3.0;
    for (arma::uword k = 0; k < 3; ++k)
        CHECK_THAT(instantaneous_sinr(detector(F, Receiver::MRC, p), W, F, p, k),
                   WithinRel(instantaneous_sinr(detector(F, Receiver::LMMSE, p), W, F, p, k), 1e-10));
}

TEST_CASE("Gram-based SINR equals the dense definition")
{
    ArrayGeometry g(64, 8);
    auto users = random_scenario(g, 4, 24, 6).stats();
    auto c = phase_design_multiuser(users, g);
    arma::cx_mat W = c.matrix();
    auto rng = make_stream(33, 0);
    for (int rep = 0; rep < 5; ++rep)
    {
        arma::cx_mat H = sample_channels(users, rng);
        arma::cx_mat F = effective_channel(c, H);
        CHECK(arma::approx_equal(F, arma::cx_mat(W.t() * H), "absdiff", 1e-12));
        for (double p : {0.1, 10.0, 1e4})
            for (auto rx : {Receiver::MRC, Receiver::LMMSE})
            {
                arma::vec fast = sinr_from_gram(F.t() * F, rx, p);
                arma::cx_mat A = detector(F, rx, p);
                for (arma::uword k = 0; k < 4; ++k)
                {
                    const double dense = instantaneous_sinr(A, W, H, p, k);
                    CHECK_THAT(fast(k), WithinAbs(dense, 1e-9 * std::max(1.0, dense)));
                }
            }
    }
}

TEST_CASE("Determinant identity for the LMMSE SINR")
{
    auto rng = make_stream(77, 0);
    for (int rep = 0; rep < 10; ++rep)
    {
        arma::cx_mat F(5, 3);
        for (auto &v : F)
            v = oracle::cn(1, rng)(0);
        const double p = std::pow(10.0, rep - 3.0);
        arma::cx_mat Z = arma::eye<arma::cx_mat>(3, 3) + p * F.t() * F;
        arma::cx_mat Zi = arma::inv_sympd(Z);
        const double logdet_all = arma::log_det_sympd(Z);
        arma::vec sinr = sinr_from_gram(F.t() * F, Receiver::LMMSE, p);
        for (arma::uword k = 0; k < 3; ++k)
        {
            arma::cx_mat Fk = F;
            Fk.shed_col(k);
            arma::cx_mat Zk = arma::eye<arma::cx_mat>(2, 2) + p * Fk.t() * Fk;
            const double logdet_k = arma::log_det_sympd(Zk);
            const double lhs = std::log2(1.0 / std::real(Zi(k, k)));
            const double rhs = (logdet_all - logdet_k) / std::log(2.0);
            CHECK_THAT(lhs, WithinAbs(rhs, 1e-8));
            CHECK_THAT(std::log2(1.0 + sinr(k)), WithinAbs(rhs, 1e-8));
        }
    }
}

TEST_CASE("Monte-Carlo SE")
{
    ArrayGeometry g(4, 4);
    std::vector<ChannelStats> one{white_user(g)};
    auto c = identity_combiner(g);

    SECTION("vanishing power")
    {
        auto r = monte_carlo_se(one, c, Receiver::MRC, 1e-9, 200, 1);
        CHECK(r.sum_se < 1e-6);
        CHECK(r.trials == 200);
        CHECK(r.method == Method::MonteCarlo);
    }
    SECTION("chi-square oracle")
    {
        for (double snr : {0.0, 10.0})
        {
            const double p = snr_to_power(snr);
            auto r = monte_carlo_se(one, c, Receiver::MRC, p, 20000, 5);
            const double ref = oracle::gamma_capacity(p, 4);
            CHECK(std::abs(r.per_user_se[0] - ref) <= 3.0 * r.per_user_stderr[0]);
        }
    }
    SECTION("determinism and sum")
    {
        ArrayGeometry g64(64, 8);
        auto users = random_scenario(g64, 3, 24, 2).stats();
        auto cc = phase_design_multiuser(users, g64);
        auto a = monte_carlo_se(users, cc, Receiver::LMMSE, 10.0, 300, 9);
        auto b = monte_carlo_se(users, cc, Receiver::LMMSE, 10.0, 300, 9);
        CHECK(a.per_user_se == b.per_user_se);
        CHECK(a.per_user_stderr == b.per_user_stderr);
        double sum = 0.0;
        for (double v : a.per_user_se)
        {
            sum += v;
            CHECK(v >= 0.0);
        }
        CHECK_THAT(a.sum_se, WithinAbs(sum, 1e-12));
        CHECK_THROWS_AS(monte_carlo_se(users, cc, Receiver::LMMSE, 10.0, 0, 9), std::invalid_argument);
    }
}

TEST_CASE("Monte-Carlo results do not depend on the thread count")
{
    ArrayGeometry g(64, 8);
    auto users = random_scenario(g, 4, 24, 12).stats();
    MonteCarloPlan plan;
    plan.combiners = {phase_design_multiuser(users, g), onoff_combiner(g)};
    plan.receivers = {Receiver::MRC, Receiver::LMMSE};
    plan.snr_db = {0.0, 20.0};
    plan.trials = 200;
    plan.seed = 3;
    plan.threads = 1;
    auto serial = run_monte_carlo(users, plan);
    plan.threads = 4;
    auto parallel = run_monte_carlo(users, plan);
    for (arma::uword c = 0; c < 2; ++c)
        for (arma::uword r = 0; r < 2; ++r)
            for (arma::uword s = 0; s < 2; ++s)
                CHECK(serial.at(c, r, s).per_user_se == parallel.at(c, r, s).per_user_se);

    // A table entry equals the standalone estimate with the same seed
    auto single = monte_carlo_se(users, plan.combiners[1], Receiver::LMMSE, snr_to_power(20.0), 200, 3);
    for (size_t k = 0; k < 4; ++k)
        CHECK_THAT(single.per_user_se[k], WithinAbs(serial.at(1, 1, 1).per_user_se[k], 1e-12));
}

TEST_CASE("Sum SE is monotone in power and LMMSE dominates MRC")
{
    ArrayGeometry g(64, 8);
    auto users = random_scenario(g, 4, 32, 14).stats();
    MonteCarloPlan plan;
    plan.combiners = {phase_design_multiuser(users, g)};
    plan.receivers = {Receiver::MRC, Receiver::LMMSE};
    plan.snr_db = {-10.0, 0.0, 10.0, 20.0, 30.0, 40.0};
    plan.trials = 400;
    plan.seed = 8;
    auto t = run_monte_carlo(users, plan);
    for (arma::uword r = 0; r < 2; ++r)
        for (arma::uword s = 1; s < plan.snr_db.size(); ++s)
            CHECK(t.at(0, r, s).sum_se >= t.at(0, r, s - 1).sum_se);
    for (arma::uword s = 0; s < plan.snr_db.size(); ++s)
        for (size_t k = 0; k < 4; ++k)
        {
            const auto &m = t.at(0, 0, s), &l = t.at(0, 1, s);
            // Common random numbers: LMMSE is SINR-optimal per realization
            CHECK(l.per_user_se[k] >= m.per_user_se[k] - 3.0 * std::hypot(l.per_user_stderr[k], m.per_user_stderr[k]));
        }
}
