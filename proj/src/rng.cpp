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

#include "xlmimo/rng.hpp"

std::mt19937_64 xlmimo::make_stream(std::uint64_t master_seed, std::uint64_t stream)
{
    std::seed_seq seq{(std::uint32_t)(master_seed & 0xffffffffULL), (std::uint32_t)(master_seed >> 32),
                      (std::uint32_t)(stream & 0xffffffffULL), (std::uint32_t)(stream >> 32)};
    return std::mt19937_64(seq);
}

arma::cx_vec xlmimo::complex_normal(arma::uword n, std::mt19937_64 &rng)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    arma::cx_vec g(n);
    for (arma::uword i = 0; i < n; ++i)
    {
        double re = normal(rng);
        double im = normal(rng);
        g[i] = {re, im};
    }
    return g;
}
