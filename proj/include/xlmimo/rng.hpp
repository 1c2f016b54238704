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

#ifndef XLMIMO_RNG_HPP
#define XLMIMO_RNG_HPP

#include <armadillo>
#include <complex>
#include <cstdint>
#include <random>

namespace xlmimo
{
    // Independent generator for one (master seed, stream) pair. Trials use their
    // index as stream id, so results do not depend on how trials are scheduled.
    std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream);

    // Stream ids above this offset are reserved for scenario-level draws
    constexpr std::uint64_t placement_stream_offset = 0x5c00000000000000ULL;
    constexpr std::uint64_t combiner_stream_offset = 0x7a00000000000000ULL;

    // n i.i.d. CN(0,1) samples
    arma::cx_vec complex_normal(arma::uword n, std::mt19937_64 &rng);
}

#endif
