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

#ifndef XLMIMO_ENERGY_HPP
#define XLMIMO_ENERGY_HPP

#include "xlmimo/combiner.hpp"

#include <optional>

namespace xlmimo
{
    // Hardware power figures in mW
    struct PowerProfile
    {
        double phase_shifter_mw = 20.0;
        double switch_mw = 10.0;
        double lna_mw = 20.0;
        double rf_chain_mw = 40.0;
        double adc_mw = 200.0;
        double baseband_mw = 200.0;

        void validate() const;
    };

    // M p_elem + N_act (p_lna + p_rf + p_adc) + p_bb, where p_elem is the phase shifter
    // or the switch. Per-chain terms count active subarrays only. With gate_elements,
    // the per-antenna term also counts only antennas of active subarrays.
    double uplink_power(Architecture architecture, uword n_antennas, uword n_subarrays, const PowerProfile &profile,
                        std::optional<uword> active_subarrays = std::nullopt, bool gate_elements = false);

    // bandwidth * sum SE / power, bits per Joule
    double energy_efficiency(double sum_se, double power_mw, double bandwidth_hz);
}

#endif
