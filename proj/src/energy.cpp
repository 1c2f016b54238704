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

#include "xlmimo/energy.hpp"

#include <cmath>
#include <stdexcept>

void xlmimo::PowerProfile::validate() const
{
    for (double v : {phase_shifter_mw, switch_mw, lna_mw, rf_chain_mw, adc_mw, baseband_mw})
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("Power profile entries must be finite and non-negative.");
}

double xlmimo::uplink_power(Architecture architecture, uword n_antennas, uword n_subarrays, const PowerProfile &profile,
                            std::optional<uword> active_subarrays, bool gate_elements)
{
    profile.validate();
    if (n_subarrays == 0 || n_antennas % n_subarrays != 0)
        throw std::invalid_argument("Number of antennas must be a multiple of the number of subarrays.");
    const uword active = active_subarrays.value_or(n_subarrays);
    if (active > n_subarrays)
        throw std::invalid_argument("Active subarrays exceed the number of subarrays.");

    const double element = architecture == Architecture::OnOffSwitch ? profile.switch_mw : profile.phase_shifter_mw;
    const double elements = gate_elements ? double(active * (n_antennas / n_subarrays)) : double(n_antennas);
    const double chain = profile.lna_mw + profile.rf_chain_mw + profile.adc_mw;
    return elements * element + double(active) * chain + profile.baseband_mw;
}

double xlmimo::energy_efficiency(double sum_se, double power_mw, double bandwidth_hz)
{
    if (!(power_mw > 0.0))
        throw std::domain_error("Power must be positive.");
    if (!(bandwidth_hz >= 0.0))
        throw std::invalid_argument("Bandwidth must be non-negative.");
    return bandwidth_hz * sum_se / (power_mw / 1000.0);
}
