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

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

// Continued fraction of exp(x) E_h(x), evaluated with the modified Lentz method.
// Converges quickly for x > 1.
static double scaled_cf(int h, double x)
{
    const double tiny = 1e-300, eps = 1e-16;
    double b = x + h;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int i = 1; i < 100000; ++i)
    {
        const double a = -double(i) * double(h - 1 + i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < eps)
            return f;
    }
    throw std::runtime_error("Exponential integral continued fraction did not converge.");
}

// E_1 by its power series, valid for small x
static double e1_series(double x)
{
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 200; ++k)
    {
        term *= -x / double(k);
        const double add = term / double(k);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum))
            break;
    }
    return -std::numbers::egamma - std::log(x) - sum;
}

double xlmimo::scaled_exp_integral(int h, double x)
{
    if (h < 1)
        throw std::domain_error("Exponential integral order must be at least 1.");
    if (!(x > 0.0))
        throw std::domain_error("Exponential integral argument must be positive.");
    if (x > 1.0)
        return scaled_cf(h, x);

    // Upward recurrence E_{n+1} = (exp(-x) - x E_n) / n, stable for x <= 1
    const double ex = std::exp(-x);
    double e = e1_series(x);
    for (int n = 1; n < h; ++n)
        e = (ex - x * e) / double(n);
    return e / ex;
}

double xlmimo::exp_integral(int h, double x)
{
    if (h < 1)
        throw std::domain_error("Exponential integral order must be at least 1.");
    if (!(x > 0.0))
        throw std::domain_error("Exponential integral argument must be positive.");
    return std::exp(-x) * scaled_exp_integral(h, x);
}
