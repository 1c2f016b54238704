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

#ifndef XLMIMO_ERRORS_HPP
#define XLMIMO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace xlmimo
{
    // Raised when a numerical guard refuses to continue: non-PSD input, degenerate
    // spectrum, search space too large. Input validation uses std::invalid_argument.
    class numerical_error : public std::runtime_error
    {
    public:
        explicit numerical_error(const std::string &what) : std::runtime_error(what) {}
    };
}

#endif
