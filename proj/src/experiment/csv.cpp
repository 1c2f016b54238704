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

#include "xlmimo/experiment.hpp"

#include <cstdio>
#include <fstream>

std::string xlmimo::format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v); // no "-0"
    return buf;
}

std::string xlmimo::csv_header()
{
    return "experiment,snr_db,method,receiver,architecture,user,se,stderr,power_mw,ee,seed";
}

std::string xlmimo::csv_line(const ResultRow &r)
{
    std::string s = r.experiment;
    s += "," + format_number(r.snr_db);
    s += "," + to_string(r.method);
    s += "," + to_string(r.receiver);
    s += "," + to_string(r.architecture);
    s += "," + (r.user ? std::to_string(*r.user) : std::string("SUM"));
    s += "," + format_number(r.se);
    s += "," + format_number(r.stderr_se);
    s += "," + (r.power_mw ? format_number(*r.power_mw) : std::string());
    s += "," + (r.ee ? format_number(*r.ee) : std::string());
    s += "," + std::to_string(r.seed);
    return s;
}

std::string xlmimo::schedule_csv_header()
{
    return "experiment,snr_db,receiver,architecture,algorithm,user,vr_first,vr_last,aoa_deg,scheduled,order,subarrays";
}

std::string xlmimo::schedule_csv_line(const ScheduleRow &r)
{
    std::string subs;
    for (size_t i = 0; i < r.subarrays.size(); ++i)
        subs += (i ? ";" : "") + std::to_string(r.subarrays[i]);
    std::string s = r.experiment;
    s += "," + format_number(r.snr_db);
    s += "," + to_string(r.receiver);
    s += "," + to_string(r.architecture);
    s += "," + r.algorithm;
    s += "," + std::to_string(r.user);
    s += "," + std::to_string(r.vr_first);
    s += "," + std::to_string(r.vr_last);
    s += "," + format_number(r.aoa_deg);
    s += std::string(",") + (r.order ? "1" : "0");
    s += "," + (r.order ? std::to_string(*r.order) : std::string());
    s += "," + subs;
    return s;
}

std::string xlmimo::oracle_csv_header()
{
    return "experiment,snr_db,receiver,architecture,quantity,reference,candidate,stderr,ratio,detail";
}

std::string xlmimo::oracle_csv_line(const OracleRow &r)
{
    std::string s = r.experiment;
    s += "," + format_number(r.snr_db);
    s += "," + to_string(r.receiver);
    s += "," + to_string(r.architecture);
    s += "," + r.quantity;
    s += "," + format_number(r.reference);
    s += "," + format_number(r.candidate);
    s += "," + format_number(r.stderr_ref);
    s += "," + format_number(r.ratio);
    s += "," + r.detail;
    return s;
}
