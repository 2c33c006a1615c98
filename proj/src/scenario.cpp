// SPDX-License-Identifier: Apache-2.0
//
// rmimo - multi-cell Massive MIMO spectral efficiency under Rician fading
// Copyright (C) 2026 The rmimo authors
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

#include "rmimo/scenario.hpp"

namespace rmimo
{

std::vector<UeIndex> Scenario::served_by(BsIndex bs) const
{
    std::vector<UeIndex> out;
    for (UeIndex u = 0; u < serving_bs.size(); ++u)
        if (serving_bs[u] == bs)
            out.push_back(u);
    return out;
}

void Scenario::check() const
{
    if (!channels)
        throw ConfigError("scenario has no channel statistics");
    const std::size_t U = num_ues();
    if (serving_bs.size() != U || ul_powers.size() != U || dl_powers.size() != U || pilots.pilot_of_ue.size() != U)
        throw ConfigError("scenario per-UE tables disagree with the number of UEs");
    for (BsIndex b : serving_bs)
        if (b >= num_bs())
            throw ConfigError("serving BS index out of range");
    for (int p : pilots.pilot_of_ue)
        if (p < 0 || p >= pilots.tau_p)
            throw ConfigError("pilot index out of range");
    if (!(noise_ul >= 0.0) || !(noise_dl >= 0.0))
        throw ConfigError("noise powers must be non-negative");
}

Scenario make_scenario(const NetworkRealization &net, const ExperimentConfig &cfg, int M, bool strip_los)
{
    Scenario sc;
    sc.channels = std::make_shared<GeneratedChannels>(net, cfg, M > 0 ? M : cfg.M, strip_los);
    sc.serving_bs = net.serving_bs;
    sc.pilots = net.pilots;
    sc.ul_powers = net.ul_powers;
    sc.dl_powers = net.dl_powers;
    sc.noise_ul = cfg.noise_ul_watt();
    sc.noise_dl = cfg.noise_dl_watt();
    return sc;
}

Scenario materialized(const Scenario &sc)
{
    Scenario out = sc;
    out.channels = std::make_shared<ChannelTable>(materialize(*sc.channels));
    return out;
}

PilotPlan make_pilot_plan(const std::vector<int> &pilot_of_ue, int tau_p)
{
    PilotPlan plan;
    plan.tau_p = tau_p;
    plan.pilot_of_ue = pilot_of_ue;
    plan.members.resize(static_cast<std::size_t>(tau_p));
    for (UeIndex u = 0; u < pilot_of_ue.size(); ++u)
    {
        if (pilot_of_ue[u] < 0 || pilot_of_ue[u] >= tau_p)
            throw ConfigError("pilot index out of range");
        plan.members[pilot_of_ue[u]].push_back(u);
    }
    return plan;
}

} // namespace rmimo
