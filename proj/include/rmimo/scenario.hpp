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

#ifndef RMIMO_SCENARIO_HPP
#define RMIMO_SCENARIO_HPP

#include "rmimo/channel.hpp"
#include "rmimo/config.hpp"
#include "rmimo/geometry.hpp"

#include <memory>
#include <vector>

namespace rmimo
{

/// Everything the estimators, closed forms and the Monte Carlo engine need about
/// one drop: channel statistics, serving map, pilots, powers and noise levels.
/// Can be assembled by hand for synthetic instances.
struct Scenario
{
    std::shared_ptr<const ChannelSource> channels;
    std::vector<BsIndex> serving_bs;
    PilotPlan pilots;
    std::vector<double> ul_powers;
    std::vector<double> dl_powers;
    double noise_ul = 0.0; // W
    double noise_dl = 0.0; // W

    std::size_t num_bs() const { return channels->num_bs(); }
    std::size_t num_ues() const { return channels->num_ues(); }
    int antennas() const { return channels->antennas(); }
    int tau_p() const { return pilots.tau_p; }
    std::vector<UeIndex> served_by(BsIndex bs) const;

    /// Throws ConfigError when sizes disagree.
    void check() const;
};

/// Scenario of a drop with generated channels at M antennas (cfg.M when M <= 0).
Scenario make_scenario(const NetworkRealization &net, const ExperimentConfig &cfg, int M = 0,
                       bool strip_los = false);

/// Same scenario with every channel statistic stored.
Scenario materialized(const Scenario &sc);

/// Pilot plan from an explicit pilot index per UE.
PilotPlan make_pilot_plan(const std::vector<int> &pilot_of_ue, int tau_p);

} // namespace rmimo

#endif
