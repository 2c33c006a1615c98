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

#ifndef RMIMO_GEOMETRY_HPP
#define RMIMO_GEOMETRY_HPP

#include "rmimo/config.hpp"
#include "rmimo/rng.hpp"

#include <cstdint>
#include <vector>

namespace rmimo
{

/// Minimum-norm displacement b - a over the 9 toroidal images of a square area.
Point2 wraparound_displacement(Point2 a, Point2 b, double area_side);
double norm(Point2 v);

/// Large-scale description of one BS-UE link.
struct LinkGeometry
{
    double distance = 0.0;
    double angle = 0.0; // azimuth of the UE seen from the BS, radians
    bool has_los = false;
    double shadow_db = 0.0;
    double beta = 0.0; // linear
};

struct PilotPlan
{
    int tau_p = 0;
    std::vector<int> pilot_of_ue;
    std::vector<std::vector<UeIndex>> members; // UEs per pilot index, ascending

    /// Pilot-sharing set of a UE, the UE itself included.
    const std::vector<UeIndex> &sharing_set(UeIndex ue) const { return members[pilot_of_ue[ue]]; }
    bool shares_pilot(UeIndex a, UeIndex b) const { return pilot_of_ue[a] == pilot_of_ue[b]; }
};

struct NetworkRealization
{
    int num_cells_per_side = 0;
    double cell_side = 0.0;
    int K = 0;
    std::vector<Point2> bs_positions;
    std::vector<std::vector<Point2>> ue_positions; // per drop cell
    std::vector<int> drop_cell;                    // per global UE
    std::vector<BsIndex> serving_bs;
    PilotPlan pilots;
    std::vector<double> ul_powers; // W
    std::vector<double> dl_powers; // W
    std::vector<LinkGeometry> links; // [bs * num_ues + ue]
    std::uint64_t cluster_seed = 0;  // seeds the scattering-cluster angles of every link

    std::size_t num_bs() const { return bs_positions.size(); }
    std::size_t num_ues() const { return drop_cell.size(); }
    double area_side() const { return num_cells_per_side * cell_side; }
    const LinkGeometry &link(BsIndex bs, UeIndex ue) const { return links[bs * num_ues() + ue]; }
    Point2 ue_position(UeIndex ue) const;
    std::vector<UeIndex> served_by(BsIndex bs) const;
};

/// Cell index y * side + x of grid column x, row y.
int cell_index(int x, int y, int side);
int reuse_group(int cell, int side, int reuse_factor);

PilotPlan assign_pilots(const ExperimentConfig &cfg);

/// Two-branch policy: p_max when beta / beta_min <= delta, else p_max * delta * beta_min / beta.
std::vector<double> ul_power_control(const std::vector<double> &betas_to_serving, double p_max,
                                     double delta);

/// Drops BSs at cell centres and K UEs per cell (rejecting points closer than
/// min_bs_distance to the cell's BS), draws every link, assigns serving BSs by
/// largest beta and applies power control per serving BS. Deterministic in rng.
NetworkRealization drop_network(const ExperimentConfig &cfg, Rng &rng);

} // namespace rmimo

#endif
