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

#include "rmimo/geometry.hpp"

#include "rmimo/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rmimo
{

Point2 wraparound_displacement(Point2 a, Point2 b, double area_side)
{
    Point2 best{b.x - a.x, b.y - a.y};
    double best_norm = std::numeric_limits<double>::infinity();
    for (int i = -1; i <= 1; ++i)
    {
        for (int j = -1; j <= 1; ++j)
        {
            const Point2 d{b.x + i * area_side - a.x, b.y + j * area_side - a.y};
            const double n = d.x * d.x + d.y * d.y;
            if (n < best_norm)
            {
                best_norm = n;
                best = d;
            }
        }
    }
    return best;
}

double norm(Point2 v) { return std::hypot(v.x, v.y); }

Point2 NetworkRealization::ue_position(UeIndex ue) const
{
    return ue_positions[drop_cell[ue]][ue % static_cast<std::size_t>(K)];
}

std::vector<UeIndex> NetworkRealization::served_by(BsIndex bs) const
{
    std::vector<UeIndex> out;
    for (UeIndex u = 0; u < serving_bs.size(); ++u)
        if (serving_bs[u] == bs)
            out.push_back(u);
    return out;
}

int cell_index(int x, int y, int side) { return y * side + x; }

int reuse_group(int cell, int side, int reuse_factor)
{
    const int x = cell % side;
    const int y = cell / side;
    if (reuse_factor == 1)
        return 0;
    if (reuse_factor == side * side)
        return cell;
    if (reuse_factor == 2 && side % 2 == 0)
        return (x + y) % 2;
    if (reuse_factor == 4 && side % 2 == 0)
        return (x % 2) + 2 * (y % 2);
    throw ConfigError("reuse factor " + std::to_string(reuse_factor) + " has no group pattern on a " +
                      std::to_string(side) + "x" + std::to_string(side) + " grid");
}

PilotPlan assign_pilots(const ExperimentConfig &cfg)
{
    if (cfg.tau_p != cfg.reuse_factor * cfg.K)
        throw ConfigError("tau_p must equal reuse_factor * K");
    PilotPlan plan;
    plan.tau_p = cfg.tau_p;
    plan.members.resize(static_cast<std::size_t>(cfg.tau_p));
    const int side = cfg.num_cells_per_side;
    for (int cell = 0; cell < cfg.num_cells(); ++cell)
    {
        const int g = reuse_group(cell, side, cfg.reuse_factor);
        for (int k = 0; k < cfg.K; ++k)
        {
            const int pilot = g * cfg.K + k;
            plan.pilot_of_ue.push_back(pilot);
            plan.members[pilot].push_back(static_cast<UeIndex>(cell * cfg.K + k));
        }
    }
    return plan;
}

std::vector<double> ul_power_control(const std::vector<double> &betas, double p_max, double delta)
{
    if (betas.empty())
        return {};
    const double beta_min = *std::min_element(betas.begin(), betas.end());
    std::vector<double> out;
    out.reserve(betas.size());
    for (double b : betas)
        out.push_back(b / beta_min <= delta ? p_max : p_max * delta * beta_min / b);
    return out;
}

namespace
{
Point2 draw_ue(const ExperimentConfig &cfg, Point2 bs, Rng &rng)
{
    const double half = 0.5 * cfg.cell_side;
    for (int attempt = 0; attempt < 1000000; ++attempt)
    {
        const double dx = (2.0 * uniform01(rng) - 1.0) * half;
        const double dy = (2.0 * uniform01(rng) - 1.0) * half;
        if (std::hypot(dx, dy) >= cfg.min_bs_distance)
            return {bs.x + dx, bs.y + dy};
    }
    throw GeometryError("no UE position at least " + std::to_string(cfg.min_bs_distance) +
                        " m from the BS in a " + std::to_string(cfg.cell_side) + " m cell");
}
} // namespace

NetworkRealization drop_network(const ExperimentConfig &cfg, Rng &rng)
{
    cfg.validate();
    NetworkRealization net;
    net.num_cells_per_side = cfg.num_cells_per_side;
    net.cell_side = cfg.cell_side;
    net.K = cfg.K;
    const int side = cfg.num_cells_per_side;
    const int L = cfg.num_cells();

    for (int c = 0; c < L; ++c)
    {
        const int x = c % side;
        const int y = c / side;
        net.bs_positions.push_back({(x + 0.5) * cfg.cell_side, (y + 0.5) * cfg.cell_side});
    }
    net.ue_positions.resize(L);
    for (int c = 0; c < L; ++c)
    {
        for (int k = 0; k < cfg.K; ++k)
        {
            net.ue_positions[c].push_back(draw_ue(cfg, net.bs_positions[c], rng));
            net.drop_cell.push_back(c);
        }
    }

    const std::uint64_t link_seed = rng();
    net.cluster_seed = rng();

    const std::size_t U = net.num_ues();
    net.links.resize(static_cast<std::size_t>(L) * U);
    for (BsIndex b = 0; b < static_cast<BsIndex>(L); ++b)
    {
        for (UeIndex u = 0; u < U; ++u)
        {
            Rng link_rng = make_stream(link_seed, {b, u});
            const double los_draw = uniform01(link_rng);
            const double shadow = standard_normal(link_rng);

            LinkGeometry &lk = net.links[b * U + u];
            const Point2 d = wraparound_displacement(net.bs_positions[b], net.ue_position(u), net.area_side());
            lk.distance = norm(d);
            lk.angle = std::atan2(d.y, d.x);
            lk.has_los = cfg.fading_mode == FadingMode::AllLos || los_draw < los_probability(lk.distance);
            lk.shadow_db = shadow * (lk.has_los ? shadow_sigma_los_db : shadow_sigma_nlos_db);
            lk.beta = large_scale_gain(lk.distance, lk.has_los, lk.shadow_db);
        }
    }

    net.serving_bs.resize(U);
    for (UeIndex u = 0; u < U; ++u)
    {
        BsIndex best = 0;
        for (BsIndex b = 1; b < static_cast<BsIndex>(L); ++b)
            if (net.links[b * U + u].beta > net.links[best * U + u].beta)
                best = b;
        net.serving_bs[u] = best;
    }

    net.pilots = assign_pilots(cfg);

    net.ul_powers.assign(U, 0.0);
    for (BsIndex b = 0; b < static_cast<BsIndex>(L); ++b)
    {
        const auto served = net.served_by(b);
        std::vector<double> betas;
        for (UeIndex u : served)
            betas.push_back(net.links[b * U + u].beta);
        const auto powers = ul_power_control(betas, cfg.p_max_watt(), cfg.delta_linear());
        for (std::size_t i = 0; i < served.size(); ++i)
            net.ul_powers[served[i]] = powers[i];
    }
    net.dl_powers = net.ul_powers;
    return net;
}

} // namespace rmimo
