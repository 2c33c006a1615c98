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

#include "rmimo/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace rmimo
{

std::string_view to_string(EstimatorKind kind)
{
    switch (kind)
    {
    case EstimatorKind::Mmse: return "mmse";
    case EstimatorKind::EwMmse: return "ewmmse";
    case EstimatorKind::Ls: return "ls";
    case EstimatorKind::Mo: return "mo";
    }
    return "unknown";
}

std::string_view to_string(Direction direction)
{
    return direction == Direction::Uplink ? "ul" : "dl";
}

EstimatorKind parse_estimator_kind(std::string_view name)
{
    if (name == "mmse")
        return EstimatorKind::Mmse;
    if (name == "ewmmse" || name == "ew-mmse")
        return EstimatorKind::EwMmse;
    if (name == "ls")
        return EstimatorKind::Ls;
    if (name == "mo")
        return EstimatorKind::Mo;
    throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

Direction parse_direction(std::string_view name)
{
    if (name == "ul")
        return Direction::Uplink;
    if (name == "dl")
        return Direction::Downlink;
    throw ConfigError("unknown direction '" + std::string(name) + "'");
}

std::string_view to_string(FadingMode mode)
{
    switch (mode)
    {
    case FadingMode::RicianProbabilistic: return "rician-probabilistic";
    case FadingMode::AllLos: return "all-los";
    case FadingMode::RayleighOnly: return "rayleigh-only";
    case FadingMode::Uncorrelated: return "uncorrelated";
    }
    return "unknown";
}

FadingMode parse_fading_mode(std::string_view name)
{
    for (auto mode : {FadingMode::RicianProbabilistic, FadingMode::AllLos, FadingMode::RayleighOnly,
                      FadingMode::Uncorrelated})
        if (name == to_string(mode))
            return mode;
    throw ConfigError("unknown fading_mode '" + std::string(name) + "'");
}

std::string_view to_string(RicianSplit split)
{
    return split == RicianSplit::Amplitude ? "paper" : "power";
}

RicianSplit parse_rician_split(std::string_view name)
{
    if (name == "paper")
        return RicianSplit::Amplitude;
    if (name == "power")
        return RicianSplit::Power;
    throw ConfigError("unknown rician_split '" + std::string(name) + "'");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

double ExperimentConfig::p_max_watt() const { return dbm_to_watt(p_max_ul); }
double ExperimentConfig::delta_linear() const { return db_to_linear(delta); }
double ExperimentConfig::noise_ul_watt() const { return dbm_to_watt(noise_power_ul); }
double ExperimentConfig::noise_dl_watt() const { return dbm_to_watt(noise_power_dl); }
double ExperimentConfig::asd_rad() const { return deg_to_rad(asd); }

bool reuse_factor_supported(int f, int side)
{
    if (f == 1 || f == side * side)
        return true;
    return (f == 2 || f == 4) && side % 2 == 0;
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string &msg) { throw ConfigError(msg); };
    if (num_cells_per_side < 1)
        fail("num_cells_per_side must be >= 1");
    if (!(cell_side > 0.0))
        fail("cell_side must be positive");
    if (K < 0)
        fail("K must be >= 0");
    if (M < 1)
        fail("M must be >= 1");
    if (tau_c < 1)
        fail("tau_c must be >= 1");
    if (tau_u < 0 || tau_d < 0 || tau_p < 0)
        fail("tau_p, tau_u and tau_d must be non-negative");
    if (tau_u + tau_d + tau_p != tau_c)
        fail("tau_u + tau_d + tau_p must equal tau_c");
    if (!reuse_factor_supported(reuse_factor, num_cells_per_side))
        fail("reuse_factor " + std::to_string(reuse_factor) + " is not supported on a " +
             std::to_string(num_cells_per_side) + "x" + std::to_string(num_cells_per_side) + " grid");
    if (tau_p != reuse_factor * K)
        fail("tau_p must equal reuse_factor * K");
    if (!(antenna_spacing > 0.0 && antenna_spacing <= 0.5))
        fail("antenna_spacing must lie in (0, 0.5]");
    if (num_clusters < 1)
        fail("num_clusters must be >= 1");
    if (!(asd >= 0.0))
        fail("asd must be non-negative");
    if (!(min_bs_distance >= 0.0))
        fail("min_bs_distance must be non-negative");
    if (!std::isfinite(noise_power_ul) || !std::isfinite(noise_power_dl) || !std::isfinite(p_max_ul) ||
        !std::isfinite(delta))
        fail("powers must be finite");
}

ExperimentConfig with_reuse_factor(const ExperimentConfig &cfg, int reuse_factor)
{
    ExperimentConfig out = cfg;
    out.reuse_factor = reuse_factor;
    out.tau_p = reuse_factor * cfg.K;
    const int data = cfg.tau_c - out.tau_p;
    if (cfg.tau_u == 0 && cfg.tau_d > 0)
        out.tau_d = data;
    else
        out.tau_u = data - cfg.tau_d;
    return out;
}

namespace
{
template <typename T> void read_field(const nlohmann::json &doc, const char *name, T &out)
{
    if (!doc.contains(name))
        return;
    try
    {
        out = doc.at(name).get<T>();
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError(std::string("field '") + name + "': " + e.what());
    }
}
} // namespace

ExperimentConfig config_from_json(const nlohmann::json &doc)
{
    if (!doc.is_object())
        throw ConfigError("config document must be a JSON object");

    static const char *known[] = {"num_cells_per_side", "cell_side", "K", "M", "tau_c", "tau_p", "tau_u",
                                  "tau_d", "reuse_factor", "p_max_ul", "delta", "noise_power_ul",
                                  "noise_power_dl", "bandwidth", "min_bs_distance", "asd", "num_clusters",
                                  "antenna_spacing", "seed", "fading_mode", "rician_split", "description",
                                  "drops"};
    for (const auto &item : doc.items())
    {
        bool ok = false;
        for (const char *k : known)
            ok = ok || item.key() == k;
        if (!ok)
            throw ConfigError("unknown config field '" + item.key() + "'");
    }

    ExperimentConfig cfg;
    read_field(doc, "num_cells_per_side", cfg.num_cells_per_side);
    read_field(doc, "cell_side", cfg.cell_side);
    read_field(doc, "K", cfg.K);
    read_field(doc, "M", cfg.M);
    read_field(doc, "tau_c", cfg.tau_c);
    read_field(doc, "tau_p", cfg.tau_p);
    read_field(doc, "tau_u", cfg.tau_u);
    read_field(doc, "tau_d", cfg.tau_d);
    read_field(doc, "reuse_factor", cfg.reuse_factor);
    read_field(doc, "p_max_ul", cfg.p_max_ul);
    read_field(doc, "delta", cfg.delta);
    read_field(doc, "noise_power_ul", cfg.noise_power_ul);
    read_field(doc, "noise_power_dl", cfg.noise_power_dl);
    read_field(doc, "bandwidth", cfg.bandwidth);
    read_field(doc, "min_bs_distance", cfg.min_bs_distance);
    read_field(doc, "asd", cfg.asd);
    read_field(doc, "num_clusters", cfg.num_clusters);
    read_field(doc, "antenna_spacing", cfg.antenna_spacing);
    read_field(doc, "seed", cfg.seed);
    std::string mode = std::string(to_string(cfg.fading_mode));
    read_field(doc, "fading_mode", mode);
    cfg.fading_mode = parse_fading_mode(mode);
    std::string split = std::string(to_string(cfg.rician_split));
    read_field(doc, "rician_split", split);
    cfg.rician_split = parse_rician_split(split);
    cfg.validate();
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig &cfg)
{
    return {{"num_cells_per_side", cfg.num_cells_per_side},
            {"cell_side", cfg.cell_side},
            {"K", cfg.K},
            {"M", cfg.M},
            {"tau_c", cfg.tau_c},
            {"tau_p", cfg.tau_p},
            {"tau_u", cfg.tau_u},
            {"tau_d", cfg.tau_d},
            {"reuse_factor", cfg.reuse_factor},
            {"p_max_ul", cfg.p_max_ul},
            {"delta", cfg.delta},
            {"noise_power_ul", cfg.noise_power_ul},
            {"noise_power_dl", cfg.noise_power_dl},
            {"bandwidth", cfg.bandwidth},
            {"min_bs_distance", cfg.min_bs_distance},
            {"asd", cfg.asd},
            {"num_clusters", cfg.num_clusters},
            {"antenna_spacing", cfg.antenna_spacing},
            {"seed", cfg.seed},
            {"fading_mode", std::string(to_string(cfg.fading_mode))},
            {"rician_split", std::string(to_string(cfg.rician_split))}};
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    nlohmann::json doc;
    try
    {
        in >> doc;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(doc);
}

} // namespace rmimo
