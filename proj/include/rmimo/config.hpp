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

#ifndef RMIMO_CONFIG_HPP
#define RMIMO_CONFIG_HPP

#include "rmimo/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace rmimo
{

enum class FadingMode
{
    RicianProbabilistic, // LoS drawn per link from the distance-dependent probability
    AllLos,              // every BS-UE link has a LoS path
    RayleighOnly,        // Rician drop with the LoS components removed afterwards
    Uncorrelated         // probabilistic LoS, NLoS covariance beta_nlos * I
};

/// How the Rician factor splits the large-scale gain between LoS and NLoS.
enum class RicianSplit
{
    Amplitude, // beta_los = sqrt(k/(k+1)) beta, beta_nlos = sqrt(1/(k+1)) beta
    Power  // beta_los = k/(k+1) beta,       beta_nlos = 1/(k+1) beta
};

std::string_view to_string(FadingMode mode);
FadingMode parse_fading_mode(std::string_view name);
std::string_view to_string(RicianSplit split);
RicianSplit parse_rician_split(std::string_view name);

/// Every scalar of a simulation run. File units (dB, dBm, degrees) are kept as
/// written; the accessors below convert to linear watts and radians.
struct ExperimentConfig
{
    int num_cells_per_side = 4;
    double cell_side = 250.0; // m
    int K = 10;
    int M = 100;
    int tau_c = 200;
    int tau_p = 10;
    int tau_u = 190;
    int tau_d = 0;
    int reuse_factor = 1;
    double p_max_ul = 10.0;        // dBm
    double delta = 10.0;           // dB
    double noise_power_ul = -94.0; // dBm
    double noise_power_dl = -94.0; // dBm
    double bandwidth = 20e6;       // Hz
    double min_bs_distance = 35.0; // m
    double asd = 5.0;              // degrees
    int num_clusters = 6;
    double antenna_spacing = 0.5; // wavelengths
    std::uint64_t seed = 1;
    FadingMode fading_mode = FadingMode::RicianProbabilistic;
    RicianSplit rician_split = RicianSplit::Amplitude;

    int num_cells() const { return num_cells_per_side * num_cells_per_side; }
    int num_ues() const { return num_cells() * K; }
    double area_side() const { return num_cells_per_side * cell_side; }
    double p_max_watt() const;
    double delta_linear() const;
    double noise_ul_watt() const;
    double noise_dl_watt() const;
    double asd_rad() const;
    double ul_prelog() const { return static_cast<double>(tau_u) / tau_c; }
    double dl_prelog() const { return static_cast<double>(tau_d) / tau_c; }

    /// Throws ConfigError describing the first violated invariant.
    void validate() const;
};

/// Reuse factors supported on a side x side grid: 1, 2 (checkerboard), 4 (2x2
/// tiling) when side is even, and one group per cell.
bool reuse_factor_supported(int reuse_factor, int num_cells_per_side);

/// Copy of cfg with a new reuse factor; tau_p follows as f*K and the data
/// phase that carries samples (tau_u unless only tau_d does) absorbs the change.
ExperimentConfig with_reuse_factor(const ExperimentConfig &cfg, int reuse_factor);

ExperimentConfig config_from_json(const nlohmann::json &doc);
nlohmann::json config_to_json(const ExperimentConfig &cfg);
ExperimentConfig load_config(const std::filesystem::path &path);

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watt(double dbm);
double deg_to_rad(double deg);

} // namespace rmimo

#endif
