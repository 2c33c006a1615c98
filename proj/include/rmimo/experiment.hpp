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

#ifndef RMIMO_EXPERIMENT_HPP
#define RMIMO_EXPERIMENT_HPP

#include "rmimo/config.hpp"
#include "rmimo/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rmimo
{

inline constexpr const char *experiment_names[] = {"sweep-M", "cdf", "uncorrelated", "all-los", "reuse-sweep",
                                                   "validate"};

bool experiment_supported(const std::string &name);

struct ExperimentOptions
{
    std::string experiment = "sweep-M";
    int drops = 1;
    std::size_t trials = 0; // Monte Carlo trials per drop and point; 0 skips Monte Carlo (validate defaults to 50000)
    std::vector<EstimatorKind> kinds{EstimatorKind::Mmse, EstimatorKind::EwMmse, EstimatorKind::Ls,
                                     EstimatorKind::Mo};
    std::vector<Direction> directions{Direction::Uplink};
    unsigned threads = 0;
    double validate_sigmas = 3.0;
};

/// One (point, fading family, drop, UE, estimator, direction) record. mc_* are NaN
/// when Monte Carlo was not run.
struct ResultRow
{
    std::string point; // "M=40", "f=2"
    std::string fading;
    int drop = 0;
    int cell = 0;
    int ue = 0; // index within the drop cell
    EstimatorKind kind = EstimatorKind::Mmse;
    Direction direction = Direction::Uplink;
    double sinr = 0.0;
    double se = 0.0;
    double mc_sinr = 0.0;
    double mc_stderr = 0.0;
};

struct ValidationSummary
{
    bool ran = false;
    std::size_t compared = 0;
    double max_abs_sigmas = 0.0;  // largest |closed form - MC| / stderr
    double max_rel_deviation = 0.0;
    bool passed = true;
};

struct ExperimentResult
{
    std::string experiment;
    std::uint64_t seed = 0;
    std::string config_hash;
    ExperimentConfig config;
    ExperimentOptions options;
    std::vector<ResultRow> rows;
    ValidationSummary validation;
};

/// FNV-1a (64 bit, hex) of the canonical JSON form of the config.
std::string config_hash(const ExperimentConfig &cfg);

/// Throws ConfigError for an unsupported experiment or option.
ExperimentResult run_experiment(const ExperimentConfig &cfg, const ExperimentOptions &opts);

inline constexpr const char *csv_header =
    "point,fading,drop,cell,ue,kind,direction,sinr,se,mc_sinr,mc_stderr";

void write_csv(const ExperimentResult &result, std::ostream &out);
/// Metadata document written next to the CSV.
std::string result_metadata_json(const ExperimentResult &result);

inline constexpr const char *summary_header =
    "point,fading,kind,direction,mean_sum_se,p5_sum_se,p50_sum_se,p95_sum_se,mean_ue_se,p5_ue_se,p50_ue_se,p95_ue_se";

/// Aggregates result CSVs per (point, fading, kind, direction): sum SE per drop and SE
/// per UE, each as a mean and 5/50/95th percentiles (smallest value whose empirical
/// CDF reaches the level). Throws ConfigError on a header mismatch or malformed row.
void summarize(const std::vector<std::filesystem::path> &files, std::ostream &out);

/// Percentile by the inverted empirical CDF; q in [0, 1].
double empirical_percentile(std::vector<double> values, double q);

} // namespace rmimo

#endif
