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

#ifndef RMIMO_PROPAGATION_HPP
#define RMIMO_PROPAGATION_HPP

#include "rmimo/config.hpp"

namespace rmimo
{

/// Shadow-fading standard deviations in dB.
inline constexpr double shadow_sigma_los_db = 4.0;
inline constexpr double shadow_sigma_nlos_db = 10.0;

/// LoS probability (300 - d) / 300 for 0 < d < 300, 1 at d = 0, 0 beyond.
double los_probability(double distance);

/// Large-scale gain in dB: -30.18 - 26 log10(d) + F (LoS), -34.53 - 38 log10(d) + F (NLoS).
/// Throws GeometryError for d <= 0.
double large_scale_gain_db(double distance, bool los, double shadow_db);
double large_scale_gain(double distance, bool los, double shadow_db);

/// Rician factor 13 - 0.03 d dB, in linear scale.
double rician_factor(double distance);

struct RicianGains
{
    double kappa = 0.0;
    double beta_los = 0.0;
    double beta_nlos = 0.0;
};

RicianGains rician_split(double distance, double beta, RicianSplit split = RicianSplit::Amplitude);

} // namespace rmimo

#endif
