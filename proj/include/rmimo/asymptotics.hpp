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

#ifndef RMIMO_ASYMPTOTICS_HPP
#define RMIMO_ASYMPTOTICS_HPP

#include "rmimo/scenario.hpp"

#include <vector>

namespace rmimo
{

/// sin(pi d_H M (sin phi1 - sin phi2)) / sin(pi d_H (sin phi1 - sin phi2)), or M
/// when |sin phi1 - sin phi2| < 1e-14. |hbar1^H hbar2| = sqrt(b1 b2) |g1| for ULA LoS vectors.
double g1(double phi1, double phi2, int M, double d_H = 0.5);

/// (1/M) tr(Ra Rb). Throws std::invalid_argument on a dimension mismatch.
double orthogonality_metric(const CMat &ra, const CMat &rb);
/// Same for diagonal matrices given by their diagonals.
double orthogonality_metric(const RVec &da, const RVec &db);

struct AsymptoticVerdict
{
    bool unbounded = false;
    double limit = 0.0; // limit expression at the scenario's M (infinite when nothing interferes coherently)
    double sinr = 0.0;  // closed-form SINR at the same M
    double gap = 0.0;   // sinr - limit, when limit is finite
    std::vector<UeIndex> sharers;
    std::vector<double> metrics;       // orthogonality metric per sharer at M
    std::vector<double> metric_ratios; // metric at 4M over metric at M (empty without a 4M scenario)
};

/// Evaluates the large-M limit expression of one UE's SINR at the scenario's M.
/// at_4m, when given, is the same drop at four times the antennas and feeds the
/// two-point orthogonality test: a sharer counts as asymptotically orthogonal
/// when its metric drops below threshold times its value at M.
AsymptoticVerdict asymptotic_sinr(EstimatorKind kind, Direction dir, const Scenario &at_m, const Scenario *at_4m,
                                  UeIndex ue, double threshold = 0.5);

/// Finite-M indicators of the large-M assumptions: bounded spectral norms,
/// non-vanishing trace per antenna, bounded LoS power per antenna, vanishing LoS cross products.
struct AssumptionDiagnostics
{
    double max_spectral_norm = 0.0;
    double min_trace_per_antenna = 0.0;
    double max_los_power_per_antenna = 0.0;
    double max_los_cross_per_antenna = 0.0;
};

AssumptionDiagnostics assumption_diagnostics(const Scenario &sc);

} // namespace rmimo

#endif
