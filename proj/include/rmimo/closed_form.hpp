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

#ifndef RMIMO_CLOSED_FORM_HPP
#define RMIMO_CLOSED_FORM_HPP

#include "rmimo/scenario.hpp"

#include <vector>

namespace rmimo
{

/// Expectations behind the use-and-then-forget bound for the MR vector v_a of
/// one UE at its serving BS. E{|v_a^H h_b|^2} = noncoherent[b] + coherent[b],
/// where coherent[b] is nonzero only when b shares a's pilot.
struct UeMoments
{
    cdouble signal_mean = 0.0; // E{v_a^H h_a}
    double norm2 = 0.0;        // E{||v_a||^2}
    RVec noncoherent;
    RVec coherent;
    bool defined = false; // false when v_a is identically zero (MO without LoS, LS without pilot power)
};

struct MomentTable
{
    EstimatorKind kind = EstimatorKind::Mmse;
    std::vector<UeMoments> ue;     // indexed by UE
    double max_imag_residue = 0.0; // largest |Im| / |Re| seen in quantities that are real by construction
};

MomentTable compute_moments(const Scenario &sc, EstimatorKind kind);
std::vector<MomentTable> compute_moments(const Scenario &sc, const std::vector<EstimatorKind> &kinds);

/// SINR split into its terms, normalized by E{||v||^2}:
/// sinr = signal / (sum_b power_b xi_b + sum_b power_b gamma_b - power_self nu + noise).
/// In the uplink b runs over interfering UEs; in the downlink over precoding UEs.
struct SinrBreakdown
{
    UeIndex ue = 0;
    EstimatorKind kind = EstimatorKind::Mmse;
    Direction direction = Direction::Uplink;
    double signal = 0.0;
    RVec xi;
    RVec gamma; // zero outside the pilot-sharing set and at the UE itself
    double nu = 0.0;
    double noise = 0.0;
    double sinr = 0.0;
    bool defined = false;

    double recompose(const std::vector<double> &powers) const;
};

SinrBreakdown ul_breakdown(const MomentTable &table, const Scenario &sc, UeIndex ue);
SinrBreakdown dl_breakdown(const MomentTable &table, const Scenario &sc, UeIndex ue);

std::vector<SinrBreakdown> ul_sinr_closed_form(const Scenario &sc, EstimatorKind kind);
std::vector<SinrBreakdown> dl_sinr_closed_form(const Scenario &sc, EstimatorKind kind);
std::vector<SinrBreakdown> sinr_closed_form(const MomentTable &table, const Scenario &sc, Direction dir);

/// prelog * log2(1 + sinr)
double se_from_sinr(double sinr, double prelog);

} // namespace rmimo

#endif
