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

#ifndef RMIMO_ESTIMATORS_HPP
#define RMIMO_ESTIMATORS_HPP

#include "rmimo/channel.hpp"
#include "rmimo/scenario.hpp"

#include <vector>

namespace rmimo
{

/// Despread pilot signal y = sum_P sqrt(p) tau_p h + n, n ~ CN(0, noise tau_p I),
/// and its deterministic mean ybar = sum_P sqrt(p) tau_p hbar.
struct PilotObservation
{
    CVec y;
    CVec ybar;
};

struct Sharer
{
    double power = 0.0;
    const ChannelStats *stats = nullptr;
};

/// Pilot group seen at one BS: S = sum_P p tau_p R + noise I, psi = S^{-1}, ybar.
/// Cov{y} = tau_p S.
struct PilotGroup
{
    int tau_p = 0;
    double noise = 0.0;
    CMat s;
    CMat psi;
    CVec ybar;
};

/// psi = (sum_P p tau_p R + noise I)^{-1}. Throws ConfigError when the sum is singular.
CMat psi_matrix(const std::vector<Sharer> &sharers, int tau_p, double noise);
PilotGroup make_pilot_group(const std::vector<Sharer> &sharers, int tau_p, double noise);

/// Upper bound on the infinity-norm condition number of S.
double condition_estimate(const PilotGroup &group);

/// Exact first and second order statistics of h_hat = est_mean + gain (y - ybar)
/// and of the error h_tilde = h - h_hat. cross_cov = Cov{h_hat, h_tilde}.
struct EstimatorStats
{
    EstimatorKind kind = EstimatorKind::Mmse;
    double power = 0.0;
    int tau_p = 0;
    CVec est_mean;
    CMat est_cov;
    CVec err_mean;
    CMat err_cov;
    CMat cross_cov;
    CMat gain;
    CMat psi;
    CVec ybar;
    RVec d;      // EW-MMSE: diag(R)
    RVec lambda; // EW-MMSE: 1 / diag(S)
};

EstimatorStats mmse_stats(const ChannelStats &h, double power, const PilotGroup &group);
EstimatorStats ewmmse_stats(const ChannelStats &h, double power, const PilotGroup &group);
/// Throws ConfigError when power or tau_p is zero.
EstimatorStats ls_stats(const ChannelStats &h, double power, const PilotGroup &group);
EstimatorStats mo_stats(const ChannelStats &h);
EstimatorStats estimator_stats(EstimatorKind kind, const ChannelStats &h, double power, const PilotGroup &group);

/// Omega^{-1} = S - p tau_p R: covariance of the pilot signal without the UE's own channel, over tau_p.
CMat ls_omega_inverse(const ChannelStats &h, double power, const PilotGroup &group);

/// est_mean + gain (y - ybar).
CVec apply_estimator(const EstimatorStats &stats, const PilotObservation &obs);
inline CVec mo_estimate(const ChannelStats &h) { return h.mean; }

/// Pilot group of one pilot index at one BS (at_bs indexed by UE), uplink powers and noise.
PilotGroup pilot_group_at(const Scenario &sc, const std::vector<ChannelStats> &at_bs, int pilot);

/// Statistics of the estimate of UE ue's channel at BS bs.
EstimatorStats scenario_estimator(const Scenario &sc, EstimatorKind kind, BsIndex bs, UeIndex ue);

} // namespace rmimo

#endif
