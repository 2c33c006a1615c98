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

#ifndef RMIMO_MONTE_CARLO_HPP
#define RMIMO_MONTE_CARLO_HPP

#include "rmimo/estimators.hpp"
#include "rmimo/rng.hpp"
#include "rmimo/scenario.hpp"

#include <cstdint>
#include <vector>

namespace rmimo
{

struct McEstimate
{
    double value = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
};

/// Running mean and co-moment matrix of a 4-vector; merges exactly (pairwise
/// update) so partial results can be combined in any fixed order.
struct MomentAccumulator
{
    std::size_t n = 0;
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d m2 = Eigen::Matrix4d::Zero();

    void add(const Eigen::Vector4d &x);
    void merge(const MomentAccumulator &other);
    /// Covariance of the sample mean, m2 / ((n - 1) n).
    Eigen::Matrix4d mean_covariance() const;
};

/// h = mean + R^{1/2} w, w ~ CN(0, I). sqrt_cov is R^{1/2}.
CVec sample_channel(const ChannelStats &stats, const CMat &sqrt_cov, Rng &rng);
CVec sample_channel(const ChannelStats &stats, Rng &rng);

/// y = sum sqrt(p) tau_p h + n with n ~ CN(0, noise tau_p I); ybar from the channel means.
PilotObservation synthesize_pilot_observation(const std::vector<double> &powers, const std::vector<CVec> &channels,
                                              const CVec &ybar, int tau_p, double noise, Rng &rng);

struct GaussianVector
{
    CVec mean;
    CMat cov;
};

/// E{|x^H B y|^2} for independent x ~ CN(xbar, Rx), y ~ CN(ybar, Ry).
double quad_moment_independent(const GaussianVector &x, const GaussianVector &y, const CMat &b);

/// E{|x^H B y|^2} for x = Fx w + xbar, y = Fy w + ybar sharing w ~ CN(0, I).
double quad_moment_correlated(const CVec &xbar, const CMat &fx, const CVec &ybar, const CMat &fy, const CMat &b);
/// Same with Fx = Rx^{1/2}, Fy = Ry^{1/2} (Hermitian square roots).
double quad_moment_correlated(const GaussianVector &x, const GaussianVector &y, const CMat &b);

/// tr(AB) <= ||A||_2 tr(B) and tr(A^{-1} B) >= tr(B) / ||A||_2 for PSD A (invertible) and B,
/// each checked up to rel_tol of the right-hand side.
bool trace_inequalities_hold(const CMat &a, const CMat &b, double rel_tol = 1e-10);

struct McOptions
{
    std::size_t trials = 50000;
    std::uint64_t seed = 1;
    unsigned threads = 0;     // 0: hardware concurrency
    std::size_t chunk = 1000; // trials per independently seeded chunk
    bool perfect_csi = false; // combine with the true channel instead of an estimate
};

struct McResult
{
    EstimatorKind kind = EstimatorKind::Mmse;
    Direction direction = Direction::Uplink;
    std::vector<McEstimate> sinr;        // per UE
    std::vector<McEstimate> signal_mean; // real part of E{v^H h} (uplink) or E{w^H h} (downlink)
    std::vector<McEstimate> norm2;       // E{||v||^2}
};

/// Sample-average estimate of the use-and-then-forget SINRs. Results are
/// bit-identical for a given seed whatever the thread count.
std::vector<McResult> mc_sinr(const Scenario &sc, const std::vector<EstimatorKind> &kinds,
                              const std::vector<Direction> &directions, const McOptions &opts);
McResult mc_sinr(const Scenario &sc, EstimatorKind kind, Direction dir, const McOptions &opts);

} // namespace rmimo

#endif
