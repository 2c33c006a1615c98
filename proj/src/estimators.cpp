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

#include "rmimo/estimators.hpp"

#include "rmimo/linalg.hpp"

#include <cmath>
#include <iostream>

namespace rmimo
{

namespace
{
CMat pilot_covariance(const std::vector<Sharer> &sharers, int tau_p, double noise, Eigen::Index M)
{
    CMat s = noise * CMat::Identity(M, M);
    for (const Sharer &sh : sharers)
        s += sh.power * tau_p * sh.stats->cov;
    return linalg::hermitian_part(s);
}

Eigen::Index dimension(const std::vector<Sharer> &sharers)
{
    if (sharers.empty())
        throw ConfigError("pilot group needs at least one member to fix the dimension");
    return sharers.front().stats->mean.size();
}
} // namespace

CMat psi_matrix(const std::vector<Sharer> &sharers, int tau_p, double noise)
{
    return make_pilot_group(sharers, tau_p, noise).psi;
}

PilotGroup make_pilot_group(const std::vector<Sharer> &sharers, int tau_p, double noise)
{
    const Eigen::Index M = dimension(sharers);
    PilotGroup g;
    g.tau_p = tau_p;
    g.noise = noise;
    g.s = pilot_covariance(sharers, tau_p, noise, M);
    g.ybar = CVec::Zero(M);
    for (const Sharer &sh : sharers)
        g.ybar += std::sqrt(sh.power) * tau_p * sh.stats->mean;
    try
    {
        g.psi = linalg::hermitian_inverse(g.s);
    }
    catch (const std::domain_error &)
    {
        throw ConfigError("pilot covariance is singular; noise power must be positive");
    }
    const double cond = condition_estimate(g);
    if (cond > 1e12)
        std::cerr << "rmimo: warning: pilot covariance condition estimate " << cond << '\n';
    return g;
}

double condition_estimate(const PilotGroup &g)
{
    const double a = g.s.cwiseAbs().rowwise().sum().maxCoeff();
    const double b = g.psi.cwiseAbs().rowwise().sum().maxCoeff();
    return a * b;
}

namespace
{
EstimatorStats base(EstimatorKind kind, double power, const PilotGroup &g)
{
    EstimatorStats e;
    e.kind = kind;
    e.power = power;
    e.tau_p = g.tau_p;
    e.psi = g.psi;
    e.ybar = g.ybar;
    return e;
}
} // namespace

EstimatorStats mmse_stats(const ChannelStats &h, double power, const PilotGroup &g)
{
    EstimatorStats e = base(EstimatorKind::Mmse, power, g);
    const CMat rpsi = h.cov * g.psi;
    e.gain = std::sqrt(power) * rpsi;
    e.est_mean = h.mean;
    e.est_cov = linalg::hermitian_part(power * g.tau_p * rpsi * h.cov);
    e.err_mean = CVec::Zero(h.mean.size());
    e.err_cov = linalg::hermitian_part(h.cov - e.est_cov);
    e.cross_cov = CMat::Zero(h.cov.rows(), h.cov.cols());
    return e;
}

EstimatorStats ewmmse_stats(const ChannelStats &h, double power, const PilotGroup &g)
{
    EstimatorStats e = base(EstimatorKind::EwMmse, power, g);
    e.d = h.cov.diagonal().real();
    e.lambda = g.s.diagonal().real().cwiseInverse();
    const RVec dl = e.d.cwiseProduct(e.lambda);
    const double c = power * g.tau_p;

    e.gain = (std::sqrt(power) * dl).cast<cdouble>().asDiagonal();
    e.est_mean = h.mean;
    // Sigma = p tau_p D Lambda S Lambda D
    e.est_cov = c * dl.asDiagonal() * g.s * dl.asDiagonal();
    e.est_cov = linalg::hermitian_part(e.est_cov);
    // D Lambda R
    const CMat dlr = dl.asDiagonal() * h.cov;
    e.err_mean = CVec::Zero(h.mean.size());
    e.err_cov = linalg::hermitian_part(h.cov - c * dlr.adjoint() - c * dlr + e.est_cov);
    e.cross_cov = c * dlr - e.est_cov;
    return e;
}

EstimatorStats ls_stats(const ChannelStats &h, double power, const PilotGroup &g)
{
    if (!(power > 0.0) || g.tau_p <= 0)
        throw ConfigError("LS estimation needs positive pilot power and tau_p");
    EstimatorStats e = base(EstimatorKind::Ls, power, g);
    const double scale = 1.0 / (std::sqrt(power) * g.tau_p);
    const Eigen::Index M = h.mean.size();
    e.gain = scale * CMat::Identity(M, M);
    e.est_mean = scale * g.ybar;
    e.est_cov = g.s / (power * g.tau_p);
    e.err_mean = h.mean - e.est_mean;
    e.err_cov = linalg::hermitian_part(e.est_cov - h.cov);
    e.cross_cov = -e.err_cov;
    return e;
}

EstimatorStats mo_stats(const ChannelStats &h)
{
    EstimatorStats e;
    e.kind = EstimatorKind::Mo;
    const Eigen::Index M = h.mean.size();
    e.est_mean = h.mean;
    e.est_cov = CMat::Zero(M, M);
    e.err_mean = CVec::Zero(M);
    e.err_cov = h.cov;
    e.cross_cov = CMat::Zero(M, M);
    e.gain = CMat::Zero(M, M);
    return e;
}

EstimatorStats estimator_stats(EstimatorKind kind, const ChannelStats &h, double power, const PilotGroup &g)
{
    switch (kind)
    {
    case EstimatorKind::Mmse: return mmse_stats(h, power, g);
    case EstimatorKind::EwMmse: return ewmmse_stats(h, power, g);
    case EstimatorKind::Ls: return ls_stats(h, power, g);
    case EstimatorKind::Mo: return mo_stats(h);
    }
    throw ConfigError("unknown estimator kind");
}

CMat ls_omega_inverse(const ChannelStats &h, double power, const PilotGroup &g)
{
    return g.s - power * g.tau_p * h.cov;
}

CVec apply_estimator(const EstimatorStats &stats, const PilotObservation &obs)
{
    if (stats.kind == EstimatorKind::Mo)
        return stats.est_mean;
    return stats.est_mean + stats.gain * (obs.y - obs.ybar);
}

PilotGroup pilot_group_at(const Scenario &sc, const std::vector<ChannelStats> &at_bs, int pilot)
{
    std::vector<Sharer> sharers;
    for (UeIndex u : sc.pilots.members[pilot])
        sharers.push_back({sc.ul_powers[u], &at_bs[u]});
    if (sharers.empty())
    {
        PilotGroup g;
        const int M = sc.antennas();
        g.tau_p = sc.tau_p();
        g.noise = sc.noise_ul;
        g.s = sc.noise_ul * CMat::Identity(M, M);
        g.psi = CMat::Identity(M, M) / sc.noise_ul;
        g.ybar = CVec::Zero(M);
        return g;
    }
    return make_pilot_group(sharers, sc.tau_p(), sc.noise_ul);
}

EstimatorStats scenario_estimator(const Scenario &sc, EstimatorKind kind, BsIndex bs, UeIndex ue)
{
    const auto chans = sc.channels->at_bs(bs);
    if (kind == EstimatorKind::Mo)
        return mo_stats(chans[ue]);
    const PilotGroup g = pilot_group_at(sc, chans, sc.pilots.pilot_of_ue[ue]);
    return estimator_stats(kind, chans[ue], sc.ul_powers[ue], g);
}

} // namespace rmimo
