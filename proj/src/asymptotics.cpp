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

#include "rmimo/asymptotics.hpp"

#include "rmimo/closed_form.hpp"
#include "rmimo/estimators.hpp"
#include "rmimo/linalg.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

namespace rmimo
{

double g1(double phi1, double phi2, int M, double d_H)
{
    const double ds = std::sin(phi1) - std::sin(phi2);
    if (std::abs(ds) < 1e-14)
        return static_cast<double>(M);
    const double x = std::numbers::pi * d_H * ds;
    return std::sin(M * x) / std::sin(x);
}

double orthogonality_metric(const CMat &ra, const CMat &rb)
{
    if (ra.rows() != rb.rows() || ra.cols() != rb.cols() || ra.rows() != ra.cols())
        throw std::invalid_argument("orthogonality metric needs square matrices of equal size");
    if (ra.rows() == 0)
        return 0.0;
    return linalg::trace_product(ra, rb).real() / static_cast<double>(ra.rows());
}

double orthogonality_metric(const RVec &da, const RVec &db)
{
    if (da.size() != db.size())
        throw std::invalid_argument("orthogonality metric needs diagonals of equal length");
    if (da.size() == 0)
        return 0.0;
    return da.dot(db) / static_cast<double>(da.size());
}

namespace
{

class BsCache
{
  public:
    explicit BsCache(const Scenario &sc) : sc_(sc) {}

    const std::vector<ChannelStats> &at(BsIndex bs)
    {
        auto it = chans_.find(bs);
        if (it == chans_.end())
            it = chans_.emplace(bs, sc_.channels->at_bs(bs)).first;
        return it->second;
    }

    const PilotGroup &group(BsIndex bs, int pilot)
    {
        const auto key = std::make_pair(bs, pilot);
        auto it = groups_.find(key);
        if (it == groups_.end())
            it = groups_.emplace(key, pilot_group_at(sc_, at(bs), pilot)).first;
        return it->second;
    }

  private:
    const Scenario &sc_;
    std::map<BsIndex, std::vector<ChannelStats>> chans_;
    std::map<std::pair<BsIndex, int>, PilotGroup> groups_;
};

double metric_for(EstimatorKind kind, const ChannelStats &x, const ChannelStats &y)
{
    if (kind == EstimatorKind::EwMmse)
        return orthogonality_metric(RVec(x.cov.diagonal().real()), RVec(y.cov.diagonal().real()));
    return orthogonality_metric(x.cov, y.cov);
}

/// For each sharer, the pair of covariances whose orthogonality decides growth:
/// uplink (R^j_a, R^j_b) at the UE's BS j, downlink (R^l_ue, R^l_b) at the sharer's BS l.
std::vector<double> sharer_metrics(EstimatorKind kind, Direction dir, const Scenario &sc, UeIndex ue,
                                   const std::vector<UeIndex> &sharers)
{
    BsCache cache(sc);
    std::vector<double> out;
    for (UeIndex b : sharers)
    {
        const BsIndex l = dir == Direction::Uplink ? sc.serving_bs[ue] : sc.serving_bs[b];
        const auto &ch = cache.at(l);
        out.push_back(metric_for(kind, ch[ue], ch[b]));
    }
    return out;
}

struct OwnTerms
{
    double trace_rpsir = 0.0; // tr(R Psi R)
    double s_ew = 0.0;        // p tau_p tr(D Lambda D) + |hbar|^2
    double n_ew = 0.0;        // tr(Sigma) + |hbar|^2
    double n_mmse = 0.0;      // p tau_p tr(R Psi R) + |hbar|^2
    double n_ls = 0.0;        // tau_p tr(S) + |ybar|^2
};

OwnTerms own_terms(BsCache &cache, const Scenario &sc, BsIndex bs, UeIndex a)
{
    const auto &ch = cache.at(bs);
    const int pilot = sc.pilots.pilot_of_ue[a];
    const PilotGroup &g = cache.group(bs, pilot);
    const double p = sc.ul_powers[a];
    const int tau_p = sc.tau_p();
    const ChannelStats &h = ch[a];
    const double hn = h.mean.squaredNorm();
    OwnTerms t;
    t.trace_rpsir = linalg::trace_product(h.cov, g.psi * h.cov).real();
    t.n_mmse = p * tau_p * t.trace_rpsir + hn;
    const RVec d = h.cov.diagonal().real();
    const RVec lambda = g.s.diagonal().real().cwiseInverse();
    t.s_ew = p * tau_p * d.cwiseProduct(lambda).dot(d) + hn;
    const RVec dl = d.cwiseProduct(lambda);
    t.n_ew = p * tau_p * (dl.cwiseAbs2().cwiseProduct(g.s.diagonal().real())).sum() + hn;
    t.n_ls = tau_p * g.s.trace().real() + g.ybar.squaredNorm();
    return t;
}

double limit_expression(EstimatorKind kind, Direction dir, const Scenario &sc, UeIndex ue,
                        const std::vector<UeIndex> &sharers)
{
    BsCache cache(sc);
    const int tau_p = sc.tau_p();
    const double tp2 = static_cast<double>(tau_p) * tau_p;
    const BsIndex j = sc.serving_bs[ue];
    const auto &chj = cache.at(j);
    const ChannelStats &hu = chj[ue];
    const double pu = sc.ul_powers[ue];
    const OwnTerms own = own_terms(cache, sc, j, ue);
    const double inf = std::numeric_limits<double>::infinity();

    double num = 0.0;
    double den = 0.0;
    if (dir == Direction::Uplink)
    {
        const PilotGroup &g = cache.group(j, sc.pilots.pilot_of_ue[ue]);
        switch (kind)
        {
        case EstimatorKind::Mmse:
        {
            num = pu * pu * tau_p * own.trace_rpsir + pu * hu.mean.squaredNorm();
            const CMat psi_r = g.psi * hu.cov;
            for (UeIndex b : sharers)
            {
                const double pb = sc.ul_powers[b];
                const double t = std::norm(linalg::trace_product(chj[b].cov, psi_r));
                den += pb * pb * pu * tp2 * t / own.n_mmse;
            }
            break;
        }
        case EstimatorKind::EwMmse:
        {
            const RVec dl = hu.cov.diagonal().real().cwiseQuotient(g.s.diagonal().real());
            num = pu * own.s_ew;
            for (UeIndex b : sharers)
            {
                const double pb = sc.ul_powers[b];
                const double t = dl.dot(chj[b].cov.diagonal().real());
                den += pb * pu * pb * tp2 * t * t / own.s_ew;
            }
            break;
        }
        case EstimatorKind::Ls:
        {
            const double tr_u = hu.cov.trace().real();
            double sig = tr_u;
            for (UeIndex b : sc.pilots.sharing_set(ue))
                sig += std::sqrt(pu / sc.ul_powers[b]) * std::abs(chj[b].mean.dot(hu.mean));
            num = pu * pu * tp2 * (tr_u + hu.mean.squaredNorm());
            for (UeIndex b : sharers)
            {
                const double pb = sc.ul_powers[b];
                const double e = chj[b].cov.trace().real() + chj[b].mean.squaredNorm();
                den += pb * pb * tp2 * e * e / sig;
            }
            break;
        }
        case EstimatorKind::Mo:
            return hu.mean.squaredNorm() > 0.0 ? inf : 0.0;
        }
    }
    else
    {
        const double ru = sc.dl_powers[ue];
        switch (kind)
        {
        case EstimatorKind::Mmse:
            num = ru * own.n_mmse;
            for (UeIndex a : sharers)
            {
                const BsIndex l = sc.serving_bs[a];
                const auto &chl = cache.at(l);
                const PilotGroup &g = cache.group(l, sc.pilots.pilot_of_ue[a]);
                const OwnTerms oa = own_terms(cache, sc, l, a);
                const double pa = sc.ul_powers[a];
                const double t = std::norm(linalg::trace_product(chl[ue].cov, g.psi * chl[a].cov));
                den += sc.dl_powers[a] * pu * pa * tp2 * t / oa.n_mmse;
            }
            break;
        case EstimatorKind::EwMmse:
            num = ru * own.s_ew * own.s_ew / own.n_ew;
            for (UeIndex a : sharers)
            {
                const BsIndex l = sc.serving_bs[a];
                const auto &chl = cache.at(l);
                const PilotGroup &g = cache.group(l, sc.pilots.pilot_of_ue[a]);
                const OwnTerms oa = own_terms(cache, sc, l, a);
                const double pa = sc.ul_powers[a];
                const RVec dl = chl[a].cov.diagonal().real().cwiseQuotient(g.s.diagonal().real());
                const double t = dl.dot(chl[ue].cov.diagonal().real());
                den += sc.dl_powers[a] * pu * pa * tp2 * t * t / oa.n_ew;
            }
            break;
        case EstimatorKind::Ls:
        {
            const double e = hu.cov.trace().real() + hu.mean.squaredNorm();
            num = ru * pu * tp2 * e * e / own.n_ls;
            for (UeIndex a : sharers)
            {
                const BsIndex l = sc.serving_bs[a];
                const auto &chl = cache.at(l);
                const OwnTerms oa = own_terms(cache, sc, l, a);
                const double el = chl[ue].cov.trace().real() + chl[ue].mean.squaredNorm();
                den += sc.dl_powers[a] * pu * tp2 * el * el / oa.n_ls;
            }
            break;
        }
        case EstimatorKind::Mo:
            return hu.mean.squaredNorm() > 0.0 ? inf : 0.0;
        }
    }
    if (den == 0.0)
        return num > 0.0 ? inf : 0.0;
    return num / den;
}

} // namespace

AsymptoticVerdict asymptotic_sinr(EstimatorKind kind, Direction dir, const Scenario &at_m, const Scenario *at_4m,
                                  UeIndex ue, double threshold)
{
    at_m.check();
    AsymptoticVerdict v;
    for (UeIndex b : at_m.pilots.sharing_set(ue))
        if (b != ue)
            v.sharers.push_back(b);

    const MomentTable table = compute_moments(at_m, kind);
    v.sinr = dir == Direction::Uplink ? ul_breakdown(table, at_m, ue).sinr : dl_breakdown(table, at_m, ue).sinr;
    v.limit = limit_expression(kind, dir, at_m, ue, v.sharers);
    v.gap = std::isfinite(v.limit) ? v.sinr - v.limit : 0.0;

    if (kind != EstimatorKind::Mo)
        v.metrics = sharer_metrics(kind, dir, at_m, ue, v.sharers);
    if (at_4m && kind != EstimatorKind::Mo)
    {
        const auto big = sharer_metrics(kind, dir, *at_4m, ue, v.sharers);
        for (std::size_t i = 0; i < big.size(); ++i)
            v.metric_ratios.push_back(v.metrics[i] > 0.0 ? big[i] / v.metrics[i] : 0.0);
    }

    switch (kind)
    {
    case EstimatorKind::Mmse:
    case EstimatorKind::EwMmse:
    {
        bool all_orthogonal = v.sharers.empty() || (at_4m != nullptr);
        for (double r : v.metric_ratios)
            all_orthogonal = all_orthogonal && r < threshold;
        v.unbounded = all_orthogonal;
        break;
    }
    case EstimatorKind::Ls:
        v.unbounded = v.sharers.empty();
        break;
    case EstimatorKind::Mo:
        v.unbounded = std::isinf(v.limit);
        break;
    }
    return v;
}

AssumptionDiagnostics assumption_diagnostics(const Scenario &sc)
{
    AssumptionDiagnostics d;
    d.min_trace_per_antenna = std::numeric_limits<double>::infinity();
    const double M = sc.antennas();
    for (BsIndex bs = 0; bs < sc.num_bs(); ++bs)
    {
        const auto ch = sc.channels->at_bs(bs);
        for (UeIndex u = 0; u < ch.size(); ++u)
        {
            d.max_spectral_norm = std::max(d.max_spectral_norm, linalg::spectral_norm_psd(ch[u].cov));
            d.min_trace_per_antenna = std::min(d.min_trace_per_antenna, ch[u].cov.trace().real() / M);
            d.max_los_power_per_antenna = std::max(d.max_los_power_per_antenna, ch[u].mean.squaredNorm() / M);
        }
        for (UeIndex a : sc.served_by(bs))
            for (UeIndex b = 0; b < ch.size(); ++b)
                if (b != a)
                    d.max_los_cross_per_antenna =
                        std::max(d.max_los_cross_per_antenna, std::abs(ch[a].mean.dot(ch[b].mean)) / M);
    }
    return d;
}

} // namespace rmimo
