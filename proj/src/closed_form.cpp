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

#include "rmimo/closed_form.hpp"

#include "rmimo/estimators.hpp"
#include "rmimo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rmimo
{

namespace
{

/// Channel statistics of every UE at one BS, stacked for batched trace evaluation.
struct BsData
{
    std::vector<ChannelStats> chans;
    Eigen::Index M = 0;
    Eigen::Index U = 0;
    CMat rstack; // column b = vec(R_b)
    CMat hbar;   // column b = hbar_b
    std::vector<Eigen::Index> los;
    CMat hlos; // LoS columns of hbar
    RVec trace_r;

    BsData(const Scenario &sc, BsIndex bs) : chans(sc.channels->at_bs(bs))
    {
        M = sc.antennas();
        U = static_cast<Eigen::Index>(chans.size());
        rstack.resize(M * M, U);
        hbar.resize(M, U);
        trace_r.resize(U);
        for (Eigen::Index b = 0; b < U; ++b)
        {
            rstack.col(b) = Eigen::Map<const CVec>(chans[b].cov.data(), M * M);
            hbar.col(b) = chans[b].mean;
            trace_r[b] = chans[b].cov.trace().real();
            if (chans[b].mean.squaredNorm() > 0.0)
                los.push_back(b);
        }
        hlos.resize(M, static_cast<Eigen::Index>(los.size()));
        for (std::size_t j = 0; j < los.size(); ++j)
            hlos.col(static_cast<Eigen::Index>(j)) = hbar.col(los[j]);
    }

    /// hbar_b^H X hbar_b for every b (zero without LoS).
    RVec quad(const CMat &x) const
    {
        RVec out = RVec::Zero(U);
        if (los.empty())
            return out;
        const CMat xh = x * hlos;
        for (std::size_t j = 0; j < los.size(); ++j)
        {
            const auto jj = static_cast<Eigen::Index>(j);
            out[los[j]] = hlos.col(jj).dot(xh.col(jj)).real();
        }
        return out;
    }
};

/// Collects probe matrices X_q and evaluates tr(R_b X_q) for all b with one product.
class ProbeBatch
{
  public:
    int add(const CMat &x)
    {
        probes_.push_back(x.transpose());
        return static_cast<int>(probes_.size()) - 1;
    }

    void run(const BsData &bs)
    {
        const Eigen::Index q = static_cast<Eigen::Index>(probes_.size());
        if (q == 0)
            return;
        CMat p(bs.M * bs.M, q);
        for (Eigen::Index i = 0; i < q; ++i)
            p.col(i) = Eigen::Map<const CVec>(probes_[i].data(), bs.M * bs.M);
        const CMat t = bs.rstack.transpose() * p;
        traces_ = t.real();
        for (Eigen::Index i = 0; i < q; ++i)
        {
            const double re = traces_.col(i).cwiseAbs().maxCoeff();
            const double im = t.col(i).imag().cwiseAbs().maxCoeff();
            if (re > 0.0)
                residue_ = std::max(residue_, im / re);
        }
        probes_.clear();
    }

    RVec traces(int id) const { return traces_.col(id); }
    double residue() const { return residue_; }

  private:
    std::vector<CMat> probes_;
    Eigen::MatrixXd traces_;
    double residue_ = 0.0;
};

struct Pending
{
    UeIndex a;
    EstimatorKind kind;
    std::size_t table;
    int probe_main = -1; // A, Sigma or S
    int probe_hh = -1;   // hbar_a hbar_a^H
    int probe_yy = -1;   // ybar ybar^H
    RVec quad_main;
    CVec ga; // hbar_b^H hbar_a
    CVec w;  // hbar_b^H ybar
    std::vector<std::pair<UeIndex, cdouble>> shared; // (b, pilot-sharing trace term)
    cdouble sig = 0.0;
    double norm2 = 0.0;
    double trace_s = 0.0;
};

} // namespace

std::vector<MomentTable> compute_moments(const Scenario &sc, const std::vector<EstimatorKind> &kinds)
{
    sc.check();
    const std::size_t U = sc.num_ues();
    const int tau_p = sc.tau_p();
    std::vector<MomentTable> tables(kinds.size());
    for (std::size_t i = 0; i < kinds.size(); ++i)
    {
        tables[i].kind = kinds[i];
        tables[i].ue.resize(U);
    }

    bool needs_pilots = false;
    for (EstimatorKind k : kinds)
        needs_pilots = needs_pilots || k != EstimatorKind::Mo;

    for (BsIndex s = 0; s < sc.num_bs(); ++s)
    {
        const auto served = sc.served_by(s);
        if (served.empty())
            continue;
        const BsData bs(sc, s);

        std::map<int, PilotGroup> groups;
        if (needs_pilots)
            for (UeIndex a : served)
            {
                const int t = sc.pilots.pilot_of_ue[a];
                if (!groups.count(t))
                    groups.emplace(t, pilot_group_at(sc, bs.chans, t));
            }

        ProbeBatch batch;
        std::vector<Pending> pending;
        std::map<int, int> s_probe, yy_probe;
        std::map<UeIndex, int> hh_probe;

        for (std::size_t ti = 0; ti < kinds.size(); ++ti)
        {
            const EstimatorKind kind = kinds[ti];
            for (UeIndex a : served)
            {
                const ChannelStats &ha = bs.chans[a];
                const double p = sc.ul_powers[a];
                const double hnorm = ha.mean.squaredNorm();
                Pending pe;
                pe.a = a;
                pe.kind = kind;
                pe.table = ti;
                if (hnorm > 0.0)
                {
                    if (!hh_probe.count(a))
                        hh_probe[a] = batch.add(ha.mean * ha.mean.adjoint());
                    pe.probe_hh = hh_probe[a];
                    pe.ga = bs.hbar.adjoint() * ha.mean;
                }
                else
                {
                    pe.ga = CVec::Zero(bs.U);
                }

                if (kind == EstimatorKind::Mmse)
                {
                    const PilotGroup &g = groups.at(sc.pilots.pilot_of_ue[a]);
                    const CMat psi_r = g.psi * ha.cov;
                    const CMat amat = linalg::hermitian_part(p * tau_p * ha.cov * psi_r);
                    pe.probe_main = batch.add(amat);
                    pe.quad_main = bs.quad(amat);
                    pe.norm2 = amat.trace().real() + hnorm;
                    pe.sig = pe.norm2;
                    for (UeIndex b : sc.pilots.sharing_set(a))
                        pe.shared.emplace_back(b, linalg::trace_product(bs.chans[b].cov, psi_r));
                }
                else if (kind == EstimatorKind::EwMmse)
                {
                    const PilotGroup &g = groups.at(sc.pilots.pilot_of_ue[a]);
                    const RVec d = ha.cov.diagonal().real();
                    const RVec dl = d.cwiseQuotient(g.s.diagonal().real());
                    const CMat sigma = linalg::hermitian_part(p * tau_p * dl.asDiagonal() * g.s * dl.asDiagonal());
                    pe.probe_main = batch.add(sigma);
                    pe.quad_main = bs.quad(sigma);
                    pe.norm2 = sigma.trace().real() + hnorm;
                    pe.sig = p * tau_p * d.dot(dl) + hnorm;
                    for (UeIndex b : sc.pilots.sharing_set(a))
                        pe.shared.emplace_back(b, dl.dot(bs.chans[b].cov.diagonal().real()));
                }
                else if (kind == EstimatorKind::Ls)
                {
                    if (!(p > 0.0))
                    {
                        pending.push_back(std::move(pe));
                        continue;
                    }
                    const int t = sc.pilots.pilot_of_ue[a];
                    const PilotGroup &g = groups.at(t);
                    if (!s_probe.count(t))
                    {
                        s_probe[t] = batch.add(g.s);
                        if (g.ybar.squaredNorm() > 0.0)
                            yy_probe[t] = batch.add(g.ybar * g.ybar.adjoint());
                    }
                    pe.probe_main = s_probe[t];
                    pe.probe_yy = yy_probe.count(t) ? yy_probe[t] : -1;
                    pe.quad_main = bs.quad(g.s);
                    pe.w = bs.hbar.adjoint() * g.ybar;
                    pe.trace_s = g.s.trace().real();
                    const double k = 1.0 / (p * tau_p * tau_p);
                    pe.norm2 = k * (tau_p * pe.trace_s + g.ybar.squaredNorm());
                    pe.sig = bs.trace_r[a] + std::conj(pe.w[a]) / (std::sqrt(p) * tau_p);
                }
                else
                {
                    pe.norm2 = hnorm;
                    pe.sig = hnorm;
                }
                pending.push_back(std::move(pe));
            }
        }

        batch.run(bs);
        for (auto &t : tables)
            t.max_imag_residue = std::max(t.max_imag_residue, batch.residue());

        for (Pending &pe : pending)
        {
            UeMoments &m = tables[pe.table].ue[pe.a];
            const double p = sc.ul_powers[pe.a];
            m.noncoherent = RVec::Zero(bs.U);
            m.coherent = RVec::Zero(bs.U);
            m.signal_mean = pe.sig;
            m.norm2 = pe.norm2;
            m.defined = pe.norm2 > 0.0;
            if (pe.kind == EstimatorKind::Ls && !(p > 0.0))
            {
                m.defined = false;
                m.signal_mean = 0.0;
                m.norm2 = 0.0;
                continue;
            }
            if (!m.defined)
                continue;

            const RVec hh = pe.probe_hh >= 0 ? batch.traces(pe.probe_hh) : RVec::Zero(bs.U);
            const RVec ga2 = pe.ga.cwiseAbs2();

            switch (pe.kind)
            {
            case EstimatorKind::Mmse:
            case EstimatorKind::EwMmse:
            {
                m.noncoherent = batch.traces(pe.probe_main) + pe.quad_main + hh + ga2;
                for (const auto &[b, tr] : pe.shared)
                {
                    const double pb = sc.ul_powers[b];
                    const double c = std::sqrt(p * pb) * tau_p;
                    m.coherent[b] = c * c * std::norm(tr) + 2.0 * c * std::real(tr * pe.ga[b]);
                }
                break;
            }
            case EstimatorKind::Ls:
            {
                const double k = 1.0 / (p * tau_p * tau_p);
                const RVec yy = pe.probe_yy >= 0 ? batch.traces(pe.probe_yy) : RVec::Zero(bs.U);
                m.noncoherent =
                    k * (tau_p * batch.traces(pe.probe_main) + pe.w.cwiseAbs2() + yy + tau_p * pe.quad_main);
                for (UeIndex b : sc.pilots.sharing_set(pe.a))
                {
                    const double pb = sc.ul_powers[b];
                    const double tr = bs.trace_r[b];
                    m.coherent[b] =
                        k * (pb * tau_p * tau_p * tr * tr + 2.0 * std::sqrt(pb) * tau_p * tr * pe.w[b].real());
                }
                break;
            }
            case EstimatorKind::Mo:
                m.noncoherent = hh + ga2;
                break;
            }
        }
    }
    return tables;
}

MomentTable compute_moments(const Scenario &sc, EstimatorKind kind)
{
    return std::move(compute_moments(sc, std::vector<EstimatorKind>{kind}).front());
}

double SinrBreakdown::recompose(const std::vector<double> &powers) const
{
    if (!defined)
        return 0.0;
    double den = noise - powers[ue] * nu;
    for (Eigen::Index b = 0; b < xi.size(); ++b)
        den += powers[b] * (xi[b] + gamma[b]);
    return signal / den;
}

SinrBreakdown ul_breakdown(const MomentTable &table, const Scenario &sc, UeIndex a)
{
    SinrBreakdown out;
    out.ue = a;
    out.kind = table.kind;
    out.direction = Direction::Uplink;
    out.noise = sc.noise_ul;
    const Eigen::Index U = static_cast<Eigen::Index>(sc.num_ues());
    out.xi = RVec::Zero(U);
    out.gamma = RVec::Zero(U);
    const UeMoments &m = table.ue[a];
    out.defined = m.defined;
    if (!m.defined)
        return out;

    const double n = m.norm2;
    const double sig2 = std::norm(m.signal_mean);
    const double pa = sc.ul_powers[a];
    out.signal = pa * sig2 / n;
    out.xi = m.noncoherent / n;
    out.gamma = m.coherent / n;
    out.gamma[a] = 0.0;
    out.nu = (sig2 - m.coherent[a]) / n;

    double den = -pa * sig2 + sc.noise_ul * n;
    for (Eigen::Index b = 0; b < U; ++b)
        den += sc.ul_powers[b] * (m.noncoherent[b] + m.coherent[b]);
    out.sinr = pa * sig2 / den;
    return out;
}

SinrBreakdown dl_breakdown(const MomentTable &table, const Scenario &sc, UeIndex b)
{
    SinrBreakdown out;
    out.ue = b;
    out.kind = table.kind;
    out.direction = Direction::Downlink;
    out.noise = sc.noise_dl;
    const Eigen::Index U = static_cast<Eigen::Index>(sc.num_ues());
    out.xi = RVec::Zero(U);
    out.gamma = RVec::Zero(U);
    const UeMoments &own = table.ue[b];
    out.defined = own.defined;
    if (!own.defined)
        return out;

    const double nb = own.norm2;
    const double sig2 = std::norm(own.signal_mean);
    const double rb = sc.dl_powers[b];
    out.signal = rb * sig2 / nb;
    double den = -out.signal + sc.noise_dl;
    for (Eigen::Index a = 0; a < U; ++a)
    {
        const UeMoments &m = table.ue[a];
        if (!m.defined)
            continue;
        out.xi[a] = m.noncoherent[b] / m.norm2;
        out.gamma[a] = a == static_cast<Eigen::Index>(b) ? 0.0 : m.coherent[b] / m.norm2;
        den += sc.dl_powers[a] * (m.noncoherent[b] + m.coherent[b]) / m.norm2;
    }
    out.nu = (sig2 - own.coherent[b]) / nb;
    out.sinr = out.signal / den;
    return out;
}

std::vector<SinrBreakdown> sinr_closed_form(const MomentTable &table, const Scenario &sc, Direction dir)
{
    std::vector<SinrBreakdown> out;
    out.reserve(sc.num_ues());
    for (UeIndex u = 0; u < sc.num_ues(); ++u)
        out.push_back(dir == Direction::Uplink ? ul_breakdown(table, sc, u) : dl_breakdown(table, sc, u));
    return out;
}

std::vector<SinrBreakdown> ul_sinr_closed_form(const Scenario &sc, EstimatorKind kind)
{
    return sinr_closed_form(compute_moments(sc, kind), sc, Direction::Uplink);
}

std::vector<SinrBreakdown> dl_sinr_closed_form(const Scenario &sc, EstimatorKind kind)
{
    return sinr_closed_form(compute_moments(sc, kind), sc, Direction::Downlink);
}

double se_from_sinr(double sinr, double prelog)
{
    return prelog * std::log2(1.0 + std::max(sinr, 0.0));
}

} // namespace rmimo
