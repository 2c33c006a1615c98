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

#include "rmimo/monte_carlo.hpp"

#include "rmimo/linalg.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <thread>

namespace rmimo
{

void MomentAccumulator::add(const Eigen::Vector4d &x)
{
    ++n;
    const Eigen::Vector4d delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean).transpose();
}

void MomentAccumulator::merge(const MomentAccumulator &o)
{
    if (o.n == 0)
        return;
    if (n == 0)
    {
        *this = o;
        return;
    }
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double nt = na + nb;
    const Eigen::Vector4d delta = o.mean - mean;
    mean += delta * (nb / nt);
    m2 += o.m2 + delta * delta.transpose() * (na * nb / nt);
    n += o.n;
}

Eigen::Matrix4d MomentAccumulator::mean_covariance() const
{
    if (n < 2)
        return Eigen::Matrix4d::Zero();
    const double nn = static_cast<double>(n);
    return m2 / ((nn - 1.0) * nn);
}

CVec sample_channel(const ChannelStats &stats, const CMat &sqrt_cov, Rng &rng)
{
    return stats.mean + sqrt_cov * complex_normal_vector(rng, stats.mean.size());
}

CVec sample_channel(const ChannelStats &stats, Rng &rng)
{
    return sample_channel(stats, linalg::hermitian_sqrt(stats.cov), rng);
}

PilotObservation synthesize_pilot_observation(const std::vector<double> &powers, const std::vector<CVec> &channels,
                                              const CVec &ybar, int tau_p, double noise, Rng &rng)
{
    PilotObservation obs;
    obs.ybar = ybar;
    obs.y = std::sqrt(noise * tau_p) * complex_normal_vector(rng, ybar.size());
    for (std::size_t i = 0; i < channels.size(); ++i)
        obs.y += std::sqrt(powers[i]) * tau_p * channels[i];
    return obs;
}

double quad_moment_independent(const GaussianVector &x, const GaussianVector &y, const CMat &b)
{
    const CMat bryb = b * y.cov * b.adjoint();
    return linalg::trace_product(bryb, x.cov).real() + x.mean.dot(bryb * x.mean).real() +
           y.mean.dot(b.adjoint() * x.cov * b * y.mean).real() + std::norm(x.mean.dot(b * y.mean));
}

double quad_moment_correlated(const CVec &xbar, const CMat &fx, const CVec &ybar, const CMat &fy, const CMat &b)
{
    const CMat rx = fx * fx.adjoint();
    const CMat ry = fy * fy.adjoint();
    const cdouble tq = (fx.adjoint() * b * fy).trace();
    const cdouble xby = xbar.dot(b * ybar);
    return std::norm(tq) + linalg::trace_product(b * ry * b.adjoint(), rx).real() + std::norm(xby) +
           2.0 * std::real(tq * std::conj(xby)) + xbar.dot(b * ry * b.adjoint() * xbar).real() +
           ybar.dot(b.adjoint() * rx * b * ybar).real();
}

double quad_moment_correlated(const GaussianVector &x, const GaussianVector &y, const CMat &b)
{
    return quad_moment_correlated(x.mean, linalg::hermitian_sqrt(x.cov), y.mean, linalg::hermitian_sqrt(y.cov), b);
}

bool trace_inequalities_hold(const CMat &a, const CMat &b, double rel_tol)
{
    const double norm_a = linalg::spectral_norm_psd(a);
    const double tr_b = b.trace().real();
    const double lhs1 = linalg::trace_product(a, b).real();
    const double rhs1 = norm_a * tr_b;
    const double lhs2 = linalg::trace_product(linalg::hermitian_inverse(a), b).real();
    const double rhs2 = tr_b / norm_a;
    return lhs1 <= rhs1 + rel_tol * std::abs(rhs1) && lhs2 >= rhs2 - rel_tol * std::abs(rhs2);
}

namespace
{

struct Prepared
{
    std::size_t L = 0;
    std::size_t U = 0;
    Eigen::Index M = 0;
    int tau_p = 0;
    std::vector<std::vector<ChannelStats>> chans; // [bs][ue]
    std::vector<std::vector<CMat>> sqrt_cov;      // [bs][ue]
    std::vector<std::vector<UeIndex>> served;     // [bs]
    std::vector<std::map<int, CVec>> ybar;        // [bs] pilot -> ybar
    // [kind][ue]
    std::vector<std::vector<EstimatorStats>> est;
    std::vector<std::vector<double>> norm2;
    std::vector<std::vector<char>> active;
};

Prepared prepare(const Scenario &sc, const std::vector<EstimatorKind> &kinds, bool perfect_csi)
{
    Prepared pr;
    pr.L = sc.num_bs();
    pr.U = sc.num_ues();
    pr.M = sc.antennas();
    pr.tau_p = sc.tau_p();
    pr.chans.resize(pr.L);
    pr.sqrt_cov.resize(pr.L);
    pr.served.resize(pr.L);
    pr.ybar.resize(pr.L);
    pr.est.assign(kinds.size(), std::vector<EstimatorStats>(pr.U));
    pr.norm2.assign(kinds.size(), std::vector<double>(pr.U, 0.0));
    pr.active.assign(kinds.size(), std::vector<char>(pr.U, 0));

    for (BsIndex s = 0; s < pr.L; ++s)
    {
        pr.chans[s] = sc.channels->at_bs(s);
        for (const ChannelStats &c : pr.chans[s])
            pr.sqrt_cov[s].push_back(linalg::hermitian_sqrt(c.cov));
        pr.served[s] = sc.served_by(s);
        std::map<int, PilotGroup> groups;
        for (UeIndex a : pr.served[s])
        {
            const int t = sc.pilots.pilot_of_ue[a];
            if (!groups.count(t))
            {
                groups.emplace(t, pilot_group_at(sc, pr.chans[s], t));
                pr.ybar[s][t] = groups.at(t).ybar;
            }
            const ChannelStats &h = pr.chans[s][a];
            for (std::size_t ki = 0; ki < kinds.size(); ++ki)
            {
                if (perfect_csi)
                {
                    pr.norm2[ki][a] = h.cov.trace().real() + h.mean.squaredNorm();
                    pr.active[ki][a] = pr.norm2[ki][a] > 0.0;
                    continue;
                }
                if (kinds[ki] == EstimatorKind::Ls && !(sc.ul_powers[a] > 0.0))
                    continue;
                EstimatorStats e = estimator_stats(kinds[ki], h, sc.ul_powers[a], groups.at(t));
                pr.norm2[ki][a] = e.est_cov.trace().real() + e.est_mean.squaredNorm();
                pr.active[ki][a] = pr.norm2[ki][a] > 0.0;
                pr.est[ki][a] = std::move(e);
            }
        }
    }
    return pr;
}

struct ChunkResult
{
    // [kind][dir][ue]
    std::vector<std::vector<std::vector<MomentAccumulator>>> acc;
};

void run_chunk(const Scenario &sc, const Prepared &pr, const std::vector<EstimatorKind> &kinds, bool want_ul,
               bool want_dl, bool perfect_csi, std::uint64_t seed, std::size_t chunk_index, std::size_t trials,
               ChunkResult &out)
{
    out.acc.assign(kinds.size(), std::vector<std::vector<MomentAccumulator>>(2, std::vector<MomentAccumulator>(pr.U)));
    Rng rng(derive_seed(seed, {chunk_index}));
    const Eigen::Index U = static_cast<Eigen::Index>(pr.U);
    std::vector<CMat> h(pr.L, CMat(pr.M, U));
    std::vector<std::map<int, CVec>> y(pr.L);
    CMat g(U, U);
    const double noise_scale = std::sqrt(sc.noise_ul * pr.tau_p);

    for (std::size_t trial = 0; trial < trials; ++trial)
    {
        for (std::size_t s = 0; s < pr.L; ++s)
            for (Eigen::Index b = 0; b < U; ++b)
                h[s].col(b) = pr.chans[s][b].mean + pr.sqrt_cov[s][b] * complex_normal_vector(rng, pr.M);

        if (!perfect_csi)
        {
            for (std::size_t s = 0; s < pr.L; ++s)
            {
                for (auto &[t, ybar] : pr.ybar[s])
                {
                    CVec yy = noise_scale * complex_normal_vector(rng, pr.M);
                    for (UeIndex b : sc.pilots.members[t])
                        yy += std::sqrt(sc.ul_powers[b]) * pr.tau_p * h[s].col(static_cast<Eigen::Index>(b));
                    y[s][t] = std::move(yy);
                }
            }
        }

        for (std::size_t ki = 0; ki < kinds.size(); ++ki)
        {
            g.setZero();
            std::vector<double> v_norm2(pr.U, 0.0);
            for (std::size_t s = 0; s < pr.L; ++s)
            {
                for (UeIndex a : pr.served[s])
                {
                    if (!pr.active[ki][a])
                        continue;
                    CVec v;
                    if (perfect_csi)
                        v = h[s].col(static_cast<Eigen::Index>(a));
                    else
                    {
                        const EstimatorStats &e = pr.est[ki][a];
                        if (e.kind == EstimatorKind::Mo)
                            v = e.est_mean;
                        else
                            v = e.est_mean + e.gain * (y[s].at(sc.pilots.pilot_of_ue[a]) - e.ybar);
                    }
                    g.row(static_cast<Eigen::Index>(a)) = v.adjoint() * h[s];
                    v_norm2[a] = v.squaredNorm();
                }
            }

            if (want_ul)
            {
                for (UeIndex a = 0; a < pr.U; ++a)
                {
                    const auto ai = static_cast<Eigen::Index>(a);
                    double x2 = 0.0;
                    for (Eigen::Index b = 0; b < U; ++b)
                        x2 += sc.ul_powers[b] * std::norm(g(ai, b));
                    out.acc[ki][0][a].add(Eigen::Vector4d(g(ai, ai).real(), g(ai, ai).imag(), x2, v_norm2[a]));
                }
            }
            if (want_dl)
            {
                for (UeIndex b = 0; b < pr.U; ++b)
                {
                    const auto bi = static_cast<Eigen::Index>(b);
                    double z = 0.0;
                    for (Eigen::Index a = 0; a < U; ++a)
                        if (pr.active[ki][a])
                            z += sc.dl_powers[a] * std::norm(g(a, bi)) / pr.norm2[ki][a];
                    const cdouble x = pr.active[ki][b] ? g(bi, bi) / std::sqrt(pr.norm2[ki][b]) : cdouble(0.0);
                    out.acc[ki][1][b].add(Eigen::Vector4d(x.real(), x.imag(), z, 0.0));
                }
            }
        }
    }
}

McEstimate sinr_estimate(const MomentAccumulator &acc, double power, double noise, bool uplink)
{
    McEstimate e;
    e.trials = acc.n;
    const Eigen::Vector4d &m = acc.mean;
    const double s = power * (m[0] * m[0] + m[1] * m[1]);
    const double d = uplink ? m[2] - s + noise * m[3] : m[2] - s + noise;
    if (!(s > 0.0) || !(d > 0.0))
        return e;
    e.value = s / d;
    Eigen::Vector4d grad;
    const double k = (d + s) / (d * d);
    grad << 2.0 * power * m[0] * k, 2.0 * power * m[1] * k, -s / (d * d), uplink ? -noise * s / (d * d) : 0.0;
    e.std_error = std::sqrt(std::max(0.0, grad.dot(acc.mean_covariance() * grad)));
    return e;
}

} // namespace

std::vector<McResult> mc_sinr(const Scenario &sc, const std::vector<EstimatorKind> &kinds,
                              const std::vector<Direction> &directions, const McOptions &opts)
{
    sc.check();
    if (opts.trials < 1000)
        throw ConfigError("Monte Carlo needs at least 1000 trials");
    if (opts.chunk == 0)
        throw ConfigError("Monte Carlo chunk size must be positive");

    bool want_ul = false, want_dl = false;
    for (Direction d : directions)
        (d == Direction::Uplink ? want_ul : want_dl) = true;

    const Prepared pr = prepare(sc, kinds, opts.perfect_csi);
    const std::size_t num_chunks = (opts.trials + opts.chunk - 1) / opts.chunk;
    std::vector<ChunkResult> chunks(num_chunks);

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, num_chunks));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t c = next++; c < num_chunks; c = next++)
        {
            const std::size_t n = std::min(opts.chunk, opts.trials - c * opts.chunk);
            run_chunk(sc, pr, kinds, want_ul, want_dl, opts.perfect_csi, opts.seed, c, n, chunks[c]);
        }
    };
    if (threads <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }

    std::vector<McResult> out;
    for (std::size_t ki = 0; ki < kinds.size(); ++ki)
    {
        for (Direction dir : directions)
        {
            const int di = dir == Direction::Uplink ? 0 : 1;
            McResult r;
            r.kind = kinds[ki];
            r.direction = dir;
            for (UeIndex u = 0; u < pr.U; ++u)
            {
                MomentAccumulator acc;
                for (const ChunkResult &c : chunks)
                    acc.merge(c.acc[ki][di][u]);
                const bool ul = dir == Direction::Uplink;
                const double power = ul ? sc.ul_powers[u] : sc.dl_powers[u];
                r.sinr.push_back(sinr_estimate(acc, power, ul ? sc.noise_ul : sc.noise_dl, ul));
                const Eigen::Matrix4d cov = acc.mean_covariance();
                r.signal_mean.push_back({acc.mean[0], std::sqrt(cov(0, 0)), acc.n});
                if (ul)
                    r.norm2.push_back({acc.mean[3], std::sqrt(cov(3, 3)), acc.n});
                else
                    r.norm2.push_back({pr.norm2[ki][u], 0.0, acc.n});
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

McResult mc_sinr(const Scenario &sc, EstimatorKind kind, Direction dir, const McOptions &opts)
{
    return std::move(mc_sinr(sc, std::vector<EstimatorKind>{kind}, std::vector<Direction>{dir}, opts).front());
}

} // namespace rmimo
