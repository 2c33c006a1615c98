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

#ifndef RMIMO_TESTS_SUPPORT_HPP
#define RMIMO_TESTS_SUPPORT_HPP

// Shared builders and independent reference computations for the test suites.

#include "rmimo/channel.hpp"
#include "rmimo/config.hpp"
#include "rmimo/rng.hpp"
#include "rmimo/scenario.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <memory>
#include <vector>

namespace rmimo::test
{

inline CMat random_matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    CMat a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            a(i, j) = complex_normal(rng);
    return a;
}

/// Random PSD matrix of the given rank, normalized so tr = M * scale.
inline CMat random_psd(int M, Rng &rng, int rank, double scale = 1.0)
{
    const CMat f = random_matrix(M, rank, rng);
    CMat r = f * f.adjoint();
    r = 0.5 * (r + r.adjoint()).eval();
    return r * (M * scale / r.trace().real());
}

inline CVec random_vector(int M, Rng &rng, double scale = 1.0)
{
    CVec v(M);
    for (int i = 0; i < M; ++i)
        v[i] = std::sqrt(scale) * complex_normal(rng);
    return v;
}

inline ChannelStats make_stats(const CVec &mean, const CMat &cov)
{
    ChannelStats s;
    s.mean = mean;
    s.cov = cov;
    s.beta_nlos = cov.trace().real() / static_cast<double>(cov.rows());
    s.beta_los = mean.squaredNorm() / static_cast<double>(mean.size());
    s.beta = s.beta_los + s.beta_nlos;
    s.has_los = mean.squaredNorm() > 0.0;
    s.kappa = s.beta_nlos > 0 ? s.beta_los / s.beta_nlos : 0.0;
    return s;
}

/// Hermitian square root by eigendecomposition, written out independently of the library.
inline CMat sqrt_psd(const CMat &r)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (r + r.adjoint()));
    const RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

struct SyntheticOptions
{
    int L = 2;
    int K = 2;
    int M = 8;
    int tau_p = 0; // 0: K (UE k of every cell uses pilot k)
    bool los = true;
    bool diagonal = false;
    int rank = 0; // 0: full rank
    double noise = 0.3;
    double dl_noise = 0.4;
};

/// Random multi-cell scenario: UE c*K + k served by BS c, pilot k (or c*K + k when
/// tau_p = L*K), random powers in [0.5, 1.5], cell-dependent gain levels.
inline Scenario synthetic_scenario(const SyntheticOptions &o, Rng &rng)
{
    const int U = o.L * o.K;
    auto table = std::make_shared<ChannelTable>(o.L, U, o.M);
    for (int b = 0; b < o.L; ++b)
    {
        for (int u = 0; u < U; ++u)
        {
            const double gain = (u / o.K == b) ? 1.0 : 0.2 + 0.3 * uniform01(rng);
            CMat cov;
            if (o.diagonal)
            {
                RVec d(o.M);
                for (int i = 0; i < o.M; ++i)
                    d[i] = gain * (0.2 + 1.6 * uniform01(rng));
                cov = d.cast<cdouble>().asDiagonal();
            }
            else
                cov = random_psd(o.M, rng, o.rank > 0 ? o.rank : o.M, gain);
            const CVec mean = o.los ? random_vector(o.M, rng, 0.5 * gain) : CVec::Zero(o.M);
            (*table)(b, u) = make_stats(mean, cov);
        }
    }
    Scenario sc;
    sc.channels = table;
    const int tau_p = o.tau_p > 0 ? o.tau_p : o.K;
    std::vector<int> pilot(U);
    for (int u = 0; u < U; ++u)
    {
        sc.serving_bs.push_back(static_cast<BsIndex>(u / o.K));
        pilot[u] = tau_p >= U ? u : u % o.K;
        sc.ul_powers.push_back(0.5 + uniform01(rng));
        sc.dl_powers.push_back(0.5 + uniform01(rng));
    }
    sc.pilots = make_pilot_plan(pilot, tau_p);
    sc.noise_ul = o.noise;
    sc.noise_dl = o.dl_noise;
    return sc;
}

/// Every channel and pilot noise at one BS as an affine function of a single
/// standard Gaussian vector w ~ CN(0, I): x = m + F w.
struct AffineGaussian
{
    CVec m;
    CMat f;
};

/// E{x^H y} for jointly Gaussian affine forms of the same w.
inline cdouble affine_mean_product(const AffineGaussian &x, const AffineGaussian &y)
{
    return x.m.dot(y.m) + (x.f.adjoint() * y.f).trace();
}

/// E{|x^H y|^2} = |E{x^H y}|^2 + ||Fy^H mx||^2 + ||Fx^H my||^2 + ||Fx^H Fy||_F^2.
inline double affine_second_moment(const AffineGaussian &x, const AffineGaussian &y)
{
    const CMat q = x.f.adjoint() * y.f;
    return std::norm(affine_mean_product(x, y)) + (y.f.adjoint() * x.m).squaredNorm() +
           (x.f.adjoint() * y.m).squaredNorm() + q.squaredNorm();
}

/// Reference UL/DL SINRs for MR with each estimator, built from the affine
/// representation of channels, pilot signals and estimates. Dense and slow,
/// independent of the library's estimator and closed-form code.
struct ReferenceSinr
{
    std::vector<double> ul;
    std::vector<double> dl;
};

inline ReferenceSinr reference_sinr(const Scenario &sc, EstimatorKind kind)
{
    const int M = sc.antennas();
    const auto U = static_cast<Eigen::Index>(sc.num_ues());
    const auto L = sc.num_bs();
    const int tau_p = sc.tau_p();
    const Eigen::Index dim = M * (U + tau_p); // channel whitening blocks, then one noise block per pilot

    // at[j][b]: channel of UE b at BS j; vhat[j][a]: estimate of UE a's channel at BS j (served UEs only)
    std::vector<std::vector<AffineGaussian>> at(L), vhat(L);
    std::vector<double> norm2(U, 0.0);
    for (BsIndex j = 0; j < L; ++j)
    {
        at[j].resize(U);
        vhat[j].resize(U);
        std::vector<ChannelStats> st(U);
        for (Eigen::Index b = 0; b < U; ++b)
        {
            st[b] = sc.channels->at(j, b);
            at[j][b].m = st[b].mean;
            at[j][b].f = CMat::Zero(M, dim);
            at[j][b].f.block(0, b * M, M, M) = sqrt_psd(st[b].cov);
        }
        for (Eigen::Index a = 0; a < U; ++a)
        {
            if (sc.serving_bs[a] != j)
                continue;
            const int t = sc.pilots.pilot_of_ue[a];
            AffineGaussian y{CVec::Zero(M), CMat::Zero(M, dim)};
            CMat s = sc.noise_ul * CMat::Identity(M, M);
            for (Eigen::Index b = 0; b < U; ++b)
            {
                if (sc.pilots.pilot_of_ue[b] != t)
                    continue;
                const double c = std::sqrt(sc.ul_powers[b]) * tau_p;
                y.m += c * at[j][b].m;
                y.f += c * at[j][b].f;
                s += sc.ul_powers[b] * tau_p * st[b].cov;
            }
            y.f.block(0, (U + t) * M, M, M) = std::sqrt(sc.noise_ul * tau_p) * CMat::Identity(M, M);

            const double p = sc.ul_powers[a];
            AffineGaussian v{CVec::Zero(M), CMat::Zero(M, dim)};
            switch (kind)
            {
            case EstimatorKind::Mmse: {
                const CMat g = std::sqrt(p) * st[a].cov * s.inverse();
                v.m = st[a].mean;
                v.f = g * y.f;
                break;
            }
            case EstimatorKind::EwMmse: {
                RVec gd(M);
                for (int i = 0; i < M; ++i)
                    gd[i] = std::sqrt(p) * st[a].cov(i, i).real() / s(i, i).real();
                v.m = st[a].mean;
                v.f = gd.cast<cdouble>().asDiagonal() * y.f;
                break;
            }
            case EstimatorKind::Ls:
                if (p > 0)
                {
                    v.m = y.m / (std::sqrt(p) * tau_p);
                    v.f = y.f / (std::sqrt(p) * tau_p);
                }
                break;
            case EstimatorKind::Mo:
                v.m = st[a].mean;
                break;
            }
            norm2[a] = v.m.squaredNorm() + v.f.squaredNorm();
            vhat[j][a] = v;
        }
    }

    ReferenceSinr out;
    out.ul.assign(U, 0.0);
    out.dl.assign(U, 0.0);
    for (Eigen::Index a = 0; a < U; ++a)
    {
        const BsIndex j = sc.serving_bs[a];
        if (!(norm2[a] > 0))
            continue;
        const AffineGaussian &v = vhat[j][a];
        const cdouble sig = affine_mean_product(v, at[j][a]);
        double den = sc.noise_ul * norm2[a] - sc.ul_powers[a] * std::norm(sig);
        for (Eigen::Index b = 0; b < U; ++b)
            den += sc.ul_powers[b] * affine_second_moment(v, at[j][b]);
        out.ul[a] = sc.ul_powers[a] * std::norm(sig) / den;
    }
    for (Eigen::Index b = 0; b < U; ++b)
    {
        const BsIndex jb = sc.serving_bs[b];
        if (!(norm2[b] > 0))
            continue;
        const cdouble sig = affine_mean_product(vhat[jb][b], at[jb][b]) / std::sqrt(norm2[b]);
        double den = sc.noise_dl - sc.dl_powers[b] * std::norm(sig);
        for (Eigen::Index a = 0; a < U; ++a)
        {
            if (!(norm2[a] > 0))
                continue;
            const BsIndex ja = sc.serving_bs[a];
            den += sc.dl_powers[a] * affine_second_moment(vhat[ja][a], at[ja][b]) / norm2[a];
        }
        out.dl[b] = sc.dl_powers[b] * std::norm(sig) / den;
    }
    return out;
}

inline double rel_diff(double a, double b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

} // namespace rmimo::test

#endif
