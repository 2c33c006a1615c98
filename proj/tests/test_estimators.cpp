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

#include "support.hpp"

#include <gtest/gtest.h>

using namespace rmimo;
using namespace rmimo::test;

namespace
{

ChannelStats scalar_stats(double r, cdouble mean = 0.0)
{
    CVec m(1);
    m[0] = mean;
    CMat c(1, 1);
    c(0, 0) = r;
    return make_stats(m, c);
}

double max_abs(const CMat &a) { return a.cwiseAbs().maxCoeff(); }

} // namespace

TEST(Psi, Examples)
{
    const ChannelStats h = make_stats(CVec::Zero(3), CMat::Identity(3, 3));
    const CMat psi = psi_matrix({{1.0, &h}}, 1, 1.0);
    EXPECT_LE(max_abs(psi - 0.5 * CMat::Identity(3, 3)), 1e-15);
    EXPECT_THROW(psi_matrix({}, 4, 0.25), ConfigError);
    EXPECT_LE(max_abs(psi_matrix({{1.0, &h}}, 1, 1e12)), 1e-11);
    const ChannelStats z = make_stats(CVec::Zero(2), CMat::Zero(2, 2));
    EXPECT_THROW(psi_matrix({{1.0, &z}}, 1, 0.0), ConfigError);
}

TEST(Mmse, ScalarExample)
{
    const ChannelStats h = scalar_stats(1.0);
    const PilotGroup g = make_pilot_group({{1.0, &h}}, 1, 1.0);
    const EstimatorStats e = mmse_stats(h, 1.0, g);
    EXPECT_NEAR(e.err_cov(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(e.est_cov(0, 0).real(), 0.5, 1e-15);
}

TEST(Mmse, NoiseLimits)
{
    Rng rng(2);
    const ChannelStats h = make_stats(random_vector(4, rng), random_psd(4, rng, 4));
    const EstimatorStats loud = mmse_stats(h, 1.0, make_pilot_group({{1.0, &h}}, 2, 1e14));
    EXPECT_LE(max_abs(loud.err_cov - h.cov), 1e-12);
    const EstimatorStats quiet = mmse_stats(h, 1.0, make_pilot_group({{1.0, &h}}, 2, 1e-14));
    EXPECT_LE(max_abs(quiet.err_cov), 1e-10);
    EXPECT_LE(max_abs(quiet.cross_cov), 0.0);
}

TEST(Mmse, StatisticsMatchDenseFormulas)
{
    Rng rng(4);
    const int M = 5;
    const ChannelStats a = make_stats(random_vector(M, rng), random_psd(M, rng, 3));
    const ChannelStats b = make_stats(random_vector(M, rng), random_psd(M, rng, 5, 0.4));
    const double pa = 0.7, pb = 1.3, noise = 0.2;
    const int tau = 3;
    const PilotGroup g = make_pilot_group({{pa, &a}, {pb, &b}}, tau, noise);
    const CMat s = pa * tau * a.cov + pb * tau * b.cov + noise * CMat::Identity(M, M);
    const CMat psi = s.inverse();
    const EstimatorStats e = mmse_stats(a, pa, g);
    EXPECT_LE(max_abs(e.psi - psi), 1e-12 * max_abs(psi));
    EXPECT_LE(max_abs(e.est_cov - pa * tau * a.cov * psi * a.cov), 1e-12);
    EXPECT_LE(max_abs(e.err_cov - (a.cov - pa * tau * a.cov * psi * a.cov)), 1e-12);
    EXPECT_LE((e.est_mean - a.mean).norm(), 0.0);
    EXPECT_LE(e.err_mean.norm(), 0.0);
    EXPECT_LE(max_abs(e.gain - std::sqrt(pa) * a.cov * psi), 1e-12);
    EXPECT_LE(max_abs(e.cross_cov), 0.0);
    EXPECT_LE((g.ybar - (std::sqrt(pa) * tau * a.mean + std::sqrt(pb) * tau * b.mean)).norm(), 1e-12);
}

TEST(Mmse, EstimateExamples)
{
    Rng rng(6);
    const int M = 4;
    const ChannelStats a = make_stats(random_vector(M, rng), random_psd(M, rng, 4));
    const PilotGroup g = make_pilot_group({{1.0, &a}}, 2, 0.1);
    const EstimatorStats e = mmse_stats(a, 1.0, g);
    EXPECT_LE((apply_estimator(e, {g.ybar, g.ybar}) - a.mean).norm(), 1e-14);

    const ChannelStats det = make_stats(random_vector(M, rng), CMat::Zero(M, M));
    const PilotGroup gd = make_pilot_group({{1.0, &det}}, 2, 0.1);
    const EstimatorStats ed = mmse_stats(det, 1.0, gd);
    EXPECT_LE((apply_estimator(ed, {random_vector(M, rng), gd.ybar}) - det.mean).norm(), 1e-14);
}

TEST(Mmse, ErrorShrinksWithNoise)
{
    Rng rng(8);
    const ChannelStats a = make_stats(CVec::Zero(6), random_psd(6, rng, 6));
    const ChannelStats b = make_stats(CVec::Zero(6), random_psd(6, rng, 6));
    double prev = 1e300;
    for (double noise : {10.0, 3.0, 1.0, 0.3, 0.1, 0.01})
    {
        const EstimatorStats e = mmse_stats(a, 1.0, make_pilot_group({{1.0, &a}, {0.5, &b}}, 2, noise));
        const double mse = e.err_cov.trace().real();
        EXPECT_LT(mse, prev);
        prev = mse;
    }
}

TEST(EwMmse, MatchesDenseFormulas)
{
    Rng rng(10);
    const int M = 5;
    const ChannelStats a = make_stats(random_vector(M, rng), random_psd(M, rng, 4));
    const ChannelStats b = make_stats(random_vector(M, rng), random_psd(M, rng, 2, 0.5));
    const double p = 0.9, noise = 0.3;
    const int tau = 2;
    const PilotGroup g = make_pilot_group({{p, &a}, {1.1, &b}}, tau, noise);
    const EstimatorStats e = ewmmse_stats(a, p, g);
    const CMat s = p * tau * a.cov + 1.1 * tau * b.cov + noise * CMat::Identity(M, M);
    CMat dl = CMat::Zero(M, M);
    for (int i = 0; i < M; ++i)
        dl(i, i) = a.cov(i, i).real() / s(i, i).real();
    const CMat sigma = p * tau * dl * s * dl;
    const double c = p * tau;
    const CMat sigma_err = a.cov - c * (dl * a.cov).adjoint() - c * dl * a.cov + sigma;
    EXPECT_LE(max_abs(e.est_cov - sigma), 1e-12);
    EXPECT_LE(max_abs(e.err_cov - sigma_err), 1e-12);
    EXPECT_LE(max_abs(e.cross_cov - (c * dl * a.cov - sigma)), 1e-12);
    EXPECT_LE(max_abs(e.gain - std::sqrt(p) * dl), 1e-12);
    EXPECT_EQ(e.err_mean.norm(), 0.0);
}

TEST(EwMmse, CoincidesWithMmseForDiagonalCovariances)
{
    Rng rng(12);
    const int M = 6;
    RVec da(M), db(M);
    for (int i = 0; i < M; ++i)
    {
        da[i] = 0.2 + uniform01(rng);
        db[i] = 0.2 + uniform01(rng);
    }
    const ChannelStats a = make_stats(random_vector(M, rng), da.cast<cdouble>().asDiagonal());
    const ChannelStats b = make_stats(random_vector(M, rng), db.cast<cdouble>().asDiagonal());
    const PilotGroup g = make_pilot_group({{1.0, &a}, {0.6, &b}}, 2, 0.4);
    const EstimatorStats m = mmse_stats(a, 1.0, g);
    const EstimatorStats e = ewmmse_stats(a, 1.0, g);
    EXPECT_LE(max_abs(e.cross_cov), 1e-15);
    for (int t = 0; t < 20; ++t)
    {
        const PilotObservation obs{random_vector(M, rng, 4.0), g.ybar};
        const CVec hm = apply_estimator(m, obs), he = apply_estimator(e, obs);
        EXPECT_LE((hm - he).norm(), 1e-10 * hm.norm());
    }
}

TEST(EwMmse, ScalarEqualsMmse)
{
    const ChannelStats h = scalar_stats(1.0, {0.3, -0.2});
    const PilotGroup g = make_pilot_group({{1.0, &h}}, 1, 1.0);
    const EstimatorStats e = ewmmse_stats(h, 1.0, g);
    EXPECT_NEAR(e.err_cov(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(e.est_cov(0, 0).real(), 0.5, 1e-15);
}

TEST(Ls, Statistics)
{
    Rng rng(14);
    const int M = 4;
    const ChannelStats a = make_stats(random_vector(M, rng), random_psd(M, rng, 4));
    const ChannelStats b = make_stats(random_vector(M, rng), random_psd(M, rng, 4, 0.3));
    const double p = 0.8, pb = 1.2, noise = 0.5;
    const int tau = 4;
    const PilotGroup g = make_pilot_group({{p, &a}, {pb, &b}}, tau, noise);
    const EstimatorStats e = ls_stats(a, p, g);
    const CVec ybar = std::sqrt(p) * tau * a.mean + std::sqrt(pb) * tau * b.mean;
    const CMat s = p * tau * a.cov + pb * tau * b.cov + noise * CMat::Identity(M, M);
    EXPECT_LE((e.est_mean - ybar / (std::sqrt(p) * tau)).norm(), 1e-12);
    EXPECT_LE((e.err_mean - (a.mean - ybar / (std::sqrt(p) * tau))).norm(), 1e-12);
    EXPECT_LE(max_abs(e.est_cov - s / (p * tau)), 1e-12);
    EXPECT_LE(max_abs(e.err_cov - (s / (p * tau) - a.cov)), 1e-12);
    EXPECT_LE(max_abs(ls_omega_inverse(a, p, g) - (s - p * tau * a.cov)), 1e-12);
    EXPECT_THROW(ls_stats(a, 0.0, g), ConfigError);
}

TEST(Ls, NoiselessUncontaminatedRecoversChannel)
{
    Rng rng(16);
    const int M = 3;
    const ChannelStats a = make_stats(random_vector(M, rng), random_psd(M, rng, 3));
    const PilotGroup g = make_pilot_group({{2.0, &a}}, 5, 0.0);
    const EstimatorStats e = ls_stats(a, 2.0, g);
    const CVec h = random_vector(M, rng);
    const PilotObservation obs{std::sqrt(2.0) * 5 * h, g.ybar};
    EXPECT_LE((apply_estimator(e, obs) - h).norm(), 1e-14);
}

TEST(Mo, ReturnsMean)
{
    Rng rng(18);
    const ChannelStats a = make_stats(random_vector(4, rng), random_psd(4, rng, 2));
    EXPECT_EQ((mo_estimate(a) - a.mean).norm(), 0.0);
    const EstimatorStats e = mo_stats(a);
    EXPECT_EQ((apply_estimator(e, {random_vector(4, rng), random_vector(4, rng)}) - a.mean).norm(), 0.0);
    const ChannelStats r = make_stats(CVec::Zero(4), random_psd(4, rng, 2));
    EXPECT_EQ(mo_estimate(r).norm(), 0.0);
}

TEST(EstimatorStats, CovariancesArePsd)
{
    Rng rng(20);
    for (int t = 0; t < 20; ++t)
    {
        const int M = 6;
        const ChannelStats a = make_stats(random_vector(M, rng), random_psd(M, rng, 1 + t % M));
        const ChannelStats b = make_stats(random_vector(M, rng), random_psd(M, rng, M, 0.5));
        const PilotGroup g = make_pilot_group({{1.0, &a}, {0.7, &b}}, 2, 0.1);
        for (EstimatorKind k : {EstimatorKind::Mmse, EstimatorKind::EwMmse, EstimatorKind::Ls})
        {
            const EstimatorStats e = estimator_stats(k, a, 1.0, g);
            for (const CMat *m : {&e.est_cov, &e.err_cov})
            {
                EXPECT_LE(linalg::hermitian_defect(*m), 1e-12);
                EXPECT_GE(linalg::hermitian_eigenvalues(*m).minCoeff(), -1e-10 * m->norm());
            }
        }
    }
}
