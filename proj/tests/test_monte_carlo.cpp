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
#include "rmimo/linalg.hpp"
#include "rmimo/monte_carlo.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace rmimo;
using namespace rmimo::test;

TEST(MomentAccumulator, MergeMatchesSequential)
{
    Rng rng(1);
    std::vector<Eigen::Vector4d> xs;
    for (int i = 0; i < 999; ++i)
        xs.emplace_back(standard_normal(rng), 3 + uniform01(rng), 100 * standard_normal(rng), 1e-3 * uniform01(rng));
    MomentAccumulator all, a, b, c;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        all.add(xs[i]);
        (i < 300 ? a : i < 700 ? b : c).add(xs[i]);
    }
    MomentAccumulator merged;
    merged.merge(a);
    merged.merge(b);
    merged.merge(c);
    EXPECT_EQ(merged.n, all.n);
    EXPECT_LE((merged.mean - all.mean).norm(), 1e-12 * all.mean.norm());
    EXPECT_LE((merged.m2 - all.m2).norm(), 1e-10 * all.m2.norm());

    // two-pass reference for the covariance of the mean
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    for (const auto &x : xs)
        mean += x;
    mean /= static_cast<double>(xs.size());
    Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
    for (const auto &x : xs)
        cov += (x - mean) * (x - mean).transpose();
    cov /= static_cast<double>(xs.size() - 1) * static_cast<double>(xs.size());
    EXPECT_LE((all.mean_covariance() - cov).norm(), 1e-10 * cov.norm());
}

TEST(Sampling, ZeroCovarianceReturnsMean)
{
    Rng rng(2);
    const ChannelStats s = make_stats(random_vector(5, rng), CMat::Zero(5, 5));
    for (int i = 0; i < 5; ++i)
        EXPECT_LE((sample_channel(s, rng) - s.mean).norm(), 0.0);
}

TEST(Sampling, NoiselessSingleSharer)
{
    Rng rng(3);
    const CVec h = random_vector(4, rng);
    const PilotObservation obs = synthesize_pilot_observation({2.0}, {h}, CVec::Zero(4), 3, 0.0, rng);
    EXPECT_LE((obs.y - std::sqrt(2.0) * 3 * h).norm(), 1e-14);
}

TEST(Sampling, SampleMeanAndCovariance)
{
    Rng rng(4);
    const int M = 3;
    const ChannelStats s = make_stats(random_vector(M, rng), random_psd(M, rng, 2));
    const CMat root = linalg::hermitian_sqrt(s.cov);
    const int n = 100000;
    CVec mean = CVec::Zero(M);
    CMat second = CMat::Zero(M, M);
    for (int i = 0; i < n; ++i)
    {
        const CVec h = sample_channel(s, root, rng);
        mean += h;
        second += (h - s.mean) * (h - s.mean).adjoint();
    }
    mean /= n;
    second /= n;
    for (int i = 0; i < M; ++i)
    {
        const double se = std::sqrt(s.cov(i, i).real() / 2 / n);
        EXPECT_LE(std::abs((mean - s.mean)[i].real()), 4 * se);
        EXPECT_LE(std::abs((mean - s.mean)[i].imag()), 4 * se);
        for (int j = 0; j < M; ++j)
        {
            // Var of one entry of h h^H is R_ii R_jj
            const double se2 = std::sqrt(s.cov(i, i).real() * s.cov(j, j).real() / n);
            EXPECT_LE(std::abs(second(i, j) - s.cov(i, j)), 4 * se2);
        }
    }
}

TEST(QuadMoments, Specializations)
{
    Rng rng(5);
    const int M = 4;
    const CMat rx = random_psd(M, rng, 3), ry = random_psd(M, rng, 4);
    const CMat id = CMat::Identity(M, M);
    const CVec z = CVec::Zero(M);
    EXPECT_NEAR(quad_moment_independent({z, rx}, {z, ry}, id), (rx * ry).trace().real(), 1e-12);

    const CVec xb = random_vector(M, rng), yb = random_vector(M, rng);
    const CMat b = random_matrix(M, M, rng);
    const CMat zero = CMat::Zero(M, M);
    EXPECT_NEAR(quad_moment_independent({xb, zero}, {yb, zero}, b), std::norm(xb.dot(b * yb)), 1e-10);

    const double tr = rx.trace().real();
    EXPECT_NEAR(quad_moment_correlated({z, rx}, {z, rx}, id), tr * tr + (rx * rx).trace().real(), 1e-10);

    // with one covariance zero the shared w no longer matters
    for (const auto &[cx, cy] : {std::pair{rx, zero}, std::pair{zero, ry}})
        EXPECT_NEAR(quad_moment_correlated({xb, cx}, {yb, cy}, b), quad_moment_independent({xb, cx}, {yb, cy}, b),
                    1e-10 * quad_moment_independent({xb, cx}, {yb, cy}, b));
}

TEST(QuadMoments, CorrelatedMatchesAffineForm)
{
    Rng rng(6);
    const int M = 5;
    for (int t = 0; t < 20; ++t)
    {
        const CMat fx = random_matrix(M, M, rng), fy = random_matrix(M, M, rng), b = random_matrix(M, M, rng);
        const CVec xb = random_vector(M, rng), yb = random_vector(M, rng);
        // x^H B y = x^H (B y): treat B y as the second affine form
        const double ref = affine_second_moment({xb, fx}, {b * yb, b * fy});
        EXPECT_NEAR(quad_moment_correlated(xb, fx, yb, fy, b), ref, 1e-10 * ref);
    }
}

TEST(QuadMoments, IndependentMatchesStackedAffineForm)
{
    // independent x, y as affine forms of the stacked vector [w1; w2]
    Rng rng(8);
    const int M = 4;
    for (int t = 0; t < 20; ++t)
    {
        const CVec xb = random_vector(M, rng), yb = random_vector(M, rng);
        const CMat rx = random_psd(M, rng, 1 + t % M), ry = random_psd(M, rng, 1 + (t / 2) % M);
        const CMat b = random_matrix(M, M, rng);
        CMat fx = CMat::Zero(M, 2 * M), fy = CMat::Zero(M, 2 * M);
        fx.leftCols(M) = sqrt_psd(rx);
        fy.rightCols(M) = b * sqrt_psd(ry);
        const double ref = affine_second_moment({xb, fx}, {b * yb, fy});
        EXPECT_NEAR(quad_moment_independent({xb, rx}, {yb, ry}, b), ref, 1e-10 * ref);
    }
}

TEST(TraceInequalities, HoldOnRandomPairs)
{
    Rng rng(7);
    for (int t = 0; t < 50; ++t)
    {
        const int M = 2 + t % 6;
        const CMat a = random_psd(M, rng, M) + 0.01 * CMat::Identity(M, M);
        const CMat b = random_psd(M, rng, 1 + t % M);
        EXPECT_TRUE(trace_inequalities_hold(a, b));
    }
}

namespace
{

Scenario tiny_scenario(std::uint64_t seed)
{
    Rng rng(seed);
    SyntheticOptions o;
    o.L = 2;
    o.K = 2;
    o.M = 4;
    o.noise = 1.0;
    o.dl_noise = 1.0;
    return synthetic_scenario(o, rng);
}

} // namespace

TEST(McSinr, RejectsTooFewTrials)
{
    McOptions o;
    o.trials = 10;
    EXPECT_THROW(mc_sinr(tiny_scenario(1), EstimatorKind::Mmse, Direction::Uplink, o), ConfigError);
}

TEST(McSinr, ThreadCountDoesNotChangeResults)
{
    const Scenario sc = tiny_scenario(2);
    McOptions o;
    o.trials = 3000;
    o.chunk = 500;
    o.threads = 1;
    const McResult a = mc_sinr(sc, EstimatorKind::EwMmse, Direction::Downlink, o);
    o.threads = 3;
    const McResult b = mc_sinr(sc, EstimatorKind::EwMmse, Direction::Downlink, o);
    for (UeIndex u = 0; u < sc.num_ues(); ++u)
    {
        EXPECT_EQ(a.sinr[u].value, b.sinr[u].value);
        EXPECT_EQ(a.sinr[u].std_error, b.sinr[u].std_error);
        EXPECT_EQ(a.sinr[u].trials, 3000u);
    }
}

TEST(McSinr, ZeroPowerGivesZero)
{
    Scenario sc = tiny_scenario(3);
    std::fill(sc.ul_powers.begin(), sc.ul_powers.end(), 0.0);
    McOptions o;
    o.trials = 1000;
    for (EstimatorKind k : {EstimatorKind::Mmse, EstimatorKind::Ls, EstimatorKind::Mo})
        for (const McEstimate &e : mc_sinr(sc, k, Direction::Uplink, o).sinr)
            EXPECT_EQ(e.value, 0.0);
}

TEST(McSinr, PerfectCsiNormMatchesChiSquareMean)
{
    const int M = 8;
    const double beta = 0.7;
    auto table = std::make_shared<ChannelTable>(1, 1, M);
    (*table)(0, 0) = make_stats(CVec::Zero(M), beta * CMat::Identity(M, M));
    Scenario sc;
    sc.channels = table;
    sc.serving_bs = {0};
    sc.pilots = make_pilot_plan({0}, 1);
    sc.ul_powers = {1.0};
    sc.dl_powers = {1.0};
    sc.noise_ul = sc.noise_dl = 0.1;
    McOptions o;
    o.trials = 20000;
    o.perfect_csi = true;
    const McResult r = mc_sinr(sc, EstimatorKind::Mmse, Direction::Uplink, o);
    EXPECT_NEAR(r.norm2[0].value, M * beta, 4 * r.norm2[0].std_error);
    EXPECT_GT(r.norm2[0].std_error, 0.0);
}

TEST(McSinr, AgreesWithClosedFormOnTinyInstance)
{
    const Scenario sc = tiny_scenario(4);
    McOptions o;
    o.trials = 20000;
    const std::vector<EstimatorKind> kinds{EstimatorKind::Mmse, EstimatorKind::EwMmse, EstimatorKind::Ls,
                                           EstimatorKind::Mo};
    const auto mc = mc_sinr(sc, kinds, {Direction::Uplink, Direction::Downlink}, o);
    for (const McResult &r : mc)
    {
        const MomentTable t = compute_moments(sc, r.kind);
        const auto cf = sinr_closed_form(t, sc, r.direction);
        for (UeIndex u = 0; u < sc.num_ues(); ++u)
            EXPECT_LE(std::abs(cf[u].sinr - r.sinr[u].value), 4.5 * r.sinr[u].std_error)
                << to_string(r.kind) << ' ' << to_string(r.direction) << " ue " << u;
    }
}
