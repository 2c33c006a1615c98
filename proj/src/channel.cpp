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

#include "rmimo/channel.hpp"

#include "rmimo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace rmimo
{

double los_probability(double d)
{
    if (d <= 0.0)
        return 1.0;
    if (d >= 300.0)
        return 0.0;
    return std::clamp((300.0 - d) / 300.0, 0.0, 1.0);
}

double large_scale_gain_db(double d, bool los, double shadow_db)
{
    if (!(d > 0.0))
        throw GeometryError("large-scale gain needs a positive distance");
    if (los)
        return -30.18 - 26.0 * std::log10(d) + shadow_db;
    return -34.53 - 38.0 * std::log10(d) + shadow_db;
}

double large_scale_gain(double d, bool los, double shadow_db)
{
    return db_to_linear(large_scale_gain_db(d, los, shadow_db));
}

double rician_factor(double d) { return db_to_linear(13.0 - 0.03 * d); }

RicianGains rician_split(double d, double beta, RicianSplit split)
{
    RicianGains g;
    g.kappa = rician_factor(d);
    if (split == RicianSplit::Amplitude)
    {
        g.beta_los = std::sqrt(g.kappa / (g.kappa + 1.0)) * beta;
        g.beta_nlos = std::sqrt(1.0 / (g.kappa + 1.0)) * beta;
    }
    else
    {
        g.beta_los = g.kappa / (g.kappa + 1.0) * beta;
        g.beta_nlos = 1.0 / (g.kappa + 1.0) * beta;
    }
    return g;
}

CVec steering_vector(double phi, int M, double d_H, double beta_los)
{
    CVec h(M);
    const double amp = std::sqrt(beta_los);
    const double step = 2.0 * std::numbers::pi * d_H * std::sin(phi);
    for (int m = 0; m < M; ++m)
        h[m] = std::polar(amp, step * m);
    return h;
}

std::vector<double> draw_cluster_angles(double phi, int N, Rng &rng)
{
    const double spread = deg_to_rad(40.0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n)
        out.push_back(phi + (2.0 * uniform01(rng) - 1.0) * spread);
    return out;
}

CMat local_scattering_covariance(double beta_nlos, int M, const std::vector<double> &cluster_angles, double asd,
                                 double d_H)
{
    const double k = 2.0 * std::numbers::pi * d_H;
    const double n = static_cast<double>(cluster_angles.size());
    // Toeplitz: first column only
    CVec col = CVec::Zero(M);
    for (int delta = 0; delta < M; ++delta)
    {
        cdouble acc = 0.0;
        for (double phi : cluster_angles)
        {
            const double damp = k * delta * std::cos(phi) * asd;
            acc += std::polar(std::exp(-0.5 * damp * damp), k * delta * std::sin(phi));
        }
        col[delta] = beta_nlos / n * acc;
    }
    col[0] = beta_nlos;

    CMat r(M, M);
    for (int s = 0; s < M; ++s)
        for (int m = 0; m < M; ++m)
            r(s, m) = s >= m ? col[s - m] : std::conj(col[m - s]);
    return linalg::psd_repair(r);
}

CMat local_scattering_covariance(double phi, double asd, double beta_nlos, int M, int N, Rng &rng, double d_H)
{
    return local_scattering_covariance(beta_nlos, M, draw_cluster_angles(phi, N, rng), asd, d_H);
}

ChannelStats to_rayleigh(const ChannelStats &stats)
{
    ChannelStats out = stats;
    out.mean.setZero();
    out.beta = stats.beta_nlos;
    out.beta_los = 0.0;
    out.kappa = 0.0;
    out.has_los = false;
    return out;
}

std::vector<ChannelStats> ChannelSource::at_bs(BsIndex bs) const
{
    std::vector<ChannelStats> out;
    out.reserve(num_ues());
    for (UeIndex u = 0; u < num_ues(); ++u)
        out.push_back(at(bs, u));
    return out;
}

ChannelTable::ChannelTable(std::size_t num_bs, std::size_t num_ues, int M)
    : num_bs_(num_bs), num_ues_(num_ues), M_(M), stats_(num_bs * num_ues)
{
    for (auto &s : stats_)
    {
        s.mean = CVec::Zero(M);
        s.cov = CMat::Zero(M, M);
    }
}

GeneratedChannels::GeneratedChannels(const NetworkRealization &net, const ExperimentConfig &cfg, int M,
                                     bool strip_los)
    : num_bs_(net.num_bs()), num_ues_(net.num_ues()), M_(M), asd_(cfg.asd_rad()), d_H_(cfg.antenna_spacing),
      identity_cov_(cfg.fading_mode == FadingMode::Uncorrelated),
      strip_los_(strip_los || cfg.fading_mode == FadingMode::RayleighOnly), split_(cfg.rician_split)
{
    if (M < 1)
        throw ConfigError("M must be >= 1");
    links_.reserve(num_bs_ * num_ues_);
    for (BsIndex b = 0; b < num_bs_; ++b)
    {
        for (UeIndex u = 0; u < num_ues_; ++u)
        {
            const LinkGeometry &g = net.link(b, u);
            Rng rng = make_stream(net.cluster_seed, {b, u});
            links_.push_back({g.distance, g.angle, g.has_los, g.beta, draw_cluster_angles(g.angle, cfg.num_clusters, rng)});
        }
    }
}

ChannelStats GeneratedChannels::at(BsIndex bs, UeIndex ue) const
{
    const Link &lk = links_[bs * num_ues_ + ue];
    ChannelStats s;
    s.beta = lk.beta;
    s.angle = lk.angle;
    s.has_los = lk.has_los;
    if (lk.has_los)
    {
        const RicianGains g = rician_split(lk.distance, lk.beta, split_);
        s.kappa = g.kappa;
        s.beta_los = g.beta_los;
        s.beta_nlos = g.beta_nlos;
        s.mean = steering_vector(lk.angle, M_, d_H_, g.beta_los);
    }
    else
    {
        s.beta_nlos = lk.beta;
        s.mean = CVec::Zero(M_);
    }

    if (identity_cov_)
        s.cov = s.beta_nlos * CMat::Identity(M_, M_);
    else
        s.cov = local_scattering_covariance(s.beta_nlos, M_, lk.cluster_angles, asd_, d_H_);

    if (strip_los_)
        return to_rayleigh(s);
    return s;
}

ChannelTable materialize(const ChannelSource &source)
{
    ChannelTable table(source.num_bs(), source.num_ues(), source.antennas());
    for (BsIndex b = 0; b < source.num_bs(); ++b)
        for (UeIndex u = 0; u < source.num_ues(); ++u)
            table(b, u) = source.at(b, u);
    return table;
}

ChannelTable build_channel_stats(const NetworkRealization &net, const ExperimentConfig &cfg)
{
    return materialize(GeneratedChannels(net, cfg, cfg.M));
}

namespace
{
void write_complex(std::ostream &out, cdouble z)
{
    out << ',' << z.real() << ',' << z.imag();
}
} // namespace

void dump_channels(const ChannelSource &source, std::ostream &out)
{
    const auto old_precision = out.precision(17);
    out << "# rmimo channel dump v1\n";
    out << "# num_bs=" << source.num_bs() << " num_ues=" << source.num_ues() << " M=" << source.antennas()
        << '\n';
    out << "# stats,bs,ue,beta,beta_los,beta_nlos,kappa,has_los,angle\n";
    out << "# mean,bs,ue,re0,im0,...\n";
    out << "# cov,bs,ue,row,re0,im0,...\n";
    for (BsIndex b = 0; b < source.num_bs(); ++b)
    {
        for (UeIndex u = 0; u < source.num_ues(); ++u)
        {
            const ChannelStats s = source.at(b, u);
            out << "stats," << b << ',' << u << ',' << s.beta << ',' << s.beta_los << ',' << s.beta_nlos << ','
                << s.kappa << ',' << (s.has_los ? 1 : 0) << ',' << s.angle << '\n';
            out << "mean," << b << ',' << u;
            for (Eigen::Index m = 0; m < s.mean.size(); ++m)
                write_complex(out, s.mean[m]);
            out << '\n';
            for (Eigen::Index r = 0; r < s.cov.rows(); ++r)
            {
                out << "cov," << b << ',' << u << ',' << r;
                for (Eigen::Index c = 0; c < s.cov.cols(); ++c)
                    write_complex(out, s.cov(r, c));
                out << '\n';
            }
        }
    }
    out.precision(old_precision);
}

} // namespace rmimo
