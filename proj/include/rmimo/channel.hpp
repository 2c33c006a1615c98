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

#ifndef RMIMO_CHANNEL_HPP
#define RMIMO_CHANNEL_HPP

#include "rmimo/config.hpp"
#include "rmimo/geometry.hpp"
#include "rmimo/propagation.hpp"
#include "rmimo/rng.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace rmimo
{

/// First and second order statistics of one BS-UE channel h ~ CN(mean, cov).
struct ChannelStats
{
    CVec mean;
    CMat cov;
    double beta = 0.0; // total large-scale gain
    double beta_los = 0.0;
    double beta_nlos = 0.0;
    double kappa = 0.0;
    bool has_los = false;
    double angle = 0.0; // nominal azimuth, radians
};

/// Element m (0-based): sqrt(beta_los) exp(j 2 pi d_H m sin(phi)).
CVec steering_vector(double phi, int M, double d_H, double beta_los);

/// N scattering-cluster angles uniform in [phi - 40 deg, phi + 40 deg].
std::vector<double> draw_cluster_angles(double phi, int N, Rng &rng);

/// Gaussian local scattering covariance for given cluster angles. Entry (s, m):
/// beta/N sum_n exp(j 2 pi d_H (s-m) sin(phi_n)) exp(-asd^2/2 (2 pi d_H (s-m) cos(phi_n))^2),
/// then made exactly Hermitian and PSD-repaired.
CMat local_scattering_covariance(double beta_nlos, int M, const std::vector<double> &cluster_angles,
                                 double asd, double d_H = 0.5);
CMat local_scattering_covariance(double phi, double asd, double beta_nlos, int M, int N, Rng &rng,
                                 double d_H = 0.5);

/// Drops the LoS part, keeping the covariance: mean 0, beta = beta_nlos.
ChannelStats to_rayleigh(const ChannelStats &stats);

/// Channel statistics of all (BS, UE) pairs of one drop, served one BS at a time
/// so that large networks never hold every covariance in memory.
class ChannelSource
{
  public:
    virtual ~ChannelSource() = default;
    virtual std::size_t num_bs() const = 0;
    virtual std::size_t num_ues() const = 0;
    virtual int antennas() const = 0;
    virtual ChannelStats at(BsIndex bs, UeIndex ue) const = 0;
    /// Statistics of every UE's channel to one BS, indexed by UE.
    virtual std::vector<ChannelStats> at_bs(BsIndex bs) const;
};

/// Explicitly stored statistics.
class ChannelTable : public ChannelSource
{
  public:
    ChannelTable(std::size_t num_bs, std::size_t num_ues, int M);

    std::size_t num_bs() const override { return num_bs_; }
    std::size_t num_ues() const override { return num_ues_; }
    int antennas() const override { return M_; }
    ChannelStats at(BsIndex bs, UeIndex ue) const override { return stats_[bs * num_ues_ + ue]; }

    ChannelStats &operator()(BsIndex bs, UeIndex ue) { return stats_[bs * num_ues_ + ue]; }
    const ChannelStats &operator()(BsIndex bs, UeIndex ue) const { return stats_[bs * num_ues_ + ue]; }

  private:
    std::size_t num_bs_;
    std::size_t num_ues_;
    int M_;
    std::vector<ChannelStats> stats_;
};

/// Statistics generated on demand from a network drop. The cluster angles of a
/// link depend on the drop only, so the same drop can be evaluated at any M.
class GeneratedChannels : public ChannelSource
{
  public:
    /// strip_los additionally turns every link into its Rayleigh counterpart
    /// (implied by FadingMode::RayleighOnly).
    GeneratedChannels(const NetworkRealization &net, const ExperimentConfig &cfg, int M, bool strip_los = false);

    std::size_t num_bs() const override { return num_bs_; }
    std::size_t num_ues() const override { return num_ues_; }
    int antennas() const override { return M_; }
    ChannelStats at(BsIndex bs, UeIndex ue) const override;

  private:
    struct Link
    {
        double distance;
        double angle;
        bool has_los;
        double beta;
        std::vector<double> cluster_angles;
    };

    std::size_t num_bs_;
    std::size_t num_ues_;
    int M_;
    double asd_;
    double d_H_;
    bool identity_cov_;
    bool strip_los_;
    RicianSplit split_;
    std::vector<Link> links_;
};

/// Statistics of every pair, stored. Fine for small networks; prefer
/// GeneratedChannels when num_bs * num_ues * M^2 is large.
ChannelTable build_channel_stats(const NetworkRealization &net, const ExperimentConfig &cfg);
ChannelTable materialize(const ChannelSource &source);

/// CSV dump: header line "# rmimo channel dump v1", then per pair one "stats"
/// row, one "mean" row and M "cov" rows, complex values as re,im pairs, row-major.
void dump_channels(const ChannelSource &source, std::ostream &out);

} // namespace rmimo

#endif
