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

#ifndef RMIMO_TYPES_HPP
#define RMIMO_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rmimo
{
using cdouble = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

/// Global UE index: cell * K + k for the cell the UE was dropped in.
using UeIndex = std::size_t;
using BsIndex = std::size_t;

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

enum class EstimatorKind
{
    Mmse,
    EwMmse,
    Ls,
    Mo
};

enum class Direction
{
    Uplink,
    Downlink
};

/// Invalid or inconsistent configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Degenerate geometry (zero distances, rejection sampling that never succeeds).
class GeometryError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

std::string_view to_string(EstimatorKind kind);
std::string_view to_string(Direction direction);
EstimatorKind parse_estimator_kind(std::string_view name);
Direction parse_direction(std::string_view name);

inline constexpr EstimatorKind all_estimator_kinds[] = {EstimatorKind::Mmse, EstimatorKind::EwMmse,
                                                        EstimatorKind::Ls, EstimatorKind::Mo};

} // namespace rmimo

#endif
