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

#ifndef RMIMO_RNG_HPP
#define RMIMO_RNG_HPP

#include "rmimo/types.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rmimo
{

using Rng = std::mt19937_64;

/// Mixes a base seed with a list of keys (drop, BS, UE, chunk, ...) into an
/// independent 64-bit seed. Stable across platforms.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

inline Rng make_stream(std::uint64_t base, std::initializer_list<std::uint64_t> keys)
{
    return Rng(derive_seed(base, keys));
}

double uniform01(Rng &rng);
double standard_normal(Rng &rng);

/// CN(0, 1): independent real and imaginary parts with variance 1/2 each.
cdouble complex_normal(Rng &rng);
CVec complex_normal_vector(Rng &rng, Eigen::Index n);

} // namespace rmimo

#endif
