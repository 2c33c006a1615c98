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

#include "rmimo/rng.hpp"

#include <cmath>

namespace rmimo
{
namespace
{
std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = splitmix64(base);
    for (auto k : keys)
        h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

double uniform01(Rng &rng)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

double standard_normal(Rng &rng)
{
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

cdouble complex_normal(Rng &rng)
{
    std::normal_distribution<double> normal(0.0, M_SQRT1_2);
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

CVec complex_normal_vector(Rng &rng, Eigen::Index n)
{
    std::normal_distribution<double> normal(0.0, M_SQRT1_2);
    CVec out(n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        const double re = normal(rng);
        const double im = normal(rng);
        out[i] = {re, im};
    }
    return out;
}

} // namespace rmimo
