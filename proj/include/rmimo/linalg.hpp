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

#ifndef RMIMO_LINALG_HPP
#define RMIMO_LINALG_HPP

#include "rmimo/types.hpp"

namespace rmimo::linalg
{

/// (A + A^H) / 2
CMat hermitian_part(const CMat &a);

/// tr(A B) in O(n^2) without forming the product.
inline cdouble trace_product(const CMat &a, const CMat &b)
{
    return (a.array() * b.transpose().array()).sum();
}

/// Relative Hermitian defect ||A - A^H||_F / ||A||_F (0 for the zero matrix).
double hermitian_defect(const CMat &a);

/// Eigenvalues of the Hermitian part of A, ascending.
RVec hermitian_eigenvalues(const CMat &a);

/// Largest eigenvalue of a Hermitian PSD matrix, i.e. its spectral norm.
double spectral_norm_psd(const CMat &a);

/// Symmetrizes R and clamps eigenvalues below zero. Returns R unchanged (up to
/// symmetrization) when R + tol * tr(R)/M * I admits a Cholesky factorization,
/// in which case no eigenvalue is below -tol * tr(R)/M.
CMat psd_repair(const CMat &r, double rel_tol = 1e-12);

/// Hermitian square root via eigendecomposition with negative eigenvalues clamped.
CMat hermitian_sqrt(const CMat &r);

/// Inverse of a Hermitian positive definite matrix through its Cholesky factor.
/// Throws std::domain_error when the matrix is not positive definite.
CMat hermitian_inverse(const CMat &a);

} // namespace rmimo::linalg

#endif
