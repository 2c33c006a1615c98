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

#include "rmimo/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace rmimo::linalg
{

CMat hermitian_part(const CMat &a)
{
    return 0.5 * (a + a.adjoint());
}

double hermitian_defect(const CMat &a)
{
    const double norm = a.norm();
    if (norm == 0.0)
        return 0.0;
    return (a - a.adjoint()).norm() / norm;
}

RVec hermitian_eigenvalues(const CMat &a)
{
    if (a.size() == 0)
        return RVec();
    Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian_part(a), Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double spectral_norm_psd(const CMat &a)
{
    if (a.size() == 0)
        return 0.0;
    return hermitian_eigenvalues(a).maxCoeff();
}

CMat psd_repair(const CMat &r, double rel_tol)
{
    CMat out = hermitian_part(r);
    const auto m = out.rows();
    if (m == 0)
        return out;

    const double scale = std::abs(out.trace().real()) / static_cast<double>(m);
    if (scale == 0.0)
        return CMat::Zero(m, m);

    CMat shifted = out;
    shifted.diagonal().array() += rel_tol * scale;
    Eigen::LLT<CMat> llt(shifted);
    if (llt.info() == Eigen::Success)
        return out;

    Eigen::SelfAdjointEigenSolver<CMat> solver(out);
    RVec lambda = solver.eigenvalues().cwiseMax(0.0);
    out = solver.eigenvectors() * lambda.asDiagonal() * solver.eigenvectors().adjoint();
    return hermitian_part(out);
}

CMat hermitian_sqrt(const CMat &r)
{
    if (r.size() == 0)
        return r;
    Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian_part(r));
    RVec root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().adjoint();
}

CMat hermitian_inverse(const CMat &a)
{
    Eigen::LLT<CMat> llt(hermitian_part(a));
    if (llt.info() != Eigen::Success)
        throw std::domain_error("matrix is not Hermitian positive definite");
    CMat inv = llt.solve(CMat::Identity(a.rows(), a.cols()));
    return hermitian_part(inv);
}

} // namespace rmimo::linalg
