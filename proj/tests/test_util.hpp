// Copyright 2026 The Bellgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <random>

#include "bellgate/qcore.hpp"

namespace bellgate::testing {

inline Vector random_ket(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
    return v / v.norm();
}

inline Matrix random_unitary(Eigen::Index dim, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    Eigen::HouseholderQR<Matrix> qr(m);
    return qr.householderQ() * Matrix::Identity(dim, dim);
}

// Random full-rank state: G G^dagger / Tr with Ginibre G.
inline DensityMatrix random_density(const Labels &labels, std::mt19937_64 &rng) {
    const Eigen::Index dim = Eigen::Index{1} << labels.size();
    std::normal_distribution<double> g;
    Matrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    }
    Matrix rho = m * m.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix::hermitian_unit_trace(rho, labels);
}

inline double max_abs(const Matrix &m) {
    return m.cwiseAbs().maxCoeff();
}

}  // namespace bellgate::testing
