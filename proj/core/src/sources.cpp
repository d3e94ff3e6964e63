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

#include "bellgate/sources.hpp"

#include <cmath>
#include <numbers>

namespace bellgate {
namespace {

void check_mixedness(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw InvalidArgument("mixedness must lie in [0, 1]");
    }
}

}  // namespace

PureState bell_state(BellState which, Labels labels) {
    Vector v = Vector::Zero(4);
    const double s = 1.0 / std::numbers::sqrt2;
    switch (which) {
        case BellState::PhiPlus:
            v << s, 0, 0, s;
            break;
        case BellState::PhiMinus:
            v << s, 0, 0, -s;
            break;
        case BellState::PsiPlus:
            v << 0, s, s, 0;
            break;
        case BellState::PsiMinus:
            v << 0, s, -s, 0;
            break;
    }
    return PureState(std::move(v), std::move(labels));
}

InputSpec InputSpec::named(std::string_view name, double mixedness) {
    const Vector ket = polarization_ket(name);
    InputSpec spec;
    spec.name = std::string(name);
    spec.amplitudes = Eigen::Vector2cd(ket(0), ket(1));
    spec.mixedness = mixedness;
    return spec;
}

InputSpec InputSpec::custom(Complex alpha, Complex beta, double mixedness) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kNormTolerance) {
        throw InvalidArgument("InputSpec: |alpha|^2 + |beta|^2 must be 1");
    }
    InputSpec spec;
    spec.name = "custom";
    spec.amplitudes = Eigen::Vector2cd(alpha, beta);
    spec.mixedness = mixedness;
    return spec;
}

DensityMatrix make_pair(const PairSpec &spec) {
    check_mixedness(spec.mixedness);
    const PureState bell = bell_state(spec.target, spec.labels);
    const Matrix rho = (1.0 - spec.mixedness) * bell.projector().matrix() + spec.mixedness * identity(4) / 4.0;
    return DensityMatrix(rho, spec.labels);
}

PureState input_ket(const InputSpec &spec, std::string label) {
    return PureState(Vector(spec.amplitudes), Labels{std::move(label)});
}

DensityMatrix make_input(const InputSpec &spec, std::string label) {
    check_mixedness(spec.mixedness);
    const PureState ket = input_ket(spec, label);
    const Matrix rho = (1.0 - spec.mixedness) * ket.projector().matrix() + spec.mixedness * identity(2) / 2.0;
    return DensityMatrix(rho, Labels{std::move(label)});
}

std::vector<InputSpec> tomographic_input_set(double mixedness) {
    return {InputSpec::named("H", mixedness), InputSpec::named("V", mixedness), InputSpec::named("+", mixedness),
            InputSpec::named("R", mixedness)};
}

}  // namespace bellgate
