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

// Noisy entangled pairs and heralded single-photon inputs.
// Noise is isotropic: a weight `mixedness` of the maximally mixed state is admixed.

#include <string>
#include <string_view>
#include <vector>

#include "bellgate/qcore.hpp"

namespace bellgate {

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

/// Standard Bell state, e.g. |phi+> = (|HH> + |VV>)/sqrt(2).
PureState bell_state(BellState which, Labels labels = {"a", "b"});

struct PairSpec {
    BellState target = BellState::PhiPlus;
    double mixedness = 0.0;
    Labels labels = {"a", "b"};
};

struct InputSpec {
    std::string name;  // H, V, +, R, ... or "custom"
    Eigen::Vector2cd amplitudes = Eigen::Vector2cd(1.0, 0.0);
    double mixedness = 0.0;

    /// One of H, V, +, -, R, L.
    static InputSpec named(std::string_view name, double mixedness = 0.0);
    static InputSpec custom(Complex alpha, Complex beta, double mixedness = 0.0);
};

/// (1 - lambda)|Bell><Bell| + lambda I/4.
DensityMatrix make_pair(const PairSpec &spec);

/// (1 - lambda)|chi><chi| + lambda I/2 on a single qubit.
DensityMatrix make_input(const InputSpec &spec, std::string label = "c");

/// Ideal pure ket of an input spec (mixedness ignored).
PureState input_ket(const InputSpec &spec, std::string label = "c");

/// {H, V, +, R}, in that order.
std::vector<InputSpec> tomographic_input_set(double mixedness = 0.0);

}  // namespace bellgate
