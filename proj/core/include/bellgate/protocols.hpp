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

// Bell-state analysis with the CPHASE gate, teleportation and entanglement swapping.
//
// The gate maps the four "tilde" Bell states, e.g. |phi~+> = (|H+> + |V->)/sqrt(2),
// onto the four +/-45 degree product states, so detecting a product state behind
// the gate identifies the Bell state in front of it:
//
//   phi~+ <-> ++    psi~+ <-> +-    phi~- <-> -+    psi~- <-> --

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "bellgate/fockgate.hpp"
#include "bellgate/qcore.hpp"

namespace bellgate {

enum class TildeBell { PhiPlus, PsiPlus, PhiMinus, PsiMinus };
enum class ProductOutcome { PlusPlus, PlusMinus, MinusPlus, MinusMinus };

inline constexpr std::array<ProductOutcome, 4> kProductOutcomes{
    ProductOutcome::PlusPlus, ProductOutcome::PlusMinus, ProductOutcome::MinusPlus, ProductOutcome::MinusMinus};
inline constexpr std::array<TildeBell, 4> kTildeBells{
    TildeBell::PhiPlus, TildeBell::PsiPlus, TildeBell::PhiMinus, TildeBell::PsiMinus};

TildeBell bell_for(ProductOutcome outcome);
ProductOutcome product_for(TildeBell bell);

std::string_view to_string(TildeBell bell);          // "phi+", "psi+", "phi-", "psi-"
std::string_view to_string(ProductOutcome outcome);  // "++", "+-", "-+", "--"
TildeBell parse_tilde_bell(std::string_view label);

PureState tilde_bell(TildeBell which, Labels labels = {"b", "c"});
PureState tilde_bell(std::string_view label, Labels labels = {"b", "c"});

struct BsaOutcome {
    ProductOutcome product;
    TildeBell bell;
    /// Joint probability of gate success and this outcome.
    double probability = 0.0;
    /// Normalized state of the remaining qubits; empty when probability is 0.
    std::optional<DensityMatrix> conditional;
};

struct BsaResult {
    std::array<BsaOutcome, 4> outcomes;
    /// Mass lost to gate non-coincidence.
    double failure_probability = 0.0;

    double success_probability() const;
};

/// Runs the gate on qubits (b, c) of `rho`, then projects b and c onto +/-45 degrees.
/// Remaining qubits keep their relative order in the conditionals.
/// Throws NoSuccessError if the total success probability is below 1e-15.
BsaResult bsa(const DensityMatrix &rho, const GateChannel &channel, const std::string &b = "b",
              const std::string &c = "c");
BsaResult bsa(const DensityMatrix &rho, double overlap, const std::string &b = "b", const std::string &c = "c");

enum class Correction { Identity, SigmaX, SigmaZ, ISigmaY };

inline constexpr std::array<Correction, 4> kCorrections{
    Correction::Identity, Correction::SigmaX, Correction::SigmaZ, Correction::ISigmaY};

Matrix correction_unitary(Correction correction);
std::string_view to_string(Correction correction);

/// Outcome-dependent Pauli correction for teleportation.
Correction teleport_correction(ProductOutcome outcome);

/// Fixed rotation of the analysis frame in output mode a (half-wave plate at 22.5 deg).
/// With a |phi+> pair the tilde-basis analysis leaves mode a Hadamard-rotated; this
/// frame makes the residual byproduct a Pauli operator.
Matrix teleport_output_frame();

struct ProtocolBranch {
    ProductOutcome outcome;
    TildeBell bell;
    double probability = 0.0;
    std::optional<DensityMatrix> state;
    /// Set when the correction has been applied to `state`.
    std::optional<Correction> correction;
};

struct ProtocolResult {
    std::array<ProtocolBranch, 4> branches;
    double failure_probability = 0.0;

    double success_probability() const;
    /// Branch states mixed with their (renormalized) probabilities.
    DensityMatrix average_state() const;
};

/// Teleports the state of mode c onto mode a using the pair on (a, b).
/// Input and pair labels are ignored and replaced by c and (a, b).
ProtocolResult teleport(const DensityMatrix &input_c, const DensityMatrix &pair_ab, double overlap, bool correct);
ProtocolResult teleport(const DensityMatrix &input_c, const DensityMatrix &pair_ab, const GateChannel &channel,
                        bool correct);

/// Entanglement swapping: Bell analysis on (b, c) leaves (a, d) in the matching tilde Bell state.
ProtocolResult swap(const DensityMatrix &pair_ab, const DensityMatrix &pair_cd, double overlap);
ProtocolResult swap(const DensityMatrix &pair_ab, const DensityMatrix &pair_cd, const GateChannel &channel);

}  // namespace bellgate
