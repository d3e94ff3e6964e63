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

#include "bellgate/protocols.hpp"

#include <numbers>

namespace bellgate {
namespace {

std::size_t index_of(ProductOutcome o) {
    return static_cast<std::size_t>(o);
}

Vector product_ket(ProductOutcome o) {
    const bool first_plus = o == ProductOutcome::PlusPlus || o == ProductOutcome::PlusMinus;
    const bool second_plus = o == ProductOutcome::PlusPlus || o == ProductOutcome::MinusPlus;
    const Vector b = first_plus ? ket_plus() : ket_minus();
    const Vector c = second_plus ? ket_plus() : ket_minus();
    Vector out(4);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out(2 * i + j) = b(i) * c(j);
    }
    return out;
}

DensityMatrix normalized(const Matrix &unnormalized, double p, const Labels &labels) {
    return DensityMatrix(unnormalized / p, labels);
}

}  // namespace

TildeBell bell_for(ProductOutcome outcome) {
    return kTildeBells[index_of(outcome)];
}

ProductOutcome product_for(TildeBell bell) {
    return kProductOutcomes[static_cast<std::size_t>(bell)];
}

std::string_view to_string(TildeBell bell) {
    switch (bell) {
        case TildeBell::PhiPlus:
            return "phi+";
        case TildeBell::PsiPlus:
            return "psi+";
        case TildeBell::PhiMinus:
            return "phi-";
        case TildeBell::PsiMinus:
            return "psi-";
    }
    return "?";
}

std::string_view to_string(ProductOutcome outcome) {
    switch (outcome) {
        case ProductOutcome::PlusPlus:
            return "++";
        case ProductOutcome::PlusMinus:
            return "+-";
        case ProductOutcome::MinusPlus:
            return "-+";
        case ProductOutcome::MinusMinus:
            return "--";
    }
    return "?";
}

TildeBell parse_tilde_bell(std::string_view label) {
    for (TildeBell b : kTildeBells) {
        if (to_string(b) == label) return b;
    }
    throw InvalidArgument("unknown tilde Bell label '" + std::string(label) + "'");
}

PureState tilde_bell(TildeBell which, Labels labels) {
    // First qubit in H/V, second in the diagonal basis.
    const double s = 1.0 / std::numbers::sqrt2;
    Vector first_h, first_v;
    switch (which) {
        case TildeBell::PhiPlus:
            first_h = ket_plus(), first_v = ket_minus();
            break;
        case TildeBell::PhiMinus:
            first_h = ket_plus(), first_v = -ket_minus();
            break;
        case TildeBell::PsiPlus:
            first_h = ket_minus(), first_v = ket_plus();
            break;
        case TildeBell::PsiMinus:
            first_h = ket_minus(), first_v = -ket_plus();
            break;
    }
    Vector v(4);
    v << s * first_h(0), s * first_h(1), s * first_v(0), s * first_v(1);
    return PureState(std::move(v), std::move(labels));
}

PureState tilde_bell(std::string_view label, Labels labels) {
    return tilde_bell(parse_tilde_bell(label), std::move(labels));
}

double BsaResult::success_probability() const {
    double p = 0.0;
    for (const auto &o : outcomes) p += o.probability;
    return p;
}

BsaResult bsa(const DensityMatrix &rho, const GateChannel &channel, const std::string &b, const std::string &c) {
    if (b == c) throw InvalidArgument("bsa: the two analysed modes must differ");
    rho.position_of(b);
    rho.position_of(c);

    Labels order;
    for (const auto &l : rho.labels()) {
        if (l != b && l != c) order.push_back(l);
    }
    const Labels spectators = order;
    order.push_back(b);
    order.push_back(c);
    const DensityMatrix arranged = reorder(rho, order);

    const Eigen::Index spec_dim = Eigen::Index{1} << spectators.size();

    BsaResult result;
    double total = 0.0;
    for (ProductOutcome o : kProductOutcomes) {
        const Vector ket = product_ket(o);
        Matrix sigma = Matrix::Zero(spec_dim, spec_dim);
        for (const auto &k : channel.kraus) {
            const Eigen::RowVectorXcd row = ket.adjoint() * k;
            // F = 1_spec (x) <o|K, a (spec_dim) x (4 spec_dim) map.
            Matrix f = Matrix::Zero(spec_dim, 4 * spec_dim);
            for (Eigen::Index s = 0; s < spec_dim; ++s) {
                for (Eigen::Index j = 0; j < 4; ++j) f(s, s * 4 + j) = row(j);
            }
            sigma += f * arranged.matrix() * f.adjoint();
        }
        const double p = sigma.trace().real();
        BsaOutcome outcome{o, bell_for(o), p > 0.0 ? p : 0.0, std::nullopt};
        if (p > 1e-15) outcome.conditional = normalized(sigma, p, spectators);
        result.outcomes[index_of(o)] = std::move(outcome);
        total += result.outcomes[index_of(o)].probability;
    }
    if (total < 1e-15) throw NoSuccessError("bsa: gate success probability vanishes");
    result.failure_probability = 1.0 - total;
    return result;
}

BsaResult bsa(const DensityMatrix &rho, double overlap, const std::string &b, const std::string &c) {
    return bsa(rho, gate_channel(overlap), b, c);
}

Matrix correction_unitary(Correction correction) {
    switch (correction) {
        case Correction::Identity:
            return identity(2);
        case Correction::SigmaX:
            return pauli_x();
        case Correction::SigmaZ:
            return pauli_z();
        case Correction::ISigmaY:
            return Complex(0.0, 1.0) * pauli_y();
    }
    return identity(2);
}

std::string_view to_string(Correction correction) {
    switch (correction) {
        case Correction::Identity:
            return "1";
        case Correction::SigmaX:
            return "sx";
        case Correction::SigmaZ:
            return "sz";
        case Correction::ISigmaY:
            return "isy";
    }
    return "?";
}

Correction teleport_correction(ProductOutcome outcome) {
    // Derived once by exhaustive search over the four Pauli corrections
    // (see tests/unit/test_protocols.cpp, CorrectionTableMatchesBruteForce).
    switch (outcome) {
        case ProductOutcome::PlusPlus:
            return Correction::Identity;
        case ProductOutcome::PlusMinus:
            return Correction::SigmaZ;
        case ProductOutcome::MinusPlus:
            return Correction::SigmaX;
        case ProductOutcome::MinusMinus:
            return Correction::ISigmaY;
    }
    return Correction::Identity;
}

Matrix teleport_output_frame() {
    return hadamard();
}

double ProtocolResult::success_probability() const {
    double p = 0.0;
    for (const auto &b : branches) p += b.probability;
    return p;
}

DensityMatrix ProtocolResult::average_state() const {
    const double total = success_probability();
    if (total < 1e-15) throw NoSuccessError("average_state: no successful branch");
    Matrix acc;
    Labels labels;
    for (const auto &b : branches) {
        if (!b.state) continue;
        if (acc.size() == 0) {
            acc = Matrix::Zero(b.state->dim(), b.state->dim());
            labels = b.state->labels();
        }
        acc += (b.probability / total) * b.state->matrix();
    }
    return DensityMatrix(acc, labels);
}

ProtocolResult teleport(const DensityMatrix &input_c, const DensityMatrix &pair_ab, const GateChannel &channel,
                        bool correct) {
    if (input_c.num_qubits() != 1) throw InvalidArgument("teleport: input must be a single qubit");
    if (pair_ab.num_qubits() != 2) throw InvalidArgument("teleport: pair must be two qubits");
    const DensityMatrix full = kron(pair_ab.relabeled({"a", "b"}), input_c.relabeled({"c"}));
    const BsaResult analysis = bsa(full, channel, "b", "c");

    const Matrix frame = teleport_output_frame();
    ProtocolResult result;
    result.failure_probability = analysis.failure_probability;
    for (std::size_t i = 0; i < 4; ++i) {
        const BsaOutcome &o = analysis.outcomes[i];
        ProtocolBranch branch{o.product, o.bell, o.probability, std::nullopt, std::nullopt};
        if (o.conditional) {
            Matrix u = frame;
            if (correct) {
                const Correction corr = teleport_correction(o.product);
                u = correction_unitary(corr) * frame;
                branch.correction = corr;
            }
            branch.state = apply_unitary(*o.conditional, u, {"a"});
        }
        result.branches[i] = std::move(branch);
    }
    return result;
}

ProtocolResult teleport(const DensityMatrix &input_c, const DensityMatrix &pair_ab, double overlap, bool correct) {
    return teleport(input_c, pair_ab, gate_channel(overlap), correct);
}

ProtocolResult swap(const DensityMatrix &pair_ab, const DensityMatrix &pair_cd, const GateChannel &channel) {
    if (pair_ab.num_qubits() != 2 || pair_cd.num_qubits() != 2) {
        throw InvalidArgument("swap: both pairs must be two-qubit states");
    }
    const DensityMatrix full = kron(pair_ab.relabeled({"a", "b"}), pair_cd.relabeled({"c", "d"}));
    const BsaResult analysis = bsa(full, channel, "b", "c");
    ProtocolResult result;
    result.failure_probability = analysis.failure_probability;
    for (std::size_t i = 0; i < 4; ++i) {
        const BsaOutcome &o = analysis.outcomes[i];
        result.branches[i] = ProtocolBranch{o.product, o.bell, o.probability, o.conditional, std::nullopt};
    }
    return result;
}

ProtocolResult swap(const DensityMatrix &pair_ab, const DensityMatrix &pair_cd, double overlap) {
    return swap(pair_ab, pair_cd, gate_channel(overlap));
}

}  // namespace bellgate
