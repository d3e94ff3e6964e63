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

#include "bellgate/fockgate.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>

namespace bellgate {
namespace {

constexpr double kDropAmplitude = 1e-15;

// sqrt(prod_m n_m!) for a sorted multiset.
double occupation_factor(const ModeMultiset &photons) {
    double factor = 1.0;
    std::size_t i = 0;
    while (i < photons.size()) {
        std::size_t j = i;
        while (j < photons.size() && photons[j] == photons[i]) ++j;
        for (std::size_t k = 2; k <= j - i; ++k) factor *= static_cast<double>(k);
        i = j;
    }
    return std::sqrt(factor);
}

using ModeImage = std::vector<std::pair<PhotonMode, Complex>>;

// Applies a linear map on creation operators photon by photon. Amplitudes are
// converted to creation-operator monomial coefficients first, expanded, then
// converted back to normalized Fock amplitudes.
template <typename Map>
FockState transform_modes(const FockState &state, Map &&image_of) {
    std::map<ModeMultiset, Complex> monomials;
    for (const auto &[photons, amplitude] : state.terms()) {
        std::vector<std::pair<ModeMultiset, Complex>> partial{{ModeMultiset{}, amplitude / occupation_factor(photons)}};
        for (const auto &photon : photons) {
            const ModeImage image = image_of(photon);
            std::vector<std::pair<ModeMultiset, Complex>> next;
            next.reserve(partial.size() * image.size());
            for (const auto &[modes, coeff] : partial) {
                for (const auto &[target, weight] : image) {
                    if (std::abs(weight) == 0.0) continue;
                    ModeMultiset extended = modes;
                    extended.push_back(target);
                    next.emplace_back(std::move(extended), coeff * weight);
                }
            }
            partial = std::move(next);
        }
        for (auto &[modes, coeff] : partial) {
            std::sort(modes.begin(), modes.end());
            monomials[modes] += coeff;
        }
    }
    FockState out;
    for (const auto &[modes, coeff] : monomials) {
        out.add(modes, coeff * occupation_factor(modes));
    }
    return out;
}

void check_unit_interval(double t, const char *what) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw InvalidArgument(std::string(what) + " must lie in [0, 1]");
    }
}

}  // namespace

void FockState::add(ModeMultiset photons, Complex amplitude) {
    if (std::abs(amplitude) < kDropAmplitude) return;
    std::sort(photons.begin(), photons.end());
    if (!terms_.empty() && terms_.begin()->first.size() != photons.size()) {
        throw InvalidArgument("FockState: photon number must be identical across terms");
    }
    auto [it, inserted] = terms_.try_emplace(std::move(photons), amplitude);
    if (!inserted) {
        it->second += amplitude;
        if (std::abs(it->second) < kDropAmplitude) terms_.erase(it);
    }
}

double FockState::norm_squared() const {
    double sum = 0.0;
    for (const auto &[photons, amplitude] : terms_) sum += std::norm(amplitude);
    return sum;
}

int FockState::photon_number() const {
    return terms_.empty() ? 0 : static_cast<int>(terms_.begin()->first.size());
}

FockState pdbs_apply(const FockState &state, const PdbsSpec &spec) {
    check_unit_interval(spec.transmission_h, "PDBS transmission T_H");
    check_unit_interval(spec.transmission_v, "PDBS transmission T_V");
    for (const auto &[photons, amplitude] : state.terms()) {
        for (const auto &p : photons) {
            if (is_sink(p.spatial)) throw InvalidArgument("pdbs_apply: photon in a loss sink");
            if (p.spatial < 0) throw InvalidArgument("pdbs_apply: invalid spatial mode");
        }
    }
    return transform_modes(state, [&](const PhotonMode &m) {
        const double t = std::sqrt(spec.transmission(m.polarization));
        const double r = std::sqrt(1.0 - spec.transmission(m.polarization));
        PhotonMode through = m;
        PhotonMode across = m;
        across.spatial = 1 - m.spatial;
        return ModeImage{{through, Complex(t, 0.0)}, {across, Complex(0.0, r)}};
    });
}

FockState output_attenuators(const FockState &state, const PdbsSpec &spec) {
    check_unit_interval(spec.transmission_h, "attenuator transmission T_H");
    check_unit_interval(spec.transmission_v, "attenuator transmission T_V");
    return transform_modes(state, [&](const PhotonMode &m) {
        if (is_sink(m.spatial)) return ModeImage{{m, Complex(1.0, 0.0)}};
        const double t = std::sqrt(spec.transmission(m.polarization));
        const double r = std::sqrt(1.0 - spec.transmission(m.polarization));
        PhotonMode lost = m;
        lost.spatial = sink_of(m.spatial);
        return ModeImage{{m, Complex(t, 0.0)}, {lost, Complex(0.0, r)}};
    });
}

FockState propagate_gate(const FockState &state) {
    return output_attenuators(pdbs_apply(state, kGateSplitter), kOutputAttenuator);
}

CoincidenceBlock coincidence_block(const FockState &state) {
    CoincidenceBlock block;
    for (const auto &[photons, amplitude] : state.terms()) {
        if (photons.size() != 2) continue;
        // Sorted, so a coincidence has port 0 first and port 1 second.
        if (photons[0].spatial != 0 || photons[1].spatial != 1) continue;
        const InternalConfig config{photons[0].internal, photons[1].internal};
        const int index = 2 * static_cast<int>(photons[0].polarization) + static_cast<int>(photons[1].polarization);
        auto [it, inserted] = block.try_emplace(config, Eigen::Vector4cd::Zero());
        it->second(index) += amplitude;
    }
    return block;
}

FockState gate_input_state(const Eigen::Vector4cd &psi, double overlap) {
    check_unit_interval(overlap, "overlap v");
    const double orthogonal = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
    FockState state;
    for (int pb = 0; pb < 2; ++pb) {
        for (int pc = 0; pc < 2; ++pc) {
            const Complex a = psi(2 * pb + pc);
            if (a == Complex(0.0, 0.0)) continue;
            const PhotonMode b{0, static_cast<Polarization>(pb), 0};
            state.add({b, PhotonMode{1, static_cast<Polarization>(pc), 0}}, a * overlap);
            state.add({b, PhotonMode{1, static_cast<Polarization>(pc), 1}}, a * orthogonal);
        }
    }
    return state;
}

Eigen::Matrix4cd GateChannel::effect() const {
    Eigen::Matrix4cd sum = Eigen::Matrix4cd::Zero();
    for (const auto &k : kraus) sum += k.adjoint() * k;
    return sum;
}

double GateChannel::success_probability(const Matrix &rho) const {
    if (rho.rows() != 4 || rho.cols() != 4) {
        throw InvalidArgument("GateChannel: expected a two-qubit state");
    }
    return (effect() * rho).trace().real();
}

GateChannel gate_channel(double overlap) {
    check_unit_interval(overlap, "overlap v");
    std::map<InternalConfig, Eigen::Matrix4cd> columns;
    for (int input = 0; input < 4; ++input) {
        const Eigen::Vector4cd basis = Eigen::Vector4cd::Unit(input);
        const CoincidenceBlock block = coincidence_block(propagate_gate(gate_input_state(basis, overlap)));
        for (const auto &[config, amplitudes] : block) {
            auto [it, inserted] = columns.try_emplace(config, Eigen::Matrix4cd::Zero());
            it->second.col(input) = amplitudes;
        }
    }
    GateChannel channel;
    channel.overlap = overlap;
    for (const auto &[config, k] : columns) {
        if (k.cwiseAbs().maxCoeff() > 1e-14) channel.kraus.push_back(k);
    }
    return channel;
}

ChannelOutput apply_channel(const DensityMatrix &rho, const GateChannel &channel) {
    if (rho.num_qubits() != 2) {
        throw InvalidArgument("apply_channel: expected a two-qubit state");
    }
    Matrix out = Matrix::Zero(4, 4);
    for (const auto &k : channel.kraus) out += k * rho.matrix() * k.adjoint();
    const double p = out.trace().real();
    if (p < 1e-15) throw NoSuccessError("apply_channel: gate success probability vanishes");
    return ChannelOutput{DensityMatrix(out / p, rho.labels()), p};
}

std::array<double, 4> fock_coincidence_distribution(const Eigen::Vector4cd &psi, double overlap) {
    std::array<double, 4> dist{};
    const CoincidenceBlock block = coincidence_block(propagate_gate(gate_input_state(psi, overlap)));
    for (const auto &[config, amplitudes] : block) {
        for (int i = 0; i < 4; ++i) dist[static_cast<std::size_t>(i)] += std::norm(amplitudes(i));
    }
    return dist;
}

}  // namespace bellgate
