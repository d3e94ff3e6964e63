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

// Two-photon Fock-space model of the post-selected linear-optics CPHASE gate.
//
// The gate is a central polarization-dependent beam splitter (T_H = 1, T_V = 1/3)
// followed by one attenuating beam splitter on each output (T_H = 1/3, T_V = 1).
// Success is a coincidence: exactly one photon in each of the two output ports.
//
// Photons carry a two-dimensional internal degree of freedom (spectral/temporal
// wavepacket). Photon b always enters with internal label 0; photon c enters in
// v|0> + sqrt(1 - v^2)|1>, so v is the wavepacket overlap between them. Tracing
// the internal labels out of the coincidence amplitudes yields the Kraus set.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "bellgate/qcore.hpp"

namespace bellgate {

enum class Polarization : std::uint8_t { H = 0, V = 1 };

/// Ports 0 and 1 are the gate's two spatial modes; each has its own loss sink.
inline constexpr int kPortCount = 2;
inline constexpr int sink_of(int port) {
    return kPortCount + port;
}
inline constexpr bool is_sink(int spatial) {
    return spatial >= kPortCount;
}

struct PhotonMode {
    int spatial = 0;
    Polarization polarization = Polarization::H;
    int internal = 0;

    auto operator<=>(const PhotonMode &) const = default;
};

/// Sorted multiset of occupied modes (one entry per photon).
using ModeMultiset = std::vector<PhotonMode>;

/// Superposition of Fock basis states with a fixed photon number.
///
/// Amplitudes are with respect to normalized Fock states, so `norm_squared` is
/// the ordinary probability norm even when two photons share a mode.
class FockState {
   public:
    FockState() = default;

    /// Adds `amplitude` to the normalized Fock state with the given photons.
    void add(ModeMultiset photons, Complex amplitude);

    const std::map<ModeMultiset, Complex> &terms() const noexcept {
        return terms_;
    }
    double norm_squared() const;
    /// Photon number shared by every term; 0 for the empty state.
    int photon_number() const;

   private:
    std::map<ModeMultiset, Complex> terms_;
};

struct PdbsSpec {
    double transmission_h = 1.0;
    double transmission_v = 1.0;

    double transmission(Polarization p) const {
        return p == Polarization::H ? transmission_h : transmission_v;
    }
};

/// Central gate splitter.
inline constexpr PdbsSpec kGateSplitter{1.0, 1.0 / 3.0};
/// Output attenuators, reversed ratio.
inline constexpr PdbsSpec kOutputAttenuator{1.0 / 3.0, 1.0};

/// Two-port polarization-dependent beam splitter. Transmission is real, reflection picks up i.
/// Throws InvalidArgument if any photon already sits in a loss sink.
FockState pdbs_apply(const FockState &state, const PdbsSpec &spec);

/// Attenuates each output port; the reflected amplitude goes to that port's loss sink.
FockState output_attenuators(const FockState &state, const PdbsSpec &spec = kOutputAttenuator);

/// Full gate propagation: central splitter, then both attenuators.
FockState propagate_gate(const FockState &state);

/// Internal labels found at (port 0, port 1) in a coincidence.
using InternalConfig = std::array<int, 2>;

/// Coincidence amplitudes over the output polarization basis, index 2*p0 + p1,
/// one vector per internal-label configuration.
using CoincidenceBlock = std::map<InternalConfig, Eigen::Vector4cd>;

/// Projects onto exactly one photon per port and groups amplitudes by internal configuration.
CoincidenceBlock coincidence_block(const FockState &state);

/// Photon pair entering the gate for a two-qubit polarization input `psi`
/// (index 2*p_b + p_c) with wavepacket overlap `overlap`.
FockState gate_input_state(const Eigen::Vector4cd &psi, double overlap);

/// Post-selected gate as a trace-decreasing CP map on the (b, c) polarization qubits.
struct GateChannel {
    double overlap = 1.0;
    std::vector<Eigen::Matrix4cd> kraus;

    /// Sum_k K_k^dagger K_k.
    Eigen::Matrix4cd effect() const;
    /// Sum_k Tr[K_k rho K_k^dagger] for a 4x4 rho.
    double success_probability(const Matrix &rho) const;
};

/// Builds the Kraus set for overlap v in [0, 1] by propagating the four basis inputs
/// through the Fock model. At v = 1 this is the single operator diag(1, 1, 1, -1) / 3.
GateChannel gate_channel(double overlap);

struct ChannelOutput {
    DensityMatrix state;
    double success_probability;
};

/// Applies the channel to a two-qubit state and renormalizes. Throws NoSuccessError if p < 1e-15.
ChannelOutput apply_channel(const DensityMatrix &rho, const GateChannel &channel);

/// Coincidence distribution over output polarizations (index 2*p0 + p1), summed over
/// internal labels, computed directly from the Fock propagation of `psi`.
std::array<double, 4> fock_coincidence_distribution(const Eigen::Vector4cd &psi, double overlap);

}  // namespace bellgate
