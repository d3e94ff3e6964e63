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

// Pauli-basis state tomography (linear inversion and maximum likelihood) and
// single-qubit process tomography in the {1, X, Y, Z} operator basis.

#include <string>
#include <string_view>
#include <vector>

#include "bellgate/counts.hpp"
#include "bellgate/qcore.hpp"

namespace bellgate {

enum class PauliBasis : char { Z = 'Z', X = 'X', Y = 'Y' };

/// One analyser basis per qubit. Outcome '+' is the +1 eigenvector: H, +45 deg, R.
struct MeasurementSetting {
    std::vector<PauliBasis> bases;

    std::string id() const;
    int num_qubits() const {
        return static_cast<int>(bases.size());
    }
    static MeasurementSetting parse(std::string_view id);
};

/// Z, X, Y.
std::vector<MeasurementSetting> settings_1q();
/// All 9 ordered pairs of {Z, X, Y}.
std::vector<MeasurementSetting> settings_2q();
std::vector<MeasurementSetting> tomography_settings(int num_qubits);

/// "+", "-" for one qubit; "++", "+-", "-+", "--" for two; and so on.
std::vector<std::string> outcome_labels(int num_qubits);

Vector basis_ket(PauliBasis basis, char sign);
Matrix outcome_projector(const MeasurementSetting &setting, std::string_view outcome);
/// Born probabilities in outcome_labels order.
std::vector<double> outcome_probabilities(const DensityMatrix &rho, const MeasurementSetting &setting);

/// Default labels q0, q1, ... for reconstructed states.
Labels default_labels(int num_qubits);

/// Stokes reconstruction from corrected counts. Hermitian and unit trace, not necessarily PSD.
/// Throws InvalidArgument when a setting is missing or has no counts.
DensityMatrix linear_inversion(const CountTable &counts, Labels labels = {});

struct MleOptions {
    /// Stop when one iteration improves the mean log-likelihood by less than this.
    double likelihood_tolerance = 1e-9;
    /// Or when the gradient norm drops below this.
    double gradient_tolerance = 1e-7;
    int max_iterations = 10000;
};

struct MleResult {
    DensityMatrix state;
    int iterations = 0;
    /// Mean log-likelihood sum_i f_i log p_i, f_i the corrected relative frequencies.
    double log_likelihood = 0.0;
    /// Log-likelihood after every accepted iterate, starting with the initial point.
    std::vector<double> history;
};

/// Thrown when the iteration cap is hit. Carries the best iterate.
class MleConvergenceError : public NumericalError {
   public:
    MleConvergenceError(const std::string &what, MleResult best) : NumericalError(what), best_(std::move(best)) {
    }
    const MleResult &best() const noexcept {
        return best_;
    }

   private:
    MleResult best_;
};

/// Maximum-likelihood state over rho = T^dagger T / Tr(T^dagger T), T lower triangular,
/// started from the maximally mixed state and optimized with L-BFGS.
MleResult mle_fit_detailed(const CountTable &counts, const MleOptions &options = {}, Labels labels = {});
DensityMatrix mle_fit(const CountTable &counts, const MleOptions &options = {}, Labels labels = {});

/// Single-qubit channel E(rho) = sum_mn M_mn s_m rho s_n with s = {1, X, Y, Z}.
class ProcessMatrix {
   public:
    ProcessMatrix() : m_(Eigen::Matrix4cd::Zero()) {
    }
    explicit ProcessMatrix(const Eigen::Matrix4cd &m);

    const Eigen::Matrix4cd &matrix() const noexcept {
        return m_;
    }
    Complex entry(int m, int n) const {
        return m_(m, n);
    }
    Matrix apply(const Matrix &rho) const;

    /// The identity channel: a single 1 at (1, 1).
    static ProcessMatrix identity_channel();
    /// Conjugation by one Pauli operator (index 0..3).
    static ProcessMatrix pauli_channel(int index);

   private:
    Eigen::Matrix4cd m_;
};

/// Linear solve for M from known inputs and measured outputs, then Hermitian symmetrization.
/// Throws InvalidArgument when the inputs do not span the single-qubit operator space.
ProcessMatrix process_tomo(const std::vector<DensityMatrix> &inputs, const std::vector<DensityMatrix> &outputs);

/// Tr[M_theo M_exp], real part.
double process_fidelity(const ProcessMatrix &experimental, const ProcessMatrix &theoretical);

}  // namespace bellgate
