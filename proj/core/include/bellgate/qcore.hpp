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

// Small dense linear algebra over polarization qubits.
//
// Basis convention: a state over labels (l0, l1, ..., l{n-1}) is indexed so that
// the k-th label owns the k-th most significant bit of the basis index, with
// H = 0 and V = 1. This matches the ordering of an ordinary Kronecker product,
// so |H>_a (x) |V>_b lives at index 0b01 = 1.

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bellgate/error.hpp"

namespace bellgate {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Labels = std::vector<std::string>;

inline constexpr double kExactTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-9;

class DensityMatrix;

/// Normalized pure state over labelled qubits.
class PureState {
   public:
    PureState(Vector amplitudes, Labels labels);

    const Vector &amplitudes() const noexcept {
        return amplitudes_;
    }
    const Labels &labels() const noexcept {
        return labels_;
    }
    int num_qubits() const noexcept {
        return static_cast<int>(labels_.size());
    }
    Eigen::Index dim() const noexcept {
        return amplitudes_.size();
    }

    /// |psi><psi| with the same labels.
    DensityMatrix projector() const;

   private:
    Vector amplitudes_;
    Labels labels_;
};

/// Hermitian, unit-trace matrix over labelled qubits.
///
/// The default constructor-path checks positivity as well. Reconstruction
/// intermediates (linear inversion) may legitimately be slightly non-physical;
/// those go through `DensityMatrix::hermitian_unit_trace`.
class DensityMatrix {
   public:
    DensityMatrix(Matrix entries, Labels labels);

    static DensityMatrix hermitian_unit_trace(Matrix entries, Labels labels);
    static DensityMatrix maximally_mixed(Labels labels);

    const Matrix &matrix() const noexcept {
        return entries_;
    }
    const Labels &labels() const noexcept {
        return labels_;
    }
    int num_qubits() const noexcept {
        return static_cast<int>(labels_.size());
    }
    Eigen::Index dim() const noexcept {
        return entries_.rows();
    }

    double purity() const;
    double min_eigenvalue() const;
    bool is_physical(double tolerance = kPsdTolerance) const;

    /// Index of `label`, or throws InvalidArgument.
    int position_of(std::string_view label) const;

    /// Same state with the qubit labels renamed (order and matrix unchanged).
    DensityMatrix relabeled(Labels labels) const;

   private:
    struct Unchecked {};
    DensityMatrix(Matrix entries, Labels labels, Unchecked);

    Matrix entries_;
    Labels labels_;
};

/// Hermitian operator over labelled qubits.
class Observable {
   public:
    Observable(Matrix entries, Labels labels);

    const Matrix &matrix() const noexcept {
        return entries_;
    }
    const Labels &labels() const noexcept {
        return labels_;
    }

   private:
    Matrix entries_;
    Labels labels_;
};

// Single-qubit building blocks.
Matrix identity(Eigen::Index dim);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
/// Pauli operator basis {1, X, Y, Z} by index 0..3.
Matrix pauli(int index);
Matrix hadamard();

Vector ket_h();
Vector ket_v();
Vector ket_plus();   // +45 deg
Vector ket_minus();  // -45 deg
Vector ket_r();      // (|H> + i|V>)/sqrt(2)
Vector ket_l();      // (|H> - i|V>)/sqrt(2)

/// Single-qubit polarization ket by name: one of H, V, +, -, R, L.
Vector polarization_ket(std::string_view name);

PureState kron(const PureState &a, const PureState &b);
DensityMatrix kron(const DensityMatrix &a, const DensityMatrix &b);
Observable kron(const Observable &a, const Observable &b);

/// Reduced state on `keep`; kept qubits retain their original relative order.
DensityMatrix partial_trace(const DensityMatrix &rho, const Labels &keep);

/// Same state with qubits reordered to `order` (a permutation of rho.labels()).
DensityMatrix reorder(const DensityMatrix &rho, const Labels &order);

/// Partial transpose on one qubit. The result is generally not a valid state.
Matrix partial_transpose(const DensityMatrix &rho, std::string_view label);

/// Lifts `op`, acting on `targets` in the given order, to the full space over `labels`.
Matrix embed(const Matrix &op, const Labels &targets, const Labels &labels);

/// U rho U^dagger on the qubits `targets` of rho.
DensityMatrix apply_unitary(const DensityMatrix &rho, const Matrix &unitary, const Labels &targets);

/// +/-1 valued observable for linear-polarization analysis at angle `theta_degrees`:
/// cos(2 theta) Z + sin(2 theta) X.
Observable analyzer_observable(double theta_degrees, std::string label = {});

/// Tr[rho obs]. Observable labels, when given, must be a permutation of rho's labels.
double expectation(const DensityMatrix &rho, const Observable &obs);

/// Sum of singular values.
double trace_norm(const Matrix &m);

/// Whether `m` is Hermitian within `tolerance` (max-abs entry difference).
bool is_hermitian(const Matrix &m, double tolerance = kExactTolerance);

/// Trace distance (1/2)||a - b||_1 between two matrices of equal size.
double trace_distance(const Matrix &a, const Matrix &b);

}  // namespace bellgate
