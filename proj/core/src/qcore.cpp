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

#include "bellgate/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <Eigen/Eigenvalues>

namespace bellgate {
namespace {

bool is_power_of_two(Eigen::Index n) {
    return n > 0 && (n & (n - 1)) == 0;
}

void check_labels(const Labels &labels, Eigen::Index dim, const char *what) {
    if (!is_power_of_two(dim)) {
        throw InvalidArgument(std::string(what) + ": dimension " + std::to_string(dim) + " is not a power of two");
    }
    if ((Eigen::Index{1} << labels.size()) != dim) {
        throw InvalidArgument(
            std::string(what) + ": " + std::to_string(labels.size()) + " labels do not match dimension " +
            std::to_string(dim));
    }
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) {
        throw InvalidArgument(std::string(what) + ": duplicate qubit label");
    }
}

Labels concat(const Labels &a, const Labels &b) {
    Labels out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

int find_label(const Labels &labels, std::string_view label) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw InvalidArgument("unknown qubit label '" + std::string(label) + "'");
    }
    return static_cast<int>(it - labels.begin());
}

// Bit of qubit `pos` in a basis index over n qubits (qubit 0 is the most significant).
inline std::size_t bit_of(std::size_t index, int pos, int n) {
    return (index >> (n - 1 - pos)) & 1U;
}

// Reads the bits at `positions` (in order) out of `index`, packed most-significant first.
std::size_t gather(std::size_t index, const std::vector<int> &positions, int n) {
    std::size_t out = 0;
    for (int p : positions) {
        out = (out << 1) | bit_of(index, p, n);
    }
    return out;
}

// Writes `value` (packed most-significant first) into the bits at `positions`.
std::size_t scatter(std::size_t index, std::size_t value, const std::vector<int> &positions, int n) {
    const int k = static_cast<int>(positions.size());
    for (int j = 0; j < k; ++j) {
        const std::size_t bit = (value >> (k - 1 - j)) & 1U;
        const std::size_t mask = std::size_t{1} << (n - 1 - positions[j]);
        index = bit ? (index | mask) : (index & ~mask);
    }
    return index;
}

std::vector<int> positions_of(const Labels &targets, const Labels &labels) {
    std::vector<int> out;
    out.reserve(targets.size());
    for (const auto &t : targets) {
        out.push_back(find_label(labels, t));
    }
    std::set<int> uniq(out.begin(), out.end());
    if (uniq.size() != out.size()) {
        throw InvalidArgument("duplicate target label");
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(Vector amplitudes, Labels labels) : amplitudes_(std::move(amplitudes)), labels_(std::move(labels)) {
    check_labels(labels_, amplitudes_.size(), "PureState");
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
        throw InvalidArgument("PureState: amplitudes are not normalized");
    }
}

DensityMatrix PureState::projector() const {
    return DensityMatrix(amplitudes_ * amplitudes_.adjoint(), labels_);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Matrix entries, Labels labels, Unchecked)
    : entries_(std::move(entries)), labels_(std::move(labels)) {
}

DensityMatrix DensityMatrix::hermitian_unit_trace(Matrix entries, Labels labels) {
    if (entries.rows() != entries.cols()) {
        throw InvalidArgument("DensityMatrix: matrix is not square");
    }
    check_labels(labels, entries.rows(), "DensityMatrix");
    if (!is_hermitian(entries)) {
        throw InvalidArgument("DensityMatrix: matrix is not Hermitian");
    }
    if (std::abs(entries.trace() - Complex{1.0, 0.0}) > kExactTolerance) {
        throw InvalidArgument("DensityMatrix: trace is not 1");
    }
    // Remove round-off asymmetry so downstream eigen solvers see an exactly Hermitian matrix.
    Matrix sym = (entries + entries.adjoint()) / 2.0;
    return DensityMatrix(std::move(sym), std::move(labels), Unchecked{});
}

DensityMatrix::DensityMatrix(Matrix entries, Labels labels) {
    *this = hermitian_unit_trace(std::move(entries), std::move(labels));
    if (min_eigenvalue() < -kPsdTolerance) {
        throw InvalidArgument("DensityMatrix: matrix has a negative eigenvalue");
    }
}

DensityMatrix DensityMatrix::maximally_mixed(Labels labels) {
    const Eigen::Index dim = Eigen::Index{1} << labels.size();
    return DensityMatrix(identity(dim) / static_cast<double>(dim), std::move(labels));
}

double DensityMatrix::purity() const {
    return (entries_ * entries_).trace().real();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool DensityMatrix::is_physical(double tolerance) const {
    return min_eigenvalue() >= -tolerance;
}

int DensityMatrix::position_of(std::string_view label) const {
    return find_label(labels_, label);
}

DensityMatrix DensityMatrix::relabeled(Labels labels) const {
    check_labels(labels, dim(), "DensityMatrix::relabeled");
    return DensityMatrix(entries_, std::move(labels), Unchecked{});
}

// ---------------------------------------------------------------------------
// Observable

Observable::Observable(Matrix entries, Labels labels) : entries_(std::move(entries)), labels_(std::move(labels)) {
    if (entries_.rows() != entries_.cols()) {
        throw InvalidArgument("Observable: matrix is not square");
    }
    if (!is_power_of_two(entries_.rows())) {
        throw InvalidArgument("Observable: dimension is not a power of two");
    }
    if (!labels_.empty()) {
        check_labels(labels_, entries_.rows(), "Observable");
    }
    if (!is_hermitian(entries_)) {
        throw InvalidArgument("Observable: matrix is not Hermitian");
    }
}

// ---------------------------------------------------------------------------
// Primitives

Matrix identity(Eigen::Index dim) {
    return Matrix::Identity(dim, dim);
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix pauli(int index) {
    switch (index) {
        case 0:
            return identity(2);
        case 1:
            return pauli_x();
        case 2:
            return pauli_y();
        case 3:
            return pauli_z();
        default:
            throw InvalidArgument("pauli: index must be in 0..3");
    }
}

Matrix hadamard() {
    return (pauli_x() + pauli_z()) / std::numbers::sqrt2;
}

Vector ket_h() {
    Vector v(2);
    v << 1, 0;
    return v;
}

Vector ket_v() {
    Vector v(2);
    v << 0, 1;
    return v;
}

Vector ket_plus() {
    return (ket_h() + ket_v()) / std::numbers::sqrt2;
}

Vector ket_minus() {
    return (ket_h() - ket_v()) / std::numbers::sqrt2;
}

Vector ket_r() {
    return (ket_h() + Complex(0, 1) * ket_v()) / std::numbers::sqrt2;
}

Vector ket_l() {
    return (ket_h() - Complex(0, 1) * ket_v()) / std::numbers::sqrt2;
}

Vector polarization_ket(std::string_view name) {
    if (name == "H") return ket_h();
    if (name == "V") return ket_v();
    if (name == "+") return ket_plus();
    if (name == "-") return ket_minus();
    if (name == "R") return ket_r();
    if (name == "L") return ket_l();
    throw InvalidArgument("unknown polarization state '" + std::string(name) + "'");
}

PureState kron(const PureState &a, const PureState &b) {
    Vector out(a.dim() * b.dim());
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
        out.segment(i * b.dim(), b.dim()) = a.amplitudes()(i) * b.amplitudes();
    }
    return PureState(std::move(out), concat(a.labels(), b.labels()));
}

namespace {
Matrix kron_matrix(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}
}  // namespace

DensityMatrix kron(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix::hermitian_unit_trace(kron_matrix(a.matrix(), b.matrix()), concat(a.labels(), b.labels()));
}

Observable kron(const Observable &a, const Observable &b) {
    if (a.labels().empty() != b.labels().empty()) {
        throw InvalidArgument("kron: cannot mix labelled and unlabelled observables");
    }
    return Observable(kron_matrix(a.matrix(), b.matrix()), concat(a.labels(), b.labels()));
}

DensityMatrix partial_trace(const DensityMatrix &rho, const Labels &keep) {
    const int n = rho.num_qubits();
    const std::vector<int> kept = positions_of(keep, rho.labels());
    std::vector<int> kept_sorted = kept;
    std::sort(kept_sorted.begin(), kept_sorted.end());
    std::vector<int> traced;
    for (int p = 0; p < n; ++p) {
        if (!std::binary_search(kept_sorted.begin(), kept_sorted.end(), p)) {
            traced.push_back(p);
        }
    }
    Labels out_labels;
    for (int p : kept_sorted) {
        out_labels.push_back(rho.labels()[p]);
    }

    const std::size_t kdim = std::size_t{1} << kept_sorted.size();
    const std::size_t tdim = std::size_t{1} << traced.size();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(kdim), static_cast<Eigen::Index>(kdim));
    for (std::size_t r = 0; r < kdim; ++r) {
        for (std::size_t c = 0; c < kdim; ++c) {
            Complex acc{0.0, 0.0};
            for (std::size_t t = 0; t < tdim; ++t) {
                const std::size_t i = scatter(scatter(0, r, kept_sorted, n), t, traced, n);
                const std::size_t j = scatter(scatter(0, c, kept_sorted, n), t, traced, n);
                acc += rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return DensityMatrix::hermitian_unit_trace(std::move(out), std::move(out_labels));
}

DensityMatrix reorder(const DensityMatrix &rho, const Labels &order) {
    const int n = rho.num_qubits();
    if (static_cast<int>(order.size()) != n) {
        throw InvalidArgument("reorder: order must list every qubit exactly once");
    }
    const std::vector<int> src = positions_of(order, rho.labels());
    const std::size_t dim = static_cast<std::size_t>(rho.dim());
    // new index bits, read in `src` order from the old index
    std::vector<std::size_t> map(dim);
    for (std::size_t old_index = 0; old_index < dim; ++old_index) {
        map[old_index] = gather(old_index, src, n);
    }
    Matrix out(rho.dim(), rho.dim());
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            out(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j])) =
                rho.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return DensityMatrix::hermitian_unit_trace(std::move(out), order);
}

Matrix partial_transpose(const DensityMatrix &rho, std::string_view label) {
    const int n = rho.num_qubits();
    const int p = rho.position_of(label);
    const std::size_t dim = static_cast<std::size_t>(rho.dim());
    const std::vector<int> pos{p};
    Matrix out(rho.dim(), rho.dim());
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const std::size_t bi = bit_of(i, p, n);
            const std::size_t bj = bit_of(j, p, n);
            const std::size_t ti = scatter(i, bj, pos, n);
            const std::size_t tj = scatter(j, bi, pos, n);
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rho.matrix()(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(tj));
        }
    }
    return out;
}

Matrix embed(const Matrix &op, const Labels &targets, const Labels &labels) {
    const int n = static_cast<int>(labels.size());
    const std::vector<int> pos = positions_of(targets, labels);
    const Eigen::Index op_dim = Eigen::Index{1} << pos.size();
    if (op.rows() != op_dim || op.cols() != op_dim) {
        throw InvalidArgument("embed: operator dimension does not match target count");
    }
    std::vector<int> rest;
    for (int p = 0; p < n; ++p) {
        if (std::find(pos.begin(), pos.end(), p) == pos.end()) {
            rest.push_back(p);
        }
    }
    const std::size_t dim = std::size_t{1} << n;
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t ri = gather(i, rest, n);
        const std::size_t oi = gather(i, pos, n);
        for (std::size_t oj = 0; oj < static_cast<std::size_t>(op_dim); ++oj) {
            const std::size_t j = scatter(i, oj, pos, n);
            if (gather(j, rest, n) != ri) continue;
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                op(static_cast<Eigen::Index>(oi), static_cast<Eigen::Index>(oj));
        }
    }
    return out;
}

DensityMatrix apply_unitary(const DensityMatrix &rho, const Matrix &unitary, const Labels &targets) {
    const Matrix full = embed(unitary, targets, rho.labels());
    return DensityMatrix::hermitian_unit_trace(full * rho.matrix() * full.adjoint(), rho.labels());
}

Observable analyzer_observable(double theta_degrees, std::string label) {
    const double two_theta = 2.0 * theta_degrees * std::numbers::pi / 180.0;
    Matrix m = std::cos(two_theta) * pauli_z() + std::sin(two_theta) * pauli_x();
    Labels labels;
    if (!label.empty()) {
        labels.push_back(std::move(label));
    }
    return Observable(std::move(m), std::move(labels));
}

double expectation(const DensityMatrix &rho, const Observable &obs) {
    Matrix op = obs.matrix();
    if (!obs.labels().empty() && obs.labels() != rho.labels()) {
        // Lift the observable onto rho's qubits, identity elsewhere.
        op = embed(obs.matrix(), obs.labels(), rho.labels());
    }
    if (op.rows() != rho.dim()) {
        throw InvalidArgument("expectation: dimension mismatch");
    }
    const Complex value = (rho.matrix() * op).trace();
    return value.real();
}

double trace_norm(const Matrix &m) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("trace_norm: matrix is not square");
    }
    if (is_hermitian(m, 1e-13)) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
        return solver.eigenvalues().cwiseAbs().sum();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.adjoint() * m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

bool is_hermitian(const Matrix &m, double tolerance) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tolerance;
}

double trace_distance(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("trace_distance: dimension mismatch");
    }
    return 0.5 * trace_norm(a - b);
}

}  // namespace bellgate
