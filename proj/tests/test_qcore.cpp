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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bellgate/qcore.hpp"
#include "test_util.hpp"

using namespace bellgate;
using bellgate::testing::max_abs;

namespace {

const double kS = 1.0 / std::numbers::sqrt2;

PureState phi_plus(Labels labels = {"a", "b"}) {
    Vector v = Vector::Zero(4);
    v(0) = kS;
    v(3) = kS;
    return PureState(v, std::move(labels));
}

}  // namespace

TEST(QCore, PureStateRejectsBadInput) {
    EXPECT_THROW(PureState(Vector::Zero(2), {"a"}), InvalidArgument);
    EXPECT_THROW(PureState(ket_h(), {"a", "b"}), InvalidArgument);
    EXPECT_THROW(PureState(Vector::Ones(4) / 2.0, {"a", "a"}), InvalidArgument);
    EXPECT_THROW(PureState(2.0 * ket_h(), {"a"}), InvalidArgument);
}

TEST(QCore, DensityMatrixRejectsNonPhysical) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(m, {"a"}), InvalidArgument);
    Matrix nh = Matrix::Identity(2, 2) / 2.0;
    nh(0, 1) = 0.3;
    EXPECT_THROW(DensityMatrix(nh, {"a"}), InvalidArgument);
    EXPECT_THROW(DensityMatrix(Matrix::Identity(2, 2), {"a"}), InvalidArgument);
}

TEST(QCore, KronBasis) {
    const PureState hh = kron(PureState(ket_h(), {"a"}), PureState(ket_h(), {"b"}));
    Vector expected = Vector::Zero(4);
    expected(0) = 1.0;
    EXPECT_LT((hh.amplitudes() - expected).norm(), 1e-15);
    EXPECT_EQ(hh.labels(), (Labels{"a", "b"}));
}

TEST(QCore, KronOfTwoBellPairs) {
    const PureState four = kron(phi_plus({"a", "b"}), phi_plus({"c", "d"}));
    ASSERT_EQ(four.dim(), 16);
    for (int i = 0; i < 16; ++i) {
        const bool hit = i == 0b0000 || i == 0b0011 || i == 0b1100 || i == 0b1111;
        EXPECT_NEAR(std::abs(four.amplitudes()(i) - Complex(hit ? 0.5 : 0.0)), 0.0, 1e-15) << i;
    }
}

TEST(QCore, KronMaximallyMixed) {
    const DensityMatrix r = kron(DensityMatrix::maximally_mixed({"a"}), DensityMatrix::maximally_mixed({"b"}));
    EXPECT_LT(max_abs(r.matrix() - Matrix::Identity(4, 4) / 4.0), 1e-15);
}

TEST(QCore, KronRejectsSharedLabels) {
    EXPECT_THROW(kron(PureState(ket_h(), {"a"}), PureState(ket_v(), {"a"})), InvalidArgument);
}

TEST(QCore, BitConventionFirstLabelIsMostSignificant) {
    const PureState hv = kron(PureState(ket_h(), {"a"}), PureState(ket_v(), {"b"}));
    EXPECT_NEAR(std::abs(hv.amplitudes()(1)), 1.0, 1e-15);
}

TEST(QCore, PartialTraceExamples) {
    const DensityMatrix m = partial_trace(phi_plus().projector(), {"a"});
    EXPECT_LT(max_abs(m.matrix() - Matrix::Identity(2, 2) / 2.0), 1e-15);

    const DensityMatrix hv = kron(PureState(ket_h(), {"a"}), PureState(ket_v(), {"b"})).projector();
    const DensityMatrix b = partial_trace(hv, {"b"});
    EXPECT_NEAR(b.matrix()(1, 1).real(), 1.0, 1e-15);
    EXPECT_EQ(b.labels(), (Labels{"b"}));

    EXPECT_THROW(partial_trace(hv, {"z"}), InvalidArgument);
}

TEST(QCore, PartialTraceWernerOracle) {
    // 0.5 |phi+><phi+| + 0.5 I/4 written out entry by entry.
    Matrix w = Matrix::Identity(4, 4) * 0.125;
    w(0, 0) += 0.25;
    w(3, 3) += 0.25;
    w(0, 3) = 0.25;
    w(3, 0) = 0.25;
    const DensityMatrix m = partial_trace(DensityMatrix(w, {"a", "b"}), {"a"});
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = w(0, 0) + w(1, 1);
    expected(1, 1) = w(2, 2) + w(3, 3);
    expected(0, 1) = w(0, 2) + w(1, 3);
    expected(1, 0) = w(2, 0) + w(3, 1);
    EXPECT_LT(max_abs(m.matrix() - expected), 1e-15);
    EXPECT_LT(max_abs(m.matrix() - Matrix::Identity(2, 2) / 2.0), 1e-15);
}

TEST(QCore, PartialTraceOfProductRecoversFactor) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const DensityMatrix rho = bellgate::testing::random_density({"a", "b"}, rng);
        const DensityMatrix sigma = bellgate::testing::random_density({"c"}, rng);
        const DensityMatrix joint = kron(rho, sigma);
        EXPECT_LT(max_abs(partial_trace(joint, {"a", "b"}).matrix() - rho.matrix()), 1e-10);
        EXPECT_LT(max_abs(partial_trace(joint, {"c"}).matrix() - sigma.matrix()), 1e-10);
    }
}

TEST(QCore, KronAssociativeAndDimensionsMultiply) {
    std::mt19937_64 rng(5);
    const DensityMatrix a = bellgate::testing::random_density({"a"}, rng);
    const DensityMatrix b = bellgate::testing::random_density({"b"}, rng);
    const DensityMatrix c = bellgate::testing::random_density({"c", "d"}, rng);
    const DensityMatrix left = kron(kron(a, b), c);
    const DensityMatrix right = kron(a, kron(b, c));
    EXPECT_EQ(left.dim(), a.dim() * b.dim() * c.dim());
    EXPECT_LT(max_abs(left.matrix() - right.matrix()), 1e-14);
    EXPECT_EQ(left.labels(), right.labels());
}

TEST(QCore, ReorderPermutesSubsystems) {
    const DensityMatrix hv = kron(PureState(ket_h(), {"a"}), PureState(ket_v(), {"b"})).projector();
    const DensityMatrix vh = reorder(hv, {"b", "a"});
    EXPECT_NEAR(vh.matrix()(2, 2).real(), 1.0, 1e-15);
    EXPECT_EQ(vh.labels(), (Labels{"b", "a"}));
}

TEST(QCore, AnalyzerObservableExamples) {
    EXPECT_LT(max_abs(analyzer_observable(0.0).matrix() - pauli_z()), 1e-15);
    EXPECT_LT(max_abs(analyzer_observable(-45.0).matrix() + pauli_x()), 1e-15);
    EXPECT_LT(max_abs(analyzer_observable(-22.5).matrix() - (pauli_z() - pauli_x()) * kS), 1e-15);
}

TEST(QCore, AnalyzerObservableSquaresToIdentity) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(-180.0, 180.0);
    for (int i = 0; i < 100; ++i) {
        const Matrix m = analyzer_observable(angle(rng)).matrix();
        EXPECT_LT(max_abs(m * m - Matrix::Identity(2, 2)), 1e-10);
    }
}

namespace {

Matrix kron_loops(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

}  // namespace

TEST(QCore, ExpectationExamples) {
    const Observable zz = kron(Observable(pauli_z(), {"a"}), Observable(pauli_z(), {"b"}));
    EXPECT_NEAR(expectation(phi_plus().projector(), zz), 1.0, 1e-15);

    const DensityMatrix mixed = DensityMatrix::maximally_mixed({"a", "b"});
    EXPECT_NEAR(expectation(mixed, zz), 0.0, 1e-15);
    const Observable xy = kron(Observable(pauli_x(), {"a"}), Observable(pauli_y(), {"b"}));
    EXPECT_NEAR(expectation(mixed, xy), 0.0, 1e-15);

    Vector t(4);
    t << 0.5, 0.5, 0.5, -0.5;
    const DensityMatrix phi_tilde = PureState(t, {"a", "b"}).projector();
    const Matrix zx = kron_loops(pauli_z(), pauli_x());
    const double oracle = (phi_tilde.matrix() * zx).trace().real();
    const Observable obs = kron(Observable(pauli_z(), {"a"}), Observable(pauli_x(), {"b"}));
    EXPECT_NEAR(expectation(phi_tilde, obs), oracle, 1e-14);
    EXPECT_NEAR(oracle, 1.0, 1e-14);
}

TEST(QCore, ExpectationEmbedsByLabel) {
    const DensityMatrix hv = kron(PureState(ket_h(), {"a"}), PureState(ket_v(), {"b"})).projector();
    EXPECT_NEAR(expectation(hv, Observable(pauli_z(), {"b"})), -1.0, 1e-15);
    EXPECT_NEAR(expectation(hv, Observable(pauli_z(), {"a"})), 1.0, 1e-15);
    EXPECT_THROW(expectation(hv, Observable(pauli_z(), {"q"})), InvalidArgument);
    EXPECT_THROW(expectation(hv, Observable(pauli_z(), {})), InvalidArgument);
}

TEST(QCore, ExpectationLinearAndNormalized) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const DensityMatrix r1 = bellgate::testing::random_density({"a", "b"}, rng);
        const DensityMatrix r2 = bellgate::testing::random_density({"a", "b"}, rng);
        const double w = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const DensityMatrix mix(w * r1.matrix() + (1.0 - w) * r2.matrix(), {"a", "b"});
        const Observable obs = kron(analyzer_observable(12.0, "a"), analyzer_observable(-40.0, "b"));
        EXPECT_NEAR(expectation(mix, obs), w * expectation(r1, obs) + (1.0 - w) * expectation(r2, obs), 1e-12);
        EXPECT_NEAR(expectation(r1, Observable(identity(4), {"a", "b"})), 1.0, 1e-12);
    }
}

TEST(QCore, TraceNormExamples) {
    EXPECT_NEAR(trace_norm(identity(2)), 2.0, 1e-15);
    EXPECT_NEAR(trace_norm(pauli_z()), 2.0, 1e-15);
    EXPECT_NEAR(trace_norm(partial_transpose(phi_plus().projector(), "b")), 2.0, 1e-12);
    EXPECT_THROW(trace_norm(Matrix::Zero(2, 3)), InvalidArgument);
    // Non-Hermitian input goes through singular values.
    Matrix nil = Matrix::Zero(2, 2);
    nil(0, 1) = 3.0;
    EXPECT_NEAR(trace_norm(nil), 3.0, 1e-12);
}

TEST(QCore, PartialTransposeEigenvalues) {
    const Matrix pt = partial_transpose(phi_plus().projector(), "a");
    Eigen::SelfAdjointEigenSolver<Matrix> es(pt);
    EXPECT_NEAR(es.eigenvalues()(0), -0.5, 1e-14);
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(es.eigenvalues()(i), 0.5, 1e-14);
}

TEST(QCore, ApplyUnitaryOnOneLabel) {
    const DensityMatrix hh = kron(PureState(ket_h(), {"a"}), PureState(ket_h(), {"b"})).projector();
    const DensityMatrix flipped = apply_unitary(hh, pauli_x(), {"b"});
    EXPECT_NEAR(flipped.matrix()(1, 1).real(), 1.0, 1e-15);
}

TEST(QCore, PolarizationKets) {
    EXPECT_LT((polarization_ket("R") - Vector(ket_h() + Complex(0, 1) * ket_v()) * kS).norm(), 1e-15);
    EXPECT_LT((polarization_ket("+") - Vector(ket_h() + ket_v()) * kS).norm(), 1e-15);
    EXPECT_THROW(polarization_ket("Q"), InvalidArgument);
}
