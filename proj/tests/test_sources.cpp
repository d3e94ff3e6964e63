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

#include "bellgate/metrics.hpp"
#include "bellgate/sources.hpp"
#include "test_util.hpp"

using namespace bellgate;
using bellgate::testing::max_abs;

TEST(Sources, BellStates) {
    const double s = 1.0 / std::numbers::sqrt2;
    const PureState phi = bell_state(BellState::PhiPlus);
    EXPECT_NEAR(phi.amplitudes()(0).real(), s, 1e-15);
    EXPECT_NEAR(phi.amplitudes()(3).real(), s, 1e-15);
    const PureState psi_m = bell_state(BellState::PsiMinus, {"c", "d"});
    EXPECT_NEAR(psi_m.amplitudes()(1).real(), s, 1e-15);
    EXPECT_NEAR(psi_m.amplitudes()(2).real(), -s, 1e-15);
    EXPECT_EQ(psi_m.labels(), (Labels{"c", "d"}));
}

TEST(Sources, PairExamples) {
    const DensityMatrix pure = make_pair(PairSpec{});
    EXPECT_LT(max_abs(pure.matrix() - bell_state(BellState::PhiPlus).projector().matrix()), 1e-15);

    const DensityMatrix white = make_pair(PairSpec{BellState::PhiPlus, 1.0});
    EXPECT_LT(max_abs(white.matrix() - Matrix::Identity(4, 4) / 4.0), 1e-15);

    const DensityMatrix werner = make_pair(PairSpec{BellState::PhiPlus, 0.2});
    EXPECT_NEAR(fidelity_pure(werner, bell_state(BellState::PhiPlus)), 0.8 + 0.2 / 4.0, 1e-12);
}

TEST(Sources, PairRejectsBadMixedness) {
    EXPECT_THROW(make_pair(PairSpec{BellState::PhiPlus, 1.2}), InvalidArgument);
    EXPECT_THROW(make_pair(PairSpec{BellState::PhiPlus, -0.1}), InvalidArgument);
}

TEST(Sources, InputExamples) {
    const DensityMatrix h = make_input(InputSpec::named("H"));
    Matrix hh = Matrix::Zero(2, 2);
    hh(0, 0) = 1.0;
    EXPECT_LT(max_abs(h.matrix() - hh), 1e-15);

    const DensityMatrix r = make_input(InputSpec::named("R"));
    EXPECT_LT(max_abs(r.matrix() - (Matrix::Identity(2, 2) + pauli_y()) / 2.0), 1e-15);

    // (1 - l)^2 + l (1 - l) + l^2 / 2 at l = 0.1
    const DensityMatrix p = make_input(InputSpec::named("+", 0.1));
    EXPECT_NEAR(p.purity(), 0.905, 1e-12);
    EXPECT_EQ(p.labels(), (Labels{"c"}));
}

TEST(Sources, CustomInput) {
    const double s = 1.0 / std::numbers::sqrt2;
    const InputSpec spec = InputSpec::custom(s, Complex(0.0, -s));
    EXPECT_LT(max_abs(make_input(spec).matrix() - make_input(InputSpec::named("L")).matrix()), 1e-15);
    EXPECT_THROW(InputSpec::custom(1.0, 1.0), InvalidArgument);
    EXPECT_THROW(InputSpec::named("Z"), InvalidArgument);
}

TEST(Sources, TomographicInputSet) {
    const auto set = tomographic_input_set();
    ASSERT_EQ(set.size(), 4u);
    EXPECT_EQ(set[0].name, "H");
    EXPECT_EQ(set[1].name, "V");
    EXPECT_EQ(set[2].name, "+");
    EXPECT_EQ(set[3].name, "R");
}
