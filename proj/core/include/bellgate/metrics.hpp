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

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bellgate/counts.hpp"
#include "bellgate/protocols.hpp"
#include "bellgate/qcore.hpp"

namespace bellgate {

/// <target| U rho U^dagger |target>, U = 1 when no correction is given.
double fidelity_pure(const DensityMatrix &rho, const PureState &target,
                     const std::optional<Matrix> &correction = std::nullopt);

/// log2 of the trace norm of the partial transpose on the first qubit.
double log_negativity(const DensityMatrix &rho);

enum class ChshVariant { Plus, Minus };

/// Analyzer angles in degrees. a_lower/a_upper act on the first qubit, d_* on the second.
struct ChshSpec {
    double a_lower = 0.0;    // a
    double d_upper = -22.5;  // D
    double a_upper = -45.0;  // A
    double d_lower = -67.5;  // d
    ChshVariant variant = ChshVariant::Plus;
};

/// Signed S = +-<A D> -+ <A d> + <a D> + <a d>.
double chsh(const DensityMatrix &rho, const ChshSpec &spec = {});

/// Sign variant that reaches |S| = 2 sqrt(2) for each tilde Bell state at the default angles:
/// Plus for phi~+ and psi~-, Minus for psi~+ and phi~-.
ChshVariant chsh_variant_for(TildeBell bell);

using CountEstimator = std::function<double(const CountTable &)>;

struct BootstrapResult {
    double value = 0.0;   // estimator on the original counts
    double std_error = 0.0;  // sample standard deviation over resamples
    int resamples = 0;    // successful resamples
    int skipped = 0;      // resamples where the estimator threw
};

/// Parametric Poisson bootstrap. Every raw count c is redrawn as Poisson(c), the efficiency
/// correction re-applied, and the estimator re-evaluated. Resample k uses its own RNG stream
/// derived from (seed, k), so results do not depend on evaluation order.
/// Throws InvalidArgument if n_resamples < 100, NumericalError if more than 10% of resamples fail.
BootstrapResult bootstrap_error(const CountTable &counts, const CountEstimator &estimator, int n_resamples,
                                std::uint64_t seed);

/// Multi-table variant for estimators that combine several count tables (e.g. process fidelity).
using MultiCountEstimator = std::function<double(const std::vector<CountTable> &)>;
BootstrapResult bootstrap_error(const std::vector<CountTable> &tables, const MultiCountEstimator &estimator,
                                int n_resamples, std::uint64_t seed);

/// Vector-valued estimator over several count tables; one bootstrap pass serves every component.
using VectorCountEstimator = std::function<std::vector<double>(const std::vector<CountTable> &)>;

struct BootstrapVectorResult {
    std::vector<double> values;
    std::vector<double> std_errors;
    int resamples = 0;
    int skipped = 0;
};

BootstrapVectorResult bootstrap_errors(const std::vector<CountTable> &tables, const VectorCountEstimator &estimator,
                                       int n_resamples, std::uint64_t seed);

/// SplitMix64 finalizer, used to derive independent RNG seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace bellgate
