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

#include "bellgate/metrics.hpp"

#include <cmath>
#include <random>

namespace bellgate {

double fidelity_pure(const DensityMatrix &rho, const PureState &target, const std::optional<Matrix> &correction) {
    if (rho.dim() != target.dim()) throw InvalidArgument("fidelity_pure: dimension mismatch");
    const Vector &psi = target.amplitudes();
    if (correction) {
        if (correction->rows() != rho.dim() || correction->cols() != rho.dim()) {
            throw InvalidArgument("fidelity_pure: correction dimension mismatch");
        }
        return (psi.adjoint() * (*correction) * rho.matrix() * correction->adjoint() * psi)(0, 0).real();
    }
    return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

double log_negativity(const DensityMatrix &rho) {
    if (rho.num_qubits() != 2) throw InvalidArgument("log_negativity: expected a two-qubit state");
    return std::log2(trace_norm(partial_transpose(rho, rho.labels().front())));
}

double chsh(const DensityMatrix &rho, const ChshSpec &spec) {
    if (rho.num_qubits() != 2) throw InvalidArgument("chsh: expected a two-qubit state");
    auto correlator = [&](double first, double second) {
        return expectation(rho, kron(analyzer_observable(first), analyzer_observable(second)));
    };
    const double sign = spec.variant == ChshVariant::Plus ? 1.0 : -1.0;
    return sign * correlator(spec.a_upper, spec.d_upper) - sign * correlator(spec.a_upper, spec.d_lower) +
           correlator(spec.a_lower, spec.d_upper) + correlator(spec.a_lower, spec.d_lower);
}

ChshVariant chsh_variant_for(TildeBell bell) {
    switch (bell) {
        case TildeBell::PhiPlus:
        case TildeBell::PsiMinus:
            return ChshVariant::Plus;
        case TildeBell::PsiPlus:
        case TildeBell::PhiMinus:
            return ChshVariant::Minus;
    }
    return ChshVariant::Plus;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

CountTable poisson_resample(const CountTable &table, std::mt19937_64 &rng) {
    CountTable out = table;
    for (auto &row : out.mutable_rows()) {
        if (row.raw == 0) continue;
        std::poisson_distribution<std::uint64_t> draw(static_cast<double>(row.raw));
        row.raw = draw(rng);
    }
    return out;
}

}  // namespace

BootstrapVectorResult bootstrap_errors(const std::vector<CountTable> &tables, const VectorCountEstimator &estimator,
                                       int n_resamples, std::uint64_t seed) {
    if (n_resamples < 100) throw InvalidArgument("bootstrap_error: at least 100 resamples required");
    BootstrapVectorResult result;
    result.values = estimator(tables);
    const std::size_t width = result.values.size();

    std::vector<std::vector<double>> samples;
    samples.reserve(static_cast<std::size_t>(n_resamples));
    for (int k = 0; k < n_resamples; ++k) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(k)));
        std::vector<CountTable> resampled;
        resampled.reserve(tables.size());
        for (const auto &t : tables) resampled.push_back(poisson_resample(t, rng));
        try {
            std::vector<double> v = estimator(resampled);
            if (v.size() != width) throw NumericalError("estimator changed its output width");
            for (double x : v) {
                if (!std::isfinite(x)) throw NumericalError("non-finite estimate");
            }
            samples.push_back(std::move(v));
        } catch (const Error &) {
            ++result.skipped;
        }
    }
    if (result.skipped * 10 > n_resamples) {
        throw NumericalError("bootstrap_error: estimator failed on " + std::to_string(result.skipped) + " of " +
                             std::to_string(n_resamples) + " resamples");
    }
    result.resamples = static_cast<int>(samples.size());
    result.std_errors.assign(width, 0.0);
    if (samples.size() < 2) return result;
    for (std::size_t c = 0; c < width; ++c) {
        // Shift by the first sample so a constant estimator gives exactly zero spread.
        const double shift = samples.front()[c];
        double mean = 0.0;
        for (const auto &s : samples) mean += s[c] - shift;
        mean /= static_cast<double>(samples.size());
        double var = 0.0;
        for (const auto &s : samples) var += (s[c] - shift - mean) * (s[c] - shift - mean);
        result.std_errors[c] = std::sqrt(var / static_cast<double>(samples.size() - 1));
    }
    return result;
}

BootstrapResult bootstrap_error(const std::vector<CountTable> &tables, const MultiCountEstimator &estimator,
                                int n_resamples, std::uint64_t seed) {
    const BootstrapVectorResult v = bootstrap_errors(
        tables, [&](const std::vector<CountTable> &t) { return std::vector<double>{estimator(t)}; }, n_resamples,
        seed);
    return BootstrapResult{v.values.front(), v.std_errors.front(), v.resamples, v.skipped};
}

BootstrapResult bootstrap_error(const CountTable &counts, const CountEstimator &estimator, int n_resamples,
                                std::uint64_t seed) {
    return bootstrap_error(
        std::vector<CountTable>{counts}, [&](const std::vector<CountTable> &t) { return estimator(t.front()); },
        n_resamples, seed);
}

}  // namespace bellgate
