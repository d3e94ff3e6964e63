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

#include "bellgate/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>


namespace bellgate {
namespace {

std::string setting_id_for_pauli_string(const std::vector<int> &paulis) {
    std::string id;
    for (int p : paulis) id.push_back(p == 1 ? 'X' : p == 2 ? 'Y' : 'Z');
    return id;
}

Matrix kron_all(const std::vector<Matrix> &factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto &f : factors) {
        Matrix next(out.rows() * f.rows(), out.cols() * f.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (Eigen::Index j = 0; j < out.cols(); ++j) {
                next.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = out(i, j) * f;
            }
        }
        out = std::move(next);
    }
    return out;
}

struct LikelihoodTerm {
    Matrix projector;
    double frequency;
};

// Parameter vector layout: d real diagonal entries, then (re, im) of each strictly lower entry, row-major.
Matrix unpack(const Eigen::VectorXd &x, Eigen::Index d) {
    Matrix t = Matrix::Zero(d, d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i) t(i, i) = x(k++);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            t(i, j) = Complex(x(k), x(k + 1));
            k += 2;
        }
    }
    return t;
}

Eigen::VectorXd pack_gradient(const Matrix &g, Eigen::Index d) {
    Eigen::VectorXd out(d * d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i) out(k++) = g(i, i).real();
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            out(k++) = g(i, j).real();
            out(k++) = g(i, j).imag();
        }
    }
    return out;
}

Matrix rho_of(const Matrix &t) {
    const Matrix a = t.adjoint() * t;
    return a / a.trace().real();
}

class NegLogLikelihood {
   public:
    NegLogLikelihood(std::vector<LikelihoodTerm> terms, Eigen::Index dim) : terms_(std::move(terms)), dim_(dim) {
    }

    // Returns +inf outside the domain (a positive-frequency outcome with p <= 0).
    double value(const Eigen::VectorXd &x) const {
        const Matrix rho = rho_of(unpack(x, dim_));
        double sum = 0.0;
        for (const auto &term : terms_) {
            const double p = (term.projector * rho).trace().real();
            if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
            sum += term.frequency * std::log(p);
        }
        return -sum;
    }

    // dL/dT = 2 T G', G' = (sum_i f_i P_i / p_i - 1) / Tr(T^dagger T); returns the gradient of -L.
    Eigen::VectorXd gradient(const Eigen::VectorXd &x) const {
        const Matrix t = unpack(x, dim_);
        const Matrix a = t.adjoint() * t;
        const double tau = a.trace().real();
        const Matrix rho = a / tau;
        Matrix g = Matrix::Zero(dim_, dim_);
        double weight = 0.0;
        for (const auto &term : terms_) {
            const double p = (term.projector * rho).trace().real();
            g += (term.frequency / p) * term.projector;
            weight += term.frequency;
        }
        g -= weight * Matrix::Identity(dim_, dim_);
        g /= tau;
        const Matrix grad_l = 2.0 * t * g;
        return -pack_gradient(grad_l, dim_);
    }

   private:
    std::vector<LikelihoodTerm> terms_;
    Eigen::Index dim_;
};

}  // namespace

std::string MeasurementSetting::id() const {
    std::string s;
    for (PauliBasis b : bases) s.push_back(static_cast<char>(b));
    return s;
}

MeasurementSetting MeasurementSetting::parse(std::string_view id) {
    MeasurementSetting s;
    for (char ch : id) {
        if (ch != 'X' && ch != 'Y' && ch != 'Z') {
            throw InvalidArgument("MeasurementSetting: unknown basis '" + std::string(1, ch) + "'");
        }
        s.bases.push_back(static_cast<PauliBasis>(ch));
    }
    if (s.bases.empty()) throw InvalidArgument("MeasurementSetting: empty setting");
    return s;
}

std::vector<MeasurementSetting> settings_1q() {
    return {MeasurementSetting{{PauliBasis::Z}}, MeasurementSetting{{PauliBasis::X}},
            MeasurementSetting{{PauliBasis::Y}}};
}

std::vector<MeasurementSetting> settings_2q() {
    return tomography_settings(2);
}

std::vector<MeasurementSetting> tomography_settings(int num_qubits) {
    if (num_qubits < 1) throw InvalidArgument("tomography_settings: need at least one qubit");
    std::vector<MeasurementSetting> out{MeasurementSetting{}};
    for (int q = 0; q < num_qubits; ++q) {
        std::vector<MeasurementSetting> next;
        for (const auto &s : out) {
            for (const auto &single : settings_1q()) {
                MeasurementSetting extended = s;
                extended.bases.push_back(single.bases[0]);
                next.push_back(std::move(extended));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<std::string> outcome_labels(int num_qubits) {
    std::vector<std::string> out{""};
    for (int q = 0; q < num_qubits; ++q) {
        std::vector<std::string> next;
        for (const auto &s : out) {
            next.push_back(s + '+');
            next.push_back(s + '-');
        }
        out = std::move(next);
    }
    return out;
}

Vector basis_ket(PauliBasis basis, char sign) {
    const bool plus = sign == '+';
    if (!plus && sign != '-') throw InvalidArgument("basis_ket: sign must be '+' or '-'");
    switch (basis) {
        case PauliBasis::Z:
            return plus ? ket_h() : ket_v();
        case PauliBasis::X:
            return plus ? ket_plus() : ket_minus();
        case PauliBasis::Y:
            return plus ? ket_r() : ket_l();
    }
    return ket_h();
}

Matrix outcome_projector(const MeasurementSetting &setting, std::string_view outcome) {
    if (static_cast<int>(outcome.size()) != setting.num_qubits()) {
        throw InvalidArgument("outcome_projector: outcome length does not match setting");
    }
    std::vector<Matrix> factors;
    for (std::size_t q = 0; q < outcome.size(); ++q) {
        const Vector k = basis_ket(setting.bases[q], outcome[q]);
        factors.push_back(k * k.adjoint());
    }
    return kron_all(factors);
}

std::vector<double> outcome_probabilities(const DensityMatrix &rho, const MeasurementSetting &setting) {
    if (rho.num_qubits() != setting.num_qubits()) {
        throw InvalidArgument("outcome_probabilities: qubit count mismatch");
    }
    std::vector<double> out;
    for (const auto &label : outcome_labels(setting.num_qubits())) {
        out.push_back(std::max(0.0, (outcome_projector(setting, label) * rho.matrix()).trace().real()));
    }
    return out;
}

Labels default_labels(int num_qubits) {
    Labels out;
    for (int q = 0; q < num_qubits; ++q) out.push_back("q" + std::to_string(q));
    return out;
}

DensityMatrix linear_inversion(const CountTable &counts, Labels labels) {
    const int n = counts.num_qubits();
    if (labels.empty()) labels = default_labels(n);

    // setting -> outcome -> corrected count
    std::map<std::string, std::map<std::string, double>> table;
    for (const auto &row : counts.rows()) table[row.setting][row.outcome] += row.corrected();
    for (const auto &s : tomography_settings(n)) {
        const auto it = table.find(s.id());
        if (it == table.end()) throw InvalidArgument("linear_inversion: missing setting " + s.id());
        double total = 0.0;
        for (const auto &[o, c] : it->second) total += c;
        if (!(total > 0.0)) throw InvalidArgument("linear_inversion: no counts in setting " + s.id());
    }

    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix rho = Matrix::Zero(dim, dim);
    const std::size_t n_strings = std::size_t{1} << (2 * n);
    for (std::size_t code = 0; code < n_strings; ++code) {
        std::vector<int> paulis(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) paulis[static_cast<std::size_t>(q)] = static_cast<int>((code >> (2 * (n - 1 - q))) & 3U);

        double estimate = 1.0;
        if (code != 0) {
            // Average over every setting that measures the non-identity factors.
            std::vector<int> fill = paulis;
            std::vector<std::size_t> free;
            for (std::size_t q = 0; q < fill.size(); ++q) {
                if (fill[q] == 0) free.push_back(q);
            }
            double sum = 0.0;
            int used = 0;
            const std::size_t combos = static_cast<std::size_t>(std::pow(3, free.size()));
            for (std::size_t c = 0; c < combos; ++c) {
                std::size_t rest = c;
                for (std::size_t f : free) {
                    fill[f] = static_cast<int>(rest % 3) + 1;
                    rest /= 3;
                }
                const auto &outcomes = table.at(setting_id_for_pauli_string(fill));
                double total = 0.0, signed_sum = 0.0;
                for (const auto &[o, cnt] : outcomes) {
                    double sign = 1.0;
                    for (std::size_t q = 0; q < o.size(); ++q) {
                        if (paulis[q] != 0 && o[q] == '-') sign = -sign;
                    }
                    total += cnt;
                    signed_sum += sign * cnt;
                }
                sum += signed_sum / total;
                ++used;
            }
            estimate = sum / used;
        }
        std::vector<Matrix> factors;
        for (int p : paulis) factors.push_back(pauli(p));
        rho += estimate * kron_all(factors);
    }
    rho /= static_cast<double>(dim);
    return DensityMatrix::hermitian_unit_trace(std::move(rho), std::move(labels));
}

MleResult mle_fit_detailed(const CountTable &counts, const MleOptions &options, Labels labels) {
    const int n = counts.num_qubits();
    if (labels.empty()) labels = default_labels(n);
    const Eigen::Index dim = Eigen::Index{1} << n;

    const double total = counts.total_corrected();
    if (!(total > 0.0)) throw InvalidArgument("mle_fit: count table is empty");
    std::map<std::pair<std::string, std::string>, double> merged;
    for (const auto &row : counts.rows()) merged[{row.setting, row.outcome}] += row.corrected();
    std::vector<LikelihoodTerm> terms;
    for (const auto &[key, c] : merged) {
        if (c <= 0.0) continue;
        terms.push_back({outcome_projector(MeasurementSetting::parse(key.first), key.second), c / total});
    }
    const NegLogLikelihood objective(std::move(terms), dim);

    const Eigen::Index n_params = dim * dim;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_params);
    x.head(dim).setOnes();  // T = 1, the maximally mixed state
    double f = objective.value(x);
    Eigen::VectorXd g = objective.gradient(x);

    MleResult result{DensityMatrix(rho_of(unpack(x, dim)), labels), 0, -f, {-f}};

    constexpr std::size_t kMemory = 10;
    std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> memory;  // (s, y)

    auto finish = [&](int iterations) {
        result.state = DensityMatrix(rho_of(unpack(x, dim)), labels);
        result.iterations = iterations;
        result.log_likelihood = -f;
        return result;
    };

    for (int it = 1; it <= options.max_iterations; ++it) {
        if (g.norm() < options.gradient_tolerance) return finish(it - 1);

        // Two-loop recursion.
        Eigen::VectorXd q = g;
        std::vector<double> alphas(memory.size());
        for (std::size_t k = memory.size(); k-- > 0;) {
            const auto &[s, y] = memory[k];
            alphas[k] = s.dot(q) / y.dot(s);
            q -= alphas[k] * y;
        }
        if (!memory.empty()) {
            const auto &[s, y] = memory.back();
            q *= s.dot(y) / y.dot(y);
        } else {
            q /= std::max(1.0, g.norm());
        }
        for (std::size_t k = 0; k < memory.size(); ++k) {
            const auto &[s, y] = memory[k];
            const double beta = y.dot(q) / y.dot(s);
            q += (alphas[k] - beta) * s;
        }
        Eigen::VectorXd direction = -q;
        double slope = g.dot(direction);
        if (!(slope < 0.0)) {
            memory.clear();
            direction = -g / std::max(1.0, g.norm());
            slope = g.dot(direction);
        }

        // Backtracking with the Armijo condition keeps the likelihood monotone.
        double step = 1.0;
        Eigen::VectorXd x_next;
        double f_next = std::numeric_limits<double>::infinity();
        bool accepted = false;
        while (step > 1e-20) {
            x_next = x + step * direction;
            f_next = objective.value(x_next);
            if (std::isfinite(f_next) && f_next <= f + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!memory.empty()) {
                memory.clear();
                continue;
            }
            return finish(it - 1);  // no ascent direction left within round-off
        }

        const Eigen::VectorXd g_next = objective.gradient(x_next);
        const Eigen::VectorXd s = x_next - x;
        const Eigen::VectorXd y = g_next - g;
        if (s.dot(y) > 1e-18) {
            memory.emplace_back(s, y);
            if (memory.size() > kMemory) memory.pop_front();
        }
        const double improvement = f - f_next;
        x = x_next;
        f = f_next;
        g = g_next;
        // Keep T at unit scale; rho is invariant under T -> cT.
        const double scale = unpack(x, dim).norm();
        if (scale > 0.0 && (scale > 1e3 || scale < 1e-3)) {
            x /= scale;
            g *= scale;
            memory.clear();
        }
        result.history.push_back(-f);
        if (improvement < options.likelihood_tolerance) return finish(it);
    }
    MleResult best = finish(options.max_iterations);
    throw MleConvergenceError("mle_fit: iteration cap reached", std::move(best));
}

DensityMatrix mle_fit(const CountTable &counts, const MleOptions &options, Labels labels) {
    return mle_fit_detailed(counts, options, std::move(labels)).state;
}

ProcessMatrix::ProcessMatrix(const Eigen::Matrix4cd &m) : m_(m) {
}

Matrix ProcessMatrix::apply(const Matrix &rho) const {
    if (rho.rows() != 2 || rho.cols() != 2) throw InvalidArgument("ProcessMatrix::apply: expected a qubit");
    Matrix out = Matrix::Zero(2, 2);
    for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) out += m_(m, n) * pauli(m) * rho * pauli(n);
    }
    return out;
}

ProcessMatrix ProcessMatrix::identity_channel() {
    return pauli_channel(0);
}

ProcessMatrix ProcessMatrix::pauli_channel(int index) {
    if (index < 0 || index > 3) throw InvalidArgument("pauli_channel: index must be in 0..3");
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(index, index) = 1.0;
    return ProcessMatrix(m);
}

ProcessMatrix process_tomo(const std::vector<DensityMatrix> &inputs, const std::vector<DensityMatrix> &outputs) {
    if (inputs.size() != outputs.size() || inputs.empty()) {
        throw InvalidArgument("process_tomo: need matching, non-empty input and output lists");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(inputs.size()) * 4;
    Matrix a(rows, 16);
    Vector b(rows);
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        if (inputs[j].num_qubits() != 1 || outputs[j].num_qubits() != 1) {
            throw InvalidArgument("process_tomo: single-qubit states required");
        }
        for (int m = 0; m < 4; ++m) {
            for (int n = 0; n < 4; ++n) {
                const Matrix term = pauli(m) * inputs[j].matrix() * pauli(n);
                for (int e = 0; e < 4; ++e) a(static_cast<Eigen::Index>(j) * 4 + e, 4 * m + n) = term(e / 2, e % 2);
            }
        }
        for (int e = 0; e < 4; ++e) b(static_cast<Eigen::Index>(j) * 4 + e) = outputs[j].matrix()(e / 2, e % 2);
    }
    // Column-pivoted QR: |R_kk| is non-increasing, so the last diagonal entry gauges the rank.
    const Eigen::ColPivHouseholderQR<Matrix> qr(a);
    const auto r_diag = qr.matrixQR().diagonal().cwiseAbs();
    if (a.rows() < 16 || r_diag(15) < 1e-10 * r_diag(0)) {
        throw InvalidArgument("process_tomo: input states do not span the operator space");
    }
    const Vector x = qr.solve(b);
    Eigen::Matrix4cd m;
    for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = x(i);
    m = ((m + m.adjoint()) / 2.0).eval();
    return ProcessMatrix(m);
}

double process_fidelity(const ProcessMatrix &experimental, const ProcessMatrix &theoretical) {
    return (theoretical.matrix() * experimental.matrix()).trace().real();
}

}  // namespace bellgate
