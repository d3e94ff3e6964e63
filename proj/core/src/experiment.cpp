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

#include "bellgate/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "bellgate/sources.hpp"

#ifndef BELLGATE_VERSION_STRING
#define BELLGATE_VERSION_STRING "0.0.0"
#endif

namespace bellgate {

using json = nlohmann::ordered_json;

namespace {

constexpr std::array<const char *, 4> kProcessInputs{"H", "V", "+", "R"};

std::uint64_t stream_id(std::string_view name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : name) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_object(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("", "top level must be a JSON object");
    return doc;
}

void reject_unknown_keys(const json &obj, const std::string &path, const std::set<std::string> &allowed) {
    for (const auto &[key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
        }
    }
}

double get_number(const json &v, const std::string &path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

double get_unit_interval(const json &v, const std::string &path) {
    const double x = get_number(v, path);
    if (!(x >= 0.0 && x <= 1.0)) throw ConfigError(path, "must lie in [0, 1]");
    return x;
}

std::uint64_t get_unsigned(const json &v, const std::string &path) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    const auto signed_value = v.get<std::int64_t>();
    if (signed_value < 0) throw ConfigError(path, "must be non-negative");
    return static_cast<std::uint64_t>(signed_value);
}

std::string get_string(const json &v, const std::string &path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

json matrix_json(const Matrix &m) {
    json re = json::array();
    json im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json rr = json::array();
        json ii = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rr.push_back(m(i, j).real());
            ii.push_back(m(i, j).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ii));
    }
    return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

json estimate_json(const Estimate &e) {
    return json{{"value", e.value}, {"stderr", e.std_error}};
}

json config_json(const ExperimentConfig &c) {
    json eff = json::object();
    for (const auto &[k, v] : c.efficiencies) eff[k] = v;
    return json{{"protocol", std::string(to_string(c.protocol))},
                {"overlap", c.overlap},
                {"pair_mixedness", c.pair_mixedness},
                {"input_mixedness", c.input_mixedness},
                {"counts_per_setting", c.counts_per_setting},
                {"efficiencies", std::move(eff)},
                {"seed", c.seed},
                {"bootstrap_resamples", c.bootstrap_resamples},
                {"inputs", c.inputs},
                {"gate_input", c.gate_input},
                {"output", c.output}};
}

std::vector<SettingDistribution> normalized_distribution(const DensityMatrix &rho) {
    std::vector<SettingDistribution> out;
    for (const auto &s : tomography_settings(rho.num_qubits())) {
        std::vector<double> p = outcome_probabilities(rho, s);
        double total = 0.0;
        for (double x : p) total += x;
        for (double &x : p) x /= total;
        out.push_back(SettingDistribution{s.id(), std::move(p)});
    }
    return out;
}

double bsa_efficiency(const ExperimentConfig &config, ProductOutcome outcome) {
    const std::string_view label = to_string(outcome);
    return config.efficiency(std::string("b") + label[0]) * config.efficiency(std::string("c") + label[1]);
}

// Fits that hit the iteration cap still carry a usable best iterate.
DensityMatrix robust_mle(const CountTable &table, const Labels &labels) {
    try {
        return mle_fit(table, {}, labels);
    } catch (const MleConvergenceError &e) {
        return e.best().state;
    }
}

struct ExactTeleport {
    std::map<std::string, double> fidelity;
    double process_fidelity = 0.0;
};

ExactTeleport exact_teleport(const GateChannel &channel, double pair_mixedness, double input_mixedness) {
    const DensityMatrix pair = make_pair(PairSpec{BellState::PhiPlus, pair_mixedness, {"a", "b"}});
    ExactTeleport out;
    std::vector<DensityMatrix> ideal_inputs;
    std::vector<DensityMatrix> outputs;
    for (const char *name : kProcessInputs) {
        const InputSpec spec = InputSpec::named(name, input_mixedness);
        const ProtocolResult r = teleport(make_input(spec), pair, channel, /*correct=*/true);
        const DensityMatrix avg = r.average_state();
        const PureState target = input_ket(spec, "a");
        out.fidelity[name] = fidelity_pure(avg, target);
        ideal_inputs.push_back(target.projector());
        outputs.push_back(avg);
    }
    out.process_fidelity =
        process_fidelity(process_tomo(ideal_inputs, outputs), ProcessMatrix::identity_channel());
    return out;
}

struct ExactSwap {
    std::array<double, 4> fidelity{};
    std::array<double, 4> negativity{};
    std::array<double, 4> chsh{};
};

ExactSwap exact_swap(const GateChannel &channel, double pair_mixedness) {
    const DensityMatrix ab = make_pair(PairSpec{BellState::PhiPlus, pair_mixedness, {"a", "b"}});
    const DensityMatrix cd = make_pair(PairSpec{BellState::PhiPlus, pair_mixedness, {"c", "d"}});
    const ProtocolResult r = swap(ab, cd, channel);
    ExactSwap out;
    for (std::size_t k = 0; k < 4; ++k) {
        const auto &b = r.branches[k];
        if (!b.state) continue;
        out.fidelity[k] = fidelity_pure(*b.state, tilde_bell(b.bell, {"a", "d"}));
        out.negativity[k] = log_negativity(*b.state);
        ChshSpec spec;
        spec.variant = chsh_variant_for(b.bell);
        out.chsh[k] = chsh(*b.state, spec);
    }
    return out;
}

template <typename T>
double mean_of(const std::array<T, 4> &a) {
    return (a[0] + a[1] + a[2] + a[3]) / 4.0;
}

// ---------------------------------------------------------------------------
// Protocol runs

TeleportReport run_teleport(const ExperimentConfig &config, NamedCountTables &counts) {
    const GateChannel channel = gate_channel(config.overlap);
    const DensityMatrix pair = make_pair(PairSpec{BellState::PhiPlus, config.pair_mixedness, {"a", "b"}});
    const double events = static_cast<double>(config.counts_per_setting);

    TeleportReport report;
    std::vector<CountTable> tables;
    std::vector<Matrix> corrections;  // per table
    for (const auto &name : config.inputs) {
        const InputSpec spec = InputSpec::named(name, config.input_mixedness);
        const ProtocolResult physical = teleport(make_input(spec), pair, channel, /*correct=*/false);
        const double success = physical.success_probability();

        TeleportInputReport input_report;
        input_report.input = name;
        const PureState target = input_ket(spec, "a");
        double exact_avg = 0.0;
        for (const auto &branch : physical.branches) {
            BranchReport br;
            br.outcome = branch.outcome;
            br.bell = branch.bell;
            br.exact_probability = branch.probability / success;
            br.correction = teleport_correction(branch.outcome);
            br.exact_state = branch.state;
            const Matrix u = correction_unitary(*br.correction);
            CountTable table(1);
            if (branch.state) {
                br.exact_fidelity = fidelity_pure(*branch.state, target, u);
                exact_avg += br.exact_probability * br.exact_fidelity;
                const std::string table_name = "teleport/" + name + "/" + std::string(to_string(branch.outcome));
                table = simulate_counts(normalized_distribution(*branch.state), events * br.exact_probability,
                                        config.efficiencies, {"a"}, mix_seed(config.seed, stream_id(table_name)),
                                        bsa_efficiency(config, branch.outcome));
                counts.emplace_back(table_name, table);
            }
            tables.push_back(table);
            corrections.push_back(u);
            input_report.branches.push_back(std::move(br));
        }
        input_report.exact_average_fidelity = exact_avg;
        report.inputs.push_back(std::move(input_report));
    }

    // Locate the tomographic set among the configured inputs.
    std::vector<std::size_t> process_slots;
    for (const char *name : kProcessInputs) {
        for (std::size_t i = 0; i < config.inputs.size(); ++i) {
            if (config.inputs[i] == name) {
                process_slots.push_back(i);
                break;
            }
        }
    }
    const bool with_process = process_slots.size() == kProcessInputs.size();

    const std::size_t n_inputs = config.inputs.size();
    struct Derived {
        std::vector<double> values;
        std::vector<DensityMatrix> states;
        std::vector<DensityMatrix> averages;
        std::vector<double> weights;
        std::optional<ProcessMatrix> process;
    };
    auto derive = [&](const std::vector<CountTable> &t) {
        Derived d;
        std::vector<double> branch_fid(t.size(), 0.0);
        std::vector<double> input_avg(n_inputs, 0.0);
        for (std::size_t i = 0; i < n_inputs; ++i) {
            const PureState target = input_ket(InputSpec::named(config.inputs[i]), "a");
            double total = 0.0;
            for (std::size_t k = 0; k < 4; ++k) total += t[4 * i + k].total_corrected();
            if (!(total > 0.0)) throw NumericalError("teleport: no counts for input " + config.inputs[i]);
            Matrix avg = Matrix::Zero(2, 2);
            for (std::size_t k = 0; k < 4; ++k) {
                const std::size_t slot = 4 * i + k;
                const double w = t[slot].total_corrected() / total;
                d.weights.push_back(w);
                if (w <= 0.0) {
                    d.states.push_back(DensityMatrix::maximally_mixed({"a"}));
                    continue;
                }
                const DensityMatrix rho = robust_mle(t[slot], {"a"});
                branch_fid[slot] = fidelity_pure(rho, target, corrections[slot]);
                input_avg[i] += w * branch_fid[slot];
                avg += w * corrections[slot] * rho.matrix() * corrections[slot].adjoint();
                d.states.push_back(rho);
            }
            d.averages.push_back(DensityMatrix(avg, {"a"}));
        }
        d.values = branch_fid;
        d.values.insert(d.values.end(), input_avg.begin(), input_avg.end());
        if (with_process) {
            std::vector<DensityMatrix> ideal, measured;
            for (std::size_t slot : process_slots) {
                ideal.push_back(input_ket(InputSpec::named(config.inputs[slot]), "a").projector());
                measured.push_back(d.averages[slot]);
            }
            d.process = process_tomo(ideal, measured);
            d.values.push_back(process_fidelity(*d.process, ProcessMatrix::identity_channel()));
        }
        return d;
    };

    const Derived point = derive(tables);
    const BootstrapVectorResult boot = bootstrap_errors(
        tables, [&](const std::vector<CountTable> &t) { return derive(t).values; }, config.bootstrap_resamples,
        mix_seed(config.seed, stream_id("bootstrap/teleport")));

    for (std::size_t i = 0; i < n_inputs; ++i) {
        auto &ir = report.inputs[i];
        for (std::size_t k = 0; k < 4; ++k) {
            const std::size_t slot = 4 * i + k;
            auto &br = ir.branches[k];
            br.observed_fraction = point.weights[slot];
            br.reconstructed = point.states[slot];
            br.fidelity = Estimate{boot.values[slot], boot.std_errors[slot]};
        }
        const std::size_t avg_slot = tables.size() + i;
        ir.average_fidelity = Estimate{boot.values[avg_slot], boot.std_errors[avg_slot]};
        ir.average_output = point.averages[i];
    }
    if (with_process) {
        report.process = point.process;
        report.process_fidelity = Estimate{boot.values.back(), boot.std_errors.back()};
        report.exact_process_fidelity =
            exact_teleport(channel, config.pair_mixedness, config.input_mixedness).process_fidelity;
    }
    return report;
}

SwapReport run_swap(const ExperimentConfig &config, NamedCountTables &counts) {
    const GateChannel channel = gate_channel(config.overlap);
    const DensityMatrix ab = make_pair(PairSpec{BellState::PhiPlus, config.pair_mixedness, {"a", "b"}});
    const DensityMatrix cd = make_pair(PairSpec{BellState::PhiPlus, config.pair_mixedness, {"c", "d"}});
    const ProtocolResult physical = swap(ab, cd, channel);
    const double success = physical.success_probability();
    const double events = static_cast<double>(config.counts_per_setting);
    const ExactSwap exact = exact_swap(channel, config.pair_mixedness);

    SwapReport report;
    std::vector<CountTable> tables;
    for (std::size_t k = 0; k < 4; ++k) {
        const auto &branch = physical.branches[k];
        BranchReport br;
        br.outcome = branch.outcome;
        br.bell = branch.bell;
        br.exact_probability = branch.probability / success;
        br.exact_state = branch.state;
        br.chsh_variant = chsh_variant_for(branch.bell);
        br.exact_fidelity = exact.fidelity[k];
        CountTable table(2);
        if (branch.state) {
            const std::string table_name = "swap/" + std::string(to_string(branch.outcome));
            table = simulate_counts(normalized_distribution(*branch.state), events * br.exact_probability,
                                    config.efficiencies, {"a", "d"}, mix_seed(config.seed, stream_id(table_name)),
                                    bsa_efficiency(config, branch.outcome));
            counts.emplace_back(table_name, table);
        }
        tables.push_back(table);
        report.branches.push_back(std::move(br));
    }
    report.exact_average_fidelity = mean_of(exact.fidelity);
    report.exact_average_abs_chsh = (std::abs(exact.chsh[0]) + std::abs(exact.chsh[1]) + std::abs(exact.chsh[2]) +
                                     std::abs(exact.chsh[3])) /
                                    4.0;

    std::vector<DensityMatrix> point_states;
    auto derive = [&](const std::vector<CountTable> &t, std::vector<DensityMatrix> *states) {
        // per branch: fidelity, negativity, S; then the three means
        std::vector<double> v(15, 0.0);
        for (std::size_t k = 0; k < 4; ++k) {
            if (!(t[k].total_corrected() > 0.0)) throw NumericalError("swap: no counts for a Bell outcome");
            const DensityMatrix rho = robust_mle(t[k], {"a", "d"});
            const TildeBell bell = kTildeBells[k];
            ChshSpec spec;
            spec.variant = chsh_variant_for(bell);
            v[3 * k] = fidelity_pure(rho, tilde_bell(bell, {"a", "d"}));
            v[3 * k + 1] = log_negativity(rho);
            v[3 * k + 2] = chsh(rho, spec);
            v[12] += v[3 * k] / 4.0;
            v[13] += v[3 * k + 1] / 4.0;
            v[14] += std::abs(v[3 * k + 2]) / 4.0;
            if (states) states->push_back(rho);
        }
        return v;
    };
    derive(tables, &point_states);
    const BootstrapVectorResult boot = bootstrap_errors(
        tables, [&](const std::vector<CountTable> &t) { return derive(t, nullptr); }, config.bootstrap_resamples,
        mix_seed(config.seed, stream_id("bootstrap/swap")));
    for (std::size_t k = 0; k < 4; ++k) {
        auto &br = report.branches[k];
        br.observed_fraction = tables[k].total_corrected() /
                               (tables[0].total_corrected() + tables[1].total_corrected() +
                                tables[2].total_corrected() + tables[3].total_corrected());
        br.reconstructed = point_states[k];
        br.fidelity = Estimate{boot.values[3 * k], boot.std_errors[3 * k]};
        br.negativity = Estimate{boot.values[3 * k + 1], boot.std_errors[3 * k + 1]};
        br.chsh = Estimate{boot.values[3 * k + 2], boot.std_errors[3 * k + 2]};
    }
    report.average_fidelity = Estimate{boot.values[12], boot.std_errors[12]};
    report.average_negativity = Estimate{boot.values[13], boot.std_errors[13]};
    report.average_abs_chsh = Estimate{boot.values[14], boot.std_errors[14]};
    return report;
}

Vector product_input(const std::string &name) {
    if (name.size() != 2) throw ConfigError("gate_input", "expected two polarization letters, e.g. \"VV\"");
    Vector b, c;
    try {
        b = polarization_ket(name.substr(0, 1));
        c = polarization_ket(name.substr(1, 1));
    } catch (const InvalidArgument &e) {
        throw ConfigError("gate_input", e.what());
    }
    Vector out(4);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) out(2 * i + j) = b(i) * c(j);
    }
    return out;
}

GateReport run_gate(const ExperimentConfig &config, NamedCountTables &counts) {
    const GateChannel channel = gate_channel(config.overlap);
    const Vector psi = product_input(config.gate_input);
    const PureState input(psi, {"b", "c"});
    const ChannelOutput out = apply_channel(input.projector(), channel);

    Vector ideal = psi;
    ideal(3) = -ideal(3);
    const PureState target(ideal, {"b", "c"});

    GateReport report;
    report.input = config.gate_input;
    report.exact_success_probability = out.success_probability;
    report.exact_output_fidelity = fidelity_pure(out.state, target);

    const double trials = static_cast<double>(config.counts_per_setting);
    std::mt19937_64 rng(mix_seed(config.seed, stream_id("gate/success")));
    std::poisson_distribution<std::uint64_t> draw(trials * out.success_probability);
    const auto hits = static_cast<double>(draw(rng));
    report.success_probability = Estimate{hits / trials, std::sqrt(hits) / trials};

    const CountTable table = simulate_counts(normalized_distribution(out.state), trials, config.efficiencies,
                                             {"b", "c"}, mix_seed(config.seed, stream_id("gate/output")));
    counts.emplace_back("gate/output", table);
    report.reconstructed = robust_mle(table, {"b", "c"});
    const BootstrapResult boot = bootstrap_error(
        table, [&](const CountTable &t) { return fidelity_pure(robust_mle(t, {"b", "c"}), target); },
        config.bootstrap_resamples, mix_seed(config.seed, stream_id("bootstrap/gate")));
    report.output_fidelity = Estimate{boot.value, boot.std_error};
    return report;
}

json branch_json(const BranchReport &b) {
    json j{{"outcome", std::string(to_string(b.outcome))},
           {"bell_state", std::string(to_string(b.bell))},
           {"exact_probability", b.exact_probability},
           {"observed_fraction", b.observed_fraction}};
    if (b.correction) j["correction"] = std::string(to_string(*b.correction));
    j["fidelity"] = estimate_json(b.fidelity);
    j["exact_fidelity"] = b.exact_fidelity;
    if (b.negativity) j["negativity"] = estimate_json(*b.negativity);
    if (b.chsh) {
        j["chsh"] = estimate_json(*b.chsh);
        j["chsh_variant"] = *b.chsh_variant == ChshVariant::Plus ? "S+" : "S-";
    }
    if (b.reconstructed) j["reconstructed"] = matrix_json(b.reconstructed->matrix());
    if (b.exact_state) j["exact_state"] = matrix_json(b.exact_state->matrix());
    return j;
}

std::vector<double> parse_axis(const json &v, const std::string &path) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(get_unit_interval(v, path));
    } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(get_unit_interval(v[i], path + "[" + std::to_string(i) + "]"));
        }
    } else if (v.is_object()) {
        reject_unknown_keys(v, path, {"start", "stop", "step"});
        for (const char *key : {"start", "stop", "step"}) {
            if (!v.contains(key)) throw ConfigError(path + "." + key, "missing");
        }
        const double start = get_unit_interval(v["start"], path + ".start");
        const double stop = get_unit_interval(v["stop"], path + ".stop");
        const double step = get_number(v["step"], path + ".step");
        if (!(step > 0.0)) throw ConfigError(path + ".step", "must be positive");
        if (stop < start) throw ConfigError(path + ".stop", "must not be below start");
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (std::size_t i = 0; i < n; ++i) {
            // Snap to a 1e-12 lattice so 0.85 + 8 * 0.01 prints as 0.93.
            const double x = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
            out.push_back(std::min(stop, x));
        }
    } else {
        throw ConfigError(path, "expected a number, a list or {start, stop, step}");
    }
    if (out.empty()) throw ConfigError(path, "grid axis is empty");
    return out;
}

json prediction_json(const ExactPrediction &p) {
    json tf = json::object();
    for (const auto &[k, v] : p.teleport_fidelity) tf[k] = v;
    json sf = json::array(), sn = json::array(), ss = json::array();
    for (std::size_t k = 0; k < 4; ++k) {
        sf.push_back(p.swap_fidelity[k]);
        sn.push_back(p.swap_negativity[k]);
        ss.push_back(p.swap_chsh[k]);
    }
    return json{{"overlap", p.overlap},
                {"pair_mixedness", p.pair_mixedness},
                {"input_mixedness", p.input_mixedness},
                {"teleport_fidelity", std::move(tf)},
                {"process_fidelity", p.process_fidelity},
                {"swap_fidelity", std::move(sf)},
                {"swap_negativity", std::move(sn)},
                {"swap_chsh", std::move(ss)},
                {"swap_average_fidelity", p.swap_average_fidelity},
                {"swap_average_negativity", p.swap_average_negativity},
                {"swap_average_abs_chsh", p.swap_average_abs_chsh}};
}

std::string format_amplitude(Complex a) {
    std::ostringstream ss;
    ss << std::showpos << std::fixed << std::setprecision(4) << a.real();
    if (std::abs(a.imag()) > 1e-12) ss << a.imag() << "i";
    return ss.str();
}

const std::array<const char *, 4> kBasisNames{"HH", "HV", "VH", "VV"};

}  // namespace

// ---------------------------------------------------------------------------

std::string_view version() {
    return BELLGATE_VERSION_STRING;
}

std::string_view to_string(Protocol protocol) {
    switch (protocol) {
        case Protocol::Teleport:
            return "teleport";
        case Protocol::Swap:
            return "swap";
        case Protocol::GateOnly:
            return "gate-only";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (!(overlap >= 0.0 && overlap <= 1.0)) throw ConfigError("overlap", "must lie in [0, 1]");
    if (!(pair_mixedness >= 0.0 && pair_mixedness <= 1.0)) throw ConfigError("pair_mixedness", "must lie in [0, 1]");
    if (!(input_mixedness >= 0.0 && input_mixedness <= 1.0)) {
        throw ConfigError("input_mixedness", "must lie in [0, 1]");
    }
    if (counts_per_setting == 0) throw ConfigError("counts_per_setting", "must be positive");
    if (bootstrap_resamples < 100) throw ConfigError("bootstrap_resamples", "must be at least 100");
    static const std::set<std::string> detectors{"a+", "a-", "b+", "b-", "c+", "c-", "d+", "d-"};
    for (const auto &[name, eta] : efficiencies) {
        if (!detectors.contains(name)) throw ConfigError("efficiencies." + name, "unknown detector");
        if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("efficiencies." + name, "must lie in (0, 1]");
    }
    if (protocol == Protocol::Teleport) {
        if (inputs.empty()) throw ConfigError("inputs", "at least one input state required");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const std::string path = "inputs[" + std::to_string(i) + "]";
            try {
                polarization_ket(inputs[i]);
            } catch (const InvalidArgument &e) {
                throw ConfigError(path, e.what());
            }
            if (!seen.insert(inputs[i]).second) throw ConfigError(path, "duplicate input");
        }
    }
    if (protocol == Protocol::GateOnly) product_input(gate_input);
}

double ExperimentConfig::efficiency(const std::string &detector) const {
    const auto it = efficiencies.find(detector);
    return it == efficiencies.end() ? 1.0 : it->second;
}

ExperimentConfig parse_experiment_config(std::string_view json_text) {
    const json doc = parse_json_object(json_text);
    reject_unknown_keys(doc, "",
                        {"protocol", "overlap", "pair_mixedness", "input_mixedness", "counts_per_setting",
                         "efficiencies", "seed", "bootstrap_resamples", "inputs", "gate_input", "output"});
    ExperimentConfig c;
    if (!doc.contains("protocol")) throw ConfigError("protocol", "missing");
    const std::string protocol = get_string(doc["protocol"], "protocol");
    if (protocol == "teleport") {
        c.protocol = Protocol::Teleport;
    } else if (protocol == "swap") {
        c.protocol = Protocol::Swap;
    } else if (protocol == "gate-only") {
        c.protocol = Protocol::GateOnly;
    } else {
        throw ConfigError("protocol", "expected teleport, swap or gate-only");
    }
    if (doc.contains("overlap")) c.overlap = get_unit_interval(doc["overlap"], "overlap");
    if (doc.contains("pair_mixedness")) c.pair_mixedness = get_unit_interval(doc["pair_mixedness"], "pair_mixedness");
    if (doc.contains("input_mixedness")) {
        c.input_mixedness = get_unit_interval(doc["input_mixedness"], "input_mixedness");
    }
    if (doc.contains("counts_per_setting")) {
        c.counts_per_setting = get_unsigned(doc["counts_per_setting"], "counts_per_setting");
    }
    if (doc.contains("efficiencies")) {
        const json &eff = doc["efficiencies"];
        if (!eff.is_object()) throw ConfigError("efficiencies", "expected an object");
        for (const auto &[k, v] : eff.items()) c.efficiencies[k] = get_number(v, "efficiencies." + k);
    }
    if (doc.contains("seed")) c.seed = get_unsigned(doc["seed"], "seed");
    if (doc.contains("bootstrap_resamples")) {
        const std::uint64_t n = get_unsigned(doc["bootstrap_resamples"], "bootstrap_resamples");
        if (n > 1000000) throw ConfigError("bootstrap_resamples", "too large");
        c.bootstrap_resamples = static_cast<int>(n);
    }
    if (doc.contains("inputs")) {
        const json &in = doc["inputs"];
        if (!in.is_array()) throw ConfigError("inputs", "expected a list of state names");
        c.inputs.clear();
        for (std::size_t i = 0; i < in.size(); ++i) {
            c.inputs.push_back(get_string(in[i], "inputs[" + std::to_string(i) + "]"));
        }
    }
    if (doc.contains("gate_input")) c.gate_input = get_string(doc["gate_input"], "gate_input");
    if (doc.contains("output")) c.output = get_string(doc["output"], "output");
    c.validate();
    return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path &path) {
    return parse_experiment_config(read_file(path));
}

std::vector<SettingDistribution> tomography_distribution(const DensityMatrix &rho) {
    return normalized_distribution(rho);
}

CountTable simulate_counts(const std::vector<SettingDistribution> &distribution, double events,
                           const std::map<std::string, double> &efficiencies, const std::vector<std::string> &modes,
                           std::uint64_t seed, double extra_efficiency) {
    if (!(events >= 0.0) || !std::isfinite(events)) throw InvalidArgument("simulate_counts: invalid event count");
    if (!(extra_efficiency > 0.0)) throw InvalidArgument("simulate_counts: efficiency must be positive");
    const int n = static_cast<int>(modes.size());
    CountTable table(n);
    const std::vector<std::string> labels = outcome_labels(n);
    for (std::size_t s = 0; s < distribution.size(); ++s) {
        const auto &d = distribution[s];
        if (static_cast<int>(d.setting.size()) != n || d.probabilities.size() != labels.size()) {
            throw InvalidArgument("simulate_counts: setting " + d.setting + " does not match the analysed modes");
        }
        double total = 0.0;
        for (double p : d.probabilities) {
            if (!(p >= -1e-12)) throw InvalidArgument("simulate_counts: negative probability in " + d.setting);
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-9) {
            throw InvalidArgument("simulate_counts: probabilities of " + d.setting + " do not sum to 1");
        }
        std::mt19937_64 rng(mix_seed(seed, s));
        for (std::size_t o = 0; o < labels.size(); ++o) {
            double eta = extra_efficiency;
            for (int q = 0; q < n; ++q) {
                const auto it = efficiencies.find(modes[static_cast<std::size_t>(q)] + labels[o][static_cast<std::size_t>(q)]);
                if (it != efficiencies.end()) {
                    if (!(it->second > 0.0)) throw InvalidArgument("simulate_counts: efficiency must be positive");
                    eta *= it->second;
                }
            }
            const double mean = events * std::max(0.0, d.probabilities[o]) * eta;
            std::uint64_t raw = 0;
            if (mean > 0.0) {
                std::poisson_distribution<std::uint64_t> draw(mean);
                raw = draw(rng);
            }
            table.add(d.setting, labels[o], raw, eta);
        }
    }
    return table;
}

Report run_experiment(const ExperimentConfig &config) {
    config.validate();
    Report report;
    report.config = config;
    report.version = std::string(version());
    switch (config.protocol) {
        case Protocol::Teleport:
            report.teleport = run_teleport(config, report.counts);
            break;
        case Protocol::Swap:
            report.swap = run_swap(config, report.counts);
            break;
        case Protocol::GateOnly:
            report.gate = run_gate(config, report.counts);
            break;
    }
    return report;
}

std::string report_json(const Report &report) {
    json j;
    j["metadata"] = json{{"tool", "bellgate"}, {"version", report.version}, {"seed", report.config.seed}};
    j["config"] = config_json(report.config);
    if (report.teleport) {
        const auto &t = *report.teleport;
        json inputs = json::array();
        for (const auto &in : t.inputs) {
            json branches = json::array();
            for (const auto &b : in.branches) branches.push_back(branch_json(b));
            json ij{{"input", in.input},
                    {"average_fidelity", estimate_json(in.average_fidelity)},
                    {"exact_average_fidelity", in.exact_average_fidelity},
                    {"branches", std::move(branches)}};
            if (in.average_output) ij["average_output"] = matrix_json(in.average_output->matrix());
            inputs.push_back(std::move(ij));
        }
        json tj{{"inputs", std::move(inputs)}};
        if (t.process) {
            tj["process_matrix"] = matrix_json(t.process->matrix());
            tj["process_fidelity"] = estimate_json(*t.process_fidelity);
            tj["exact_process_fidelity"] = *t.exact_process_fidelity;
        }
        j["teleport"] = std::move(tj);
    }
    if (report.swap) {
        const auto &s = *report.swap;
        json branches = json::array();
        for (const auto &b : s.branches) branches.push_back(branch_json(b));
        j["swap"] = json{{"branches", std::move(branches)},
                         {"average_fidelity", estimate_json(s.average_fidelity)},
                         {"average_negativity", estimate_json(s.average_negativity)},
                         {"average_abs_chsh", estimate_json(s.average_abs_chsh)},
                         {"exact_average_fidelity", s.exact_average_fidelity},
                         {"exact_average_abs_chsh", s.exact_average_abs_chsh}};
    }
    if (report.gate) {
        const auto &g = *report.gate;
        json gj{{"input", g.input},
                {"exact_success_probability", g.exact_success_probability},
                {"success_probability", estimate_json(g.success_probability)},
                {"output_fidelity", estimate_json(g.output_fidelity)},
                {"exact_output_fidelity", g.exact_output_fidelity}};
        if (g.reconstructed) gj["reconstructed"] = matrix_json(g.reconstructed->matrix());
        j["gate"] = std::move(gj);
    }
    return j.dump(2) + "\n";
}

std::string report_csv(const Report &report) {
    std::ostringstream out;
    write_counts_csv(out, report.counts);
    return out.str();
}

ExactPrediction exact_prediction(double overlap, double pair_mixedness, double input_mixedness) {
    const GateChannel channel = gate_channel(overlap);
    const ExactTeleport t = exact_teleport(channel, pair_mixedness, input_mixedness);
    const ExactSwap s = exact_swap(channel, pair_mixedness);
    ExactPrediction p;
    p.overlap = overlap;
    p.pair_mixedness = pair_mixedness;
    p.input_mixedness = input_mixedness;
    p.teleport_fidelity = t.fidelity;
    p.process_fidelity = t.process_fidelity;
    p.swap_fidelity = s.fidelity;
    p.swap_negativity = s.negativity;
    p.swap_chsh = s.chsh;
    p.swap_average_fidelity = mean_of(s.fidelity);
    p.swap_average_negativity = mean_of(s.negativity);
    p.swap_average_abs_chsh =
        (std::abs(s.chsh[0]) + std::abs(s.chsh[1]) + std::abs(s.chsh[2]) + std::abs(s.chsh[3])) / 4.0;
    return p;
}

CalibrationTargets published_targets() {
    CalibrationTargets t;
    t.teleport_fidelity = {{"H", 0.93}, {"V", 0.75}, {"+", 0.79}, {"R", 0.84}};
    t.process_fidelity = 0.75;
    t.swap_fidelity = 0.773;
    t.swap_chsh = 2.14;
    return t;
}

CalibrationConfig parse_calibration_config(std::string_view json_text) {
    const json doc = parse_json_object(json_text);
    reject_unknown_keys(doc, "", {"targets", "grid"});
    CalibrationConfig c;
    if (doc.contains("targets")) {
        const json &t = doc["targets"];
        if (!t.is_object()) throw ConfigError("targets", "expected an object");
        reject_unknown_keys(t, "targets", {"teleport_fidelity", "process_fidelity", "swap_fidelity", "swap_chsh"});
        c.targets = CalibrationTargets{};
        if (t.contains("teleport_fidelity")) {
            const json &tf = t["teleport_fidelity"];
            if (!tf.is_object()) throw ConfigError("targets.teleport_fidelity", "expected an object");
            for (const auto &[k, v] : tf.items()) {
                const std::string path = "targets.teleport_fidelity." + k;
                if (std::find(kProcessInputs.begin(), kProcessInputs.end(), k) == kProcessInputs.end()) {
                    throw ConfigError(path, "expected one of H, V, +, R");
                }
                c.targets.teleport_fidelity[k] = get_unit_interval(v, path);
            }
        }
        if (t.contains("process_fidelity")) {
            c.targets.process_fidelity = get_unit_interval(t["process_fidelity"], "targets.process_fidelity");
        }
        if (t.contains("swap_fidelity")) {
            c.targets.swap_fidelity = get_unit_interval(t["swap_fidelity"], "targets.swap_fidelity");
        }
        if (t.contains("swap_chsh")) {
            const double s = get_number(t["swap_chsh"], "targets.swap_chsh");
            if (!(s >= 0.0 && s <= 2.0 * std::numbers::sqrt2 + 1e-9)) {
                throw ConfigError("targets.swap_chsh", "must lie in [0, 2 sqrt 2]");
            }
            c.targets.swap_chsh = s;
        }
    }
    if (!doc.contains("grid")) throw ConfigError("grid", "missing");
    const json &g = doc["grid"];
    if (!g.is_object()) throw ConfigError("grid", "expected an object");
    reject_unknown_keys(g, "grid", {"overlap", "pair_mixedness", "input_mixedness"});
    c.overlap_grid = g.contains("overlap") ? parse_axis(g["overlap"], "grid.overlap") : std::vector<double>{1.0};
    c.pair_mixedness_grid =
        g.contains("pair_mixedness") ? parse_axis(g["pair_mixedness"], "grid.pair_mixedness") : std::vector<double>{0.0};
    c.input_mixedness_grid = g.contains("input_mixedness") ? parse_axis(g["input_mixedness"], "grid.input_mixedness")
                                                           : std::vector<double>{0.0};
    return c;
}

CalibrationConfig load_calibration_config(const std::filesystem::path &path) {
    return parse_calibration_config(read_file(path));
}

double calibration_residual(const ExactPrediction &p, const CalibrationTargets &targets) {
    double r = 0.0;
    for (const auto &[name, target] : targets.teleport_fidelity) {
        const double d = p.teleport_fidelity.at(name) - target;
        r += d * d;
    }
    if (targets.process_fidelity) r += std::pow(p.process_fidelity - *targets.process_fidelity, 2);
    if (targets.swap_fidelity) r += std::pow(p.swap_average_fidelity - *targets.swap_fidelity, 2);
    if (targets.swap_chsh) r += std::pow(p.swap_average_abs_chsh - *targets.swap_chsh, 2);
    return r;
}

CalibrationResult calibrate(const CalibrationConfig &config) {
    if (config.overlap_grid.empty() || config.pair_mixedness_grid.empty() || config.input_mixedness_grid.empty()) {
        throw ConfigError("grid", "every grid axis needs at least one value");
    }
    const bool need_swap = config.targets.swap_fidelity || config.targets.swap_chsh;
    const std::size_t n_pair = config.pair_mixedness_grid.size();
    const std::size_t n_input = config.input_mixedness_grid.size();

    // One worker per overlap slice; the reduction below runs in grid order, so the result
    // does not depend on scheduling.
    std::vector<std::vector<double>> residuals(config.overlap_grid.size());
    std::vector<std::exception_ptr> failures(config.overlap_grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t iv = next++; iv < config.overlap_grid.size(); iv = next++) {
            try {
                const GateChannel channel = gate_channel(config.overlap_grid[iv]);
                auto &slice = residuals[iv];
                slice.reserve(n_pair * n_input);
                for (double lp : config.pair_mixedness_grid) {
                    const ExactSwap s = need_swap ? exact_swap(channel, lp) : ExactSwap{};
                    for (double li : config.input_mixedness_grid) {
                        ExactPrediction p;
                        const ExactTeleport t = exact_teleport(channel, lp, li);
                        p.teleport_fidelity = t.fidelity;
                        p.process_fidelity = t.process_fidelity;
                        p.swap_average_fidelity = mean_of(s.fidelity);
                        p.swap_average_abs_chsh = (std::abs(s.chsh[0]) + std::abs(s.chsh[1]) +
                                                   std::abs(s.chsh[2]) + std::abs(s.chsh[3])) /
                                                  4.0;
                        slice.push_back(calibration_residual(p, config.targets));
                    }
                }
            } catch (...) {
                failures[iv] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, config.overlap_grid.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto &t : pool) t.join();
    for (const auto &f : failures) {
        if (f) std::rethrow_exception(f);
    }

    CalibrationResult result;
    std::size_t bv = 0, bp = 0, bi = 0;
    bool have_best = false;
    for (std::size_t iv = 0; iv < residuals.size(); ++iv) {
        for (std::size_t k = 0; k < residuals[iv].size(); ++k) {
            ++result.evaluated;
            const double r = residuals[iv][k];
            if (!have_best || r < result.residual) {
                result.residual = r;
                bv = iv;
                bp = k / n_input;
                bi = k % n_input;
                have_best = true;
            }
        }
    }
    result.best = exact_prediction(config.overlap_grid[bv], config.pair_mixedness_grid[bp],
                                   config.input_mixedness_grid[bi]);
    return result;
}

std::string calibration_json(const CalibrationConfig &config, const CalibrationResult &result) {
    json targets = json::object();
    json tf = json::object();
    for (const auto &[k, v] : config.targets.teleport_fidelity) tf[k] = v;
    targets["teleport_fidelity"] = std::move(tf);
    if (config.targets.process_fidelity) targets["process_fidelity"] = *config.targets.process_fidelity;
    if (config.targets.swap_fidelity) targets["swap_fidelity"] = *config.targets.swap_fidelity;
    if (config.targets.swap_chsh) targets["swap_chsh"] = *config.targets.swap_chsh;
    json j{{"metadata", json{{"tool", "bellgate"}, {"version", std::string(version())}}},
           {"targets", std::move(targets)},
           {"grid",
            json{{"overlap", config.overlap_grid},
                 {"pair_mixedness", config.pair_mixedness_grid},
                 {"input_mixedness", config.input_mixedness_grid}}},
           {"evaluated", result.evaluated},
           {"residual", result.residual},
           {"best", prediction_json(result.best)}};
    return j.dump(2) + "\n";
}

std::string gate_table(double overlap) {
    const GateChannel channel = gate_channel(overlap);
    std::ostringstream out;
    out << "CPHASE gate, overlap v = " << overlap << ", " << channel.kraus.size() << " Kraus operator(s)\n\n";
    out << "input  ideal    K0 diagonal          success probability\n";
    const Eigen::Matrix4cd &coherent = channel.kraus.front();
    for (int i = 0; i < 4; ++i) {
        Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
        rho(i, i) = 1.0;
        const double p = channel.success_probability(Matrix(rho));
        out << "|" << kBasisNames[static_cast<std::size_t>(i)] << ">   " << (i == 3 ? "-" : "+") << "|"
            << kBasisNames[static_cast<std::size_t>(i)] << ">    " << std::setw(18) << std::left
            << format_amplitude(coherent(i, i)) << std::right << "   " << std::fixed << std::setprecision(6) << p
            << std::defaultfloat << "\n";
    }
    out << "\nBell-state analysis (tilde Bell state in, +/-45 deg product state out)\n";
    for (TildeBell b : kTildeBells) {
        const BsaResult r = bsa(tilde_bell(b).projector(), channel);
        out << "  " << std::setw(5) << std::left << to_string(b) << std::right << " ->";
        for (const auto &o : r.outcomes) {
            out << "  " << to_string(o.product) << ": " << std::fixed << std::setprecision(6) << o.probability;
        }
        out << std::defaultfloat << "\n";
    }
    return out.str();
}

std::string gate_table_json(double overlap) {
    const GateChannel channel = gate_channel(overlap);
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
        rho(i, i) = 1.0;
        const Complex a = channel.kraus.front()(i, i);
        rows.push_back(json{{"input", kBasisNames[static_cast<std::size_t>(i)]},
                            {"coherent_amplitude", json{{"re", a.real()}, {"im", a.imag()}}},
                            {"success_probability", channel.success_probability(Matrix(rho))}});
    }
    json bell = json::array();
    for (TildeBell b : kTildeBells) {
        const BsaResult r = bsa(tilde_bell(b).projector(), channel);
        json probs = json::object();
        for (const auto &o : r.outcomes) probs[std::string(to_string(o.product))] = o.probability;
        bell.push_back(json{{"bell_state", std::string(to_string(b))}, {"outcomes", std::move(probs)}});
    }
    json kraus = json::array();
    for (const auto &k : channel.kraus) kraus.push_back(matrix_json(Matrix(k)));
    json j{{"overlap", overlap}, {"truth_table", std::move(rows)}, {"bell_analysis", std::move(bell)},
           {"kraus", std::move(kraus)}};
    return j.dump(2) + "\n";
}

}  // namespace bellgate
