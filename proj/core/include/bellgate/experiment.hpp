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

// Config-driven experiment runner: exact protocol -> Poisson counts -> MLE -> metrics.
//
// Experiment config (JSON object; every key optional except "protocol"):
//   protocol            "teleport" | "swap" | "gate-only"
//   overlap             wavepacket overlap v in [0, 1]                       (1.0)
//   pair_mixedness      white-noise weight of every entangled pair           (0.0)
//   input_mixedness     white-noise weight of the teleported input photon    (0.0)
//   counts_per_setting  post-selected events per tomography setting, > 0     (10000)
//   efficiencies        {"a+": 0.9, "a-": 1.0, ...} relative detector efficiencies in (0, 1]
//                       detectors: a, d (analysers), b, c (Bell-state analyser / gate outputs)
//   seed                unsigned 64-bit RNG seed                             (1)
//   bootstrap_resamples Poisson bootstrap resamples, >= 100                  (200)
//   inputs              teleported inputs, subset of H V + - R L             (["H","V","+","R"])
//   gate_input          two-letter product input for gate-only runs          ("VV")
//   output              report path (the CLI's --out wins)                   ("")
//
// Calibration config:
//   targets  {"teleport_fidelity": {"H": .., "V": .., "+": .., "R": ..},
//             "process_fidelity": .., "swap_fidelity": .., "swap_chsh": ..}
//   grid     {"overlap": AXIS, "pair_mixedness": AXIS, "input_mixedness": AXIS}
//            AXIS is a number, a list, or {"start": .., "stop": .., "step": ..}

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellgate/counts.hpp"
#include "bellgate/metrics.hpp"
#include "bellgate/protocols.hpp"
#include "bellgate/tomography.hpp"

namespace bellgate {

std::string_view version();

enum class Protocol { Teleport, Swap, GateOnly };
std::string_view to_string(Protocol protocol);

struct ExperimentConfig {
    Protocol protocol = Protocol::Teleport;
    double overlap = 1.0;
    double pair_mixedness = 0.0;
    double input_mixedness = 0.0;
    std::uint64_t counts_per_setting = 10000;
    std::map<std::string, double> efficiencies;
    std::uint64_t seed = 1;
    int bootstrap_resamples = 200;
    std::vector<std::string> inputs = {"H", "V", "+", "R"};
    std::string gate_input = "VV";
    std::string output;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    /// Efficiency of one detector ("a+", "c-", ...), 1 when not configured.
    double efficiency(const std::string &detector) const;
};

ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path &path);

/// Outcome probabilities of one analyser setting, in outcome_labels order.
struct SettingDistribution {
    std::string setting;
    std::vector<double> probabilities;
};

/// Raw count of outcome o ~ Poisson(events * p_o * eta_o * extra_efficiency), where eta_o is the
/// product of the efficiencies of the detectors `modes[q] + sign_q`. The corrected column divides
/// the same efficiencies back out. Each setting draws from its own stream derived from `seed`.
/// Throws InvalidArgument if a distribution does not sum to 1 within 1e-9.
CountTable simulate_counts(const std::vector<SettingDistribution> &distribution, double events,
                           const std::map<std::string, double> &efficiencies, const std::vector<std::string> &modes,
                           std::uint64_t seed, double extra_efficiency = 1.0);

/// Exact tomography distributions of a state over all Pauli settings.
std::vector<SettingDistribution> tomography_distribution(const DensityMatrix &rho);

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct BranchReport {
    ProductOutcome outcome = ProductOutcome::PlusPlus;
    TildeBell bell = TildeBell::PhiPlus;
    double exact_probability = 0.0;  // P(outcome | gate success)
    double observed_fraction = 0.0;  // share of corrected counts
    std::optional<Correction> correction;
    std::optional<DensityMatrix> exact_state;
    std::optional<DensityMatrix> reconstructed;  // raw (uncorrected) MLE estimate
    Estimate fidelity;
    double exact_fidelity = 0.0;
    std::optional<Estimate> negativity;
    std::optional<Estimate> chsh;
    std::optional<ChshVariant> chsh_variant;
};

struct TeleportInputReport {
    std::string input;
    std::vector<BranchReport> branches;
    Estimate average_fidelity;
    double exact_average_fidelity = 0.0;
    std::optional<DensityMatrix> average_output;  // corrected, count-weighted
};

struct TeleportReport {
    std::vector<TeleportInputReport> inputs;
    std::optional<ProcessMatrix> process;
    std::optional<Estimate> process_fidelity;
    std::optional<double> exact_process_fidelity;
};

struct SwapReport {
    std::vector<BranchReport> branches;
    Estimate average_fidelity;
    Estimate average_negativity;
    Estimate average_abs_chsh;
    double exact_average_fidelity = 0.0;
    double exact_average_abs_chsh = 0.0;
};

struct GateReport {
    std::string input;
    double exact_success_probability = 0.0;
    Estimate success_probability;
    std::optional<DensityMatrix> reconstructed;
    Estimate output_fidelity;
    double exact_output_fidelity = 0.0;
};

struct Report {
    ExperimentConfig config;
    std::string version;
    std::optional<TeleportReport> teleport;
    std::optional<SwapReport> swap;
    std::optional<GateReport> gate;
    NamedCountTables counts;
};

Report run_experiment(const ExperimentConfig &config);

std::string report_json(const Report &report);
std::string report_csv(const Report &report);

/// Noise-model quantities computed without counts.
struct ExactPrediction {
    double overlap = 1.0;
    double pair_mixedness = 0.0;
    double input_mixedness = 0.0;
    std::map<std::string, double> teleport_fidelity;  // H, V, +, R
    double process_fidelity = 0.0;
    std::array<double, 4> swap_fidelity{};
    std::array<double, 4> swap_negativity{};
    std::array<double, 4> swap_chsh{};  // signed, per-branch variant
    double swap_average_fidelity = 0.0;
    double swap_average_abs_chsh = 0.0;
    double swap_average_negativity = 0.0;
};

ExactPrediction exact_prediction(double overlap, double pair_mixedness, double input_mixedness);

struct CalibrationTargets {
    std::map<std::string, double> teleport_fidelity;
    std::optional<double> process_fidelity;
    std::optional<double> swap_fidelity;
    std::optional<double> swap_chsh;
};

/// Reported values: F_H, F_V, F_+, F_R, F_p, mean swap fidelity, mean |S|.
CalibrationTargets published_targets();

struct CalibrationConfig {
    CalibrationTargets targets = published_targets();
    std::vector<double> overlap_grid;
    std::vector<double> pair_mixedness_grid;
    std::vector<double> input_mixedness_grid;
};

CalibrationConfig parse_calibration_config(std::string_view json_text);
CalibrationConfig load_calibration_config(const std::filesystem::path &path);

struct CalibrationResult {
    ExactPrediction best;
    double residual = 0.0;
    std::size_t evaluated = 0;
};

/// Exhaustive grid search minimizing the summed squared residual to the configured targets.
/// Ties go to the first grid point in (overlap, pair, input) order.
CalibrationResult calibrate(const CalibrationConfig &config);
double calibration_residual(const ExactPrediction &prediction, const CalibrationTargets &targets);

std::string calibration_json(const CalibrationConfig &config, const CalibrationResult &result);

/// Text truth table of the post-selected gate at overlap v: basis input, output amplitudes,
/// success probability.
std::string gate_table(double overlap);
std::string gate_table_json(double overlap);

}  // namespace bellgate
