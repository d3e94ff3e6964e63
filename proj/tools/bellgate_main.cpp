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

// bellgate: command-line front end for the experiment runner.
//
//   bellgate run <config> [--seed N] [--out PATH] [--format json|csv]
//   bellgate calibrate <config> [--out PATH] [--format json|csv]
//   bellgate gate-table [--overlap V] [--out PATH] [--format json|csv]
//
// Exit codes: 0 success, 2 config or usage error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "bellgate/error.hpp"
#include "bellgate/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void emit(const std::string &text, const std::string &path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw bellgate::ConfigError("--out", "cannot write '" + path + "'");
    out << text;
    if (!out) throw bellgate::ConfigError("--out", "write to '" + path + "' failed");
}

std::string calibration_csv(const bellgate::CalibrationResult &r) {
    const auto &p = r.best;
    std::ostringstream out;
    out << std::setprecision(17);
    out << "overlap,pair_mixedness,input_mixedness,residual,F_H,F_V,F_+,F_R,F_p,swap_fidelity,swap_abs_chsh\n";
    out << p.overlap << ',' << p.pair_mixedness << ',' << p.input_mixedness << ',' << r.residual << ','
        << p.teleport_fidelity.at("H") << ',' << p.teleport_fidelity.at("V") << ',' << p.teleport_fidelity.at("+")
        << ',' << p.teleport_fidelity.at("R") << ',' << p.process_fidelity << ',' << p.swap_average_fidelity << ','
        << p.swap_average_abs_chsh << '\n';
    return out.str();
}

std::string gate_table_csv(double overlap) {
    const bellgate::GateChannel channel = bellgate::gate_channel(overlap);
    static const char *names[] = {"HH", "HV", "VH", "VV"};
    std::ostringstream out;
    out << std::setprecision(17);
    out << "input,coherent_re,coherent_im,success_probability\n";
    for (int i = 0; i < 4; ++i) {
        bellgate::Matrix rho = bellgate::Matrix::Zero(4, 4);
        rho(i, i) = 1.0;
        const bellgate::Complex a = channel.kraus.front()(i, i);
        out << names[i] << ',' << a.real() << ',' << a.imag() << ',' << channel.success_probability(rho) << '\n';
    }
    return out.str();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Linear-optics CPHASE gate: teleportation and entanglement-swapping simulator"};
    app.set_version_flag("--version", std::string(bellgate::version()));
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format;
    std::string config_path;
    double overlap = 1.0;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--out", out_path, "Output path (default: stdout)");
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App *run = app.add_subcommand("run", "Simulate an experiment and write a report");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--seed", seed, "Override the RNG seed");
    add_common(run);

    CLI::App *cal = app.add_subcommand("calibrate", "Grid-search noise parameters against target figures");
    cal->add_option("config", config_path, "Calibration config (JSON)")->required();
    add_common(cal);

    CLI::App *table = app.add_subcommand("gate-table", "Print the gate truth table and success probabilities");
    table->add_option("--overlap", overlap, "Wavepacket overlap v")->check(CLI::Range(0.0, 1.0));
    add_common(table);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (run->parsed()) {
            bellgate::ExperimentConfig config = bellgate::load_experiment_config(config_path);
            if (seed) config.seed = *seed;
            if (out_path.empty()) out_path = config.output;
            const bellgate::Report report = bellgate::run_experiment(config);
            emit(format == "csv" ? bellgate::report_csv(report) : bellgate::report_json(report), out_path);
        } else if (cal->parsed()) {
            const bellgate::CalibrationConfig config = bellgate::load_calibration_config(config_path);
            const bellgate::CalibrationResult result = bellgate::calibrate(config);
            emit(format == "csv" ? calibration_csv(result) : bellgate::calibration_json(config, result), out_path);
        } else if (table->parsed()) {
            std::string text;
            if (format == "json") {
                text = bellgate::gate_table_json(overlap);
            } else if (format == "csv") {
                text = gate_table_csv(overlap);
            } else {
                text = bellgate::gate_table(overlap);
            }
            emit(text, out_path);
        }
    } catch (const bellgate::ConfigError &e) {
        std::cerr << "bellgate: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const bellgate::InvalidArgument &e) {
        std::cerr << "bellgate: invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const bellgate::NumericalError &e) {
        std::cerr << "bellgate: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const bellgate::Error &e) {
        std::cerr << "bellgate: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
