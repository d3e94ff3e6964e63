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

#include "bellgate/counts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "bellgate/error.hpp"

namespace bellgate {

namespace {
constexpr std::string_view kCsvHeader = "table,setting,outcome,raw,efficiency,corrected";
}  // namespace
namespace {

bool valid_setting(std::string_view s, int n) {
    if (static_cast<int>(s.size()) != n) return false;
    for (char ch : s) {
        if (ch != 'X' && ch != 'Y' && ch != 'Z') return false;
    }
    return true;
}

bool valid_outcome(std::string_view s, int n) {
    if (static_cast<int>(s.size()) != n) return false;
    for (char ch : s) {
        if (ch != '+' && ch != '-') return false;
    }
    return true;
}

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

CountTable::CountTable(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1) throw InvalidArgument("CountTable: at least one analysed qubit required");
}

void CountTable::add(std::string setting, std::string outcome, std::uint64_t raw, double efficiency) {
    if (!valid_setting(setting, num_qubits_)) {
        throw InvalidArgument("CountTable: malformed setting '" + setting + "'");
    }
    if (!valid_outcome(outcome, num_qubits_)) {
        throw InvalidArgument("CountTable: malformed outcome '" + outcome + "'");
    }
    if (!(efficiency > 0.0) || !std::isfinite(efficiency)) {
        throw InvalidArgument("CountTable: efficiency must be positive");
    }
    rows_.push_back(CountRow{std::move(setting), std::move(outcome), raw, efficiency});
}

std::uint64_t CountTable::total_raw() const {
    std::uint64_t sum = 0;
    for (const auto &r : rows_) sum += r.raw;
    return sum;
}

double CountTable::total_corrected() const {
    double sum = 0.0;
    for (const auto &r : rows_) sum += r.corrected();
    return sum;
}

double CountTable::setting_total(std::string_view setting) const {
    double sum = 0.0;
    for (const auto &r : rows_) {
        if (r.setting == setting) sum += r.corrected();
    }
    return sum;
}

void write_counts_csv(std::ostream &out, const NamedCountTables &tables) {
    out << kCsvHeader << '\n';
    const auto old_precision = out.precision(17);
    for (const auto &[name, table] : tables) {
        for (const auto &r : table.rows()) {
            out << name << ',' << r.setting << ',' << r.outcome << ',' << r.raw << ',' << r.efficiency << ','
                << r.corrected() << '\n';
        }
    }
    out.precision(old_precision);
}

NamedCountTables read_counts_csv(std::istream &in) {
    NamedCountTables tables;
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("read_counts_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw InvalidArgument("read_counts_csv: unexpected header '" + line + "'");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) {
            throw InvalidArgument("read_counts_csv: line " + std::to_string(line_no) + " has " +
                                  std::to_string(f.size()) + " fields, expected 6");
        }
        std::uint64_t raw = 0;
        const auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), raw);
        if (ec != std::errc{} || ptr != f[3].data() + f[3].size()) {
            throw InvalidArgument("read_counts_csv: line " + std::to_string(line_no) + ": bad raw count");
        }
        double efficiency = 0.0;
        try {
            efficiency = std::stod(f[4]);
        } catch (const std::exception &) {
            throw InvalidArgument("read_counts_csv: line " + std::to_string(line_no) + ": bad efficiency");
        }
        auto it = std::find_if(tables.begin(), tables.end(), [&](const auto &t) { return t.first == f[0]; });
        if (it == tables.end()) {
            tables.emplace_back(f[0], CountTable(static_cast<int>(f[1].size())));
            it = std::prev(tables.end());
        }
        it->second.add(f[1], f[2], raw, efficiency);
    }
    return tables;
}

}  // namespace bellgate
