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

// Coincidence count records and their flat CSV form.
//
// CSV columns: table,setting,outcome,raw,efficiency,corrected
//   table      free-form group name, e.g. "teleport/H/++"
//   setting    one basis letter (Z, X, Y) per analysed qubit, e.g. "ZX"
//   outcome    one sign per analysed qubit, e.g. "+-"
//   raw        integer detection count
//   efficiency product of the relative efficiencies of the firing detectors
//   corrected  raw / efficiency

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace bellgate {

struct CountRow {
    std::string setting;
    std::string outcome;
    std::uint64_t raw = 0;
    double efficiency = 1.0;

    double corrected() const {
        return static_cast<double>(raw) / efficiency;
    }
};

class CountTable {
   public:
    explicit CountTable(int num_qubits = 1);

    /// Throws InvalidArgument on malformed setting/outcome strings or non-positive efficiency.
    void add(std::string setting, std::string outcome, std::uint64_t raw, double efficiency = 1.0);

    int num_qubits() const noexcept {
        return num_qubits_;
    }
    const std::vector<CountRow> &rows() const noexcept {
        return rows_;
    }
    std::vector<CountRow> &mutable_rows() noexcept {
        return rows_;
    }

    std::uint64_t total_raw() const;
    double total_corrected() const;
    /// Corrected counts summed over outcomes of one setting.
    double setting_total(std::string_view setting) const;

   private:
    int num_qubits_;
    std::vector<CountRow> rows_;
};

using NamedCountTables = std::vector<std::pair<std::string, CountTable>>;

void write_counts_csv(std::ostream &out, const NamedCountTables &tables);
/// Parses the CSV written by write_counts_csv. Efficiencies are taken from the file.
NamedCountTables read_counts_csv(std::istream &in);

}  // namespace bellgate
