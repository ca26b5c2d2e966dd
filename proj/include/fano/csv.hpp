// Copyright 2026 The fanolines Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FANO_CSV_HPP
#define FANO_CSV_HPP

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace fano {

inline constexpr const char* kUnitsLine =
    "# units: energies and rates in n*pi*V^2 (hbar = 1), times in 1/(n*pi*V^2)";

/// %.17g: round-trips every double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& columns) : os_(os) {
    os_ << kUnitsLine << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_double(values[i]);
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

}  // namespace fano

#endif  // FANO_CSV_HPP
