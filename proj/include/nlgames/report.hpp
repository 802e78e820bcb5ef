// Copyright 2026 The nlgames Authors
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

#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlgames/error.hpp"
#include "nlgames/games.hpp"
#include "nlgames/protocols.hpp"

namespace nlgames {

inline constexpr const char* kVersion = "0.1.0";

inline std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_fraction(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline std::string format_hash(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string format_bits(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += std::to_string(x);
  return s;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    if (row.size() != header.size()) throw ParameterError("CSV row width does not match the header");
    rows.push_back(std::move(row));
  }
};

struct Manifest {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::string command;
};

inline std::string manifest_line(const Manifest& m) {
  return "# nlgames " + std::string(kVersion) + " command=" + m.command + " seed=" + std::to_string(m.seed) +
         " config=" + format_hash(m.config_hash);
}

inline void write_csv(std::ostream& os, const CsvTable& t, const Manifest& m) {
  os << manifest_line(m) << "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

inline std::string to_csv(const CsvTable& t, const Manifest& m) {
  std::ostringstream os;
  write_csv(os, t, m);
  return os.str();
}

// Flat per-input record of a protocol report.
inline CsvTable protocol_report_table(const ProtocolReport& r) {
  CsvTable t;
  t.header = {"game", "state", "protocol", "method", "input", "probability", "win"};
  for (const auto& in : r.per_input)
    t.add({r.game, r.state, r.protocol, r.method, format_bits(in.input), format_fraction(in.probability),
           format_real(in.win)});
  t.add({r.game, r.state, r.protocol, r.method, "total", "1/1", format_real(r.value)});
  return t;
}

// Nested text rendering.
inline std::string protocol_report_text(const ProtocolReport& r) {
  std::ostringstream os;
  os << "report {\n"
     << "  game: " << r.game << "\n"
     << "  state: " << r.state << "\n"
     << "  protocol: " << r.protocol << "\n"
     << "  method: " << r.method << "\n"
     << "  value: " << format_real(r.value) << "\n"
     << "  error_bound: " << format_real(r.error_bound) << "\n"
     << "  inputs {\n";
  for (const auto& in : r.per_input)
    os << "    " << format_bits(in.input) << " p=" << format_fraction(in.probability) << " win=" << format_real(in.win)
       << "\n";
  os << "  }\n}\n";
  return os.str();
}

}  // namespace nlgames
