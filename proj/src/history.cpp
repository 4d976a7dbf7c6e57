// Copyright 2026 The asrfe2 Project Developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include "asrfe2/history.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "asrfe2/errors.hpp"

namespace asrfe2 {

std::string history_to_csv(const std::vector<HistoryRecord>& history) {
  std::string out(kHistoryCsvHeader);
  out += '\n';
  char line[512];
  for (const auto& r : history) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  r.t_days, r.strain_x, r.strain_y, r.crack_density_aggregate,
                  r.crack_density_mortar, r.rel_stiffness_x, r.rel_stiffness_y,
                  r.n_damaged);
    out += line;
  }
  return out;
}

std::vector<HistoryRecord> history_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kHistoryCsvHeader)
    throw ConfigError("history CSV: unexpected header");
  std::vector<HistoryRecord> history;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    HistoryRecord r;
    double* fields[7] = {&r.t_days,
                         &r.strain_x,
                         &r.strain_y,
                         &r.crack_density_aggregate,
                         &r.crack_density_mortar,
                         &r.rel_stiffness_x,
                         &r.rel_stiffness_y};
    const char* p = line.c_str();
    char* end = nullptr;
    for (auto* f : fields) {
      *f = std::strtod(p, &end);
      if (end == p || *end != ',')
        throw ConfigError("history CSV: malformed row '" + line + "'");
      p = end + 1;
    }
    r.n_damaged = static_cast<int>(std::strtol(p, &end, 10));
    if (end == p) throw ConfigError("history CSV: malformed row '" + line + "'");
    history.push_back(r);
  }
  return history;
}

void write_history_csv(const std::string& path,
                       const std::vector<HistoryRecord>& history) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open history file for writing: " + path);
  out << history_to_csv(history);
}

std::vector<HistoryRecord> read_history_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open history file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return history_from_csv(ss.str());
}

} // namespace asrfe2
