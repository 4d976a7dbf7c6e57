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

#pragma once

#include <string>
#include <vector>

namespace asrfe2 {

struct HistoryRecord {
  double t_days = 0.0;
  double strain_x = 0.0;
  double strain_y = 0.0;
  double crack_density_aggregate = 0.0;
  double crack_density_mortar = 0.0;
  double rel_stiffness_x = 100.0;  // percent
  double rel_stiffness_y = 100.0;
  int n_damaged = 0;

  bool operator==(const HistoryRecord&) const = default;
};

inline constexpr const char* kHistoryCsvHeader =
    "t_days,strain_x,strain_y,crack_density_aggregate,crack_density_mortar,"
    "rel_stiffness_x,rel_stiffness_y,n_damaged";

/// Round-trip exact: doubles are printed with 17 significant digits.
std::string history_to_csv(const std::vector<HistoryRecord>& history);
std::vector<HistoryRecord> history_from_csv(const std::string& csv);

void write_history_csv(const std::string& path,
                       const std::vector<HistoryRecord>& history);
std::vector<HistoryRecord> read_history_csv(const std::string& path);

} // namespace asrfe2
