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

#include "asrfe2/macro.hpp"

namespace asrfe2 {

/// Versioned text snapshot of a multi-scale state: time, macro displacements
/// and all per-element constitutive memory. Doubles are stored as hex floats,
/// so a write/read round trip is bit-exact and a resumed march reproduces the
/// uninterrupted one bit for bit.
void write_checkpoint(const std::string& path, const MacroProblem& problem,
                      double t_days);

/// Restores u and element states into an already-constructed problem of
/// identical layout (same config and seeds); returns the checkpoint time.
double read_checkpoint(const std::string& path, MacroProblem& problem);

} // namespace asrfe2
