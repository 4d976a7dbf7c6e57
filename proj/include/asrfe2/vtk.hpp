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

#include <Eigen/Dense>

#include "asrfe2/meso.hpp"

namespace asrfe2 {

/// Legacy ASCII VTK (v3.0) unstructured triangle mesh with CELL_DATA scalars
/// `damage`, `phase`, `crack_area`, `crack_angle`.
void write_vtk_fields(const std::string& path, const RveProblem& rve,
                      const std::vector<Eigen::Vector3d>& strain,
                      const std::string& title = "asrfe2 fields");

} // namespace asrfe2
