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

#include "asrfe2/vtk.hpp"

#include <cstdio>
#include <fstream>

#include "asrfe2/errors.hpp"
#include "asrfe2/metrics.hpp"

namespace asrfe2 {

void write_vtk_fields(const std::string& path, const RveProblem& rve,
                      const std::vector<Eigen::Vector3d>& strain,
                      const std::string& title) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open VTK file for writing: " + path);
  char buf[160];

  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << rve.mesh.num_nodes() << " double\n";
  for (const auto& p : rve.mesh.nodes) {
    std::snprintf(buf, sizeof(buf), "%.9g %.9g 0\n", p.x(), p.y());
    out << buf;
  }

  const int n = rve.num_elements();
  out << "CELLS " << n << ' ' << 4 * n << '\n';
  for (const auto& t : rve.mesh.triangles)
    out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << n << '\n';
  for (int e = 0; e < n; ++e) out << "5\n";

  out << "CELL_DATA " << n << '\n';
  auto scalars = [&](const char* name, auto&& value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int e = 0; e < n; ++e) {
      std::snprintf(buf, sizeof(buf), "%.9g\n", value(e));
      out << buf;
    }
  };
  scalars("damage", [&](int e) { return rve.states[static_cast<std::size_t>(e)].damage; });
  scalars("phase", [&](int e) {
    return static_cast<double>(rve.phases[static_cast<std::size_t>(e)]);
  });
  scalars("crack_area", [&](int e) {
    const Eigen::Vector3d& eps = strain[static_cast<std::size_t>(e)];
    return crack_area(rve.geometry[static_cast<std::size_t>(e)].area, eps(0) + eps(1),
                      rve.states[static_cast<std::size_t>(e)].step > 0);
  });
  scalars("crack_angle", [&](int e) {
    const ElementState& st = rve.states[static_cast<std::size_t>(e)];
    return st.cracked ? st.crack_angle : 0.0;
  });
}

} // namespace asrfe2
