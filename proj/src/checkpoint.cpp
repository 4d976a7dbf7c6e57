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

#include "asrfe2/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "asrfe2/errors.hpp"

namespace asrfe2 {

namespace {

constexpr const char* kMagic = "asrfe2-checkpoint";
constexpr int kVersion = 1;

std::string hexd(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double parse_double(std::istream& in, const char* what) {
  std::string tok;
  if (!(in >> tok)) throw ConfigError(std::string("checkpoint: missing ") + what);
  return std::strtod(tok.c_str(), nullptr);
}

} // namespace

void write_checkpoint(const std::string& path, const MacroProblem& p, double t_days) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open checkpoint for writing: " + path);
  out << kMagic << ' ' << kVersion << '\n';
  out << "t " << hexd(t_days) << '\n';
  out << "u " << p.u.size() << '\n';
  for (Eigen::Index i = 0; i < p.u.size(); ++i) out << hexd(p.u[i]) << '\n';
  out << "rves " << p.rves.size() << '\n';
  for (std::size_t r = 0; r < p.rves.size(); ++r) {
    const RveProblem& rve = p.rves[r];
    out << "rve " << r << ' ' << rve.num_elements() << '\n';
    for (const auto& st : rve.states) {
      out << static_cast<int>(st.phase) << ' ' << st.cracked << ' ' << st.closed << ' '
          << st.step << ' ' << hexd(st.f_t_initial) << ' ' << hexd(st.f_t_current)
          << ' ' << hexd(st.damage) << ' ' << hexd(st.crack_angle) << ' '
          << hexd(st.eps_u) << ' ' << hexd(st.envelope.eps_u_reg) << ' '
          << hexd(st.envelope.E_t_reg) << '\n';
    }
  }
}

double read_checkpoint(const std::string& path, MacroProblem& p) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint: " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != kMagic || version != kVersion)
    throw ConfigError("checkpoint: unrecognized header in " + path);

  std::string key;
  in >> key;
  if (key != "t") throw ConfigError("checkpoint: expected time record");
  const double t = parse_double(in, "time");

  Eigen::Index n = 0;
  in >> key >> n;
  if (key != "u" || n != p.u.size())
    throw ConfigError("checkpoint: displacement size mismatch");
  for (Eigen::Index i = 0; i < n; ++i) p.u[i] = parse_double(in, "displacement");

  std::size_t n_rves = 0;
  in >> key >> n_rves;
  if (key != "rves" || n_rves != p.rves.size())
    throw ConfigError("checkpoint: RVE count mismatch");
  for (std::size_t r = 0; r < n_rves; ++r) {
    std::size_t idx = 0;
    int n_elem = 0;
    in >> key >> idx >> n_elem;
    if (key != "rve" || idx != r || n_elem != p.rves[r].num_elements())
      throw ConfigError("checkpoint: RVE layout mismatch");
    for (auto& st : p.rves[r].states) {
      int phase = 0;
      in >> phase >> st.cracked >> st.closed >> st.step;
      st.phase = static_cast<Phase>(phase);
      st.f_t_initial = parse_double(in, "state");
      st.f_t_current = parse_double(in, "state");
      st.damage = parse_double(in, "state");
      st.crack_angle = parse_double(in, "state");
      st.eps_u = parse_double(in, "state");
      st.envelope.eps_u_reg = parse_double(in, "state");
      st.envelope.E_t_reg = parse_double(in, "state");
    }
  }
  if (!in) throw ConfigError("checkpoint: truncated file " + path);
  return t;
}

} // namespace asrfe2
