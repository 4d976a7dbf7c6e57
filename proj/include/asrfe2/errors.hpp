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

#include <stdexcept>
#include <string>

namespace asrfe2 {

/// Bad user input: malformed config file, invalid parameter combination.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate or inconsistent mesh (zero-area element, bad connectivity).
class MeshError : public std::runtime_error {
public:
  explicit MeshError(const std::string& what) : std::runtime_error(what) {}
};

/// Opposite boundary edges cannot be paired node-by-node.
class PairingError : public std::runtime_error {
public:
  explicit PairingError(const std::string& what) : std::runtime_error(what) {}
};

/// Inadmissible constitutive state (nonsensical elastic constants).
class ConstitutiveError : public std::runtime_error {
public:
  explicit ConstitutiveError(const std::string& what) : std::runtime_error(what) {}
};

/// Direct factorization failed; carries the most-damaged element for diagnostics.
class SingularSystemError : public std::runtime_error {
public:
  SingularSystemError(const std::string& what, int worst_element)
      : std::runtime_error(what), worst_element(worst_element) {}
  int worst_element = -1;
};

/// An iterative loop (damage passes, macro iterations) hit its cap.
class NonConvergenceError : public std::runtime_error {
public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace asrfe2
