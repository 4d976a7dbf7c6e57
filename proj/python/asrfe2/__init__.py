# Copyright 2026 The asrfe2 Project Developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
# implied. See the License for the specific language governing
# permissions and limitations under the License.

"""Python bindings for the two-scale concrete expansion damage simulator."""

from ._core import (  # noqa: F401
    AsrLaw,
    ConfigError,
    NonConvergenceError,
    Rve,
    characteristic_time,
    damage_value,
    default_config_text,
    eigenstrain,
    latency_time,
    orthotropic_stiffness,
    place_aggregates,
    reaction_extent,
    run_scenario,
    sample_aggregate_diameters,
    sample_tensile_strength,
    structured_mesh_counts,
    ultimate_strain,
)

__version__ = "0.1.0"
