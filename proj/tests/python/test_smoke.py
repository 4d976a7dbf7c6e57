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

import math

import pytest

import asrfe2 as m


@pytest.fixture
def law():
    return m.AsrLaw(30.0, 60.0, 5400.0, 9700.0, 311.15, 0.065)


def test_reaction_extent_reference_values(law):
    assert m.reaction_extent(0.0, 311.15, law) == 0.0
    assert m.reaction_extent(30.0, 311.15, law) == pytest.approx(0.19673, abs=1e-5)
    assert m.characteristic_time(328.15, law) == pytest.approx(24.4, abs=0.1)
    assert m.reaction_extent(1e6, 311.15, law) > 0.9999


def test_eigenstrain_is_isotropic(law):
    eps = m.eigenstrain(1e7, 311.15, law)
    assert eps[0][0] == pytest.approx(0.065, abs=1e-6)
    assert eps[1][1] == pytest.approx(eps[0][0])
    assert eps[0][1] == 0.0


def test_damage_and_ultimate_strain():
    assert m.damage_value(1, 2.0) == 0.5
    assert m.damage_value(10, 2.0) == 0.9999
    assert m.ultimate_strain(60.0, 0.5, 3e6) == pytest.approx(0.08)
    assert m.sample_tensile_strength(3e6, 5.0, 0.2, 0.0) == pytest.approx(2.4e6)


def test_geometry_determinism():
    d1 = m.sample_aggregate_diameters(1.0, 16.0, 0.45, 35.0 * 35.0, 9)
    d2 = m.sample_aggregate_diameters(1.0, 16.0, 0.45, 35.0 * 35.0, 9)
    assert d1 == d2
    circles, fraction, complete = m.place_aggregates(d1, 35.0, 35.0, 5000, 4)
    assert complete
    assert fraction == pytest.approx(0.45, rel=0.03)
    for cx, cy, r in circles:
        assert r <= cx <= 35.0 - r
        assert r <= cy <= 35.0 - r
    assert m.structured_mesh_counts(70.0, 70.0, 0.5) == (141 * 141, 2 * 140 * 140)


def test_orthotropic_stiffness_matches_closed_form():
    C = m.orthotropic_stiffness(12e9, 0.3)
    assert C[0][0] == pytest.approx(12e9 / (1 - 0.09), rel=1e-12)
    assert C[0][1] == pytest.approx(0.3 * 12e9 / (1 - 0.09), rel=1e-12)
    assert C[2][2] == pytest.approx(12e9 / 2.6, rel=1e-12)
    # A fully open crack suppresses the normal stiffness; closing it
    # restores the normal terms but not the shear one.
    open_ = m.orthotropic_stiffness(12e9, 0.3, damage=0.9999)
    closed = m.orthotropic_stiffness(12e9, 0.3, damage=0.9999, closed=True)
    assert open_[0][0] < 1e-3 * C[0][0]
    assert closed[0][0] == pytest.approx(C[0][0], rel=1e-9)
    assert closed[2][2] == pytest.approx(C[2][2] * 1e-4, rel=1e-6)


def test_rve_virtual_test_roundtrip():
    rve = m.Rve(8.0, 1.0, packing_fraction=0.0, asr_site_ratio=0.0)
    rve.run_damage_loop()
    C = rve.virtual_test_stiffness("tension")
    # Uniform mortar cell: effective stiffness equals the plane matrix.
    assert C[0][0] == pytest.approx(12e9 / 0.91, rel=1e-7)
    assert C[2][2] == pytest.approx(12e9 / 2.6, rel=1e-7)

    stress = rve.average_stress()
    assert abs(stress[0][0]) < 1.0  # unloaded


def test_rve_expansion_damages_and_compresses():
    rve = m.Rve(8.0, 1.0, seed_geometry=3, seed_strength=4, seed_sites=5,
                packing_fraction=0.3, asr_site_ratio=0.1)
    rve.set_expansion_time(200.0, 311.15)
    out = rve.run_damage_loop()
    assert out["n_damaged"] > 0
    stress = rve.average_stress()
    # Expansion against the held frame loads the cell in compression.
    assert stress[0][0] < 0.0
    tension = rve.virtual_test_stiffness("tension")
    compression = rve.virtual_test_stiffness("compression")
    assert compression[0][0] >= tension[0][0] - 1.0


def test_run_scenario_writes_history(tmp_path):
    cfg = m.default_config_text()
    cfg = cfg.replace("domain_size_mm = 35", "domain_size_mm = 8")
    cfg = cfg.replace("t_end_days = 450", "t_end_days = 30")
    cfg = cfg.replace("dt_days = 0.5", "dt_days = 10")
    cfg = cfg.replace("asr_site_ratio = 0.01", "asr_site_ratio = 0.1")
    cfg = cfg.replace("d_max_mm = 16", "d_max_mm = 3")
    cfg = cfg.replace("packing_fraction = 0.45000000000000001",
                      "packing_fraction = 0.3")
    cfg = cfg.replace("record_every = 5", "record_every = 1")
    path = tmp_path / "run.cfg"
    path.write_text(cfg)

    history = m.run_scenario(str(path), str(tmp_path / "out"))
    assert len(history) == 4
    assert history[0]["t_days"] == 0.0
    assert history[-1]["t_days"] == 30.0
    assert history[-1]["strain_y"] >= 0.0
    assert (tmp_path / "out" / "history.csv").exists()


def test_config_errors_are_value_errors(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("scenario = meso_free\nbogus = 1\n")
    with pytest.raises(ValueError):
        m.run_scenario(str(path), str(tmp_path / "out"))
