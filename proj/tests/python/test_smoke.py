# Copyright 2026 The nqsdyn Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import math

import numpy as np
import pytest

import nqsdyn


def test_exact_ground_energy_of_small_chains():
    assert nqsdyn.exact_ground_energy(nqsdyn.ModelSpec(2, periodic=False)) == pytest.approx(-0.75, abs=1e-12)
    assert nqsdyn.exact_ground_energy(nqsdyn.ModelSpec(6)) == pytest.approx(-2.802775637732, abs=1e-9)
    # Majumdar-Ghosh point: product of singlets
    assert nqsdyn.exact_ground_energy(nqsdyn.ModelSpec(8, j2=0.5)) == pytest.approx(-3.0, abs=1e-9)


def test_rbm_amplitude_and_local_energy():
    params = nqsdyn.RbmParameters(4, 2)
    config = np.array([1, -1, 1, -1], dtype=np.int8)
    # zero parameters: psi = (2 cosh 0)^M
    assert params.log_psi(config) == pytest.approx(2 * math.log(2.0))
    assert params.flatten().shape == (4 + 2 + 8,)
    # uniform amplitudes on the Neel state of L=4: E_loc = -1 + 4 * 1/2
    energy = nqsdyn.local_energy(nqsdyn.ModelSpec(4), params, config)
    assert energy == pytest.approx(1.0)


def test_open_dimer_spectrum_is_a_lorentzian():
    eta = 0.1
    ks, omegas, s = nqsdyn.exact_spectrum(nqsdyn.ModelSpec(2, periodic=False), [0.5, 1.0, 1.5], eta)
    assert list(ks) == [0, 1]
    assert s.shape == (2, 3)
    peak = s[:, 1].sum()
    assert peak == pytest.approx(0.25 / (math.pi * eta), rel=1e-9)


def test_config_errors_are_value_errors():
    with pytest.raises(ValueError, match="missing required config key: model.j2"):
        nqsdyn.parse_config("[model]\nlength = 4\nj1 = 1\n")
    with pytest.raises(nqsdyn.ValidationError):
        nqsdyn.parse_config("[model]\nlength = 4\nj1 = 1\nj2 = 0\n[sr]\nlearning_rate = 1\n")


def test_pipeline_round_trip(tmp_path):
    config = nqsdyn.parse_config(
        "[model]\nlength = 4\nj1 = 1\nj2 = 0\n"
        "[rbm]\nn_hidden = 8\n"
        "[sampler]\nmode = exact\n"
        "[sr]\ntau = 0.05\nshift_initial = 1\nmax_steps = 600\nenergy_tol = 1e-9\n"
        "[cv]\nlambda = 0.05\n"
        "[sweep]\nomega_min = 0\nomega_max = 3\nomega_step = 0.05\neta = 0.1\n"
        f"[output]\ndirectory = {tmp_path}\n"
    )
    result = nqsdyn.ground_state(config)
    exact = nqsdyn.exact_ground_energy(config.model)
    assert abs(result.energy.real - exact) < 1e-3 * abs(exact)
    params, e0 = nqsdyn.read_checkpoint(tmp_path / "ground_state.ckpt")
    assert e0 == pytest.approx(result.energy.real)
    assert params.n_hidden == 8

    ks, omegas, s = nqsdyn.spectrum(config, workers=2)
    _, _, oracle = nqsdyn.ed(config)
    assert s.shape == oracle.shape == (4, 61)
    np.testing.assert_allclose(s, oracle, atol=0.01 * oracle.max())
    report = nqsdyn.compare(config, tmp_path / "spectrum.csv", tmp_path / "oracle.csv")
    assert report["pass"], report["report"]


def test_oracle_cap():
    with pytest.raises(nqsdyn.OracleCapError):
        nqsdyn.ed(nqsdyn.parse_config("[model]\nlength = 8\nj1 = 1\nj2 = 0\n[oracle]\ncap = 10\n"))
