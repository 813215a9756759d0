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

"""RBM ground states and dynamical structure factors of Heisenberg chains."""

from ._core import (
    ContractViolation,
    ConvergenceError,
    GroundStateResult,
    ModelSpec,
    OracleCapError,
    RbmParameters,
    RunConfig,
    ValidationError,
    compare,
    ed,
    exact_ground_energy,
    exact_spectrum,
    frequency_grid,
    ground_state,
    init_random,
    load_config,
    local_energy,
    parse_config,
    read_checkpoint,
    spectrum,
)

__all__ = [
    "ContractViolation",
    "ConvergenceError",
    "GroundStateResult",
    "ModelSpec",
    "OracleCapError",
    "RbmParameters",
    "RunConfig",
    "ValidationError",
    "compare",
    "ed",
    "exact_ground_energy",
    "exact_spectrum",
    "frequency_grid",
    "ground_state",
    "init_random",
    "load_config",
    "local_energy",
    "parse_config",
    "read_checkpoint",
    "spectrum",
]
