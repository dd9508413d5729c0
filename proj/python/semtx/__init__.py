# Copyright 2026 The semtx Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Predictive semantic video transmission simulator."""

from ._core import (
    ConfigError,
    DomainError,
    InputError,
    InvariantViolation,
    ber_point,
    delta_exceed,
    mobile_correction,
    noise_floor_dbm,
    normalize_config,
    path_loss_db,
    plan_active,
    qam16_ber_awgn,
    run_cli,
    simulate,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "InputError",
    "InvariantViolation",
    "ber_point",
    "delta_exceed",
    "mobile_correction",
    "noise_floor_dbm",
    "normalize_config",
    "path_loss_db",
    "plan_active",
    "qam16_ber_awgn",
    "run_cli",
    "simulate",
]
