# Copyright 2026 The Harmonize Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python bindings for the harmonize library."""

from ._core import (
    ConfigError,
    DataError,
    Error,
    InternalError,
    Mechanism,
    MetricError,
    SelectionError,
    TrainingError,
    accuracy,
    auroc,
    estimate_mi,
    generate_synthetic,
    load_mechanism,
    privacy_leakage,
    read_table,
    run_repetition,
    tradeoff,
    train_mechanism,
    utility_performance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
