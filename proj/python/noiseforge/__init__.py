# Copyright 2026 The NoiseForge Authors
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

"""Noise-aware gap filling for small quantum circuits."""

from ._core import (
    Circuit,
    CouplingMap,
    Dataset,
    DeviceModel,
    Network,
    ScheduledCircuit,
    bootstrap_ci,
    compile,
    encode_image,
    fill_gaps_random,
    fill_gaps_xyxy,
    gen_dataset,
    make_random_device,
    measure_noise,
    percent_improvement,
    r_squared,
    relabel_dataset,
    schedule_asap,
    simulate,
    train,
    transpile,
    xyxy_eligible,
    zero_noise_device,
)

__version__ = "0.1.0"
