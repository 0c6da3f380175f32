# Copyright 2026 The SceneForge Authors
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

"""Prompt-to-scene compiler for crop fields."""
import os as _os

_here = _os.path.dirname(__file__)
if _os.path.isdir(_os.path.join(_here, "data")):
    _os.environ.setdefault("SCENEFORGE_DATA_DIR", _os.path.join(_here, "data"))

from ._core import (  # noqa: E402
    Pipeline,
    SceneforgeError,
    data_dir,
    default_config_path,
    embed_local,
    enumerate_paths,
    parse_path,
    set_metrics,
    validate,
)

__all__ = [
    "Pipeline",
    "SceneforgeError",
    "data_dir",
    "default_config_path",
    "embed_local",
    "enumerate_paths",
    "parse_path",
    "set_metrics",
    "validate",
]
__version__ = "0.1.0"
