# Copyright 2026 The fidelity-lab Authors.
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

"""Fidelity decay simulations for random-matrix and kicked-top maps."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import FidelityLabError, __version__, _run_json, recipe_config


def recipe(name):
    """Returns the built-in config `name` as a dict."""
    return _json.loads(recipe_config(name))


def run(config, out_dir=None):
    """Runs a config dict (or recipe name) and returns the report as a dict.

    When out_dir is given, curves.csv, spacings.csv and report.json are
    written there as well.
    """
    if isinstance(config, str):
        config = recipe(config)
    return _json.loads(_run_json(_json.dumps(config), out_dir))
