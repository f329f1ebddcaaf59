"""Regularization experiments for ill-posed and nonlocal 1-D PDEs."""

import json as _json

from ._regulab import *  # noqa: F401,F403
from ._regulab import _run_experiment, __version__


def run_experiment(experiment, config_text, out_dir, svg=False, seed=None):
    """Run one experiment and return its manifest as a dict."""
    return _json.loads(_run_experiment(experiment, config_text, str(out_dir), svg, seed))
