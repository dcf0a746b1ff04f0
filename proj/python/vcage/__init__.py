"""Deterministic verified tabletop-manipulation dataset engine.

Thin Python surface over the C++ core: geometry queries, episode execution,
dataset generation, gating, and statistics. Heavy lifting stays in C++; the
boundary passes JSON strings for structured data.
"""

import json as _json

try:
    from . import _vcage as _impl  # installed wheel layout
except ImportError:  # in-tree builds put _vcage on PYTHONPATH
    import _vcage as _impl

from_module = [
    "Pose",
    "Footprint",
    "WorkspaceBounds",
    "normalize_angle",
    "penetration_depth",
    "in_workspace",
    "default_catalog_json",
    "run_episode",
    "generate_dataset",
    "compare_modes",
    "gate",
    "dataset_stats",
    "sha256_hex",
    "VcageError",
    "__version__",
]
globals().update({name: getattr(_impl, name) for name in from_module})

__all__ = from_module + ["generate", "episode", "compare", "gate_report", "stats"]


def generate(config: dict, out_path: str = "") -> dict:
    """Generate a dataset from a config dict; returns the stats report."""
    return _json.loads(_impl.generate_dataset(_json.dumps(config), out_path))


def episode(config: dict, index: int = 0) -> dict:
    """Run a single episode; returns a summary dict."""
    return _json.loads(_impl.run_episode(_json.dumps(config), index))


def compare(config: dict) -> dict:
    """Replay one episode stream under both acceptance rules."""
    return _json.loads(_impl.compare_modes(_json.dumps(config)))


def gate_report(config: dict, template_id: str, trials: int = 10) -> dict:
    """Robustness-gate a task template."""
    return _json.loads(_impl.gate(_json.dumps(config), template_id, trials))


def stats(path: str) -> dict:
    """Recompute statistics from a stored dataset."""
    return _json.loads(_impl.dataset_stats(path))
