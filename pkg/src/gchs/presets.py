"""Named manifolds, systems and default starting points used by the CLI."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np

from . import dynamics as dyn
from . import expr
from .bracket import StructuralSystem, canonical_system
from .fields import ScalarField
from .manifold import Metric, builtin_metric

MANIFOLDS = ("euclidean", "sphere2", "halfplane")
SYSTEMS = ("free", "oscillator", "sgq")

#: Default chart points for the built-in manifolds.
MANIFOLD_POINTS = {
    "euclidean": None,
    "sphere2": (np.pi / 4, 0.0),
    "halfplane": (0.0, 2.0),
}
SYSTEM_POINTS = {"free": (0.0, 1.0), "oscillator": (1.0, 0.0), "sgq": (1.0, 2.0)}


def free_particle() -> StructuralSystem:
    """Canonical m = 2, s = 0, H = p^2/2."""
    H = ScalarField(lambda x: 0.5 * x[1] ** 2, grad=lambda x: np.array([0.0, x[1]]),
                    hess=lambda x: np.diag([0.0, 1.0]), name="H", dim=2)
    return canonical_system(1, ScalarField.constant(0.0, "s"), H, name="free")


def oscillator() -> StructuralSystem:
    """Canonical m = 2, s = 0, H = (q^2 + p^2)/2."""
    H = ScalarField(lambda x: 0.5 * (x[0] ** 2 + x[1] ** 2), grad=lambda x: np.array([x[0], x[1]]),
                    hess=lambda x: np.eye(2), name="H", dim=2)
    return canonical_system(1, ScalarField.constant(0.0, "s"), H, name="oscillator")


def sgq() -> StructuralSystem:
    """Canonical m = 2 with structure function s = q and H = p^2/2."""
    s = ScalarField(lambda x: x[0], grad=lambda x: np.array([1.0, 0.0]),
                    hess=lambda x: np.zeros((2, 2)), name="s", dim=2)
    H = ScalarField(lambda x: 0.5 * x[1] ** 2, grad=lambda x: np.array([0.0, x[1]]),
                    hess=lambda x: np.diag([0.0, 1.0]), name="H", dim=2)
    return canonical_system(1, s, H, name="sgq")


_SYSTEM_FACTORIES = {"free": free_particle, "oscillator": oscillator, "sgq": sgq}


def resolve_metric(source: str, dim: Optional[int] = None) -> Metric:
    """A built-in manifold name or a path to a metric definition file."""
    if source in MANIFOLDS:
        return builtin_metric(source, dim)
    path = Path(source)
    if path.is_file():
        return expr.load_metric(path)
    raise KeyError(f"unknown manifold {source!r}: not a preset {MANIFOLDS} and not a file")


def resolve_system(source: Optional[str], metric: Optional[Metric] = None) -> StructuralSystem:
    """A preset name, a system definition file, or (``None``) the metric-induced system."""
    if source is None:
        if metric is None:
            raise KeyError("need a system or a manifold")
        return dyn.induced_system(metric)
    if source in _SYSTEM_FACTORIES:
        return _SYSTEM_FACTORIES[source]()
    path = Path(source)
    if path.is_file():
        return expr.load_system(path)
    raise KeyError(f"unknown system {source!r}: not a preset {SYSTEMS} and not a file")


def default_point(system_name: Optional[str], metric: Optional[Metric], sys: StructuralSystem) -> Optional[np.ndarray]:
    """Preset starting point, or None when the user must supply one."""
    if system_name in SYSTEM_POINTS:
        return np.array(SYSTEM_POINTS[system_name], dtype=float)
    if system_name is None and metric is not None:
        q = MANIFOLD_POINTS.get(metric.name)
        if q is None:
            box = metric.sample_box
            q = np.zeros(metric.dim) if box is None else 0.5 * (np.asarray(box[0]) + np.asarray(box[1]))
        q = np.asarray(q, dtype=float)
        if sys.dim == 2 * metric.dim:
            return np.concatenate([q, np.ones(metric.dim)])
    return None
