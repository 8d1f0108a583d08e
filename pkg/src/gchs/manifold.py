"""Riemannian metrics, Christoffel symbols, geospin matrices and covariant derivatives.

Coordinates are flat arrays. Upper/lower index placement only matters inside
this module, where raising and lowering go through the metric. Christoffel
arrays are laid out ``gamma[k, i, j]`` for the symbol with upper index ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, OutOfChart, SingularMetric
from .fields import FD_STEP, fd_jacobian

#: Determinants at or below this value are rejected as singular.
DET_FLOOR = 1e-12


@dataclass(frozen=True)
class Metric:
    """A Riemannian metric on a single chart.

    Attributes:
        dim: number of coordinates n.
        g: callable returning the symmetric n x n metric matrix.
        dg: optional analytic partials, ``dg(x)[k, i, j]`` = d g_ij / d x_k.
        domain: optional chart guard; returns True on valid points.
        name: preset or file name.
        sample_box: (low, high) arrays bounding random chart points for checks.
        fd_step: relative step for finite-difference partials.
    """

    dim: int
    g: Callable
    dg: Optional[Callable] = None
    domain: Optional[Callable] = None
    name: str = "custom"
    sample_box: Optional[tuple] = None
    fd_step: float = FD_STEP

    def in_chart(self, x) -> bool:
        return self.domain is None or bool(self.domain(np.asarray(x, dtype=float)))

    def _raw(self, x) -> np.ndarray:
        return np.asarray(self.g(x), dtype=float)

    def __call__(self, x) -> np.ndarray:
        """Evaluate g(x), enforcing the chart guard and the determinant floor."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"metric {self.name} expects {self.dim} coordinates, got {x.shape}")
        if not self.in_chart(x):
            raise OutOfChart(f"point {x.tolist()} is outside the {self.name} chart")
        g = self._raw(x)
        det = np.linalg.det(g)
        if not np.isfinite(det) or det <= DET_FLOOR:
            raise SingularMetric(f"det g = {det:.3e} at {x.tolist()} (floor {DET_FLOOR:g})")
        return g

    def inverse(self, x) -> np.ndarray:
        return np.linalg.inv(self(x))

    def partials(self, x) -> np.ndarray:
        """``out[k, i, j]`` = d g_ij / d x_k, analytic when available."""
        x = np.asarray(x, dtype=float)
        if self.dg is not None:
            return np.asarray(self.dg(x), dtype=float)
        return self.fd_partials(x)

    def fd_partials(self, x) -> np.ndarray:
        jac = fd_jacobian(self._raw, np.asarray(x, dtype=float), self.fd_step)
        return np.moveaxis(jac, -1, 0)

    def lower(self, x, v) -> np.ndarray:
        return self(x) @ np.asarray(v, dtype=float)

    def speed2(self, x, v) -> float:
        v = np.asarray(v, dtype=float)
        return float(v @ self(x) @ v)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform points from ``sample_box`` that pass the chart guard."""
        lo, hi = self.sample_box if self.sample_box is not None else (-np.ones(self.dim), np.ones(self.dim))
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        pts = []
        tries = 0
        while len(pts) < count:
            tries += 1
            if tries > 1000 * max(count, 1):
                raise OutOfChart(f"could not draw {count} chart points for {self.name}")
            x = lo + (hi - lo) * rng.random(self.dim)
            if self.in_chart(x) and np.linalg.det(self._raw(x)) > DET_FLOOR:
                pts.append(x)
        return np.array(pts).reshape(count, self.dim)


def euclidean(n: int = 2) -> Metric:
    eye = np.eye(n)
    return Metric(
        dim=n,
        g=lambda x: eye,
        dg=lambda x: np.zeros((n, n, n)),
        name="euclidean",
        sample_box=(-2.0 * np.ones(n), 2.0 * np.ones(n)),
    )


def sphere2() -> Metric:
    """Unit 2-sphere in (theta, phi) with chart 0 < theta < pi."""

    def g(x):
        return np.array([[1.0, 0.0], [0.0, np.sin(x[0]) ** 2]])

    def dg(x):
        out = np.zeros((2, 2, 2))
        out[0, 1, 1] = 2.0 * np.sin(x[0]) * np.cos(x[0])
        return out

    return Metric(
        dim=2,
        g=g,
        dg=dg,
        domain=lambda x: 0.0 < x[0] < np.pi,
        name="sphere2",
        sample_box=(np.array([0.3, -np.pi]), np.array([np.pi - 0.3, np.pi])),
    )


def poincare_half_plane() -> Metric:
    """Hyperbolic upper half-plane, g = diag(1/y^2, 1/y^2), chart y > 0."""

    def g(x):
        c = 1.0 / x[1] ** 2
        return np.array([[c, 0.0], [0.0, c]])

    def dg(x):
        out = np.zeros((2, 2, 2))
        d = -2.0 / x[1] ** 3
        out[1, 0, 0] = d
        out[1, 1, 1] = d
        return out

    return Metric(
        dim=2,
        g=g,
        dg=dg,
        domain=lambda x: x[1] > 0.0,
        name="halfplane",
        sample_box=(np.array([-2.0, 0.3]), np.array([2.0, 3.0])),
    )


@dataclass(frozen=True)
class ChristoffelField:
    """Christoffel symbols of a metric as a field over its chart."""

    metric: Metric

    @property
    def dim(self) -> int:
        return self.metric.dim

    def __call__(self, x) -> np.ndarray:
        return christoffel(self.metric, x)


@dataclass(frozen=True)
class GeospinMatrix:
    """Geospin variables at a point-velocity pair.

    ``w_mixed[k, j]`` is W^k_j = Gamma^k_{ji} v^i; ``w_lower[i, k]`` is
    W_ik = Gamma^j_{ik} v_j with the velocity lowered by the metric.
    """

    w_mixed: np.ndarray
    w_lower: np.ndarray
    point: np.ndarray
    velocity: np.ndarray

    @property
    def trace(self) -> float:
        return float(np.trace(self.w_mixed))


def christoffel(metric: Metric, x) -> np.ndarray:
    """Levi-Civita symbols ``gamma[k, i, j]`` at x.

    Symmetric in (i, j) bit for bit: the bracketed sum is formed from
    symmetric pieces before contracting with the inverse metric.
    """
    x = np.asarray(x, dtype=float)
    ginv = metric.inverse(x)
    dg = metric.partials(x)  # dg[k, i, j] = d_k g_ij
    # t[l, i, j] = d_i g_jl + d_j g_il - d_l g_ij
    t = np.transpose(dg, (2, 0, 1)) + np.transpose(dg, (2, 1, 0)) - dg
    t = 0.5 * (t + np.transpose(t, (0, 2, 1)))
    return 0.5 * np.einsum("kl,lij->kij", ginv, t)


def structural_gradient(metric: Metric, x) -> np.ndarray:
    """A_i = Gamma^l_{il}, the structure derivative induced by the metric."""
    gamma = christoffel(metric, x)
    return np.einsum("lil->i", gamma)


def log_sqrt_det(metric: Metric, x) -> float:
    """ln sqrt(det g), the metric-induced structure function."""
    return 0.5 * float(np.log(np.linalg.det(metric(x))))


def geospin(metric: Metric, x, v) -> GeospinMatrix:
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if v.shape != (metric.dim,):
        raise DimensionMismatch(f"velocity has shape {v.shape}, metric dimension is {metric.dim}")
    gamma = christoffel(metric, x)
    w_mixed = np.einsum("kji,i->kj", gamma, v)
    v_low = metric(x) @ v
    w_lower = np.einsum("jik,j->ik", gamma, v_low)
    return GeospinMatrix(w_mixed=w_mixed, w_lower=w_lower, point=x, velocity=v)


def covariant_derivative(metric: Metric, vfield: Callable, x, jacobian: Optional[Callable] = None) -> np.ndarray:
    """Covariant derivative of a contravariant field, ``out[j, k]`` = nabla_k v^j.

    The upper index runs down the rows, matching ``GeospinMatrix.w_mixed``:
    the result is the Jacobian of v plus the geospin matrix of v(x).
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(vfield(x), dtype=float)
    jac = np.asarray(jacobian(x), dtype=float) if jacobian is not None else fd_jacobian(vfield, x, metric.fd_step)
    return jac + geospin(metric, x, v).w_mixed


def covariant_derivative_lower(metric: Metric, vfield: Callable, x) -> np.ndarray:
    """Covariant derivative of the lowered field, ``out[k, j]`` = d_k v_j - W_kj.

    ``vfield`` is contravariant; v_j = g_jl v^l is formed pointwise before
    differentiating.
    """
    x = np.asarray(x, dtype=float)

    def lowered(y):
        return metric(y) @ np.asarray(vfield(y), dtype=float)

    jac = fd_jacobian(lowered, x, metric.fd_step)  # jac[j, k] = d_k v_j
    w = geospin(metric, x, vfield(x)).w_lower
    return jac.T - w


BUILTIN_METRICS: dict = {
    "euclidean": euclidean,
    "sphere2": sphere2,
    "halfplane": poincare_half_plane,
}


def builtin_metric(name: str, dim: Optional[int] = None) -> Metric:
    if name == "euclidean":
        return euclidean(dim or 2)
    if name not in BUILTIN_METRICS:
        raise KeyError(f"unknown manifold {name!r}; choose from {sorted(BUILTIN_METRICS)}")
    metric = BUILTIN_METRICS[name]()
    if dim is not None and dim != metric.dim:
        raise DimensionMismatch(f"{name} is {metric.dim}-dimensional, got --dim {dim}")
    return metric

