"""Scalar fields over coordinates and the finite-difference fallbacks shared by every module."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch

#: Relative central-difference step, scaled per axis by max(1, |x_k|).
FD_STEP = 1e-5
#: Relative step of the five-point stencil used for derivatives of derived fields.
STENCIL_STEP = 1e-3
#: Relative step for second differences of a bare scalar.
HESSIAN_STEP = 1e-4


def _steps(x, rel):
    return rel * np.maximum(1.0, np.abs(x))


def fd_gradient(f: Callable, x, rel: float = FD_STEP) -> np.ndarray:
    """Central-difference gradient of a scalar callable.

    The step is re-measured as ``(x + h) - (x - h)`` so that linear functions
    differentiate to within one rounding of the exact slope.
    """
    x = np.asarray(x, dtype=float)
    h = _steps(x, rel)
    grad = np.empty(x.size)
    for k in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[k] += h[k]
        xm[k] -= h[k]
        grad[k] = (f(xp) - f(xm)) / (xp[k] - xm[k])
    return grad


def fd_jacobian(F: Callable, x, rel: float = FD_STEP) -> np.ndarray:
    """Central-difference Jacobian; ``out[..., k]`` is the derivative along axis k."""
    x = np.asarray(x, dtype=float)
    h = _steps(x, rel)
    cols = []
    for k in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[k] += h[k]
        xm[k] -= h[k]
        cols.append((np.asarray(F(xp), dtype=float) - np.asarray(F(xm), dtype=float)) / (xp[k] - xm[k]))
    return np.stack(cols, axis=-1)


def stencil_jacobian(F: Callable, x, rel: float = STENCIL_STEP) -> np.ndarray:
    """Fourth-order five-point Jacobian, for fields that already carry finite-difference noise."""
    x = np.asarray(x, dtype=float)
    h = _steps(x, rel)
    cols = []
    for k in range(x.size):
        vals = []
        for m in (-2, -1, 1, 2):
            xs = x.copy()
            xs[k] += m * h[k]
            vals.append(np.asarray(F(xs), dtype=float))
        cols.append((vals[0] - 8.0 * vals[1] + 8.0 * vals[2] - vals[3]) / (12.0 * h[k]))
    return np.stack(cols, axis=-1)


def fd_hessian(f: Callable, x, rel: float = HESSIAN_STEP) -> np.ndarray:
    """Second central differences of a scalar callable (symmetric by construction)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    h = _steps(x, rel)
    f0 = f(x)
    hess = np.empty((n, n))
    for i in range(n):
        e_i = np.zeros(n)
        e_i[i] = h[i]
        hess[i, i] = (f(x + e_i) - 2.0 * f0 + f(x - e_i)) / h[i] ** 2
        for j in range(i):
            e_j = np.zeros(n)
            e_j[j] = h[j]
            val = (f(x + e_i + e_j) - f(x + e_i - e_j) - f(x - e_i + e_j) + f(x - e_i - e_j)) / (
                4.0 * h[i] * h[j]
            )
            hess[i, j] = hess[j, i] = val
    return hess


@dataclass(frozen=True)
class ScalarField:
    """A smooth scalar field with optional analytic derivatives.

    Attributes:
        func: callable mapping a coordinate vector to a float.
        grad: optional analytic gradient.
        hess: optional analytic Hessian.
        name: label used in reports and exported column headers.
        dim: declared arity; ``None`` accepts any length.
    """

    func: Callable
    grad: Optional[Callable] = None
    hess: Optional[Callable] = None
    name: str = "f"
    dim: Optional[int] = None

    def __call__(self, x) -> float:
        return float(self.func(np.asarray(x, dtype=float)))

    def check_dim(self, m: int) -> None:
        if self.dim is not None and self.dim != m:
            raise DimensionMismatch(f"field {self.name!r} has arity {self.dim}, system has {m}")

    def gradient(self, x, rel: float = FD_STEP) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.grad is not None:
            return np.asarray(self.grad(x), dtype=float)
        return fd_gradient(self.func, x, rel)

    def hessian(self, x, rel: float = FD_STEP) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.hess is not None:
            return np.asarray(self.hess(x), dtype=float)
        if self.grad is not None:
            jac = fd_jacobian(self.grad, x, rel)
            return 0.5 * (jac + jac.T)
        return fd_hessian(self.func, x)

    @classmethod
    def constant(cls, c: float = 0.0, name: Optional[str] = None) -> "ScalarField":
        c = float(c)
        return cls(
            lambda x: c,
            grad=lambda x: np.zeros(np.size(x)),
            hess=lambda x: np.zeros((np.size(x), np.size(x))),
            name=name or repr(c),
        )

    @classmethod
    def coordinate(cls, k: int, analytic: bool = True) -> "ScalarField":
        """The coordinate function x -> x[k] (0-based).

        With ``analytic=False`` the gradient falls back to finite differences,
        which is how brute-force operator evaluations are built.
        """

        def grad(x):
            e = np.zeros(np.size(x))
            e[k] = 1.0
            return e

        return cls(lambda x: x[k], grad=grad if analytic else None, name=f"x{k + 1}")


def as_field(f, name: str = "f") -> ScalarField:
    """Wrap a bare callable (or a number) as a :class:`ScalarField`."""
    if isinstance(f, ScalarField):
        return f
    if callable(f):
        return ScalarField(f, name=getattr(f, "__name__", name))
    return ScalarField.constant(f)
