"""Generalized Poisson bracket, geometric bracket, structural bracket and the structural operator.

A :class:`StructuralSystem` bundles an antisymmetric structural matrix J,
a structure function s and a Hamiltonian H on m coordinates. Indices in the
public API are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, NoCanonicalSplit
from .fields import FD_STEP, ScalarField, as_field, fd_jacobian, stencil_jacobian


def canonical_matrix(n: int) -> np.ndarray:
    """[[0, I], [-I, 0]] on 2n coordinates ordered (q_1..q_n, p_1..p_n)."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class StructuralMatrix:
    """The structural matrix J as a constant or a field over coordinates."""

    dim: int
    J: Callable
    constant_flag: bool = True

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.J(np.asarray(x, dtype=float)), dtype=float)

    @classmethod
    def constant(cls, matrix) -> "StructuralMatrix":
        mat = np.array(matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatch(f"J must be square, got shape {mat.shape}")
        mat.setflags(write=False)
        return cls(dim=mat.shape[0], J=lambda x: mat, constant_flag=True)

    @classmethod
    def canonical(cls, n: int) -> "StructuralMatrix":
        return cls.constant(canonical_matrix(n))

    def antisymmetry_defect(self, x) -> float:
        J = self(x)
        return float(np.max(np.abs(J + J.T)))

    def tolerance(self) -> float:
        """Antisymmetry tolerance: exact for constant J, 1e-12 for a J field."""
        return 0.0 if self.constant_flag else 1e-12

    def skew_part(self) -> "StructuralMatrix":
        def skew(x):
            J = self(x)
            return 0.5 * (J - J.T)

        return StructuralMatrix(self.dim, skew, self.constant_flag)

    def derivative(self, x, rel: float = FD_STEP) -> np.ndarray:
        """``out[i, j, l]`` = d J_ij / d x_l."""
        x = np.asarray(x, dtype=float)
        if self.constant_flag:
            return np.zeros((self.dim, self.dim, self.dim))
        return fd_jacobian(self, x, rel)


@dataclass(frozen=True)
class StructuralSystem:
    """The triple (J, s, H) on m coordinates.

    ``n_config`` declares a canonical split x = (q_1..q_n, p_1..p_n) with
    m = 2n. The momentum row of the geometrio and the commutation relation
    are only defined when it is set.
    """

    J: StructuralMatrix
    s: ScalarField
    H: ScalarField
    n_config: Optional[int] = None
    name: str = "system"
    fd_step: float = FD_STEP
    metric: Optional[object] = None

    def __post_init__(self):
        m = self.J.dim
        self.s.check_dim(m)
        self.H.check_dim(m)
        if self.n_config is not None and 2 * self.n_config != m:
            raise DimensionMismatch(f"canonical split needs m = 2n, got m={m}, n={self.n_config}")

    @property
    def dim(self) -> int:
        return self.J.dim

    @property
    def canonical(self) -> bool:
        return self.n_config is not None

    def point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"{self.name} has dimension {self.dim}, got point of shape {x.shape}")
        return x

    def A(self, x) -> np.ndarray:
        """Structure derivative A_i = d_i s."""
        return self.s.gradient(self.point(x), self.fd_step)

    def grad(self, f: ScalarField, x) -> np.ndarray:
        f = as_field(f)
        f.check_dim(self.dim)
        return f.gradient(self.point(x), self.fd_step)

    def with_structure(self, s) -> "StructuralSystem":
        return replace(self, s=as_field(s, "s"), metric=None)

    def with_matrix(self, J: StructuralMatrix) -> "StructuralSystem":
        return replace(self, J=J)


def canonical_system(n: int, s, H, name: str = "system") -> StructuralSystem:
    """Canonical system on (q, p) in R^{2n} with J = [[0, I], [-I, 0]]."""
    return StructuralSystem(
        J=StructuralMatrix.canonical(n),
        s=as_field(s, "s"),
        H=as_field(H, "H"),
        n_config=n,
        name=name,
    )


def _gpb_grad(J: np.ndarray, df: np.ndarray, dg: np.ndarray) -> float:
    return float(df @ J @ dg)


def gpb(sys: StructuralSystem, f, g, x) -> float:
    """{f, g}_GPB = J_ij d_i f d_j g."""
    x = sys.point(x)
    return _gpb_grad(sys.J(x), sys.grad(f, x), sys.grad(g, x))


def geobracket(sys: StructuralSystem, f, g, x) -> float:
    """G(s; f, g) = f {s, g}_GPB - g {s, f}_GPB."""
    x = sys.point(x)
    f = as_field(f)
    g = as_field(g)
    J = sys.J(x)
    A = sys.A(x)
    return f(x) * _gpb_grad(J, A, sys.grad(g, x)) - g(x) * _gpb_grad(J, A, sys.grad(f, x))


def gspb(sys: StructuralSystem, f, g, x) -> float:
    """Structural bracket: GPB plus the geometric bracket."""
    return gpb(sys, f, g, x) + geobracket(sys, f, g, x)


def structural_operator(sys: StructuralSystem, f, x) -> float:
    """S f = J_ij A_i d_j f, identical to {s, f}_GPB."""
    x = sys.point(x)
    return _gpb_grad(sys.J(x), sys.A(x), sys.grad(f, x))


@dataclass(frozen=True)
class Geometrio:
    """The triple (b, A, w) produced by the structural operator at a point.

    ``momentum_row`` holds S p_k for k = 1..n when the system has a canonical
    split, otherwise ``None``.
    """

    b: np.ndarray
    A: np.ndarray
    w: float
    point: np.ndarray
    momentum_row: Optional[np.ndarray] = None


def b_vector(sys: StructuralSystem, x) -> np.ndarray:
    """b_k = J_ik A_i (the structural vector field components)."""
    x = sys.point(x)
    return sys.J(x).T @ sys.A(x)


def geometrio(sys: StructuralSystem, x, momentum: bool = False) -> Geometrio:
    x = sys.point(x)
    A = sys.A(x)
    b = sys.J(x).T @ A
    w = float(b @ sys.grad(sys.H, x))
    row = None
    if momentum or sys.canonical:
        row = momentum_row(sys, x)
    return Geometrio(b=b, A=A, w=w, point=x, momentum_row=row)


def momentum_row(sys: StructuralSystem, x) -> np.ndarray:
    """S p_k for each momentum coordinate, via the operator itself."""
    if not sys.canonical:
        raise NoCanonicalSplit(f"{sys.name} declares no (q, p) split")
    n = sys.n_config
    return np.array([structural_operator(sys, ScalarField.coordinate(n + k), x) for k in range(n)])


def geometrio_brute_force(sys: StructuralSystem, x) -> Geometrio:
    """Apply S to each coordinate function and to H with finite-difference gradients only."""
    x = sys.point(x)
    b = np.array([structural_operator(sys, ScalarField.coordinate(k, analytic=False), x) for k in range(sys.dim)])
    w = structural_operator(sys, sys.H, x)
    row = None
    if sys.canonical:
        n = sys.n_config
        row = np.array(
            [structural_operator(sys, ScalarField.coordinate(n + k, analytic=False), x) for k in range(n)]
        )
    return Geometrio(b=b, A=sys.A(x), w=w, point=x, momentum_row=row)


def commutation_sides(sys: StructuralSystem, j: int, k: int, x) -> tuple:
    """Both sides of the position-momentum relation for q_j and p_k.

    Returns ``(lhs, rhs_printed, rhs_derived)`` where lhs = {q_j, p_k} under the
    structural bracket, ``rhs_printed`` = delta_jk + q_j A_k + p_k b_j, and
    ``rhs_derived`` = delta_jk + q_j A_k - p_k b_j. The two right sides differ
    only when b_j != 0, which needs s to depend on the momenta.
    """
    if not sys.canonical:
        raise NoCanonicalSplit(f"{sys.name} declares no (q, p) split")
    n = sys.n_config
    if not (0 <= j < n and 0 <= k < n):
        raise IndexError(f"position/momentum indices must lie in [0, {n}), got j={j}, k={k}")
    x = sys.point(x)
    q_j = ScalarField.coordinate(j, analytic=False)
    p_k = ScalarField.coordinate(n + k, analytic=False)
    lhs = gspb(sys, q_j, p_k, x)
    A_k = structural_operator(sys, p_k, x)
    b_j = structural_operator(sys, q_j, x)
    delta = 1.0 if j == k else 0.0
    base = delta + x[j] * A_k
    return lhs, base + x[n + k] * b_j, base - x[n + k] * b_j


def commutation(sys: StructuralSystem, j: int, k: int, x, derived: bool = False) -> float:
    """Residual of {q_j, p_k} against delta_jk + q_j A_k + p_k b_j.

    ``derived=True`` uses the sign that follows from expanding the geometric
    bracket, -p_k b_j, instead.
    """
    lhs, printed, corrected = commutation_sides(sys, j, k, x)
    return abs(lhs - (corrected if derived else printed))


@dataclass(frozen=True)
class SIterates:
    """Second applications of the structural operator, each by two routes.

    ``Sw``/``SA`` apply S directly to the w and A_k fields (five-point
    stencil derivatives); ``Sw_chain``/``SA_chain`` expand b_j d_j w and
    b_j d_j d_k s with Hessians of s and H.
    """

    Sw: float
    SA: np.ndarray
    Sw_chain: float
    SA_chain: np.ndarray


def s_operator_iterates(sys: StructuralSystem, x) -> SIterates:
    x = sys.point(x)
    J = sys.J(x)
    A = sys.A(x)
    b = J.T @ A
    dH = sys.grad(sys.H, x)

    def w_field(y):
        return structural_operator(sys, sys.H, y)

    Sw = float(A @ J @ stencil_jacobian(w_field, x))
    SA = stencil_jacobian(sys.A, x) @ (J.T @ A)

    hess_s = sys.s.hessian(x, sys.fd_step)
    hess_H = sys.H.hessian(x, sys.fd_step)
    dJ = sys.J.derivative(x, sys.fd_step)
    # d_l w = (d_l J_ik) A_i d_k H + J_ik (d_l A_i) d_k H + J_ik A_i d_l d_k H
    grad_w = np.einsum("ikl,i,k->l", dJ, A, dH) + hess_s @ (J @ dH) + hess_H @ (J.T @ A)
    Sw_chain = float(b @ grad_w)
    SA_chain = hess_s @ b
    return SIterates(Sw=Sw, SA=SA, Sw_chain=Sw_chain, SA_chain=SA_chain)
