"""Time evolution under the structural bracket: TGHS, S-dynamics, GCHS rates and RK4 trajectories."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from . import manifold as mf
from .bracket import StructuralSystem, canonical_system, gpb, gspb, structural_operator
from .errors import BlowUp, StepSizeError
from .fields import ScalarField, as_field, stencil_jacobian

#: Magnitude cap on any state component before integration is aborted.
BLOWUP_LIMIT = 1e12
#: Relative threshold for calling a tracked field covariantly conserved.
CONSERVED_RTOL = 1e-8


@dataclass(frozen=True)
class PhaseState:
    t: float
    x: np.ndarray


@dataclass
class Trajectory:
    """Uniformly sampled states plus per-state diagnostics.

    ``diagnostics`` maps a column name to an array aligned with ``t``.
    Tracked fields appear as ``f[name]`` with their GCHS rate in ``D[name]``.
    """

    t: np.ndarray
    x: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    tracked: tuple = ()

    def __len__(self) -> int:
        return len(self.t)

    @property
    def states(self) -> list:
        return [PhaseState(float(t), x) for t, x in zip(self.t, self.x)]

    def columns(self) -> list:
        m = self.x.shape[1]
        return ["t"] + [f"x{i + 1}" for i in range(m)] + list(self.diagnostics)

    def rows(self) -> np.ndarray:
        cols = [self.t[:, None], self.x] + [np.asarray(v)[:, None] for v in self.diagnostics.values()]
        return np.hstack(cols)

    def conserved(self, name: str, rtol: float = CONSERVED_RTOL) -> bool:
        """Covariant conservation test |Df/dt| < rtol (1 + |f|) at every state."""
        f = self.diagnostics[f"f[{name}]"]
        rate = self.diagnostics[f"D[{name}]"]
        return bool(np.all(np.abs(rate) < rtol * (1.0 + np.abs(f))))


@dataclass(frozen=True)
class Acceleration:
    """Acceleration on the generalized Poisson manifold at one point.

    ``a = xddot + 2 w xdot + x beta`` with ``beta = w**2 + dw/dt``.
    """

    a: np.ndarray
    w: float
    beta: float
    xddot: np.ndarray
    xdot: np.ndarray
    dwdt: float


def force_field(sys: StructuralSystem, x) -> np.ndarray:
    """F_k = -D_k H = -(d_k H + A_k H)."""
    x = sys.point(x)
    return -(sys.grad(sys.H, x) + sys.A(x) * sys.H(x))


def tghs_rhs(sys: StructuralSystem, x) -> np.ndarray:
    """xdot_k = J_kj D_j H."""
    x = sys.point(x)
    DH = sys.grad(sys.H, x) + sys.A(x) * sys.H(x)
    return sys.J(x) @ DH


def tghs_rhs_force(sys: StructuralSystem, x) -> np.ndarray:
    """xdot_k = J_jk F_j, the force-field form of the same vector field."""
    x = sys.point(x)
    return sys.J(x).T @ force_field(sys, x)


def ghs_rhs(sys: StructuralSystem, x) -> np.ndarray:
    """Classical generalized Hamiltonian vector field J grad H."""
    x = sys.point(x)
    return sys.J(x) @ sys.grad(sys.H, x)


def s_dynamics(sys: StructuralSystem, x) -> float:
    """w = {s, H}_GPB."""
    return structural_operator(sys, sys.H, x)


def s_dynamics_flow(sys: StructuralSystem, x) -> float:
    """w as the flow derivative of s, xdot . A."""
    return float(tghs_rhs(sys, x) @ sys.A(x))


def s_dynamics_force(sys: StructuralSystem, x) -> float:
    """w = J_ji A_i F_j."""
    x = sys.point(x)
    return float(sys.A(x) @ sys.J(x).T @ force_field(sys, x))


def tghs_rate(sys: StructuralSystem, f, x) -> float:
    """df/dt = {f, H}_GPB - H {s, f}_GPB."""
    x = sys.point(x)
    return gpb(sys, f, sys.H, x) - sys.H(x) * structural_operator(sys, f, x)


def gchs_rate(sys: StructuralSystem, f, x) -> float:
    """Df/dt = {f, H} under the structural bracket."""
    return gspb(sys, f, sys.H, x)


def gchs_rate_decomposed(sys: StructuralSystem, f, x) -> tuple:
    """Return ``(df/dt, w f)`` with df/dt taken along the TGHS flow, xdot . grad f."""
    x = sys.point(x)
    f = as_field(f)
    xdot = tghs_rhs(sys, x)
    return float(xdot @ sys.grad(f, x)), s_dynamics_flow(sys, x) * f(x)


def ordinary_time_derivative(sys: StructuralSystem, f, x) -> float:
    """d f/dt = J_ji F_j d_i f."""
    x = sys.point(x)
    return float(sys.grad(f, x) @ sys.J(x).T @ force_field(sys, x))


def equilibrium_solution(f0: float, w: float, t: float) -> float:
    """Frozen-rate solution f0 exp(-w t) of df/dt + w f = 0."""
    return f0 * math.exp(-w * t)


def correction_term(w: float, t: float) -> float:
    """Q(w, t) = exp(-w t) - 1, so that f = f0 + f0 Q."""
    return math.expm1(-w * t)


# -- Riemannian specialization ------------------------------------------------


def induced_system(metric: mf.Metric, H=None, name: Optional[str] = None) -> StructuralSystem:
    """Canonical system on the cotangent coordinates (q, p) of a metric.

    The structure function is ln sqrt(det g(q)), so its gradient is the
    Christoffel contraction on the position axes and zero on the momenta.
    The default Hamiltonian is the geodesic one, H = 1/2 g^ij(q) p_i p_j.
    """
    n = metric.dim

    def s(x):
        return mf.log_sqrt_det(metric, x[:n])

    if H is None:

        def H_func(x):
            p = x[n:]
            return 0.5 * float(p @ np.linalg.solve(metric(x[:n]), p))

        def H_grad(x):
            q, p = x[:n], x[n:]
            u = np.linalg.solve(metric(q), p)
            dq = -0.5 * np.einsum("i,kij,j->k", u, metric.partials(q), u)
            return np.concatenate([dq, u])

        H = ScalarField(H_func, grad=H_grad, name="H", dim=2 * n)
    sys = canonical_system(n, ScalarField(s, name="s", dim=2 * n), H, name=name or f"{metric.name}-induced")
    return StructuralSystem(
        J=sys.J, s=sys.s, H=sys.H, n_config=n, name=sys.name, fd_step=sys.fd_step, metric=metric
    )


def riemannian_A(metric: mf.Metric, x) -> np.ndarray:
    """Structure derivative on phase space: Gamma^l_{il}(q) on positions, zero on momenta."""
    x = np.asarray(x, dtype=float)
    n = metric.dim
    return np.concatenate([mf.structural_gradient(metric, x[:n]), np.zeros(x.size - n)])


def riemannian_w(metric: mf.Metric, sys: StructuralSystem, x) -> float:
    """w = J_ij Gamma^l_{li} d_j H."""
    x = sys.point(x)
    return float(riemannian_A(metric, x) @ sys.J(x) @ sys.grad(sys.H, x))


def gchs_riemannian_rate(metric: mf.Metric, sys: StructuralSystem, k: int, x) -> float:
    """D x_k/dt = J_kj d_j H + J_kj Gamma^i_{ji} H + x_k w, all from the Christoffel symbols."""
    x = sys.point(x)
    J = sys.J(x)
    A = riemannian_A(metric, x)
    dH = sys.grad(sys.H, x)
    w = float(A @ J @ dH)
    return float(J[k] @ dH + (J[k] @ A) * sys.H(x) + x[k] * w)


# -- integration --------------------------------------------------------------


def rk4_step(rhs: Callable, y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * h * k1)
    k3 = rhs(y + 0.5 * h * k2)
    k4 = rhs(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_count(t0: float, t1: float, dt: float) -> int:
    """floor((t1 - t0) / dt), tolerant of a quotient that lands a hair below an integer."""
    if not dt > 0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    if not t1 > t0:
        raise StepSizeError(f"need t1 > t0, got t0={t0}, t1={t1}")
    return int(math.floor((t1 - t0) / dt + 1e-9))


def _check_state(y: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(y)) and np.max(np.abs(y)) <= BLOWUP_LIMIT)


def rk4_path(rhs: Callable, y0, t0: float, t1: float, dt: float) -> tuple:
    """Fixed-step RK4 samples ``(t, y)`` with floor((t1-t0)/dt)+1 rows.

    Raises :class:`BlowUp` (carrying the partial path) when a state turns
    non-finite or exceeds the magnitude cap.
    """
    n = step_count(t0, t1, dt)
    y = np.array(y0, dtype=float)
    t = t0 + dt * np.arange(n + 1)
    ys = np.empty((n + 1, y.size))
    ys[0] = y
    for i in range(n):
        with np.errstate(all="ignore"):
            y = rk4_step(rhs, y, dt)
        if not _check_state(y):
            raise BlowUp(
                f"state left the finite range at t={t[i + 1]:.6g}",
                last_state=PhaseState(float(t[i]), ys[i].copy()),
                partial=(t[: i + 1], ys[: i + 1]),
            )
        ys[i + 1] = y
    return t, ys


def integrate(
    sys: StructuralSystem,
    x0,
    t0: float,
    t1: float,
    dt: float,
    track: Optional[Mapping[str, object]] = None,
) -> Trajectory:
    """Integrate the TGHS flow with RK4 and record H, w and each tracked field with its GCHS rate."""
    x0 = sys.point(x0)
    track = {name: as_field(f, name) for name, f in (track or {}).items()}
    for f in track.values():
        f.check_dim(sys.dim)
    t, xs = rk4_path(lambda y: tghs_rhs(sys, y), x0, t0, t1, dt)
    diag = {"H": np.array([sys.H(x) for x in xs]), "w": np.array([s_dynamics(sys, x) for x in xs])}
    for name, f in track.items():
        diag[f"f[{name}]"] = np.array([f(x) for x in xs])
        diag[f"D[{name}]"] = np.array([gchs_rate(sys, f, x) for x in xs])
    return Trajectory(t=t, x=xs, diagnostics=diag, tracked=tuple(track))


# -- acceleration -------------------------------------------------------------


def acceleration(sys: StructuralSystem, x, dt_probe: float = 1e-4) -> Acceleration:
    """Acceleration a = xddot + 2 w xdot + x beta.

    xddot and dw/dt are central differences along the flow, from one RK4 probe
    step of size ``dt_probe`` forward and one backward.
    """
    if not dt_probe > 0:
        raise StepSizeError(f"dt_probe must be positive, got {dt_probe}")
    x = sys.point(x)

    def rhs(y):
        return tghs_rhs(sys, y)

    xdot = rhs(x)
    w = s_dynamics(sys, x)
    x_fwd = rk4_step(rhs, x, dt_probe)
    x_bwd = rk4_step(rhs, x, -dt_probe)
    xddot = (rhs(x_fwd) - rhs(x_bwd)) / (2.0 * dt_probe)
    dwdt = (s_dynamics(sys, x_fwd) - s_dynamics(sys, x_bwd)) / (2.0 * dt_probe)
    beta = w * w + dwdt
    a = xddot + 2.0 * w * xdot + x * beta
    return Acceleration(a=a, w=w, beta=beta, xddot=xddot, xdot=xdot, dwdt=dwdt)


def acceleration_chain(sys: StructuralSystem, x) -> Acceleration:
    """Same acceleration with xddot = (d xdot/dx) xdot and dw/dt = grad w . xdot (stencil Jacobians)."""
    x = sys.point(x)

    def rhs(y):
        return tghs_rhs(sys, y)

    xdot = rhs(x)
    w = s_dynamics(sys, x)
    xddot = stencil_jacobian(rhs, x) @ xdot
    dwdt = float(stencil_jacobian(lambda y: s_dynamics(sys, y), x) @ xdot)
    beta = w * w + dwdt
    return Acceleration(a=xddot + 2.0 * w * xdot + x * beta, w=w, beta=beta, xddot=xddot, xdot=xdot, dwdt=dwdt)


def acceleration_riemannian(metric: mf.Metric, sys: StructuralSystem, x, dt_probe: Optional[float] = None) -> np.ndarray:
    """Expanded acceleration on (M, g).

    a_k = xddot_k + 2w J_kj d_j H + 2w J_kj Gamma^l_{jl} H + x_k w^2 + x_k dw/dt,
    with w from the Christoffel contraction. The second derivatives come
    from the flow probe when ``dt_probe`` is given, else from the chain rule.
    """
    x = sys.point(x)
    acc = acceleration(sys, x, dt_probe) if dt_probe is not None else acceleration_chain(sys, x)
    J = sys.J(x)
    A = riemannian_A(metric, x)
    dH = sys.grad(sys.H, x)
    w = float(A @ J @ dH)
    return acc.xddot + 2.0 * w * (J @ dH) + 2.0 * w * (J @ A) * sys.H(x) + x * w * w + x * acc.dwdt
