"""Geodesics in geospin form, GCHS of velocity fields, paired decay laws and the identity suite."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import bracket as br
from . import dynamics as dyn
from . import manifold as mf
from .errors import BlowUp, GCHSError, OutOfChart, SingularMetric
from .expm import matrix_exponential
from .fields import ScalarField, fd_jacobian


@dataclass(frozen=True)
class GeodesicState:
    t: float
    x: np.ndarray
    v: np.ndarray


@dataclass
class GeodesicPath:
    """RK4 samples of a geodesic; indexable as a sequence of :class:`GeodesicState`."""

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    speed2: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, i) -> GeodesicState:
        return GeodesicState(float(self.t[i]), self.x[i], self.v[i])

    def columns(self) -> list:
        n = self.x.shape[1]
        return ["t"] + [f"x{i + 1}" for i in range(n)] + [f"v{i + 1}" for i in range(n)] + ["speed2"]

    def rows(self) -> np.ndarray:
        return np.hstack([self.t[:, None], self.x, self.v, self.speed2[:, None]])


def geodesic_rhs(metric: mf.Metric, state: GeodesicState) -> tuple:
    """(dx/dt, dv/dt) = (v, -W v) with W the geospin matrix at (x, v)."""
    v = np.asarray(state.v, dtype=float)
    W = mf.geospin(metric, state.x, v).w_mixed
    return v.copy(), -W @ v


def geodesic_rhs_christoffel(metric: mf.Metric, state: GeodesicState) -> tuple:
    """(dx/dt, dv/dt) = (v, -Gamma^k_ij v^i v^j), contracting the symbols directly."""
    v = np.asarray(state.v, dtype=float)
    gamma = mf.christoffel(metric, state.x)
    return v.copy(), -np.einsum("kij,i,j->k", gamma, v, v)


def integrate_geodesic(metric: mf.Metric, x0, v0, t0: float, t1: float, dt: float) -> GeodesicPath:
    """RK4 on the coupled (x, v) system dx/dt = v, dv/dt = -W v.

    Raises :class:`OutOfChart` or :class:`BlowUp` with the last valid state.
    """
    n = metric.dim
    x0 = np.asarray(x0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    metric(x0)

    def rhs(y):
        dx, dv = geodesic_rhs(metric, GeodesicState(0.0, y[:n], y[n:]))
        return np.concatenate([dx, dv])

    try:
        t, ys = _guarded_path(metric, rhs, np.concatenate([x0, v0]), t0, t1, dt)
    except BlowUp as exc:
        t_p, y_p = exc.partial
        raise BlowUp(str(exc), last_state=GeodesicState(float(t_p[-1]), y_p[-1, :n], y_p[-1, n:])) from None
    xs, vs = ys[:, :n], ys[:, n:]
    speed2 = np.array([metric.speed2(x, v) for x, v in zip(xs, vs)])
    return GeodesicPath(t=t, x=xs, v=vs, speed2=speed2)


def _guarded_path(metric, rhs, y0, t0, t1, dt):
    n = metric.dim
    steps = dyn.step_count(t0, t1, dt)
    t = t0 + dt * np.arange(steps + 1)
    ys = np.empty((steps + 1, y0.size))
    ys[0] = y0
    y = y0
    for i in range(steps):
        try:
            with np.errstate(all="ignore"):
                y = dyn.rk4_step(rhs, y, dt)
            if not metric.in_chart(y[:n]):
                raise OutOfChart("left chart")
        except (OutOfChart, SingularMetric):
            raise OutOfChart(
                f"geodesic left the {metric.name} chart after t={t[i]:.6g}",
                last_state=GeodesicState(float(t[i]), ys[i, :n].copy(), ys[i, n:].copy()),
            ) from None
        if not dyn._check_state(y):
            raise BlowUp(f"geodesic state left the finite range at t={t[i + 1]:.6g}", partial=(t[: i + 1], ys[: i + 1]))
        ys[i + 1] = y
    return t, ys


def flow_derivative(samples: np.ndarray, dt: float) -> np.ndarray:
    """Five-point time derivative of uniformly sampled rows; the two end rows on each side are NaN."""
    samples = np.asarray(samples, dtype=float)
    out = np.full_like(samples, np.nan)
    out[2:-2] = (samples[:-4] - 8.0 * samples[1:-3] + 8.0 * samples[3:-1] - samples[4:]) / (12.0 * dt)
    return out


def gchs_velocity_rate(
    metric: mf.Metric,
    vfield,
    x,
    mode: str = "structural",
    *,
    xdot=None,
    dvdt=None,
    structure: Optional[ScalarField] = None,
) -> np.ndarray:
    """GCHS of a velocity field, D v^p/dt.

    ``structural``: xdot_i (d_i v^p + v^p A_i) = dv^p/dt + w v^p.
    ``covariant``:  xdot_i d_i v^p + W^p_i xdot^i, whose zeros are geodesics.

    ``vfield`` is either a callable field (its Jacobian gives dv/dt) or the
    value v(x) together with ``dvdt``, the derivative along the flow. The flow
    velocity ``xdot`` defaults to v(x). ``structure`` overrides the
    metric-induced structure function.
    """
    x = np.asarray(x, dtype=float)
    if callable(vfield):
        v = np.asarray(vfield(x), dtype=float)
        xdot = v if xdot is None else np.asarray(xdot, dtype=float)
        dv = fd_jacobian(vfield, x, metric.fd_step) @ xdot if dvdt is None else np.asarray(dvdt, dtype=float)
    else:
        if dvdt is None:
            raise ValueError("dvdt is required when vfield is a value rather than a field")
        v = np.asarray(vfield, dtype=float)
        xdot = v if xdot is None else np.asarray(xdot, dtype=float)
        dv = np.asarray(dvdt, dtype=float)
    if mode == "structural":
        A = structure.gradient(x) if structure is not None else mf.structural_gradient(metric, x)
        return dv + float(xdot @ A) * v
    if mode == "covariant":
        return dv + mf.geospin(metric, x, v).w_mixed @ xdot
    raise ValueError(f"mode must be 'structural' or 'covariant', got {mode!r}")


def geodesic_recovery_residual(metric: mf.Metric, path: GeodesicPath) -> float:
    """Largest covariant-mode velocity rate along a sampled geodesic (interior samples)."""
    dt = float(path.t[1] - path.t[0])
    dv = flow_derivative(path.v, dt)
    worst = 0.0
    for i in range(2, len(path) - 2):
        r = gchs_velocity_rate(metric, path.v[i], path.x[i], "covariant", dvdt=dv[i])
        worst = max(worst, float(np.linalg.norm(r)))
    return worst


@dataclass(frozen=True)
class DecayPaths:
    t: np.ndarray
    f: np.ndarray
    v: np.ndarray


def paired_decay(w: float, W, f0: float, v0, t1: float, dt: float) -> DecayPaths:
    """RK4 solutions of df/dt = -w f and dv/dt = -W v on [0, t1] with frozen w, W."""
    W = np.asarray(W, dtype=float)
    t, fs = dyn.rk4_path(lambda y: -w * y, np.array([f0], dtype=float), 0.0, t1, dt)
    _, vs = dyn.rk4_path(lambda y: -W @ y, np.asarray(v0, dtype=float), 0.0, t1, dt)
    return DecayPaths(t=t, f=fs[:, 0], v=vs)


def decay_oracle(w: float, W, f0: float, v0, t: float) -> tuple:
    """Closed forms f0 exp(-w t) and expm(-W t) v0."""
    return dyn.equilibrium_solution(f0, w, t), matrix_exponential(-np.asarray(W, dtype=float) * t) @ np.asarray(v0, dtype=float)


# -- identity report ----------------------------------------------------------


@dataclass
class IdentityEntry:
    identity: str
    anchor: str
    max_residual: float
    tolerance: float
    samples: int
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_residual) and self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "anchor": self.anchor,
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "samples": int(self.samples),
        }


@dataclass
class IdentityReport:
    entries: list = field(default_factory=list)

    def add(self, entry: IdentityEntry) -> IdentityEntry:
        self.entries.append(entry)
        return entry

    def __getitem__(self, name: str) -> IdentityEntry:
        for e in self.entries:
            if e.identity == name:
                return e
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(e.identity == name for e in self.entries)

    @property
    def all_passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self) -> list:
        return [e.identity for e in self.entries if not e.passed]

    def to_json(self) -> str:
        return json.dumps([e.to_dict() for e in self.entries], indent=2)

    def to_text(self) -> str:
        header = ("identity", "anchor", "max_residual", "tolerance", "pass", "samples")
        rows = [
            (e.identity, e.anchor, f"{e.max_residual:.3e}", f"{e.tolerance:.1e}", "PASS" if e.passed else "FAIL", str(e.samples))
            for e in self.entries
        ]
        widths = [max(len(r[i]) for r in rows + [header]) for i in range(len(header))]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        lines.append("  ".join("-" * w for w in widths))
        for r in rows:
            lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        notes = [f"* {e.identity}: {e.note}" for e in self.entries if e.note]
        return "\n".join(lines + ([""] + notes if notes else [])) + "\n"


def _measure(name, anchor, tolerance, samples, fn, note=""):
    """Run ``fn`` (returning a max residual); any toolkit error becomes an infinite residual."""
    try:
        residual = float(fn())
    except (GCHSError, np.linalg.LinAlgError, FloatingPointError, ValueError) as exc:
        residual = float("inf")
        note = f"{note} error: {exc}".strip()
    return IdentityEntry(name, anchor, residual, tolerance, samples, note)


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = max(1.0, float(np.max(np.abs(b))) if b.size else 1.0)
    return float(np.max(np.abs(a - b))) / scale


def trace_identity_check(metric: mf.Metric, samples: int = 1000, rng: Optional[np.random.Generator] = None) -> IdentityEntry:
    """|trace W(x, v) - A(x) . v| over random chart points and velocities."""
    rng = rng if rng is not None else np.random.default_rng(0)

    def run():
        worst = 0.0
        for x in metric.sample(rng, samples):
            v = rng.normal(size=metric.dim)
            W = mf.geospin(metric, x, v)
            worst = max(worst, abs(W.trace - float(mf.structural_gradient(metric, x) @ v)))
        return worst

    return _measure(
        "trace_identity",
        "trace W^j_j = A_i v^i",
        1e-10,
        samples,
        run,
        note="contravariant velocity used on both sides (lower-index xdot_i read as xdot^i)",
    )


def _geodesic_starts(metric: mf.Metric, rng: np.random.Generator, count: int) -> list:
    """Unit-speed starts from the middle half of the sample box, so [0, 1] stays inside the chart."""
    lo, hi = metric.sample_box
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    mid, half = 0.5 * (lo + hi), 0.25 * (hi - lo)
    starts = []
    while len(starts) < count:
        x = mid + half * (2.0 * rng.random(metric.dim) - 1.0)
        if not metric.in_chart(x):
            continue
        v = rng.normal(size=metric.dim)
        v /= np.sqrt(metric.speed2(x, v))
        starts.append((x, v))
    return starts


def _sphere_embed(x):
    th, ph = x
    return np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])


def great_circle(x0, v0, t) -> np.ndarray:
    """Closed-form unit-sphere geodesic in (theta, phi), started at x0 with velocity v0."""
    th, ph = x0
    X = _sphere_embed(x0)
    e_th = np.array([np.cos(th) * np.cos(ph), np.cos(th) * np.sin(ph), -np.sin(th)])
    e_ph = np.array([-np.sin(th) * np.sin(ph), np.sin(th) * np.cos(ph), 0.0])
    U = v0[0] * e_th + v0[1] * e_ph
    speed = np.linalg.norm(U)
    P = np.cos(speed * t) * X + np.sin(speed * t) * U / speed
    theta = np.arccos(np.clip(P[2], -1.0, 1.0))
    phi = np.arctan2(P[1], P[0])
    # unwrap phi continuously from the start
    phi = ph + np.angle(np.exp(1j * (phi - ph)))
    return np.array([theta, phi])


GEODESIC_DT = 1e-3
MAX_GEODESIC_SAMPLES = 8


def _metric_entries(metric: mf.Metric, rng: np.random.Generator, samples: int, report: IdentityReport) -> None:
    pts = metric.sample(rng, samples)
    vels = rng.normal(size=(samples, metric.dim))

    def christoffel_symmetry():
        return max(float(np.max(np.abs(g - np.transpose(g, (0, 2, 1))))) for g in (mf.christoffel(metric, x) for x in pts))

    report.add(_measure("christoffel_symmetry", "Gamma^k_ij = Gamma^k_ji", 1e-10, samples, christoffel_symmetry))

    if metric.dg is not None:

        def partials():
            worst = 0.0
            for x in pts:
                a, f = metric.partials(x), metric.fd_partials(x)
                worst = max(worst, float(np.max(np.abs(a - f))) / max(1.0, float(np.max(np.abs(a)))))
            return worst

        report.add(_measure("metric_partials", "analytic dg vs central differences", 1e-4, samples, partials))

    def structural_gradient():
        worst = 0.0
        for x in pts:
            A = mf.structural_gradient(metric, x)
            ref = ScalarField(lambda y: mf.log_sqrt_det(metric, y)).gradient(x, metric.fd_step)
            err = float(np.linalg.norm(A - ref))
            worst = max(worst, err / float(np.linalg.norm(ref)) if np.any(ref) else err)
        return worst

    report.add(_measure("structural_gradient", "Gamma^l_il = d_i ln sqrt(det g)", 1e-5, samples, structural_gradient, note="relative error"))

    def lower_symmetry():
        return max(float(np.max(np.abs(W.w_lower - W.w_lower.T))) for W in (mf.geospin(metric, x, v) for x, v in zip(pts, vels)))

    report.add(_measure("geospin_lower_symmetry", "W_kj = W_jk", 1e-10, samples, lower_symmetry))

    report.add(trace_identity_check(metric, samples, rng))

    coeffs = rng.normal(size=(metric.dim, metric.dim))

    def vfield(y):
        return np.sin(coeffs @ y) + 0.5

    def covariant_lowering():
        worst = 0.0
        for x in pts[: min(samples, 50)]:
            lowered = mf.covariant_derivative_lower(metric, vfield, x)  # [k, j]
            upper = mf.covariant_derivative(metric, vfield, x)  # [j, k]
            ref = (metric(x) @ upper).T
            worst = max(worst, _rel(lowered, ref))
        return worst

    report.add(_measure(
        "covariant_lowering",
        "d_k v_j - W_kj = g_jl nabla_k v^l",
        1e-7,
        min(samples, 50),
        covariant_lowering,
        note="lowered covariant derivative taken with the minus sign as printed; metric compatibility confirms it",
    ))

    starts = _geodesic_starts(metric, rng, min(samples, MAX_GEODESIC_SAMPLES))
    paths = []

    def speed():
        worst = 0.0
        for x0, v0 in starts:
            path = integrate_geodesic(metric, x0, v0, 0.0, 1.0, GEODESIC_DT)
            paths.append(path)
            worst = max(worst, float(np.max(np.abs(path.speed2 - path.speed2[0]))))
        return worst

    report.add(_measure("geodesic_speed", "g(v, v) constant along geodesics", 1e-7, len(starts), speed,
                        note="RK4, dt = 1e-3, unit time, unit-speed starts"))

    def recovery():
        return max(geodesic_recovery_residual(metric, p) for p in paths) if paths else float("inf")

    report.add(_measure("geodesic_recovery", "D v^p/dt = dv^p/dt + W^p_i v^i = 0", 1e-6, len(paths), recovery))

    def rhs_forms():
        worst = 0.0
        for x, v in zip(pts, vels):
            s = GeodesicState(0.0, x, v)
            worst = max(worst, float(np.max(np.abs(geodesic_rhs(metric, s)[1] - geodesic_rhs_christoffel(metric, s)[1]))))
        return worst

    report.add(_measure("geodesic_geospin_form", "dv/dt = -W v = -Gamma v v", 1e-12, samples, rhs_forms))

    if metric.name == "sphere2":

        def chart_change():
            x0 = np.array([np.pi / 2, 0.0])
            v0 = np.array([0.6, 0.8])
            path = integrate_geodesic(metric, x0, v0, 0.0, 1.0, GEODESIC_DT)
            return float(np.linalg.norm(_sphere_embed(path.x[-1]) - _sphere_embed(great_circle(x0, v0, 1.0))))

        report.add(_measure("sphere_chart_change", "chart geodesic = embedded great circle", 1e-8, 1, chart_change,
                            note="single spot check in R^3"))


def _system_points(sys: br.StructuralSystem, rng: np.random.Generator, samples: int) -> np.ndarray:
    metric = sys.metric
    if metric is not None:
        # unit-speed momenta: g^ij p_i p_j = 1
        q = metric.sample(rng, samples)
        p = rng.normal(size=(samples, metric.dim))
        p = np.array([pi / np.sqrt(pi @ metric.inverse(qi) @ pi) for qi, pi in zip(q, p)])
        return np.hstack([q, p])
    return rng.uniform(-2.0, 2.0, size=(samples, sys.dim))


def _probe_field(m: int) -> ScalarField:
    weights = 0.3 + 0.2 * np.arange(m)
    return ScalarField(lambda x: 1.0 + float(np.sin(weights @ x)) + 0.25 * float(x @ x), name="probe")


def _system_entries(sys_raw: br.StructuralSystem, rng: np.random.Generator, samples: int, report: IdentityReport) -> None:
    pts = _system_points(sys_raw, rng, samples)

    def antisym():
        return max(sys_raw.J.antisymmetry_defect(x) for x in pts)

    report.add(_measure("J_antisymmetry", "J_ij = -J_ji", sys_raw.J.tolerance(), samples, antisym))

    # A symmetric defect in J is reported once, above; the bracket identities use its skew part.
    sys = sys_raw.with_matrix(sys_raw.J.skew_part())
    m = sys.dim
    probe = _probe_field(m)

    def s_annihilates_s():
        return max(abs(br.structural_operator(sys, sys.s, x)) for x in pts)

    report.add(_measure("S_annihilates_s", "S s = 0", 1e-10, samples, s_annihilates_s))

    const = ScalarField(lambda x: 7.0, name="7")

    def s_annihilates_const():
        return max(abs(br.structural_operator(sys, const, x)) for x in pts)

    report.add(_measure("S_annihilates_const", "S c = 0", 1e-10, samples, s_annihilates_const))

    brute = [br.geometrio_brute_force(sys, x) for x in pts]
    geo = [br.geometrio(sys, x) for x in pts]

    report.add(_measure("geometrio_b", "S x_k = b_k = J_ik A_i", 1e-10, samples,
                        lambda: max(float(np.max(np.abs(bf.b - g.b))) for bf, g in zip(brute, geo))))
    report.add(_measure("geometrio_w", "S H = w = b_j d_j H", 1e-8, samples,
                        lambda: max(_rel(bf.w, g.w) for bf, g in zip(brute, geo)), note="relative error"))
    if sys.canonical:
        n = sys.n_config
        report.add(_measure("geometrio_momentum", "S p_k = A_k", 1e-10, samples,
                            lambda: max(float(np.max(np.abs(bf.momentum_row - g.A[:n]))) for bf, g in zip(brute, geo))))

        def comm():
            return max(br.commutation(sys, j, k, x) for x in pts for j in range(n) for k in range(n))

        report.add(_measure("commutation", "{q_j, p_k} = delta_jk + q_j A_k + p_k b_j", 1e-10, samples, comm,
                            note="printed form; expanding the bracket gives -p_k b_j, equal when s is independent of p"))

    flat = sys.with_structure(ScalarField.constant(0.0, "s"))

    def reduction():
        return max(abs(br.gspb(flat, probe, sys.H, x) - br.gpb(flat, probe, sys.H, x)) for x in pts)

    report.add(_measure("gspb_reduction", "s const => GSPB = GPB", 1e-12, samples, reduction))

    def ghs_reduction():
        return max(float(np.max(np.abs(dyn.tghs_rhs(flat, x) - dyn.ghs_rhs(flat, x)))) for x in pts)

    report.add(_measure("tghs_reduction", "s const => TGHS = J grad H", 1e-12, samples, ghs_reduction))

    report.add(_measure("energy", "{H, H} = 0", 1e-10, samples,
                        lambda: max(abs(br.gspb(sys, sys.H, sys.H, x)) for x in pts)))

    one = ScalarField.constant(1.0, "1")
    report.add(_measure("s_dynamics_bracket_one", "{1, H} = {s, H}_GPB = w", 1e-10, samples,
                        lambda: max(abs(br.gspb(sys, one, sys.H, x) - dyn.s_dynamics(sys, x)) for x in pts)))
    report.add(_measure("s_dynamics_flow", "w = xdot_i A_i", 1e-8, samples,
                        lambda: max(_rel(dyn.s_dynamics_flow(sys, x), dyn.s_dynamics(sys, x)) for x in pts),
                        note="relative error"))
    report.add(_measure("tghs_force_form", "J_kj D_j H = J_jk F_j", 1e-12, samples,
                        lambda: max(float(np.max(np.abs(dyn.tghs_rhs(sys, x) - dyn.tghs_rhs_force(sys, x)))) for x in pts)))

    def decomposition():
        worst = 0.0
        for x in pts:
            df, wf = dyn.gchs_rate_decomposed(sys, probe, x)
            worst = max(worst, _rel(df + wf, dyn.gchs_rate(sys, probe, x)))
        return worst

    report.add(_measure("gchs_decomposition", "{f, H} = df/dt + w f", 1e-8, samples, decomposition, note="relative error"))

    def ordinary():
        return max(abs(dyn.ordinary_time_derivative(sys, probe, x) - float(dyn.tghs_rhs(sys, x) @ sys.grad(probe, x))) for x in pts)

    report.add(_measure("ordinary_time_derivative", "J_ji F_j d_i = xdot_i d_i", 1e-10, samples, ordinary))

    few = pts[: min(samples, 20)]

    def iterates():
        worst = 0.0
        for x in few:
            it = br.s_operator_iterates(sys, x)
            worst = max(worst, _rel(it.Sw, it.Sw_chain), _rel(it.SA, it.SA_chain))
        return worst

    report.add(_measure("s_iterates", "S w = b_j d_j w, S A_k = b_j d_j d_k s", 1e-6, len(few), iterates, note="relative error"))

    metric = sys.metric
    if metric is not None:

        def riemannian():
            worst = 0.0
            for x in pts:
                special = np.array([dyn.gchs_riemannian_rate(metric, sys, k, x) for k in range(m)])
                gen = np.array([dyn.gchs_rate(sys, ScalarField.coordinate(k), x) for k in range(m)])
                worst = max(worst, _rel(special, gen))
            return worst

        report.add(_measure("riemannian_gchs", "D x_k/dt = J_kj d_j H + J_kj Gamma^i_ji H + x_k w", 1e-8, samples,
                            riemannian, note="relative error; Christoffel contraction placed on the position axes only"))
        report.add(_measure("riemannian_s_dynamics", "w = J_ij Gamma^l_li d_j H", 1e-8, samples,
                            lambda: max(_rel(dyn.riemannian_w(metric, sys, x), dyn.s_dynamics(sys, x)) for x in pts),
                            note="relative error"))

        def accel():
            worst = 0.0
            for x in few:
                probe_a = dyn.acceleration(sys, x, 1e-4).a
                worst = max(worst, _rel(dyn.acceleration_riemannian(metric, sys, x), probe_a))
            return worst

        report.add(_measure("acceleration", "a = xddot + 2 w xdot + x beta", 1e-6, len(few), accel,
                            note="flow-probe route vs Christoffel expansion with chain-rule derivatives"))


def run_identity_suite(metric: mf.Metric, sys: Optional[br.StructuralSystem] = None, samples: int = 100,
                       seed: int = 0) -> IdentityReport:
    """Evaluate every identity for a metric and a structural system.

    With ``sys=None`` the metric-induced cotangent system is used. Failures
    are recorded in the report rather than raised.
    """
    rng = np.random.default_rng(seed)
    report = IdentityReport()
    _metric_entries(metric, rng, samples, report)
    if sys is None:
        sys = dyn.induced_system(metric)
    _system_entries(sys, rng, samples, report)
    return report
