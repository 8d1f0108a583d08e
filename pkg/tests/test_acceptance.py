"""Acceptance criteria 1-11, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line; the lines are
collected and repeated in the pytest terminal summary. Run this file directly
(``python3 tests/test_acceptance.py``) to get just those lines.
"""

import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import random_canonical, random_hamiltonian, random_skew_system  # noqa: E402
from gchs import (  # noqa: E402
    ScalarField,
    christoffel,
    cli,
    commutation,
    equilibrium_solution,
    euclidean,
    gchs_rate,
    gchs_riemannian_rate,
    geometrio,
    gpb,
    gspb,
    induced_system,
    integrate_geodesic,
    paired_decay,
    poincare_half_plane,
    presets,
    sphere2,
    structural_gradient,
    structural_operator,
    tghs_rhs,
    trace_identity_check,
)
from gchs import dynamics as dyn  # noqa: E402
from gchs.analogy import decay_oracle, geodesic_recovery_residual, great_circle  # noqa: E402
from gchs.bracket import geometrio_brute_force  # noqa: E402
from gchs.fields import fd_gradient  # noqa: E402
from gchs.manifold import log_sqrt_det  # noqa: E402

RESULTS = {}
BUILTINS = [euclidean(2), euclidean(3), sphere2(), poincare_half_plane()]
SPHERE_SCENARIO = np.array([np.pi / 4, 0.0, 1.0, 1.0])


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def rel(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def unit_speed_starts(metric, rng, count):
    lo, hi = (np.asarray(b, dtype=float) for b in metric.sample_box)
    mid, half = 0.5 * (lo + hi), 0.25 * (hi - lo)
    starts = []
    while len(starts) < count:
        x = mid + half * rng.uniform(-1, 1, size=metric.dim)
        if metric.in_chart(x):
            v = rng.normal(size=metric.dim)
            starts.append((x, v / math.sqrt(metric.speed2(x, v))))
    return starts


def random_field(rng, m):
    c = rng.normal(size=m)
    d = rng.normal(size=m)
    return ScalarField(lambda x: float(np.sin(c @ x) + 0.5 * (d @ x) ** 2), name="f")


def test_criterion_01_reduction():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst_bracket = worst_flow = 0.0
    for _ in range(100):
        sys_ = random_canonical(rng, constant_s=True)
        x = rng.uniform(-2, 2, size=sys_.dim)
        f, g = random_field(rng, sys_.dim), random_field(rng, sys_.dim)
        worst_bracket = max(worst_bracket, abs(gspb(sys_, f, g, x) - gpb(sys_, f, g, x)),
                            abs(gspb(sys_, f, sys_.H, x) - gpb(sys_, f, sys_.H, x)))
        ghs = sys_.J(x) @ sys_.grad(sys_.H, x)
        worst_flow = max(worst_flow, float(np.max(np.abs(tghs_rhs(sys_, x) - ghs))))
    elapsed = time.perf_counter() - start
    ok = worst_bracket < 1e-12 and worst_flow < 1e-12 and elapsed < 5.0
    record(1, ok, f"|gspb-gpb|={worst_bracket:.2e} |tghs-J grad H|={worst_flow:.2e} (tol 1e-12) time={elapsed:.2f}s")


def test_criterion_02_geometrio():
    rng = np.random.default_rng(102)
    worst = 0.0
    for i in range(100):
        if i % 3 == 0:
            sys_ = random_skew_system(rng)
        else:
            sys_ = random_canonical(rng, q_only=bool(i % 2))
        x = rng.uniform(-2, 2, size=sys_.dim)
        geo = geometrio(sys_, x)
        brute = geometrio_brute_force(sys_, x)
        JtA = sys_.J(x).T @ sys_.A(x)
        worst = max(
            worst,
            float(np.max(np.abs(geo.b - JtA))),
            float(np.max(np.abs(brute.b - JtA))),
            abs(brute.w - float(JtA @ sys_.grad(sys_.H, x))),
            abs(structural_operator(sys_, sys_.s, x)),
            abs(structural_operator(sys_, ScalarField.constant(3.7), x)),
        )
    record(2, worst < 1e-10, f"max abs residual={worst:.2e} (tol 1e-10)")


def test_criterion_03_commutation():
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(100):
        sys_ = random_canonical(rng, q_only=True)
        n = sys_.n_config
        x = rng.uniform(-2, 2, size=sys_.dim)
        for j in range(n):
            for k in range(n):
                worst = max(worst, commutation(sys_, j, k, x))
    record(3, worst < 1e-10, f"max residual={worst:.2e} (tol 1e-10)")


def test_criterion_04_structural_derivative():
    rng = np.random.default_rng(104)
    worst = 0.0
    for metric in (sphere2(), poincare_half_plane()):
        for x in metric.sample(rng, 100):
            gamma = christoffel(metric, x)
            contraction = np.einsum("lil->i", gamma)
            fd = fd_gradient(lambda y: log_sqrt_det(metric, y), x, 1e-5)
            worst = max(worst, rel(contraction, fd))
            assert np.array_equal(contraction, structural_gradient(metric, x))
    record(4, worst < 1e-5, f"max rel error={worst:.2e} (tol 1e-5)")


def test_criterion_05_geodesic_conservation():
    rng = np.random.default_rng(105)
    drift = 0.0
    for metric in BUILTINS:
        for x0, v0 in unit_speed_starts(metric, rng, 5):
            path = integrate_geodesic(metric, x0, v0, 0.0, 1.0, 1e-3)
            drift = max(drift, float(np.max(np.abs(path.speed2 - path.speed2[0]))))
    eq = integrate_geodesic(sphere2(), [np.pi / 2, 0.0], [0.0, 1.0], 0.0, 1.0, 1e-3)
    endpoint = max(abs(eq.x[-1, 1] - 1.0), abs(eq.x[-1, 0] - np.pi / 2))
    # the exact equator is reproduced to rounding, so the order is measured on an
    # oblique great circle launched from the equator
    x0, v0 = np.array([np.pi / 2, 0.0]), np.array([0.6, 0.8])
    errors = []
    for dt in (0.1, 0.05):
        path = integrate_geodesic(sphere2(), x0, v0, 0.0, 1.0, dt)
        errors.append(float(np.linalg.norm(path.x[-1] - great_circle(x0, v0, path.t[-1]))))
    factor = errors[0] / errors[1]
    ok = drift < 1e-7 and endpoint < 1e-7 and 12.0 <= factor <= 20.0
    record(5, ok, f"speed2 drift={drift:.2e} (tol 1e-7) equator endpoint={endpoint:.2e} (tol 1e-7) "
                  f"RK4 halving factor={factor:.2f} (range [12, 20])")


def test_criterion_06_trace_identity():
    rng = np.random.default_rng(106)
    entries = [trace_identity_check(metric, 1000, rng) for metric in BUILTINS]
    worst = max(e.max_residual for e in entries)
    ok = all(e.passed for e in entries) and worst < 1e-10
    record(6, ok, f"max |trace W - A.v|={worst:.2e} over 1000 draws per manifold (tol 1e-10)")


def test_criterion_07_geodesic_recovery():
    rng = np.random.default_rng(107)
    worst = 0.0
    for metric in BUILTINS:
        for x0, v0 in unit_speed_starts(metric, rng, 3):
            path = integrate_geodesic(metric, x0, v0, 0.0, 1.0, 1e-3)
            worst = max(worst, geodesic_recovery_residual(metric, path))
    record(7, worst < 1e-6, f"max |D v/dt| (covariant mode)={worst:.2e} (tol 1e-6)")


def test_criterion_08_equilibrium():
    scalar = 0.0
    for w in (0.5, 1.0, 2.0):
        paths = paired_decay(w, np.zeros((1, 1)), 1.0, [0.0], 1.0, 1e-3)
        scalar = max(scalar, abs(paths.f[-1] - math.exp(-w)))
    bound = True
    for f0 in (0.1, 1.0, 3.0):
        for w in (0.1, 0.5, 1.0, 2.0):
            for t in np.linspace(0.0, 5.0, 51):
                bound &= equilibrium_solution(f0, w, t) <= f0
    paired = 0.0
    for w in (0.5, 1.0, 2.0):
        W = w * np.eye(3)
        v0 = np.array([3.0, -1.0, 0.5])
        paths = paired_decay(w, W, 3.0, v0, 1.0, 1e-3)
        f_exact, v_exact = decay_oracle(w, W, 3.0, v0, 1.0)
        paired = max(paired, float(np.max(np.abs(paths.v[-1] - v_exact))), abs(paths.v[-1][0] - paths.f[-1]),
                     abs(v_exact[0] - f_exact))
    ok = scalar < 1e-9 and bound and paired < 1e-7
    record(8, ok, f"|f(1) - f0 exp(-w)|={scalar:.2e} (tol 1e-9) bound f<=f0={'held' if bound else 'violated'} "
                  f"paired W=wI vs expm={paired:.2e} (tol 1e-7)")


def test_criterion_09_dual_route():
    rng = np.random.default_rng(109)
    decomposition = 0.0
    for _ in range(100):
        sys_ = random_canonical(rng, q_only=False)
        x = rng.uniform(-2, 2, size=sys_.dim)
        f = random_field(rng, sys_.dim)
        tghs_part = dyn.tghs_rate(sys_, f, x)
        wf = dyn.s_dynamics(sys_, x) * f(x)
        decomposition = max(decomposition, rel(tghs_part + wf, gchs_rate(sys_, f, x)))
    metric = sphere2()
    sys_ = induced_system(metric)
    points = [SPHERE_SCENARIO]
    for q in metric.sample(rng, 99):
        p = rng.normal(size=2)
        points.append(np.concatenate([q, p / math.sqrt(p @ metric.inverse(q) @ p)]))
    riemannian = 0.0
    for x in points:
        special = [gchs_riemannian_rate(metric, sys_, k, x) for k in range(4)]
        gen = [gchs_rate(sys_, ScalarField.coordinate(k), x) for k in range(4)]
        riemannian = max(riemannian, rel(special, gen))
    ok = decomposition < 1e-8 and riemannian < 1e-8
    record(9, ok, f"GSPB vs TGHS + w f rel={decomposition:.2e} specialized vs generic rel={riemannian:.2e} (tol 1e-8)")


def test_criterion_10_acceleration():
    osc = presets.oscillator()
    oscillator = 0.0
    for x in ([1.0, 0.0], [0.3, -0.8], [-1.2, 0.5]):
        probe = dyn.acceleration(osc, x, 1e-4)
        chain = dyn.acceleration_chain(osc, x)
        oscillator = max(oscillator, float(np.max(np.abs(probe.a - chain.a))), float(np.max(np.abs(probe.a - [-x[0], -x[1]]))))
    metric = sphere2()
    sys_ = induced_system(metric)
    probe = dyn.acceleration(sys_, SPHERE_SCENARIO, 1e-4).a
    expanded = dyn.acceleration_riemannian(metric, sys_, SPHERE_SCENARIO)
    sphere = float(np.max(np.abs(probe - expanded)))
    free = max(float(np.max(np.abs(dyn.acceleration(presets.free_particle(), x, 1e-4).a)))
               for x in ([0.0, 1.0], [2.0, -3.0], [-1.0, 0.25]))
    ok = oscillator < 1e-6 and sphere < 1e-6 and free < 1e-10
    record(10, ok, f"oscillator={oscillator:.2e} sphere={sphere:.2e} (tol 1e-6) free |a|={free:.2e} (tol 1e-10)")


def test_criterion_11_end_to_end(tmp_path, capsys):
    start = time.perf_counter()
    codes = {}
    for name in presets.MANIFOLDS:
        codes[f"manifold {name}"] = cli.main(["check", "--manifold", name])
    for name in presets.SYSTEMS:
        codes[f"system {name}"] = cli.main(["check", "--system", name])
    elapsed = time.perf_counter() - start
    bad = tmp_path / "corrupted.sys"
    bad.write_text("dim = 2\ncanonical = true\ns = x1\nH = x2^2/2\n"
                   "J[1,2] = 1 + 0.001*x1\nJ[2,1] = -1 + 0.001*x1\n")
    out = tmp_path / "corrupted.json"
    fault_code = cli.main(["check", "--system", str(bad), "--output", str(out)])
    failing = [e["identity"] for e in json.loads(out.read_text()) if not e["pass"]]
    capsys.readouterr()
    ok = all(c == 0 for c in codes.values()) and elapsed < 30.0 and fault_code == 1 and failing == ["J_antisymmetry"]
    nonzero = [k for k, c in codes.items() if c != 0]
    record(11, ok, f"presets exit 0: {'all' if not nonzero else 'not ' + ', '.join(nonzero)} in {elapsed:.1f}s (limit 30s); "
                   f"fault injection exit={fault_code} failing={failing}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
