import numpy as np
import pytest

from gchs import ScalarField, StructuralMatrix, StructuralSystem, canonical_system


def random_q_structure(rng, n):
    """s(q) = sum a_i sin(c_i . q + d_i), finite-difference gradients, independent of p."""
    a = rng.normal(size=3)
    c = rng.normal(size=(3, n))
    d = rng.uniform(0, 2 * np.pi, size=3)
    return ScalarField(lambda x: float(a @ np.sin(c @ x[:n] + d)), name="s", dim=2 * n)


def random_phase_structure(rng, m):
    a = rng.normal(size=3)
    c = rng.normal(size=(3, m))
    d = rng.uniform(0, 2 * np.pi, size=3)
    return ScalarField(lambda x: float(a @ np.sin(c @ x + d)), name="s", dim=m)


def random_hamiltonian(rng, m):
    """Positive quadratic plus a bounded anharmonic term."""
    B = rng.normal(size=(m, m))
    M = B @ B.T / m + np.eye(m)
    k = rng.normal(size=m)
    e = 0.3 * rng.normal()
    return ScalarField(lambda x: 0.5 * float(x @ M @ x) + e * float(np.cos(k @ x)), name="H", dim=m)


def random_canonical(rng, n=None, constant_s=False, q_only=True):
    n = n or int(rng.integers(1, 4))
    m = 2 * n
    if constant_s:
        s = ScalarField.constant(float(rng.normal()), "s")
    elif q_only:
        s = random_q_structure(rng, n)
    else:
        s = random_phase_structure(rng, m)
    return canonical_system(n, s, random_hamiltonian(rng, m))


def random_skew_system(rng, m=None):
    """Non-canonical constant antisymmetric J with a random structure function."""
    m = m or int(rng.integers(2, 6))
    B = rng.normal(size=(m, m))
    J = StructuralMatrix.constant(B - B.T)
    return StructuralSystem(J=J, s=random_phase_structure(rng, m), H=random_hamiltonian(rng, m))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
