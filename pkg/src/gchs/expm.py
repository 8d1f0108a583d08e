"""Matrix exponential by scaling and squaring with a degree-12 Taylor polynomial."""

import math

import numpy as np

TAYLOR_DEGREE = 12
#: Scale until the 1-norm is at most this; the Taylor remainder is then ~1e-14.
SCALED_NORM = 0.5


def matrix_exponential(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    norm = np.linalg.norm(A, 1)
    squarings = 0
    if norm > SCALED_NORM:
        squarings = int(math.ceil(math.log2(norm / SCALED_NORM)))
    B = A / 2.0**squarings
    eye = np.eye(A.shape[0])
    # Horner: I + B(I + B/2(I + B/3(...)))
    E = eye.copy()
    for k in range(TAYLOR_DEGREE, 0, -1):
        E = eye + (B @ E) / k
    for _ in range(squarings):
        E = E @ E
    return E
