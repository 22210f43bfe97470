"""Seeded generator of commuting contraction pairs with pure product."""

import numpy as np

from .opcore import op_norm, spectral_radius


def _poly_of(j, coeffs):
    out = np.zeros_like(j)
    for c in reversed(coeffs):
        out = out @ j + c * np.eye(j.shape[0])
    return out


def random_commuting_pair(dim, seed=0, spectral_cap=0.9):
    """Commuting pair ``(T1, T2)`` built as polynomials in one random matrix.

    Each factor is rescaled to norm at most one (exactly one with
    probability 0.3, which gives rank-deficient defects), then both are
    shrunk by a common factor if ``rho(T1 T2)`` exceeds `spectral_cap`.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    if not 0 < spectral_cap < 1:
        raise ValueError("spectral_cap must lie in (0, 1)")
    rng = np.random.default_rng(seed)
    j = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2 * dim)
    pair = []
    for _ in range(2):
        deg = int(rng.integers(1, 3))
        coeffs = rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1)
        t = _poly_of(j, coeffs)
        scale = 1.0 if rng.uniform() < 0.3 else rng.uniform(0.5, 0.95)
        norm = op_norm(t)
        if norm > 0:
            t = t * (scale / norm)
        pair.append(t)
    t1, t2 = pair
    rho = spectral_radius(t1 @ t2)
    if rho > spectral_cap:
        shrink = np.sqrt(spectral_cap / rho) * (1 - 1e-12)
        t1, t2 = t1 * shrink, t2 * shrink
    return t1, t2
