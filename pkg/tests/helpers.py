"""Random inputs and brute-force references shared by the tests."""

import numpy as np

from bclfactor.hardy import LinearPencil


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, n):
    q, r = np.linalg.qr(crandn(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_pencil(rng, r):
    return LinearPencil(crandn(rng, r, r), crandn(rng, r, r))


def random_pure_contraction(rng, n, rho_cap=0.95):
    """Random contraction with norm in (0.3, 1] and spectral radius below `rho_cap`."""
    while True:
        t = crandn(rng, n, n)
        t *= rng.uniform(0.3, 1.0) / np.linalg.norm(t, 2)
        if max(abs(np.linalg.eigvals(t))) < rho_cap:
            return t


def dense_multiplier(coeffs, degree):
    """Dense matrix of coefficient-wise multiplication, entry by entry.

    Built from the product rule ``(p f)_k = sum_{j <= k} c_{k-j} eta_j``
    without reusing the package's block-Toeplitz builder.
    """
    r = coeffs[0].shape[0]
    n1 = degree + 1
    m = np.zeros((n1 * r, n1 * r), dtype=np.complex128)
    for row_block in range(n1):
        for col_block in range(n1):
            j = row_block - col_block
            if 0 <= j < len(coeffs):
                for a in range(r):
                    for b in range(r):
                        m[row_block * r + a, col_block * r + b] = coeffs[j][a, b]
    return m


def brute_force_blocks(t, degree):
    """``D_T T*^k`` in ambient coordinates, straight from the definitions."""
    n = t.shape[0]
    w, q = np.linalg.eigh(np.eye(n) - t @ t.conj().T)
    d = (q * np.sqrt(np.clip(w, 0, None))) @ q.conj().T
    out, p = [], np.eye(n)
    for _ in range(degree + 1):
        out.append(d @ p)
        p = p @ t.conj().T
    return np.array(out)
