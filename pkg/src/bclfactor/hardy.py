"""Truncated vector-valued Hardy space and polynomial multipliers.

A function ``f = sum_k eta_k z^k`` in the Hardy space over a fiber C^r is
stored by its Taylor coefficients ``eta_0 .. eta_N`` as an array of shape
``(N + 1, r)``; operator-valued columns (a family of such functions, e.g. the
image of a dilation map) use shape ``(N + 1, r, m)``.

Multiplication by a matrix polynomial is a lower-triangular block-Toeplitz
operator.  On the truncated space it is applied in banded form: the
coefficient pushed past degree ``N`` is dropped and its norm reported as
leakage.  The dense block matrix is built only for test oracles.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, FiberMismatch, NotIsometry
from .opcore import adj, as_matrix, as_square, op_norm


@dataclass(frozen=True)
class LinearPencil:
    """Matrix polynomial ``c0 + z c1`` over a fiber of dimension `fiber_dim`."""

    c0: np.ndarray
    c1: np.ndarray

    def __post_init__(self):
        c0 = as_square(self.c0, "c0")
        c1 = as_square(self.c1, "c1")
        if c0.shape != c1.shape:
            raise DimensionMismatch(f"c0 is {c0.shape}, c1 is {c1.shape}")
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)

    @classmethod
    def shift(cls, dim):
        return cls(np.zeros((dim, dim)), np.eye(dim))

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim), np.zeros((dim, dim)))

    @classmethod
    def constant(cls, c):
        c = as_square(c)
        return cls(c, np.zeros_like(c))

    @property
    def fiber_dim(self):
        return self.c0.shape[0]

    @property
    def coeffs(self):
        return [self.c0, self.c1]

    def __call__(self, z):
        return eval_pencil(self, z)

    def sandwich(self, v):
        """The pencil ``v* p(z) v`` for an isometry `v`."""
        v = as_matrix(v, "V")
        return LinearPencil(adj(v) @ self.c0 @ v, adj(v) @ self.c1 @ v)


@dataclass(frozen=True)
class HardyVector:
    """Taylor coefficients ``eta_0 .. eta_N`` of a truncated Hardy function."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128)
        if c.ndim != 2:
            raise DimensionMismatch(f"coefficients must be (N+1, r), got {c.shape}")
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self):
        return self.coefficients.shape[0] - 1

    @property
    def fiber_dim(self):
        return self.coefficients.shape[1]

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.coefficients) ** 2)))

    def inner(self, other):
        """``<self, other>``, linear in the first argument."""
        return complex(np.vdot(other.coefficients, self.coefficients))


def _as_blocks(coeffs):
    """View coefficient data as ``(N + 1, r, m)``."""
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.ndim == 2:
        return c[:, :, None]
    if c.ndim != 3:
        raise DimensionMismatch(f"expected (N+1, r) or (N+1, r, m), got {c.shape}")
    return c


def poly_apply_blocks(coeffs, blocks):
    """Multiply by ``sum_j coeffs[j] z^j`` on truncated coefficient blocks.

    Returns ``(result, spill)`` where `spill` holds the coefficients of
    degree ``N + 1 .. N + d`` that the truncation drops.
    """
    g = _as_blocks(blocks)
    n1, r = g.shape[0], g.shape[1]
    d = len(coeffs) - 1
    for c in coeffs:
        if c.shape != (r, r):
            raise FiberMismatch(f"symbol is {c.shape}, fiber is {r}")
    full = np.zeros((n1 + d,) + g.shape[1:], dtype=np.complex128)
    for j, c in enumerate(coeffs):
        full[j:j + n1] += np.matmul(c, g)
    return full[:n1], full[n1:]


def poly_adjoint_apply_blocks(coeffs, blocks):
    """Apply ``M_p*``: ``(p* f)_k = sum_j c_j* eta_{k+j}``, zero past ``N``."""
    g = _as_blocks(blocks)
    n1, r = g.shape[0], g.shape[1]
    for c in coeffs:
        if c.shape != (r, r):
            raise FiberMismatch(f"symbol is {c.shape}, fiber is {r}")
    out = np.zeros_like(g)
    for j, c in enumerate(coeffs):
        if j < n1:
            out[:n1 - j] += np.matmul(adj(c), g[j:])
    return out


def pencil_apply(p, f):
    """``M_p f`` truncated to the degree of `f`.

    Returns ``(HardyVector, leakage)``; leakage is the norm of the dropped
    degree ``N + 1`` coefficient ``c1 eta_N``.
    """
    if p.fiber_dim != f.fiber_dim:
        raise FiberMismatch(f"pencil fiber {p.fiber_dim}, vector fiber {f.fiber_dim}")
    out, spill = poly_apply_blocks(p.coeffs, f.coefficients)
    return HardyVector(out[:, :, 0]), float(np.linalg.norm(spill))


def pencil_adjoint_apply(p, f):
    if p.fiber_dim != f.fiber_dim:
        raise FiberMismatch(f"pencil fiber {p.fiber_dim}, vector fiber {f.fiber_dim}")
    return HardyVector(poly_adjoint_apply_blocks(p.coeffs, f.coefficients)[:, :, 0])


def eval_pencil(p, z):
    return p.c0 + z * p.c1


def eval_pencil_batch(p, zs):
    """Evaluate at many points; returns an array of shape ``(len(zs), r, r)``."""
    zs = np.asarray(zs, dtype=np.complex128).reshape(-1)
    return p.c0[None] + zs[:, None, None] * p.c1[None]


def poly_product(a, b):
    """Coefficients of the symbol product ``a(z) b(z)``."""
    out = [np.zeros_like(a[0]) for _ in range(len(a) + len(b) - 1)]
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = out[i + j] + ai @ bj
    return out


def block_toeplitz(coeffs, degree):
    """Dense lower-triangular block-Toeplitz matrix of ``M_p`` (oracle only)."""
    r = coeffs[0].shape[0]
    n1 = degree + 1
    m = np.zeros((n1 * r, n1 * r), dtype=np.complex128)
    for j, c in enumerate(coeffs):
        for k in range(j, n1):
            m[k * r:(k + 1) * r, (k - j) * r:(k - j + 1) * r] = c
    return m


@dataclass(frozen=True)
class HardyOperator:
    """An operator on the truncated Hardy space.

    `kind` is ``"shift"``, ``"pencil"`` or ``"dense"``.  The dense form
    exists for test oracles.
    """

    kind: str
    fiber_dim: int
    degree: int
    pencil: LinearPencil = None
    matrix: np.ndarray = field(default=None, repr=False)

    @classmethod
    def shift(cls, fiber_dim, degree):
        return cls("shift", fiber_dim, degree, pencil=LinearPencil.shift(fiber_dim))

    @classmethod
    def from_pencil(cls, p, degree):
        return cls("pencil", p.fiber_dim, degree, pencil=p)

    @classmethod
    def dense(cls, matrix, fiber_dim, degree):
        return cls("dense", fiber_dim, degree, matrix=np.asarray(matrix, np.complex128))

    def to_dense(self):
        if self.kind == "dense":
            return self.matrix
        return block_toeplitz(self.pencil.coeffs, self.degree)

    def apply(self, blocks):
        if self.kind == "dense":
            g = _as_blocks(blocks)
            flat = self.matrix @ g.reshape(-1, g.shape[2])
            return flat.reshape(g.shape)
        return poly_apply_blocks(self.pencil.coeffs, blocks)[0]

    def adjoint_apply(self, blocks):
        if self.kind == "dense":
            g = _as_blocks(blocks)
            flat = adj(self.matrix) @ g.reshape(-1, g.shape[2])
            return flat.reshape(g.shape)
        return poly_adjoint_apply_blocks(self.pencil.coeffs, blocks)


def symbol_coeffs(op):
    """Coefficient list of a pencil, a HardyOperator or a coefficient list."""
    if isinstance(op, LinearPencil):
        return op.coeffs
    if isinstance(op, HardyOperator):
        if op.kind == "dense":
            raise TypeError("dense operators carry no symbol")
        return op.pencil.coeffs
    return [as_square(c) for c in op]


def _embedding_blocks(gamma, tol):
    blocks = getattr(gamma, "blocks", gamma)
    g = _as_blocks(blocks)
    flat = g.reshape(-1, g.shape[2])
    defect = op_norm(adj(flat) @ flat - np.eye(g.shape[2]))
    if defect > tol:
        raise NotIsometry(f"||G*G - I|| = {defect:.3e} > {tol:.3e}")
    return g


def compress(gamma, p, tol=1e-6):
    """Matrix of ``P_Q M_p |_Q`` in source coordinates, ``Q = ran gamma``.

    `gamma` is a :class:`~bclfactor.dilation.DilationMap` or a block array
    ``(N + 1, r, n)``.  `p` is a pencil or any coefficient list (the degree-2
    products used in verification go through the same banded path).
    """
    g = _embedding_blocks(gamma, tol)
    applied, _ = poly_apply_blocks(symbol_coeffs(p), g)
    return np.einsum("kri,krj->ij", g.conj(), applied)


def compress_dense(gamma, p, tol=1e-6):
    """:func:`compress` through the dense block-Toeplitz matrix (oracle)."""
    g = _embedding_blocks(gamma, tol)
    flat = g.reshape(-1, g.shape[2])
    m = block_toeplitz(symbol_coeffs(p), g.shape[0] - 1)
    return adj(flat) @ m @ flat


@dataclass(frozen=True)
class InnerReport:
    residual: float
    tol: float
    n_samples: int

    @property
    def inner(self):
        return self.residual <= self.tol


def inner_check(p, n_samples=256, tol=1e-10):
    """Largest ``||p(z)* p(z) - I||`` over equispaced points of the circle."""
    zs = np.exp(2j * np.pi * np.arange(n_samples) / n_samples)
    vals = eval_pencil_batch(p, zs)
    gram = np.matmul(np.conj(np.swapaxes(vals, 1, 2)), vals) - np.eye(p.fiber_dim)
    res = float(np.max(np.linalg.norm(gram, 2, axis=(1, 2)))) if p.fiber_dim else 0.0
    return InnerReport(residual=res, tol=tol, n_samples=n_samples)
