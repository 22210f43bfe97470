"""Truncated isometric dilation of a pure contraction.

For a pure contraction ``T`` with defect ``D_T`` the dilation map sends ``h``
to the Hardy function with coefficients ``D_T T*^k h``.  A
:class:`DilationMap` stores the coefficient blocks ``k = 0 .. N`` (in
defect-space coordinates) together with a rigorous bound on the discarded
tail ``sum_{k > N} ||D_T T*^k||^2``.

Tail bound
----------
Let ``a_k = ||D_T T*^k||^2`` and pick the smallest ``m`` with
``q = ||T^m|| <= 1/2``.  Submultiplicativity gives ``a_{k+m} <= q^2 a_k``,
so the tail past ``N`` is at most ``(a_{N+1} + ... + a_{N+m}) / (1 - q^2)``.
Taking the running minimum over ``N`` keeps the bound valid and makes it
nonincreasing.  Power norms are used rather than the spectral radius because
``rho(T)^k`` can badly underestimate ``||T^k||`` for non-normal ``T``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegreeCapExceeded, DimensionMismatch, NotIsometry, NotPure
from .hardy import HardyOperator, _as_blocks, poly_adjoint_apply_blocks, symbol_coeffs
from .opcore import (
    DEFAULT_TOL,
    PURITY_MARGIN,
    adj,
    as_matrix,
    as_square,
    defect,
    is_pure_contraction,
    op_norm,
    spectral_radius,
)

MAX_DEGREE = 10000
_ENVELOPE_RATIO = 0.5


@dataclass(frozen=True)
class DilationMap:
    """Truncated dilation map.

    Attributes
    ----------
    blocks : ndarray (N + 1, r, n)
        Block ``k`` is the degree-``k`` coefficient operator.
    tail_bound : float
        Upper bound on ``sum_{k > N} ||block_k||^2`` of the untruncated map,
        which dominates ``||G* G - I||`` for the stacked matrix ``G``.
    """

    blocks: np.ndarray
    tail_bound: float

    @property
    def degree(self):
        return self.blocks.shape[0] - 1

    @property
    def fiber_dim(self):
        return self.blocks.shape[1]

    @property
    def source_dim(self):
        return self.blocks.shape[2]

    @property
    def gamma(self):
        """Stacked ``((N + 1) r, n)`` matrix."""
        return self.blocks.reshape(-1, self.source_dim)

    def apply(self, h):
        """Coefficients of ``Pi h``, shape ``(N + 1, r)``."""
        return self.blocks @ np.asarray(h, dtype=np.complex128)

    def isometry_defect(self):
        g = self.gamma
        return op_norm(adj(g) @ g - np.eye(self.source_dim))


class _TailProfile:
    """Lazily computed ``a_k`` and the envelope bound on tails."""

    def __init__(self, t, coord, max_degree):
        self.t = t
        self.max_degree = max_degree
        n = t.shape[0]
        ts = adj(t)
        power = np.eye(n, dtype=np.complex128)
        self.m, self.q = None, None
        for m in range(1, max_degree + 2):
            power = power @ t
            q = op_norm(power)
            if q <= _ENVELOPE_RATIO:
                self.m, self.q = m, q
                break
        if self.m is None:
            raise DegreeCapExceeded(
                f"||T^m|| stays above {_ENVELOPE_RATIO} for m <= {max_degree + 1}; "
                f"spectral radius {spectral_radius(t):.12g} is too close to 1"
            )
        self._ts = ts
        self._cur = coord.astype(np.complex128)
        self.blocks = []
        self.a = []
        self._best = np.inf
        self.bounds = []

    def _extend_to(self, k):
        while len(self.a) <= k:
            self.blocks.append(self._cur)
            self.a.append(op_norm(self._cur) ** 2)
            self._cur = self._cur @ self._ts

    def bound(self, n):
        """Tail bound past degree `n` (nonincreasing in `n`)."""
        while len(self.bounds) <= n:
            nn = len(self.bounds)
            self._extend_to(nn + self.m)
            raw = sum(self.a[nn + 1:nn + self.m + 1]) / (1 - self.q ** 2)
            self._best = min(self._best, raw)
            self.bounds.append(self._best)
        return self.bounds[n]


def _checked_pure(t, tol, purity_margin):
    t = as_square(t, "T")
    if not is_pure_contraction(t, tol, purity_margin):
        raise NotPure(
            f"T is not a pure contraction (||T|| = {op_norm(t):.12g}, "
            f"rho = {spectral_radius(t):.12g}, margin = {purity_margin:g})"
        )
    return t


def choose_truncation_degree(t, tol=DEFAULT_TOL, purity_margin=PURITY_MARGIN,
                             max_degree=MAX_DEGREE, contraction_tol=DEFAULT_TOL):
    """Smallest ``N`` whose certified tail ``sum_{k>N} ||D_T T*^k||^2 <= tol``."""
    t = _checked_pure(t, contraction_tol, purity_margin)
    prof = _TailProfile(t, defect(t, contraction_tol).coord, max_degree)
    for n in range(max_degree + 1):
        if prof.bound(n) <= tol:
            return n
    raise DegreeCapExceeded(f"no degree <= {max_degree} reaches tail {tol:g}")


def build_pi(t, degree, purity_margin=PURITY_MARGIN, tol=DEFAULT_TOL):
    """Dilation map of the pure contraction `t` truncated at `degree`."""
    t = _checked_pure(t, tol, purity_margin)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    prof = _TailProfile(t, defect(t, tol).coord, max(degree, MAX_DEGREE))
    tail = prof.bound(degree)
    return DilationMap(blocks=np.array(prof.blocks[:degree + 1]), tail_bound=tail)


def build_pi_v(pi, v, tol=DEFAULT_TOL):
    """Lift a dilation map through an isometry ``v`` of its fiber."""
    v = as_matrix(v, "V")
    if v.shape[1] != pi.fiber_dim:
        raise DimensionMismatch(f"V is {v.shape}, fiber is {pi.fiber_dim}")
    defect_v = op_norm(adj(v) @ v - np.eye(v.shape[1]))
    if defect_v > tol:
        raise NotIsometry(f"||V*V - I|| = {defect_v:.3e} > {tol:.3e}")
    return DilationMap(blocks=np.matmul(v, pi.blocks), tail_bound=pi.tail_bound)


def minimality_rank(pi, tol=1e-10):
    """Rank of ``[block_0 | block_1 | ... | block_N]``.

    Equal to the fiber dimension when the truncated coefficients span the
    whole fiber, a finite stand-in for minimality of the dilation.
    """
    wide = np.concatenate(list(pi.blocks), axis=1)
    if wide.size == 0:
        return 0
    s = np.linalg.svd(wide, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def intertwiner_residual(gamma, op, s):
    """``||G S* - M_op* G||`` with the top-degree block excluded.

    `op` is a :class:`LinearPencil`, a :class:`HardyOperator` or a list of
    symbol coefficients.
    """
    s = as_square(s, "S")
    g = _as_blocks(getattr(gamma, "blocks", gamma))
    if s.shape[0] != g.shape[2]:
        raise DimensionMismatch(f"S is {s.shape}, source dim is {g.shape[2]}")
    if isinstance(op, HardyOperator) and op.kind == "dense":
        rhs = op.adjoint_apply(g)
    else:
        coeffs = symbol_coeffs(op)
        if coeffs[0].shape[0] != g.shape[1]:
            raise DimensionMismatch(f"symbol fiber {coeffs[0].shape[0]}, map fiber {g.shape[1]}")
        rhs = poly_adjoint_apply_blocks(coeffs, g)
    diff = (np.matmul(g, adj(s)) - rhs)[:-1]
    if diff.size == 0:
        return 0.0
    return op_norm(diff.reshape(-1, g.shape[2]))

