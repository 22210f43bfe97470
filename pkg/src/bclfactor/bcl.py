"""Commuting-isometry multipliers and the dilation of a commuting pair.

A triple ``(E, U, P)`` with ``U`` unitary and ``P`` an orthogonal projection
on ``E`` defines the degree-one multipliers

    Phi(z) = (P + z P_perp) U*,      Psi(z) = U (P_perp + z P),

with ``Phi(z) Psi(z) = Psi(z) Phi(z) = z I``.  :func:`construct_bcl` builds such
a triple for a commuting pair ``(T1, T2)`` with pure product and a dilation
map intertwining ``T1*, T2*`` with the adjoints of the multipliers.
"""

from dataclasses import dataclass, field

import numpy as np

from .dilation import (
    DilationMap,
    build_pi,
    build_pi_v,
    choose_truncation_degree,
    intertwiner_residual,
)
from .errors import (
    ActionMismatch,
    DimensionMismatch,
    InvalidTriple,
    IsometrySolveFailed,
    NotCommuting,
    NotPure,
    NotUnitary,
    SingularResolvent,
)
from .hardy import LinearPencil
from .opcore import (
    DEFAULT_TOL,
    PURITY_MARGIN,
    DefectData,
    adj,
    as_matrix,
    as_square,
    defect,
    extend_to_unitary,
    is_commuting_pair,
    is_pure_contraction,
    op_norm,
    spectral_radius,
)


@dataclass(frozen=True)
class BCLTriple:
    U: np.ndarray
    P: np.ndarray

    @property
    def dim(self):
        return self.U.shape[0]


def make_triple(u, p, tol=DEFAULT_TOL):
    """Validated :class:`BCLTriple`; raises :class:`InvalidTriple`."""
    u = as_square(u, "U")
    p = as_square(p, "P")
    if u.shape != p.shape:
        raise InvalidTriple(f"U is {u.shape}, P is {p.shape}")
    eye = np.eye(u.shape[0])
    checks = {
        "U*U - I": op_norm(adj(u) @ u - eye),
        "P^2 - P": op_norm(p @ p - p),
        "P - P*": op_norm(p - adj(p)),
    }
    bad = {k: v for k, v in checks.items() if v > tol}
    if bad:
        detail = ", ".join(f"||{k}|| = {v:.3e}" for k, v in bad.items())
        raise InvalidTriple(f"{detail} (tol {tol:.3e})")
    return BCLTriple(U=u, P=p)


def bcl_pencils(triple, tol=DEFAULT_TOL):
    """``(Phi, Psi)`` of a triple as pencils."""
    t = make_triple(triple.U, triple.P, tol)
    u, p = t.U, t.P
    pp = np.eye(t.dim) - p
    phi = LinearPencil(p @ adj(u), pp @ adj(u))
    psi = LinearPencil(u @ pp, u @ p)
    return phi, psi


def _check_block_unitary(a, b, c, d, tol):
    top = np.hstack([a, b])
    bottom = np.hstack([c, d])
    if top.shape[1] != bottom.shape[1]:
        raise DimensionMismatch("block rows have different widths")
    u = np.vstack([top, bottom])
    if u.shape[0] != u.shape[1]:
        raise DimensionMismatch(f"block matrix is {u.shape}")
    res = op_norm(adj(u) @ u - np.eye(u.shape[0]))
    if res > tol:
        raise NotUnitary(f"||U*U - I|| = {res:.3e} > {tol:.3e}")
    return u


def transfer_function(a, b, c, d, z, tol=DEFAULT_TOL):
    """``A + z B (I - z D)^{-1} C`` for a unitary block matrix ``[[A, B], [C, D]]``."""
    a, b, c, d = (as_matrix(x) for x in (a, b, c, d))
    _check_block_unitary(a, b, c, d, tol)
    res = np.eye(d.shape[0]) - z * d
    if np.linalg.cond(res) > 1e14:
        raise SingularResolvent(f"I - zD is singular at z = {z}")
    return a + z * b @ np.linalg.solve(res, c)


def transfer_pencil(a, b, c):
    """Transfer function of ``[[A, B], [C, 0]]`` as the pencil ``(A, B C)``."""
    a, b, c = (as_matrix(x) for x in (a, b, c))
    return LinearPencil(a, b @ c)


def transfer_isometry_residual(a, b, c, d, z):
    """``||I - tau(z)* tau(z) - (1 - |z|^2) C* (I - zD)^{-*} (I - zD)^{-1} C||``."""
    a, b, c, d = (as_matrix(x) for x in (a, b, c, d))
    k = np.linalg.solve(np.eye(d.shape[0]) - z * d, c)
    tau = a + z * b @ k
    lhs = np.eye(a.shape[1]) - adj(tau) @ tau
    rhs = (1 - abs(z) ** 2) * adj(k) @ k
    return op_norm(lhs - rhs)


def _split_blocks(u1, e):
    u1 = as_square(u1, "U1")
    if u1.shape[0] < e:
        raise DimensionMismatch(f"U1 is {u1.shape}, fiber is {e}")
    return u1[:e, :e], u1[:e, e:], u1[e:, :e], u1[e:, e:]


@dataclass(frozen=True)
class PairDilation:
    phi: LinearPencil
    residual: float
    action_residual: float
    pi_v: DilationMap


def dilate_pair(t, s, v, u1, pi=None, degree=None, tol=DEFAULT_TOL,
                trunc_tol=DEFAULT_TOL, purity_margin=PURITY_MARGIN,
                action_tol=None):
    """Multiplier of ``S`` from a unitary colligation ``U1 = [[A, B], [C, 0]]``.

    ``U1`` acts on ``E + D_S`` (defect coordinates of ``S``) and must send
    ``(V D_T h, D_S T* h)`` to ``(V D_T S* h, D_S h)`` for every ``h``.  The
    symbol is ``A* + z C* B*``; the returned residual is
    ``||Pi_V S* - M_Phi* Pi_V||`` over the truncated space.

    Parameters
    ----------
    t, s : commuting contractions, ``t`` pure
    v : isometry from defect coordinates of ``t`` into ``E``
    u1 : unitary on ``E + D_S``
    pi : optional prebuilt dilation map of ``t``
    degree : truncation degree (chosen from `trunc_tol` when omitted)
    """
    t = as_square(t, "T")
    s = as_square(s, "S")
    v = as_matrix(v, "V")
    u1 = as_square(u1, "U1")
    if action_tol is None:
        action_tol = 100 * tol
    if not is_commuting_pair(s, t, tol):
        raise NotCommuting(f"||ST - TS|| = {op_norm(s @ t - t @ s):.3e}")
    dt = defect(t, tol)
    ds = defect(s, tol)
    e = v.shape[0]
    if v.shape[1] != dt.rank:
        raise DimensionMismatch(f"V is {v.shape}, defect rank of T is {dt.rank}")
    if u1.shape != (e + ds.rank, e + ds.rank):
        raise DimensionMismatch(f"U1 is {u1.shape}, expected {(e + ds.rank,) * 2}")
    a, b, c, d = _split_blocks(u1, e)
    u1 = _check_block_unitary(a, b, c, d, action_tol)
    if op_norm(d) > action_tol:
        raise ActionMismatch(f"lower-right block has norm {op_norm(d):.3e}")
    src = np.vstack([v @ dt.coord, ds.coord @ adj(t)])
    dst = np.vstack([v @ dt.coord @ adj(s), ds.coord])
    act = op_norm(u1 @ src - dst)
    if act > action_tol:
        raise ActionMismatch(f"||U1 src - dst|| = {act:.3e} > {action_tol:.3e}")
    if pi is None:
        if degree is None:
            degree = choose_truncation_degree(t, trunc_tol, purity_margin, contraction_tol=tol)
        pi = build_pi(t, degree, purity_margin, tol)
    pi_v = build_pi_v(pi, v, action_tol)
    phi = LinearPencil(adj(a), adj(c) @ adj(b))
    return PairDilation(phi=phi, residual=intertwiner_residual(pi_v, phi, s),
                        action_residual=act, pi_v=pi_v)


@dataclass(frozen=True)
class BCLDilationBundle:
    """Everything the pair construction produces.

    ``iota1`` and ``iota2`` embed the defect coordinates of ``T1`` and
    ``T2`` into ``E`` (first and second summand); ``V`` maps defect
    coordinates of ``T = T1 T2`` into ``E``.
    """

    T1: np.ndarray
    T2: np.ndarray
    triple: BCLTriple
    V: np.ndarray
    iota1: np.ndarray
    iota2: np.ndarray
    U1: np.ndarray
    U2: np.ndarray
    phi: LinearPencil
    psi: LinearPencil
    pi: DilationMap
    pi_v: DilationMap
    defects: dict = field(repr=False)
    residuals: dict = field(default_factory=dict)

    @property
    def T(self):
        return self.T1 @ self.T2

    @property
    def degree(self):
        return self.pi.degree

    @property
    def eq_u_map(self):
        """The isometry sending ``(D_T1 h, D_T2 T1* h)`` to ``(D_T1 T2* h, D_T2 h)``.

        It is the adjoint of the unitary stored in the triple, which runs the
        other way; exposed read-only.
        """
        u = adj(self.triple.U)
        u.setflags(write=False)
        return u


def _stacks(d1: DefectData, d2: DefectData, t1, t2):
    x = np.vstack([d1.coord @ adj(t2), d2.coord])
    y = np.vstack([d1.coord, d2.coord @ adj(t1)])
    return x, y


def construct_bcl(t1, t2, tol=DEFAULT_TOL, trunc_tol=DEFAULT_TOL,
                  purity_margin=PURITY_MARGIN, degree=None):
    """Dilate a commuting pair with pure product to ``(M_Phi, M_Psi)``.

    ``E`` is the direct sum of the defect spaces of ``T1`` and ``T2`` in
    coordinates; ``P`` projects onto the second summand.  ``U`` is the
    canonical unitary extension (see :func:`~bclfactor.opcore.extend_to_unitary`)
    of ``(D_T1 T2* h, D_T2 h) -> (D_T1 h, D_T2 T1* h)``.

    Raises
    ------
    NotCommuting, NotPure, GramMismatch, IsometrySolveFailed
    """
    t1 = as_square(t1, "T1")
    t2 = as_square(t2, "T2")
    if t1.shape != t2.shape:
        raise DimensionMismatch(f"T1 is {t1.shape}, T2 is {t2.shape}")
    if not is_commuting_pair(t1, t2, tol):
        raise NotCommuting(f"||T1 T2 - T2 T1|| = {op_norm(t1 @ t2 - t2 @ t1):.3e} > {tol:.3e}")
    t = t1 @ t2
    if not is_pure_contraction(t, tol, purity_margin):
        raise NotPure(f"T1 T2 is not pure (rho = {spectral_radius(t):.12g})")
    d1, d2, dt = defect(t1, tol), defect(t2, tol), defect(t, tol)
    r1, r2 = d1.rank, d2.rank
    e = r1 + r2

    x, y = _stacks(d1, d2, t1, t2)
    gram = op_norm(adj(x) @ x - adj(y) @ y)
    u = extend_to_unitary(x, y, tol)
    p = np.zeros((e, e), dtype=np.complex128)
    p[r1:, r1:] = np.eye(r2)
    triple = make_triple(u, p, tol)

    # V D_T = Y on the range of D_T
    v = y @ np.linalg.pinv(dt.coord)
    v_defect = op_norm(adj(v) @ v - np.eye(dt.rank))
    if v_defect > 100 * tol:
        raise IsometrySolveFailed(f"||V*V - I|| = {v_defect:.3e}")

    eye_e = np.eye(e)
    iota1, iota2 = eye_e[:, :r1].astype(np.complex128), eye_e[:, r1:].astype(np.complex128)
    pp = eye_e - p
    u1 = np.block([[u @ p, u @ iota1], [adj(iota1), np.zeros((r1, r1))]])
    u2 = np.block([[pp @ adj(u), iota2], [adj(iota2) @ adj(u), np.zeros((r2, r2))]])

    if degree is None:
        degree = choose_truncation_degree(t, trunc_tol, purity_margin, contraction_tol=tol)
    pi = build_pi(t, degree, purity_margin, tol)
    first = dilate_pair(t, t1, v, u1, pi=pi, tol=tol)
    second = dilate_pair(t, t2, v, u2, pi=pi, tol=tol)
    phi, psi = bcl_pencils(triple, tol)
    pi_v = first.pi_v

    residuals = {
        "gram": gram,
        "v_isometry": v_defect,
        "v_solve": op_norm(v @ dt.coord - y),
        "u_action": op_norm(u @ x - y),
        "u_unitary": op_norm(adj(u) @ u - eye_e),
        "action_T1": first.action_residual,
        "action_T2": second.action_residual,
        "phi_symbol": max(op_norm(first.phi.c0 - phi.c0), op_norm(first.phi.c1 - phi.c1)),
        "psi_symbol": max(op_norm(second.phi.c0 - psi.c0), op_norm(second.phi.c1 - psi.c1)),
        "intertwine_T1": intertwiner_residual(pi_v, phi, t1),
        "intertwine_T2": intertwiner_residual(pi_v, psi, t2),
        "intertwine_T": intertwiner_residual(pi_v, LinearPencil.shift(e), t),
        "tail_bound": pi.tail_bound,
        "isometry_defect": pi_v.isometry_defect(),
    }
    return BCLDilationBundle(
        T1=t1, T2=t2, triple=triple, V=v, iota1=iota1, iota2=iota2, U1=u1, U2=u2,
        phi=phi, psi=psi, pi=pi, pi_v=pi_v,
        defects={"T1": d1, "T2": d2, "T": dt}, residuals=residuals,
    )
