"""The determinantal variety of a multiplier pair and von Neumann certificates.

For pencils ``Phi, Psi`` with ``Phi(z) Psi(z) = z I`` the variety is the set of
``(l1, l2)`` in the open bidisc with ``det(Phi(l1 l2) - l1 I) = 0`` and
``det(Psi(l1 l2) - l2 I) = 0``.  On the circle both pencils are unitary and
commute; their joint spectrum is read off the eigenvalues of ``Phi(z)`` alone,
since every eigenvector of ``Phi(z)`` with eigenvalue ``l1`` is an eigenvector
of ``Psi(z)`` with eigenvalue ``z / l1``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegreeCapExceeded, EmptyBoundary, NotCommuting, NotUnimodular, PairingFailure
from .hardy import eval_pencil_batch
from .opcore import DEFAULT_TOL, as_square, cnu_check, is_commuting_pair, op_norm

BOUNDARY_SAMPLES = 2048
POINT_TOL = 1e-8
VN_SLACK = 1e-6
DEGREE_CAP = 16


@dataclass(frozen=True)
class BivariatePolynomial:
    """``sum c[i, j] z1^i z2^j`` with a finite coefficient map."""

    coeffs: dict

    def __post_init__(self):
        clean = {}
        for (i, j), c in self.coeffs.items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent ({i}, {j})")
            c = complex(c)
            if c != 0:
                clean[(int(i), int(j))] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @property
    def degrees(self):
        if not self.coeffs:
            return (0, 0)
        return (max(i for i, _ in self.coeffs), max(j for _, j in self.coeffs))

    @property
    def total_degree(self):
        return max((i + j for i, j in self.coeffs), default=0)

    def __call__(self, z1, z2):
        z1 = np.asarray(z1, dtype=np.complex128)
        z2 = np.asarray(z2, dtype=np.complex128)
        out = np.zeros(np.broadcast(z1, z2).shape, dtype=np.complex128)
        for (i, j), c in self.coeffs.items():
            out = out + c * z1 ** i * z2 ** j
        return out


def random_polynomial(rng, max_degree=4):
    """Random polynomial of total degree at most `max_degree`, coefficients in the unit disc."""
    coeffs = {}
    for i in range(max_degree + 1):
        for j in range(max_degree + 1 - i):
            r = np.sqrt(rng.uniform())
            coeffs[(i, j)] = r * np.exp(2j * np.pi * rng.uniform())
    return BivariatePolynomial(coeffs)


@dataclass(frozen=True)
class VarietyPointSet:
    """Sampled points with the residuals of both determinant conditions.

    ``excluded`` lists sample points ``w`` where ``Phi(w)`` had a zero
    eigenvalue; those cannot be split as ``w = l1 l2`` and are left out.
    """

    lambda1: np.ndarray
    lambda2: np.ndarray
    source_z: np.ndarray
    residual1: np.ndarray
    residual2: np.ndarray
    kind: str
    excluded: np.ndarray = field(default_factory=lambda: np.zeros(0, np.complex128))

    def __len__(self):
        return len(self.lambda1)

    def points(self):
        return list(zip(self.lambda1, self.lambda2))


def _det_residuals(phi, psi, l1, l2):
    z = l1 * l2
    e = phi.fiber_dim
    eye = np.eye(e)
    r1 = np.abs(np.linalg.det(eval_pencil_batch(phi, z) - l1[:, None, None] * eye))
    r2 = np.abs(np.linalg.det(eval_pencil_batch(psi, z) - l2[:, None, None] * eye))
    return r1, r2


def variety_residuals(phi, psi, l1, l2):
    """``(|det(Phi(l1 l2) - l1)|, |det(Psi(l1 l2) - l2)|)`` at given points."""
    l1 = np.atleast_1d(np.asarray(l1, dtype=np.complex128))
    l2 = np.atleast_1d(np.asarray(l2, dtype=np.complex128))
    return _det_residuals(phi, psi, l1, l2)


def _spectrum_rows(phi, zs):
    mats = eval_pencil_batch(phi, zs)
    ev = np.linalg.eigvals(mats)
    e = phi.fiber_dim
    z_rep = np.repeat(zs, e)
    l1 = ev.reshape(-1)
    return l1, z_rep


def _sort_key(l1):
    return np.mod(np.angle(l1), 2 * np.pi)


def torus_joint_spectrum(phi, psi, z, tol=POINT_TOL):
    """Joint spectrum of ``(Phi(z), Psi(z))`` at a point of the circle."""
    z = complex(z)
    if abs(abs(z) - 1) > 1e-12:
        raise NotUnimodular(f"|z| = {abs(z)!r}")
    ps = sample_points(phi, psi, np.array([z]), tol=tol, kind="boundary")
    return list(zip(ps.lambda1, ps.lambda2))


def sample_points(phi, psi, zs, tol=POINT_TOL, kind="boundary"):
    l1, z = _spectrum_rows(phi, zs)
    l2 = z / l1
    r1, r2 = _det_residuals(phi, psi, l1, l2)
    bad = r2 > tol
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise PairingFailure(f"residual2 = {r2[k]:.3e} > {tol:.3e} at z = {z[k]}")
    idx = np.repeat(np.arange(len(zs)), phi.fiber_dim)
    order = np.lexsort((_sort_key(l1), idx))
    return VarietyPointSet(l1[order], l2[order], z[order], r1[order], r2[order], kind)


def torus_points(n_samples):
    return np.exp(2j * np.pi * np.arange(n_samples) / n_samples)


def sample_boundary_variety(phi, psi, n_samples=BOUNDARY_SAMPLES, tol=POINT_TOL):
    """Union of torus joint spectra over ``n_samples`` equispaced points."""
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    return sample_points(phi, psi, torus_points(n_samples), tol=tol, kind="boundary")


def polar_grid(n_radii=64, n_angles=64):
    """Points ``r e^{i t}`` with ``r = k / (n_radii + 1)``, ``k = 1..n_radii``."""
    r = np.arange(1, n_radii + 1) / (n_radii + 1)
    t = 2 * np.pi * np.arange(n_angles) / n_angles
    return (r[:, None] * np.exp(1j * t)[None, :]).reshape(-1)


def sample_interior_variety(phi, psi, grid=None, tol=POINT_TOL, zero_tol=1e-12,
                            boundary_margin=1e-10):
    """Points of the variety inside the bidisc over sample products ``w``.

    Each eigenvalue ``l1`` of ``Phi(w)`` yields the candidate ``(l1, w / l1)``;
    candidates failing the second determinant condition, or with a coordinate
    of modulus at least ``1 - boundary_margin`` (on the torus up to rounding),
    are dropped.  Zero eigenvalues are recorded in ``excluded``.
    """
    ws = polar_grid() if grid is None else np.asarray(grid, dtype=np.complex128).reshape(-1)
    if np.any(np.abs(ws) >= 1):
        raise ValueError("grid points must lie in the open unit disc")
    l1, w = _spectrum_rows(phi, ws)
    zero = np.abs(l1) <= zero_tol
    excluded = np.unique(w[zero])
    l1, w = l1[~zero], w[~zero]
    l2 = w / l1
    edge = 1 - boundary_margin
    inside = (np.abs(l1) < edge) & (np.abs(l2) < edge)
    l1, l2, w = l1[inside], l2[inside], w[inside]
    r1, r2 = _det_residuals(phi, psi, l1, l2)
    keep = r2 <= tol
    l1, l2, w, r1, r2 = l1[keep], l2[keep], w[keep], r1[keep], r2[keep]
    order = np.lexsort((_sort_key(l1), _sort_key(w), np.abs(w)))
    return VarietyPointSet(l1[order], l2[order], w[order], r1[order], r2[order],
                           "interior", excluded)


def eval_poly_pair(p, t1, t2, tol=DEFAULT_TOL):
    """``sum c[i, j] T1^i T2^j`` for a commuting pair."""
    t1 = as_square(t1, "T1")
    t2 = as_square(t2, "T2")
    if not is_commuting_pair(t1, t2, tol):
        raise NotCommuting(f"||T1 T2 - T2 T1|| = {op_norm(t1 @ t2 - t2 @ t1):.3e}")
    d1, d2 = p.degrees
    if max(d1, d2) > DEGREE_CAP:
        raise DegreeCapExceeded(f"degrees {(d1, d2)} exceed {DEGREE_CAP}")
    n = t1.shape[0]
    pow1 = [np.eye(n, dtype=np.complex128)]
    for _ in range(d1):
        pow1.append(pow1[-1] @ t1)
    pow2 = [np.eye(n, dtype=np.complex128)]
    for _ in range(d2):
        pow2.append(pow2[-1] @ t2)
    out = np.zeros((n, n), dtype=np.complex128)
    for (i, j), c in p.coeffs.items():
        out += c * pow1[i] @ pow2[j]
    return out


@dataclass(frozen=True)
class VNCertificate:
    lhs: float
    rhs: float
    slack: float
    argmax: tuple

    @property
    def margin(self):
        return self.rhs - self.lhs

    @property
    def passed(self):
        return self.lhs <= self.rhs + self.slack


def vn_certificate(p, t1, t2, boundary, slack=VN_SLACK, tol=DEFAULT_TOL):
    """Compare ``||p(T1, T2)||`` with the largest ``|p|`` over boundary samples."""
    if len(boundary) == 0:
        raise EmptyBoundary("boundary point set is empty")
    lhs = op_norm(eval_poly_pair(p, t1, t2, tol))
    vals = np.abs(p(boundary.lambda1, boundary.lambda2))
    k = int(np.argmax(vals))
    return VNCertificate(lhs=lhs, rhs=float(vals[k]), slack=slack,
                         argmax=(complex(boundary.lambda1[k]), complex(boundary.lambda2[k])))


def distinguished_hint(triple, tol=DEFAULT_TOL):
    """True iff both ``P U*`` and ``U P_perp`` are completely non-unitary.

    Under that condition the variety is known to be distinguished; the
    implication itself is not checked here.
    """
    u, p = triple.U, triple.P
    pp = np.eye(u.shape[0]) - p
    return cnu_check(p @ u.conj().T, tol) and cnu_check(u @ pp, tol)
