"""Dense complex linear algebra predicates and constructions.

Operators on finite-dimensional Hilbert spaces are plain 2-D numpy arrays
(complex128).  Predicates take an explicit tolerance; orthonormal bases are
produced under a fixed ordering and phase convention so that identical inputs
give bit-identical outputs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    GramMismatch,
    NotContraction,
    NotHermitian,
    NotPSD,
)

DEFAULT_TOL = 1e-10
RANK_TOL = 1e-10
PURITY_MARGIN = 1e-6

# entries within this relative distance of the largest modulus count as ties
_PHASE_TIE = 1e-9


def as_matrix(a, name="matrix"):
    """Return `a` as a finite complex128 2-D array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def as_square(a, name="matrix"):
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    return m


def adj(a):
    return a.conj().T


def op_norm(a):
    """Spectral norm (largest singular value); 0 for empty matrices."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def spectral_radius(t):
    t = as_square(t, "T")
    if t.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(t))))


def is_isometry(x, tol=DEFAULT_TOL):
    x = as_matrix(x)
    return op_norm(adj(x) @ x - np.eye(x.shape[1])) <= tol


def is_unitary(x, tol=DEFAULT_TOL):
    x = as_matrix(x)
    return x.shape[0] == x.shape[1] and is_isometry(x, tol) and is_isometry(adj(x), tol)


def is_projection(p, tol=DEFAULT_TOL):
    p = as_matrix(p)
    if p.shape[0] != p.shape[1]:
        return False
    return op_norm(p @ p - p) <= tol and op_norm(p - adj(p)) <= tol


def is_contraction(t, tol=DEFAULT_TOL):
    return op_norm(as_matrix(t)) <= 1 + tol


def is_commuting_pair(t1, t2, tol=DEFAULT_TOL):
    t1 = as_square(t1, "T1")
    t2 = as_square(t2, "T2")
    if t1.shape != t2.shape:
        raise DimensionMismatch(f"T1 is {t1.shape}, T2 is {t2.shape}")
    return op_norm(t1 @ t2 - t2 @ t1) <= tol


def is_pure_contraction(t, tol=DEFAULT_TOL, purity_margin=PURITY_MARGIN):
    """A matrix contraction is pure iff its spectral radius is below one.

    The margin keeps truncation degrees finite and computable.
    """
    t = as_square(t, "T")
    return is_contraction(t, tol) and spectral_radius(t) <= 1 - purity_margin


def fix_phases(q):
    """Rotate each column so its first largest-modulus entry is positive real."""
    q = np.array(q, dtype=np.complex128, copy=True)
    for j in range(q.shape[1]):
        mags = np.abs(q[:, j])
        top = mags.max()
        if top == 0:
            continue
        i = int(np.flatnonzero(mags >= top * (1 - _PHASE_TIE))[0])
        q[:, j] *= np.conj(q[i, j]) / mags[i]
    return q


def _lead_index(q):
    idx = []
    for j in range(q.shape[1]):
        mags = np.abs(q[:, j])
        idx.append(int(np.flatnonzero(mags >= mags.max() * (1 - _PHASE_TIE))[0]))
    return np.array(idx, dtype=int)


def canonical_basis(vals, vecs):
    """Order eigenpairs descending in value, ties by lead index; fix phases.

    Returns ``(vals, vecs)`` reordered.
    """
    vecs = fix_phases(vecs)
    lead = _lead_index(vecs)
    # lexsort: last key is primary
    order = np.lexsort((lead, -np.round(vals, 12)))
    return vals[order], vecs[:, order]


def _hermitian_eigh(a, tol):
    if op_norm(a - adj(a)) > tol:
        raise NotHermitian(f"||A - A*|| = {op_norm(a - adj(a)):.3e} > {tol:.3e}")
    return np.linalg.eigh((a + adj(a)) / 2)


def psqrt(a, tol=DEFAULT_TOL):
    """Square root of a Hermitian positive semidefinite matrix.

    Eigenvalues in ``[-tol, 0)`` are clamped to zero.

    Raises
    ------
    NotHermitian
        If ``||A - A*|| > tol``.
    NotPSD
        If the smallest eigenvalue is below ``-tol``.
    """
    a = as_square(a, "A")
    if a.shape[0] == 0:
        return a.copy()
    w, q = _hermitian_eigh(a, tol)
    if w[0] < -tol:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} < -{tol:.3e}")
    s = (q * np.sqrt(np.clip(w, 0.0, None))) @ adj(q)
    return (s + adj(s)) / 2


@dataclass(frozen=True)
class DefectData:
    """Defect operator of a contraction and its range in coordinates.

    Attributes
    ----------
    defect_op : ndarray (n, n)
        ``(I - T T*)^{1/2}``.
    rank : int
        Numerical rank of ``I - T T*``.
    basis : ndarray (n, rank)
        Orthonormal columns spanning the range of the defect operator.
    coord : ndarray (rank, n)
        ``basis* @ defect_op``, the defect operator with values in
        defect-space coordinates.
    """

    defect_op: np.ndarray
    rank: int
    basis: np.ndarray
    coord: np.ndarray

    @property
    def dim(self):
        return self.defect_op.shape[0]


def defect(t, tol=DEFAULT_TOL, rank_tol=RANK_TOL):
    """Defect data of the contraction `t`.

    The basis consists of eigenvectors of ``I - T T*`` whose eigenvalues
    exceed `rank_tol`, in canonical order (see :func:`canonical_basis`).
    """
    t = as_square(t, "T")
    if not is_contraction(t, tol):
        raise NotContraction(f"||T|| = {op_norm(t):.15g} > 1 + {tol:.3e}")
    n = t.shape[0]
    a = np.eye(n) - t @ adj(t)
    w, q = np.linalg.eigh((a + adj(a)) / 2)
    w = np.clip(w, 0.0, None)
    d = (q * np.sqrt(w)) @ adj(q)
    d = (d + adj(d)) / 2
    keep = w > rank_tol
    vals, basis = canonical_basis(w[keep], q[:, keep])
    return DefectData(defect_op=d, rank=int(keep.sum()), basis=basis, coord=adj(basis) @ d)


def orth_complement(q, dim):
    """Canonical orthonormal basis of the complement of ``ran q`` in C^dim.

    `q` must have orthonormal columns.
    """
    k = q.shape[1]
    if k >= dim:
        return np.zeros((dim, 0), dtype=np.complex128)
    proj = np.eye(dim) - q @ adj(q)
    w, v = np.linalg.eigh((proj + adj(proj)) / 2)
    # the complement is the eigenvalue-one eigenspace; take the top dim-k
    v = v[:, k:]
    _, v = canonical_basis(np.ones(dim - k), v)
    return v


def _polar(m):
    u, _, vh = np.linalg.svd(m, full_matrices=False)
    return u @ vh


def extend_to_unitary(x, y, tol=DEFAULT_TOL, rank_tol=1e-8):
    """Unitary `W` with ``W @ x = y`` for column families of equal Gram matrix.

    On ``ran x`` the map is forced.  On the orthogonal complement the
    completion is not unique; the one closest to the identity in Frobenius
    norm is returned (an orthogonal Procrustes problem between the two
    complements).  That choice does not depend on how either complement is
    parametrised.

    Parameters
    ----------
    x, y : ndarray (E, n)
    tol : float
        Bound on ``||x* x - y* y||``.
    rank_tol : float
        Singular values of `x` below ``rank_tol * max(1, s_max)`` are
        treated as zero.

    Raises
    ------
    GramMismatch
    """
    x = as_matrix(x, "X")
    y = as_matrix(y, "Y")
    if x.shape != y.shape:
        raise DimensionMismatch(f"X is {x.shape}, Y is {y.shape}")
    gram = op_norm(adj(x) @ x - adj(y) @ y)
    if gram > tol:
        raise GramMismatch(gram, tol)
    e = x.shape[0]
    if x.shape[1] == 0:
        return np.eye(e, dtype=np.complex128)
    ux, s, vh = np.linalg.svd(x, full_matrices=True)
    k = int(np.sum(s > rank_tol * max(1.0, s[0] if s.size else 0.0)))
    qx = ux[:, :k]
    qy = _polar(y @ adj(vh[:k]) / s[:k]) if k else np.zeros((e, 0), np.complex128)
    xc = orth_complement(qx, e)
    yc = orth_complement(qy, e)
    w = qy @ adj(qx)
    if e > k:
        w = w + yc @ adj(_polar(adj(xc) @ yc)) @ adj(xc)
    return w


def unitary_part_dim(a, tol=DEFAULT_TOL):
    """Dimension of the largest reducing subspace on which `a` is unitary.

    That subspace is the joint kernel of ``(I - A*A) A^k`` and
    ``(I - A A*) A*^k`` for ``k = 0 .. n-1``.
    """
    a = as_square(a, "A")
    n = a.shape[0]
    if n == 0:
        return 0
    if not is_contraction(a, tol):
        raise NotContraction(f"||A|| = {op_norm(a):.15g} > 1 + {tol:.3e}")
    eye = np.eye(n)
    d_right = eye - adj(a) @ a
    d_left = eye - a @ adj(a)
    rows = []
    p, ps = eye.astype(np.complex128), eye.astype(np.complex128)
    for _ in range(n):
        rows.append(d_right @ p)
        rows.append(d_left @ ps)
        # swapped-defect rows cut out the same subspace
        rows.append(d_left @ p)
        rows.append(d_right @ ps)
        p = a @ p
        ps = adj(a) @ ps
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    return int(np.sum(s <= tol))


def cnu_check(a, tol=DEFAULT_TOL):
    """True iff the contraction `a` has no unitary part."""
    return unitary_part_dim(a, tol) == 0
