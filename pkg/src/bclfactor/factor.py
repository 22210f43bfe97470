"""Degree-one factors of a pure contraction on its model space.

Pulling the pair dilation back through ``V`` gives pencils
``phi(z) = V* Phi(z) V`` and ``psi(z) = V* Psi(z) V`` over the defect space of
``T = T1 T2``; their compressions to the range of the minimal dilation map
reproduce ``T1`` and ``T2``, and both symbol products compress to ``T``
although ``phi psi`` and ``psi phi`` generally differ as symbols.
"""

from dataclasses import dataclass, field

import numpy as np

from .dilation import intertwiner_residual
from .hardy import LinearPencil, _as_blocks, compress, poly_adjoint_apply_blocks, poly_product
from .opcore import as_square, op_norm


@dataclass(frozen=True)
class FactorizationResult:
    phi: LinearPencil
    psi: LinearPencil
    V: np.ndarray
    residuals: dict = field(default_factory=dict)


def pull_back(bundle):
    """Factor pencils of ``T1 T2`` over its own defect space."""
    v = bundle.V
    phi = bundle.phi.sandwich(v)
    psi = bundle.psi.sandwich(v)
    pi = bundle.pi
    residuals = {
        "intertwine_T1": intertwiner_residual(pi, phi, bundle.T1),
        "intertwine_T2": intertwiner_residual(pi, psi, bundle.T2),
        "intertwine_T": intertwiner_residual(pi, LinearPencil.shift(pi.fiber_dim), bundle.T),
        "joint_invariance_phi": joint_invariance_check(pi, phi),
        "joint_invariance_psi": joint_invariance_check(pi, psi),
    }
    return FactorizationResult(phi=phi, psi=psi, V=v, residuals=residuals)


def noncommutativity_gap(phi, psi):
    """Largest coefficient norm of ``phi psi - psi phi`` as a degree-2 symbol."""
    ab = poly_product(phi.coeffs, psi.coeffs)
    ba = poly_product(psi.coeffs, phi.coeffs)
    return max(op_norm(x - y) for x, y in zip(ab, ba))


def verify_factorization(t1, t2, result, pi):
    """Compression residuals of the factor pencils against ``(T1, T2)``.

    Returns a dict with ``compression_phi``, ``compression_psi``,
    ``compression_phipsi``, ``compression_psiphi`` and
    ``noncommutativity_gap``.
    """
    t1 = as_square(t1, "T1")
    t2 = as_square(t2, "T2")
    t = t1 @ t2
    phi, psi = result.phi, result.psi
    return {
        "compression_phi": op_norm(compress(pi, phi) - t1),
        "compression_psi": op_norm(compress(pi, psi) - t2),
        "compression_phipsi": op_norm(compress(pi, poly_product(phi.coeffs, psi.coeffs)) - t),
        "compression_psiphi": op_norm(compress(pi, poly_product(psi.coeffs, phi.coeffs)) - t),
        "noncommutativity_gap": noncommutativity_gap(phi, psi),
    }


def joint_invariance_check(pi, p):
    """How far ``ran Pi`` is from being ``M_p*``-invariant.

    ``||(I - G G*) M_p* G||`` over the truncated space, top block excluded.
    """
    g = _as_blocks(getattr(pi, "blocks", pi))
    y = poly_adjoint_apply_blocks(p.coeffs, g)
    proj = np.einsum("kri,krj->ij", g.conj(), y)
    r = (y - np.matmul(g, proj))[:-1]
    if r.size == 0:
        return 0.0
    return op_norm(r.reshape(-1, g.shape[2]))

