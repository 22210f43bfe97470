import numpy as np
import pytest
from helpers import crandn, dense_multiplier, random_pencil
from hypothesis import given, settings
from hypothesis import strategies as st

from bclfactor.dilation import build_pi
from bclfactor.errors import DimensionMismatch, FiberMismatch, NotIsometry
from bclfactor.hardy import (
    HardyOperator,
    HardyVector,
    LinearPencil,
    block_toeplitz,
    compress,
    compress_dense,
    eval_pencil,
    eval_pencil_batch,
    inner_check,
    pencil_adjoint_apply,
    pencil_apply,
    poly_apply_blocks,
    poly_product,
)

seeds = st.integers(0, 2**32 - 1)

FIX1_PHI = LinearPencil(np.array([[0, 0], [0.6, 0.8]]), np.array([[0.8, -0.6], [0, 0]]))


def test_pencil_validates_shapes():
    with pytest.raises(DimensionMismatch):
        LinearPencil(np.eye(2), np.eye(3))


class TestApply:
    def test_shift(self):
        f = HardyVector(np.arange(1, 6, dtype=float).reshape(5, 1))
        out, leak = pencil_apply(LinearPencil.shift(1), f)
        assert np.allclose(out.coefficients[:, 0], [0, 1, 2, 3, 4])
        assert leak == pytest.approx(5.0)

    def test_identity(self):
        f = HardyVector(crandn(np.random.default_rng(0), 7, 3))
        out, leak = pencil_apply(LinearPencil.identity(3), f)
        assert np.array_equal(out.coefficients, f.coefficients) and leak == 0

    def test_scalar_geometric(self):
        n = 12
        eta = 0.25 ** np.arange(n + 1)
        out, leak = pencil_apply(LinearPencil(np.array([[0.4]]), np.array([[0.4]])),
                                 HardyVector(eta[:, None]))
        # truncated product of (2 + 2z)/5 with the geometric series
        expected = np.convolve([0.4, 0.4], eta)
        assert np.allclose(out.coefficients[:, 0], expected[:n + 1], atol=1e-15)
        assert leak == pytest.approx(abs(expected[n + 1]))
        assert out.coefficients[1, 0] == pytest.approx(0.4 * 0.25 + 0.4)

    def test_fiber_mismatch(self):
        with pytest.raises(FiberMismatch):
            pencil_apply(LinearPencil.shift(2), HardyVector(np.zeros((3, 1))))

    @given(seeds, st.integers(1, 4), st.integers(0, 12))
    @settings(max_examples=60, deadline=None)
    def test_banded_matches_dense(self, seed, r, n):
        rng = np.random.default_rng(seed)
        p = random_pencil(rng, r)
        f = crandn(rng, n + 1, r)
        out, _ = pencil_apply(p, HardyVector(f))
        dense = dense_multiplier(p.coeffs, n) @ f.reshape(-1)
        assert np.max(np.abs(out.coefficients.reshape(-1) - dense)) <= 1e-12 * max(1, np.abs(dense).max())

    def test_package_toeplitz_matches_reference(self):
        rng = np.random.default_rng(5)
        coeffs = [crandn(rng, 3, 3) for _ in range(3)]
        assert np.array_equal(block_toeplitz(coeffs, 6), dense_multiplier(coeffs, 6))

    def test_leakage_is_dropped_coefficient(self):
        rng = np.random.default_rng(9)
        p = random_pencil(rng, 2)
        f = crandn(rng, 5, 2)
        _, leak = pencil_apply(p, HardyVector(f))
        assert leak == pytest.approx(np.linalg.norm(p.c1 @ f[-1]))


class TestAdjoint:
    def test_shift_is_left_shift(self):
        f = HardyVector(np.arange(1, 6, dtype=float).reshape(5, 1))
        out = pencil_adjoint_apply(LinearPencil.shift(1), f)
        assert np.allclose(out.coefficients[:, 0], [2, 3, 4, 5, 0])

    def test_identity(self):
        f = HardyVector(crandn(np.random.default_rng(1), 4, 2))
        assert np.array_equal(pencil_adjoint_apply(LinearPencil.identity(2), f).coefficients,
                              f.coefficients)

    @given(seeds, st.integers(1, 4), st.integers(0, 10))
    @settings(max_examples=60, deadline=None)
    def test_inner_product_consistency(self, seed, r, n):
        rng = np.random.default_rng(seed)
        p = random_pencil(rng, r)
        f = HardyVector(crandn(rng, n + 1, r))
        g = HardyVector(crandn(rng, n + 1, r))
        pf, _ = pencil_apply(p, f)
        lhs = pf.inner(g)
        rhs = f.inner(pencil_adjoint_apply(p, g))
        assert abs(lhs - rhs) <= 1e-11 * (1 + abs(lhs))
        # same as the conjugate transpose of the dense matrix
        dense = dense_multiplier(p.coeffs, n).conj().T @ g.coefficients.reshape(-1)
        assert np.allclose(pencil_adjoint_apply(p, g).coefficients.reshape(-1), dense, atol=1e-12)

    def test_operator_kinds_agree(self):
        rng = np.random.default_rng(2)
        p = random_pencil(rng, 2)
        blocks = crandn(rng, 6, 2, 3)
        banded = HardyOperator.from_pencil(p, 5)
        dense = HardyOperator.dense(banded.to_dense(), 2, 5)
        assert np.allclose(banded.apply(blocks), dense.apply(blocks), atol=1e-13)
        assert np.allclose(banded.adjoint_apply(blocks), dense.adjoint_apply(blocks), atol=1e-13)
        assert HardyOperator.shift(2, 5).pencil.c1.tolist() == np.eye(2).tolist()


class TestEval:
    def test_shift(self):
        assert np.allclose(eval_pencil(LinearPencil.shift(3), 0.3j), 0.3j * np.eye(3))

    def test_fix1_phi_at_one(self):
        assert np.allclose(FIX1_PHI(1.0), [[0.8, -0.6], [0.6, 0.8]], atol=1e-15)

    def test_at_zero(self):
        p = random_pencil(np.random.default_rng(3), 3)
        assert np.array_equal(eval_pencil(p, 0), p.c0)

    def test_batch(self):
        p = random_pencil(np.random.default_rng(4), 2)
        zs = np.array([0.1, 1j, -0.5])
        batch = eval_pencil_batch(p, zs)
        for z, m in zip(zs, batch):
            assert np.allclose(m, p(z))

    def test_poly_product(self):
        rng = np.random.default_rng(6)
        a, b = random_pencil(rng, 2), random_pencil(rng, 2)
        prod = poly_product(a.coeffs, b.coeffs)
        z = 0.3 - 0.2j
        assert np.allclose(prod[0] + z * prod[1] + z * z * prod[2], a(z) @ b(z))


class TestCompress:
    def test_full_embedding_identity(self):
        g = np.eye(6).reshape(3, 2, 6)
        assert np.allclose(compress(g, LinearPencil.identity(2)), np.eye(6))

    def test_fix1_phi(self):
        pi = build_pi(np.array([[0.25]]), 40)
        assert compress(pi, LinearPencil(np.array([[0.4]]), np.array([[0.4]])))[0, 0] == \
            pytest.approx(0.5, abs=1e-10)

    def test_fix1_shift(self):
        pi = build_pi(np.array([[0.25]]), 40)
        assert compress(pi, LinearPencil.shift(1))[0, 0] == pytest.approx(0.25, abs=1e-10)

    def test_rejects_non_isometry(self):
        with pytest.raises(NotIsometry):
            compress(2 * np.eye(2).reshape(1, 2, 2), LinearPencil.identity(2))

    def test_banded_equals_dense_for_products(self):
        rng = np.random.default_rng(8)
        q, _ = np.linalg.qr(crandn(rng, 12, 3))
        g = q.reshape(4, 3, 3)
        a, b = random_pencil(rng, 3), random_pencil(rng, 3)
        prod = poly_product(a.coeffs, b.coeffs)
        assert np.allclose(compress(g, prod), compress_dense(g, prod), atol=1e-12)

    def test_banded_products_are_exact_under_truncation(self):
        # compress of a product equals the product of truncated multipliers
        rng = np.random.default_rng(10)
        q, _ = np.linalg.qr(crandn(rng, 10, 2))
        g = q.reshape(5, 2, 2)
        a, b = random_pencil(rng, 2), random_pencil(rng, 2)
        ma, mb = dense_multiplier(a.coeffs, 4), dense_multiplier(b.coeffs, 4)
        flat = g.reshape(-1, 2)
        direct = flat.conj().T @ ma @ mb @ flat
        assert np.allclose(compress(g, poly_product(a.coeffs, b.coeffs)), direct, atol=1e-12)


class TestInner:
    def test_shift(self):
        rep = inner_check(LinearPencil.shift(2))
        assert rep.inner and rep.residual <= 1e-15

    def test_constant_half(self):
        rep = inner_check(LinearPencil.constant(np.eye(2) / 2))
        assert not rep.inner
        assert rep.residual == pytest.approx(0.75)

    def test_fix1_phi(self):
        rep = inner_check(FIX1_PHI, 256)
        assert rep.inner and rep.residual <= 1e-12

    def test_poly_apply_spill_shape(self):
        out, spill = poly_apply_blocks([np.eye(2)] * 3, np.ones((4, 2)))
        assert out.shape == (4, 2, 1) and spill.shape == (2, 2, 1)
