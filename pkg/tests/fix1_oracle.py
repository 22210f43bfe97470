"""Exact reference values for the scalar pair T1 = T2 = 1/2.

Computed with sympy from closed forms only; nothing here imports the
package.  Run as a script to print the frozen values used by the tests.
"""

import sympy as sp

half = sp.Rational(1, 2)
z, l1, l2 = sp.symbols("z l1 l2")


def defect_scalar(t):
    return sp.sqrt(1 - t * sp.conjugate(t))


D1 = D2 = defect_scalar(half)            # sqrt(3)/2
T = half * half                          # 1/4
DT = defect_scalar(T)                    # sqrt(15)/4

# (D1 T2* h, D2 h) -> (D1 h, D2 T1* h), both stacks as columns
X = sp.Matrix([D1 * half, D2])
Y = sp.Matrix([D1, D2 * half])

# claimed unitary completion and projection
U = sp.Rational(1, 5) * sp.Matrix([[4, 3], [-3, 4]])
P = sp.diag(0, 1)
Pp = sp.eye(2) - P

# V D_T = Y
V = sp.simplify(Y / DT)

Phi0, Phi1 = P * U.H, Pp * U.H
Psi0, Psi1 = U * Pp, U * P
phi_scalar = sp.expand(sp.simplify((V.H * (Phi0 + z * Phi1) * V)[0, 0]))
psi_scalar = sp.expand(sp.simplify((V.H * (Psi0 + z * Psi1) * V)[0, 0]))

# dilation blocks of T = 1/4: gamma_k = D_T (1/4)^k
k = sp.symbols("k", integer=True, nonnegative=True)
gamma = DT * T ** k
sum_sq = sp.summation(gamma ** 2, (k, 0, sp.oo))
sum_shift = sp.summation(gamma * gamma.subs(k, k + 1), (k, 0, sp.oo))
# compress(Pi, phi) = c0 * sum gamma_k^2 + c1 * sum gamma_{k+1} gamma_k
compress_phi = sp.simplify(phi_scalar.subs(z, 0) * sum_sq + phi_scalar.coeff(z) * sum_shift)


def tail(n):
    """sum_{k > n} gamma_k^2, exact."""
    return sp.simplify(sp.summation(gamma ** 2, (k, n + 1, sp.oo)))


def smallest_degree(tol):
    n = 0
    while tail(n) > tol:
        n += 1
    return n


det1 = sp.factor(sp.expand((Phi0 + l1 * l2 * Phi1 - l1 * sp.eye(2)).det()))
det2 = sp.factor(sp.expand((Psi0 + l1 * l2 * Psi1 - l2 * sp.eye(2)).det()))

FROZEN = {
    "V": [float(x) for x in V],                         # (2, 1)/sqrt(5)
    "U": [[float(x) for x in U.row(i)] for i in range(2)],
    "P": [[float(x) for x in P.row(i)] for i in range(2)],
    "Phi_c0": [[float(x) for x in Phi0.row(i)] for i in range(2)],
    "Phi_c1": [[float(x) for x in Phi1.row(i)] for i in range(2)],
    "phi": (float(phi_scalar.subs(z, 0)), float(phi_scalar.coeff(z))),
    "psi": (float(psi_scalar.subs(z, 0)), float(psi_scalar.coeff(z))),
    "compress_phi": float(compress_phi),
    "compress_shift": float(sum_shift),
    "degree_1e-12": smallest_degree(sp.Rational(1, 10 ** 12)),
}


def checks():
    """Exact identities the frozen values rest on."""
    assert sp.simplify(U.H * U - sp.eye(2)) == sp.zeros(2)
    assert sp.simplify(U * X - Y) == sp.zeros(2, 1)
    assert sp.simplify(X.H * X - Y.H * Y) == sp.zeros(1)
    assert sp.simplify((V.H * V)[0, 0]) == 1
    assert sp.simplify(V - sp.Matrix([2, 1]) / sp.sqrt(5)) == sp.zeros(2, 1)
    assert sp.simplify(phi_scalar - (2 + 2 * z) / 5) == 0
    assert sp.simplify(psi_scalar - (2 + 2 * z) / 5) == 0
    assert sum_sq == 1 and sum_shift == sp.Rational(1, 4)
    assert compress_phi == half
    assert sp.simplify(tail(4) - sp.Rational(1, 16) ** 5) == 0
    assert sp.expand(det1 - l1 * (l1 + l2 - sp.Rational(4, 5) - sp.Rational(4, 5) * l1 * l2)) == 0
    assert det1.subs({l1: half, l2: half}) == 0 and det2.subs({l1: half, l2: half}) == 0
    return True


if __name__ == "__main__":
    checks()
    for key, val in FROZEN.items():
        print(f"{key}: {val}")
