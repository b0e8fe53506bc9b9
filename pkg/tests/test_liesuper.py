import itertools

import numpy as np
import pytest
from scipy.linalg import expm

from supergc import AlgebraElement, GrassmannAlgebra, adjoint_exp, bracket, super_jacobi_residual, susy_algebra, verify_conjugacy
from supergc.liesuper import StructureConstants, adjoint_exp_series, basis_element, classical_algebra

SC = susy_algebra()
ALG = GrassmannAlgebra(4)


def elem(d):
    return AlgebraElement.from_dict(SC, ALG, d)


def test_table_entries():
    K1, Pp, K0 = (basis_element(SC, ALG, n) for n in ("K1", "P+", "K0"))
    assert bracket(K1, Pp, SC).isclose(elem({"P+": 2}))
    # odd generators need odd coefficients: [xi1 J+, xi2 J+] = -xi1 xi2 {J+, J+} = -2i xi1 xi2 P+
    got = bracket(elem({"J+": ALG.xi(1)}), elem({"J+": ALG.xi(2)}), SC)
    assert got.isclose(elem({"P+": ALG.xi(1) * ALG.xi(2) * -2j}))
    for n, par in zip(SC.basis.names, SC.basis.parities):
        Y = basis_element(SC, ALG, n) if par == "even" else elem({n: ALG.xi(1)})
        assert bracket(K0, Y, SC).max_norm() == 0


def test_graded_symmetry_and_jacobi():
    assert SC.graded_symmetry_residual() == 0
    assert super_jacobi_residual(SC) == 0
    assert super_jacobi_residual(classical_algebra()) == 0


def test_tampered_table_breaks_jacobi():
    c = SC.c.copy()
    c[0, 1, 1], c[1, 0, 1] = 3, -3
    assert super_jacobi_residual(StructureConstants(SC.basis, c)) > 0


def brute_jacobi(sc):
    n = sc.n
    g = [sc.basis.grade(i) for i in range(n)]

    def br(u, v):
        out = np.zeros(n, dtype=complex)
        for i, j in itertools.product(range(n), repeat=2):
            out += u[i] * v[j] * sc.c[i, j]
        return out

    worst = 0.0
    e = np.eye(n)
    for a, b, c in itertools.product(range(n), repeat=3):
        t = ((-1) ** (g[a] * g[c])) * br(e[a], br(e[b], e[c]))
        t += ((-1) ** (g[b] * g[a])) * br(e[b], br(e[c], e[a]))
        t += ((-1) ** (g[c] * g[b])) * br(e[c], br(e[a], e[b]))
        worst = max(worst, np.max(np.abs(t)))
    return worst


def test_jacobi_matches_brute_force():
    assert brute_jacobi(SC) == super_jacobi_residual(SC) == 0


def test_json_roundtrip():
    again = StructureConstants.from_json(SC.to_json())
    assert np.array_equal(again.c, SC.c) and again.basis == SC.basis


def bosonic_oracle(x: dict, y: dict):
    """Even-only coordinates: row vector times scipy's expm of ad'."""
    n = SC.n
    M = np.zeros((n, n), dtype=complex)
    X = np.array([x.get(nm, 0) for nm in SC.basis.names], dtype=complex)
    for j in range(n):
        M[j] = np.einsum("i,ik->k", X, SC.c[j])  # [e_j, X]
    Y = np.array([y.get(nm, 0) for nm in SC.basis.names], dtype=complex)
    return Y @ expm(M)


def test_adjoint_against_scipy_expm(rng):
    even = ["K1", "P+", "K2", "P-", "K0", "C0"]
    for _ in range(10):
        x = {n: rng.normal() for n in even}
        y = {n: rng.normal() for n in even}
        got = adjoint_exp(elem(x), elem(y), SC)
        want = bosonic_oracle(x, y)
        np.testing.assert_allclose([complex(c.body()) for c in got.coords], want, rtol=1e-10, atol=1e-12)


def test_adjoint_zero_and_inverse(rng):
    Y = elem({"K2": 1, "P+": 0.3, "J-": ALG.xi(2)})
    assert adjoint_exp(AlgebraElement.zero(SC, ALG), Y, SC).isclose(Y, 1e-14)
    X = elem({"K1": 0.4, "P+": -0.2, "J+": ALG.xi(1), "K2": 0.3, "J-": ALG.xi(3)})
    back = adjoint_exp(-X, adjoint_exp(X, Y, SC), SC)
    assert back.isclose(Y, 1e-10)


def test_adjoint_matches_series():
    X = elem({"K1": 0.7, "J+": ALG.xi(1), "K2": -0.4, "P-": 0.5, "J-": ALG.xi(2)})
    Y = elem({"P+": 1, "J+": ALG.xi(3), "K2": 2})
    assert adjoint_exp(X, Y, SC).isclose(adjoint_exp_series(X, Y, SC), 1e-12)


def test_adjoint_is_homomorphism():
    X = elem({"K1": 0.3, "J+": ALG.xi(1), "K2": 0.2, "J-": ALG.xi(2), "P+": 0.1})
    Y = elem({"J+": ALG.xi(3), "P+": 0.5})
    Z = elem({"J+": ALG.xi(4), "K1": 1.0})
    lhs = adjoint_exp(X, bracket(Y, Z, SC), SC)
    rhs = bracket(adjoint_exp(X, Y, SC), adjoint_exp(X, Z, SC), SC)
    assert lhs.isclose(rhs, 1e-10)


def test_rescaling_example():
    alpha = 0.5 * np.log(2)
    got = adjoint_exp(elem({"K1": alpha}), elem({"P+": 1, "P-": 1}), SC)
    assert got.isclose(elem({"P+": 0.5, "P-": 1}), 1e-12)


def test_bch2_with_all_six_parameters():
    a, alpha, beta, delta, lam = 3.0, 1.0, 0.8, 0.5, 2.0
    rho, eta = ALG.xi(1), ALG.xi(2)
    X = elem({"K1": alpha, "P+": beta, "J+": eta, "K2": delta, "P-": lam, "J-": rho})
    want = elem({
        "K2": 1,
        "P+": np.exp(-2 * alpha) * a,
        "P-": -(lam / delta) * (np.exp(-2 * delta) - 1),
        "J-": rho * (-(np.exp(-delta) - 1) / delta),
    })
    assert adjoint_exp(X, elem({"K2": 1, "P+": a}), SC).isclose(want, 1e-10)


def test_conjugacy_examples():
    X = elem({"K1": -0.5 * np.log(4) / 2, "K2": 0.5 * np.log(4) / 2})
    assert verify_conjugacy(elem({"P+": 1, "P-": 4}), elem({"P+": 1, "P-": 1}), X, SC).ok
    Y = elem({"P+": 1, "P-": 1})
    assert verify_conjugacy(Y, Y, AlgebraElement.zero(SC, ALG), SC).ok
    for al in np.linspace(-2, 2, 9):
        for de in np.linspace(-2, 2, 9):
            r = verify_conjugacy(Y, elem({"P+": 1, "P-": -1}), elem({"K1": al, "K2": de}), SC)
            assert not r.ok
