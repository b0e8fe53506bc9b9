import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from supergc import GrassmannAlgebra, MatrixRing
from supergc.errors import BodilessNotInvertible, GeneratorRangeError, OddExponent, RingMismatch
from supergc.grassmann import (
    canonicalize,
    derive,
    grassmann_exp,
    grassmann_log,
    grassmann_pow,
    invert,
    parity,
)

from conftest import random_scalar_element


def jordan_wigner(n):
    """Creation operators on n modes: nilpotent, pairwise anticommuting."""
    a = np.array([[0, 0], [1, 0]], dtype=complex)
    z = np.diag([1, -1]).astype(complex)
    eye = np.eye(2, dtype=complex)
    ops = []
    for k in range(n):
        m = np.array([[1]], dtype=complex)
        for j in range(n):
            m = np.kron(m, z if j < k else (a if j == k else eye))
        ops.append(m)
    return ops


def as_matrix(x, ops):
    dim = ops[0].shape[0]
    out = np.zeros((dim, dim), dtype=complex)
    for mask, c in x.terms.items():
        m = np.eye(dim, dtype=complex)
        for b in range(len(ops)):
            if mask >> b & 1:
                m = m @ ops[b]
        out += c * m
    return out


def test_generator_sign_rules(alg4):
    x1, x2 = alg4.xi(1), alg4.xi(2)
    assert (x1 * x2 + x2 * x1).is_zero()
    assert (x1 * x1).is_zero()
    tp, tm = alg4.theta_plus(), alg4.theta_minus()
    assert (tp * tm).coefficient([alg4.theta_minus_id, alg4.theta_plus_id]) == -1


def test_canonicalize_sorts_with_sign(alg4):
    e = canonicalize(alg4, [((3, 1, 2), 1.0)])
    # xi3 xi1 xi2 = + xi1 xi2 xi3 (two transpositions)
    assert e.coefficient([1, 2, 3]) == 1
    assert canonicalize(alg4, [((1, 1), 2.0)]).is_zero()


def test_generator_range(alg4):
    with pytest.raises(GeneratorRangeError):
        alg4.xi(5)


def test_product_matches_matrix_representation(alg4, rng):
    ops = jordan_wigner(alg4.n_gen)
    for _ in range(20):
        a = random_scalar_element(alg4, rng)
        b = random_scalar_element(alg4, rng)
        np.testing.assert_allclose(as_matrix(a * b, ops), as_matrix(a, ops) @ as_matrix(b, ops), atol=1e-12)


def test_bodiless_not_invertible(alg4):
    with pytest.raises(BodilessNotInvertible):
        invert(alg4.xi(1) * alg4.xi(2))


def test_odd_exp_rejected(alg4):
    with pytest.raises(OddExponent):
        grassmann_exp(alg4.xi(1))


def test_exp_of_nilpotent_pair(alg4):
    n = alg4.xi(1) * alg4.xi(2)
    assert grassmann_exp(n).isclose(alg4.one() + n)


def test_log_exp_and_pow(alg4, rng):
    a = random_scalar_element(alg4, rng, parity="even") + 3
    assert grassmann_exp(grassmann_log(a)).isclose(a, 1e-11)
    r = grassmann_pow(a, 0.5)
    assert (r * r).isclose(a, 1e-11)


def test_mixed_algebras_rejected(alg4):
    with pytest.raises(RingMismatch):
        alg4.xi(1) * GrassmannAlgebra(3).xi(1)


def test_matrix_ring_keeps_order():
    ring = MatrixRing(2)
    alg = GrassmannAlgebra(2, ring)
    A = np.array([[0, 1], [0, 0]], dtype=complex)
    B = np.array([[0, 0], [1, 0]], dtype=complex)
    x = alg.xi(1, A) * alg.xi(2, B)
    np.testing.assert_allclose(x.coefficient([1, 2]), A @ B)


def test_derive_is_left_derivative(alg4):
    x1, x2 = alg4.xi(1), alg4.xi(2)
    assert derive(x1 * x2, 2).isclose(-x1)
    assert derive(x1 * x2, 1).isclose(x2)


@st.composite
def elements(draw, parity_=None):
    seed = draw(st.integers(0, 2**31))
    return random_scalar_element(GrassmannAlgebra(3), np.random.default_rng(seed), 0.4, parity_)


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_associative(a, b, c):
    assert ((a * b) * c).isclose(a * (b * c), 1e-10)


@settings(max_examples=60, deadline=None)
@given(elements("odd"), elements("odd"), elements("even"))
def test_graded_commutativity(a, b, c):
    assert (a * b).isclose(-(b * a), 1e-10)
    assert (a * c).isclose(c * a, 1e-10)
    assert (a * b).is_zero() or parity(a * b) == "even"


@settings(max_examples=60, deadline=None)
@given(elements("odd"), elements(), st.integers(1, 5))
def test_derive_leibniz(a, b, g):
    # graded Leibniz for a left derivative with odd a
    lhs = derive(a * b, g)
    rhs = derive(a, g) * b - a * derive(b, g)
    assert lhs.isclose(rhs, 1e-10)
