"""Finite Grassmann algebras over a pluggable coefficient ring.

Generators are numbered ``1..K+2``: ``xi_1 .. xi_K`` followed by ``th+``
(``K+1``) and ``th-`` (``K+2``).  A monomial is stored as a bitmask where bit
``g-1`` marks generator ``g``; the canonical order is ascending index, so
``xi_1 < ... < xi_K < th+ < th-``.

``derive(a, g)`` is the *left* derivative.  Its sign table on the theta
monomials is::

    derive(th+, th+)     = 1       derive(th-, th-)     = 1
    derive(th+ th-, th+) = th-     derive(th+ th-, th-) = -th+

and in general it obeys the graded Leibniz rule
``derive(h k) = derive(h) k + (-1)^|h| h derive(k)``.

Coefficient rings are small objects exposing ``zero/one/coerce/add/sub/mul/
neg/scale/norm`` and, where meaningful, ``exp/reciprocal/pow/log`` of a body
value.  Two are provided here (:data:`SCALARS` and :class:`MatrixRing`); the
jet ring lives in :mod:`supergc.jets`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import (
    BodilessNotInvertible,
    GeneratorRangeError,
    OddExponent,
    RingMismatch,
    SingularBody,
)

MAX_GENERATORS = 32
PRUNE_RTOL = 1e-14


@dataclass(frozen=True)
class ScalarRing:
    """Complex numbers."""

    def zero(self):
        return 0j

    def one(self):
        return 1 + 0j

    def coerce(self, c):
        return complex(c)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def scale(self, a, s):
        return a * s

    def norm(self, a):
        return abs(a)

    def exp(self, a):
        return cmath.exp(a)

    def reciprocal(self, a):
        if a == 0:
            raise SingularBody("reciprocal of zero")
        return 1 / a

    def pow(self, a, r):
        if a == 0:
            raise SingularBody("power of zero body")
        return complex(a) ** r

    def log(self, a):
        if a == 0:
            raise SingularBody("log of zero")
        return cmath.log(a)

    def describe(self, a):
        return _fmt_complex(a)


SCALARS = ScalarRing()


@dataclass(frozen=True)
class MatrixRing:
    """Square complex matrices; non-commutative, used for Grassmann-valued
    matrices in adjoint computations.  Products keep operand order."""

    n: int

    def zero(self):
        return np.zeros((self.n, self.n), dtype=complex)

    def one(self):
        return np.eye(self.n, dtype=complex)

    def coerce(self, c):
        if np.isscalar(c):
            return complex(c) * np.eye(self.n, dtype=complex)
        return np.asarray(c, dtype=complex).reshape(self.n, self.n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a @ b

    def neg(self, a):
        return -a

    def scale(self, a, s):
        return a * s

    def norm(self, a):
        return float(np.max(np.abs(a))) if a.size else 0.0

    def describe(self, a):
        return f"matrix(norm={self.norm(a):.3g})"


def _fmt_complex(c) -> str:
    c = complex(c)
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    return f"({c.real!r}{c.imag:+}i)"


@lru_cache(maxsize=None)
def _merge_sign(ma: int, mb: int) -> int:
    """Sign of sorting the concatenation of canonical monomials ``ma mb``."""
    swaps = 0
    b = mb
    while b:
        low = b & -b
        j = low.bit_length() - 1
        swaps += (ma >> (j + 1)).bit_count()
        b ^= low
    return -1 if swaps & 1 else 1


def _popcount(m: int) -> int:
    return m.bit_count()


@dataclass(frozen=True)
class GrassmannAlgebra:
    """Algebra with ``n_xi`` ordinary generators plus ``th+``, ``th-``."""

    n_xi: int = 8
    ring: Any = SCALARS

    def __post_init__(self):
        if self.n_xi < 0 or self.n_xi + 2 > MAX_GENERATORS:
            raise GeneratorRangeError(
                f"n_xi={self.n_xi} outside 0..{MAX_GENERATORS - 2}"
            )

    @property
    def n_gen(self) -> int:
        return self.n_xi + 2

    @property
    def theta_plus_id(self) -> int:
        return self.n_xi + 1

    @property
    def theta_minus_id(self) -> int:
        return self.n_xi + 2

    @property
    def theta_mask(self) -> int:
        return 0b11 << self.n_xi

    def with_ring(self, ring) -> "GrassmannAlgebra":
        return GrassmannAlgebra(self.n_xi, ring)

    def check_gen(self, g: int) -> int:
        if not isinstance(g, (int, np.integer)) or not 1 <= g <= self.n_gen:
            raise GeneratorRangeError(f"generator {g} outside 1..{self.n_gen}")
        return int(g)

    def zero(self) -> "GrassmannElement":
        return GrassmannElement(self, {})

    def one(self) -> "GrassmannElement":
        return GrassmannElement(self, {0: self.ring.one()})

    def scalar(self, c) -> "GrassmannElement":
        return GrassmannElement.build(self, {0: self.ring.coerce(c)})

    def gen(self, g: int, coeff=1) -> "GrassmannElement":
        g = self.check_gen(g)
        return GrassmannElement.build(self, {1 << (g - 1): self.ring.coerce(coeff)})

    def xi(self, i: int, coeff=1) -> "GrassmannElement":
        if not 1 <= i <= self.n_xi:
            raise GeneratorRangeError(f"xi{i} outside 1..{self.n_xi}")
        return self.gen(i, coeff)

    def theta_plus(self, coeff=1) -> "GrassmannElement":
        return self.gen(self.theta_plus_id, coeff)

    def theta_minus(self, coeff=1) -> "GrassmannElement":
        return self.gen(self.theta_minus_id, coeff)

    def monomial_name(self, mask: int) -> str:
        if mask == 0:
            return "1"
        names = []
        for g in range(1, self.n_gen + 1):
            if mask >> (g - 1) & 1:
                if g == self.theta_plus_id:
                    names.append("th+")
                elif g == self.theta_minus_id:
                    names.append("th-")
                else:
                    names.append(f"xi{g}")
        return "^".join(names)


class GrassmannElement:
    """Sparse sum of canonical monomials with ring coefficients.

    Instances are immutable by convention; every operation returns a new
    element.  Coefficients below ``1e-14`` times the largest coefficient are
    dropped.
    """

    __slots__ = ("alg", "terms")

    def __init__(self, alg: GrassmannAlgebra, terms: dict | None = None):
        self.alg = alg
        self.terms = terms if terms is not None else {}

    @classmethod
    def build(cls, alg: GrassmannAlgebra, terms: dict) -> "GrassmannElement":
        return cls(alg, _prune(alg.ring, terms))

    # -- inspection -------------------------------------------------------
    @property
    def ring(self):
        return self.alg.ring

    def is_zero(self) -> bool:
        return not self.terms

    def max_norm(self) -> float:
        norm = self.alg.ring.norm
        return max((norm(c) for c in self.terms.values()), default=0.0)

    def body(self):
        return self.terms.get(0, self.alg.ring.zero())

    def soul(self) -> "GrassmannElement":
        return GrassmannElement(self.alg, {m: c for m, c in self.terms.items() if m})

    def coefficient(self, generators: Sequence[int] = ()):
        """Coefficient of the monomial with the given generator ids (any
        order; the sign of the reordering is applied)."""
        mask, sign = _canonical_mask(self.alg, generators)
        if mask is None:
            return self.alg.ring.zero()
        c = self.terms.get(mask)
        if c is None:
            return self.alg.ring.zero()
        return c if sign > 0 else self.alg.ring.neg(c)

    def parity(self) -> str:
        return parity(self)

    def map_coefficients(self, fn, alg: GrassmannAlgebra | None = None):
        alg = alg or self.alg
        return GrassmannElement.build(alg, {m: fn(c) for m, c in self.terms.items()})

    def __repr__(self) -> str:
        return f"GrassmannElement({format_element(self)})"

    def __str__(self) -> str:
        return format_element(self)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            if other.alg != self.alg:
                raise RingMismatch(f"{self.alg} vs {other.alg}")
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return self.alg.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.alg.ring
        out = dict(self.terms)
        for m, c in other.terms.items():
            prev = out.get(m)
            out[m] = c if prev is None else ring.add(prev, c)
        return GrassmannElement.build(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.alg.ring.neg
        return GrassmannElement(self.alg, {m: neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(other, self)

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(1 / other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, invert(other))

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = self.alg.one()
        for _ in range(n):
            out = out * self
        return out

    def scale(self, s) -> "GrassmannElement":
        scale = self.alg.ring.scale
        return GrassmannElement.build(
            self.alg, {m: scale(c, s) for m, c in self.terms.items()}
        )

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return (self - other).max_norm() <= tol


def _prune(ring, terms: dict) -> dict:
    if not terms:
        return terms
    keys = list(terms)
    batched = getattr(ring, "norms", None)  # one numpy call for array-valued rings
    if batched is not None:
        norms = batched([terms[m] for m in keys]).tolist()
    else:
        norms = [ring.norm(terms[m]) for m in keys]
    top = max(norms)
    if top == 0:
        return {}
    cut = PRUNE_RTOL * top
    return {m: terms[m] for m, n in zip(keys, norms) if n > cut}


def _canonical_mask(alg: GrassmannAlgebra, generators: Iterable[int]):
    seq = [alg.check_gen(g) for g in generators]
    if len(set(seq)) != len(seq):
        return None, 0
    inversions = sum(
        1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j]
    )
    mask = 0
    for g in seq:
        mask |= 1 << (g - 1)
    return mask, (-1 if inversions & 1 else 1)


def canonicalize(alg: GrassmannAlgebra, raw) -> GrassmannElement:
    """Build an element from ``(generator sequence, coefficient)`` pairs.

    Each sequence is sorted with the sign of the permutation; sequences with a
    repeated generator vanish; like terms are merged.
    """
    ring = alg.ring
    out: dict = {}
    for gens, coeff in raw:
        mask, sign = _canonical_mask(alg, gens)
        if mask is None:
            continue
        c = ring.coerce(coeff)
        if sign < 0:
            c = ring.neg(c)
        prev = out.get(mask)
        out[mask] = c if prev is None else ring.add(prev, c)
    return GrassmannElement.build(alg, out)


def mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    if a.alg != b.alg:
        raise RingMismatch(f"{a.alg} vs {b.alg}")
    ring = a.alg.ring
    rmul, radd, rneg = ring.mul, ring.add, ring.neg
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            if ma & mb:
                continue
            c = rmul(ca, cb)
            if _merge_sign(ma, mb) < 0:
                c = rneg(c)
            m = ma | mb
            prev = out.get(m)
            out[m] = c if prev is None else radd(prev, c)
    return GrassmannElement.build(a.alg, out)


def parity(a: GrassmannElement) -> str:
    """``"even"``, ``"odd"`` or ``"mixed"``; zero counts as even."""
    seen = {_popcount(m) & 1 for m in a.terms}
    if seen == {1}:
        return "odd"
    if len(seen) == 2:
        return "mixed"
    return "even"


def even_part(a: GrassmannElement) -> GrassmannElement:
    return GrassmannElement(a.alg, {m: c for m, c in a.terms.items() if not _popcount(m) & 1})


def odd_part(a: GrassmannElement) -> GrassmannElement:
    return GrassmannElement(a.alg, {m: c for m, c in a.terms.items() if _popcount(m) & 1})


def body_soul(a: GrassmannElement):
    return a.body(), a.soul()


def _nilpotent_series(soul: GrassmannElement, coeffs) -> GrassmannElement:
    """``sum_k coeffs[k] * soul**k`` for k up to the nilpotency bound."""
    alg = soul.alg
    out = alg.one().scale(coeffs(0)) if coeffs(0) != 1 else alg.one()
    power = alg.one()
    for k in range(1, alg.n_gen + 1):
        power = power * soul
        if power.is_zero():
            break
        out = out + power.scale(coeffs(k))
    return out


def invert(a: GrassmannElement) -> GrassmannElement:
    """Two-sided inverse ``body^-1 * sum_k (-soul/body)^k``."""
    ring = a.alg.ring
    body = a.terms.get(0)
    if body is None or ring.norm(body) == 0:
        raise BodilessNotInvertible(f"element {format_element(a)} has no body")
    inv_body = ring.reciprocal(body)
    soul = a.soul()
    if soul.is_zero():
        return GrassmannElement(a.alg, {0: inv_body})
    x = _ring_times(-soul, inv_body)
    series = _nilpotent_series(x, lambda k: 1)
    return _ring_times(series, inv_body)


def _ring_times(a: GrassmannElement, c) -> GrassmannElement:
    """Multiply every coefficient by a ring value ``c`` (commutative rings)."""
    rmul = a.alg.ring.mul
    return GrassmannElement.build(a.alg, {m: rmul(v, c) for m, v in a.terms.items()})


def _require_even(a: GrassmannElement, what: str):
    p = parity(a)
    if p != "even":
        raise OddExponent(f"{what} of a {p} element")


def grassmann_exp(a: GrassmannElement) -> GrassmannElement:
    """``exp(body) * sum_k soul^k / k!`` for even ``a``."""
    _require_even(a, "exp")
    ring = a.alg.ring
    eb = ring.exp(a.body())
    series = _nilpotent_series(a.soul(), lambda k: 1 / math.factorial(k))
    return _ring_times(series, eb)


def grassmann_log(a: GrassmannElement) -> GrassmannElement:
    """Principal logarithm of an even element with invertible body."""
    _require_even(a, "log")
    ring = a.alg.ring
    body = a.terms.get(0)
    if body is None or ring.norm(body) == 0:
        raise BodilessNotInvertible("log of a bodiless element")
    x = _ring_times(a.soul(), ring.reciprocal(body))
    series = _nilpotent_series(x, lambda k: 0 if k == 0 else (-1) ** (k + 1) / k)
    return series + GrassmannElement(a.alg, {0: ring.log(body)})


def grassmann_pow(a: GrassmannElement, r: float) -> GrassmannElement:
    """``a**r`` for even ``a`` with invertible body (principal branch)."""
    _require_even(a, "pow")
    ring = a.alg.ring
    body = a.terms.get(0)
    if body is None or ring.norm(body) == 0:
        raise BodilessNotInvertible("power of a bodiless element")
    x = _ring_times(a.soul(), ring.reciprocal(body))
    series = _nilpotent_series(x, lambda k: _binom(r, k))
    return _ring_times(series, ring.pow(body, r))


def _binom(r: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= (r - j) / (j + 1)
    return out


def derive(a: GrassmannElement, g: int) -> GrassmannElement:
    """Left derivative with respect to generator ``g``."""
    g = a.alg.check_gen(g)
    bit = 1 << (g - 1)
    below = bit - 1
    neg = a.alg.ring.neg
    out = {}
    for m, c in a.terms.items():
        if m & bit:
            out[m ^ bit] = neg(c) if _popcount(m & below) & 1 else c
    return GrassmannElement(a.alg, out)


def format_element(a: GrassmannElement) -> str:
    """Text form ``c * xi1^xi3^th+ + ...``; coefficients via ``ring.describe``."""
    if not a.terms:
        return "0"
    describe = getattr(a.alg.ring, "describe", str)
    parts = []
    for m in sorted(a.terms, key=lambda m: (_popcount(m), m)):
        name = a.alg.monomial_name(m)
        c = describe(a.terms[m])
        parts.append(c if m == 0 else f"{c} * {name}")
    return " + ".join(parts)
