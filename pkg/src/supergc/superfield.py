"""Superfields on R^(1,1|2) evaluated as jets at a base point.

A superfield is a Grassmann element whose coefficients are jets in
``(x+, x-)``; the odd coordinates ``th+``, ``th-`` are the last two
generators of the algebra.  Binary operations between superfields of
different jet order truncate to the smaller order, since differentiation
costs one order each time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import grassmann as gr
from .errors import BaseMismatch, OrderExhausted, ParityError
from .grassmann import GrassmannAlgebra, GrassmannElement
from .jets import BasePoint, Jet, JetRing

EVEN, ODD = "even", "odd"


class SuperContext:
    """Factory for superfields sharing ``n_xi``, jet order and base point."""

    def __init__(self, n_xi: int = 8, order: int = 4, base: BasePoint | tuple = (0, 0)):
        if not isinstance(base, BasePoint):
            base = BasePoint(*base)
        self.n_xi = n_xi
        self.order = order
        self.base = base
        self.alg = GrassmannAlgebra(n_xi, JetRing(order, base))

    @property
    def tp(self) -> int:
        return self.alg.theta_plus_id

    @property
    def tm(self) -> int:
        return self.alg.theta_minus_id

    def zero(self) -> "Superfield":
        return Superfield(self.alg.zero(), EVEN)

    def const(self, c) -> "Superfield":
        """Scalar or scalar-coefficient Grassmann element as a constant field."""
        if isinstance(c, GrassmannElement):
            return self.lift(c)
        return Superfield(self.alg.scalar(c), EVEN)

    def lift(self, g: GrassmannElement) -> "Superfield":
        if g.alg.n_xi != self.n_xi:
            raise ParityError("lifted element uses a different generator count")
        ring = self.alg.ring
        val = GrassmannElement.build(self.alg, {m: ring.coerce(c) for m, c in g.terms.items()})
        return Superfield(val, _actual_parity(val))

    def jet(self, j: Jet) -> "Superfield":
        if j.base != self.base:
            raise BaseMismatch(f"{j.base} vs {self.base}")
        if j.order > self.order:
            j = j.truncate(self.order)
        alg = self.alg if j.order == self.order else _alg_at(self.alg, j.order)
        return Superfield(GrassmannElement.build(alg, {0: j.coeffs}), EVEN)

    def xp(self) -> "Superfield":
        return self.jet(Jet.coordinate("plus", self.order, self.base))

    def xm(self) -> "Superfield":
        return self.jet(Jet.coordinate("minus", self.order, self.base))

    def thp(self) -> "Superfield":
        return Superfield(self.alg.theta_plus(), ODD)

    def thm(self) -> "Superfield":
        return Superfield(self.alg.theta_minus(), ODD)

    def xi(self, i: int) -> "Superfield":
        return Superfield(self.alg.xi(i), ODD)

    def scalar_algebra(self) -> GrassmannAlgebra:
        return GrassmannAlgebra(self.n_xi)


def _alg_at(alg: GrassmannAlgebra, order: int) -> GrassmannAlgebra:
    if order < 0:
        raise OrderExhausted("jet order exhausted")
    return alg.with_ring(JetRing(order, alg.ring.base))


def _actual_parity(val: GrassmannElement) -> str:
    p = gr.parity(val)
    if p == "mixed":
        raise ParityError(f"mixed-parity value {val}")
    return p


def _truncate(val: GrassmannElement, order: int) -> GrassmannElement:
    ring = val.alg.ring
    if ring.order == order:
        return val
    alg = _alg_at(val.alg, order)
    return GrassmannElement.build(alg, {m: ring.truncate(c, order) for m, c in val.terms.items()})


class Superfield:
    """Grassmann element over jets with a declared parity."""

    __slots__ = ("value", "parity")

    def __init__(self, value: GrassmannElement, parity: str):
        if parity not in (EVEN, ODD):
            raise ParityError(f"parity must be even or odd, not {parity!r}")
        if not isinstance(value.alg.ring, JetRing):
            raise TypeError("superfield values need a jet coefficient ring")
        actual = gr.parity(value)
        if not value.is_zero() and actual != parity:
            raise ParityError(f"declared {parity} but value is {actual}")
        self.value = value
        self.parity = parity

    # -- metadata ----------------------------------------------------------
    @property
    def alg(self) -> GrassmannAlgebra:
        return self.value.alg

    @property
    def order(self) -> int:
        return self.alg.ring.order

    @property
    def base(self) -> BasePoint:
        return self.alg.ring.base

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def max_abs(self) -> float:
        return self.value.max_norm()

    def worst_term(self):
        """``(monomial name, jet index (j, k), |coefficient|)`` of the largest entry."""
        best = (None, None, 0.0)
        from .jets import layout

        pairs = layout(self.order).pairs
        for m, c in self.value.terms.items():
            i = int(np.argmax(np.abs(c)))
            if abs(c[i]) > best[2]:
                best = (self.alg.monomial_name(m), pairs[i], float(abs(c[i])))
        return best

    def truncate(self, order: int) -> "Superfield":
        return Superfield(_truncate(self.value, order), self.parity)

    def body_jet(self) -> Jet:
        return Jet(self.value.body(), self.order, self.base)

    def coefficient_jet(self, generators=()) -> Jet:
        return Jet(self.value.coefficient(generators), self.order, self.base)

    def flip(self) -> str:
        return ODD if self.parity == EVEN else EVEN

    # -- arithmetic ----------------------------------------------------------
    def _pair(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.value, self.value.alg.scalar(other), EVEN
        if isinstance(other, GrassmannElement) and not isinstance(other.alg.ring, JetRing):
            other = SuperContext(self.alg.n_xi, self.order, self.base).lift(other)
        if not isinstance(other, Superfield):
            return None
        if other.base != self.base:
            raise BaseMismatch(f"{self.base} vs {other.base}")
        d = min(self.order, other.order)
        return _truncate(self.value, d), _truncate(other.value, d), other.parity

    def _sum_parity(self, other_val, other_parity, result):
        if result.is_zero():
            return EVEN
        if self.value.is_zero():
            return other_parity
        if other_val.is_zero():
            return self.parity
        if other_parity != self.parity:
            raise ParityError("adding superfields of different parity")
        return self.parity

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b, bp = p
        out = a + b
        return Superfield(out, self._sum_parity(b, bp, out))

    __radd__ = __add__

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b, bp = p
        out = a - b
        return Superfield(out, self._sum_parity(b, bp, out))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Superfield(-self.value, self.parity)

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b, bp = p
        par = EVEN if self.parity == bp else ODD
        return Superfield(gr.mul(a, b), par)

    def __rmul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        a, b, bp = p
        par = EVEN if self.parity == bp else ODD
        return Superfield(gr.mul(b, a), par)

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return Superfield(self.value.scale(1 / other), self.parity)
        return self * inverse(other)

    def __rtruediv__(self, other):
        return inverse(self) * other

    def __pow__(self, n):
        if isinstance(n, int) and n >= 0:
            out = Superfield(self.alg.one(), EVEN)
            for _ in range(n):
                out = out * self
            return out
        return power(self, n)

    def __repr__(self):
        return f"Superfield({self.parity}, order={self.order}, {self.value})"


# -- elementary functions ----------------------------------------------------
def _require_even(a: Superfield, what: str):
    if a.parity != EVEN:
        raise ParityError(f"{what} of an odd superfield")


def exp(a: Superfield) -> Superfield:
    _require_even(a, "exp")
    return Superfield(gr.grassmann_exp(a.value), EVEN)


def log(a: Superfield) -> Superfield:
    _require_even(a, "log")
    return Superfield(gr.grassmann_log(a.value), EVEN)


def power(a: Superfield, r: float) -> Superfield:
    _require_even(a, "pow")
    return Superfield(gr.grassmann_pow(a.value, r), EVEN)


def inverse(a: Superfield) -> Superfield:
    _require_even(a, "inverse")
    return Superfield(gr.invert(a.value), EVEN)


# -- theta components --------------------------------------------------------
def components(A: Superfield):
    """``(a0, a1, a2, a3)`` with ``A = a0 + th+ a1 + th- a2 + th+ th- a3``.

    The components are theta-free superfields; a1, a2 have the opposite parity
    to ``A``.
    """
    alg = A.alg
    tp_bit = 1 << (alg.theta_plus_id - 1)
    tm_bit = 1 << (alg.theta_minus_id - 1)
    neg = alg.ring.neg
    parts = [{}, {}, {}, {}]
    for m, c in A.value.terms.items():
        rest = m & ~(tp_bit | tm_bit)
        slot = (1 if m & tp_bit else 0) + (2 if m & tm_bit else 0)
        # th-monomials sit right of the xi-part; moving a single theta past
        # it costs (-1)^|rest|, the pair th+ th- commutes freely
        if slot in (1, 2) and rest.bit_count() & 1:
            c = neg(c)
        parts[slot][rest] = c
    flip = A.flip()
    pars = [A.parity, flip, flip, A.parity]
    return tuple(Superfield(GrassmannElement(alg, p), par) for p, par in zip(parts, pars))


def from_components(a0, a1, a2, a3) -> Superfield:
    """Inverse of :func:`components`; parities are checked."""
    fields = [a0, a1, a2, a3]
    alg = next(f.alg for f in fields)
    tmask = alg.theta_mask
    for f in fields:
        if any(m & tmask for m in f.value.terms):
            raise ParityError("components must be theta-free")
    nonzero = [(k, f) for k, f in enumerate(fields) if not f.is_zero()]
    parity = EVEN
    if nonzero:
        k, f = nonzero[0]
        parity = f.parity if k in (0, 3) else f.flip()
        for k, f in nonzero:
            want = parity if k in (0, 3) else (ODD if parity == EVEN else EVEN)
            if f.parity != want:
                raise ParityError(f"component a{k} has parity {f.parity}, expected {want}")
    d = min(f.order for f in fields)
    low = _alg_at(alg, d)
    thetas = [None, low.theta_plus(), low.theta_minus(), low.theta_plus() * low.theta_minus()]
    total = _truncate(fields[0].value, d)
    for k in (1, 2, 3):
        total = total + gr.mul(thetas[k], _truncate(fields[k].value, d))
    return Superfield(total, parity)


# -- covariant derivatives ---------------------------------------------------
def _partial_field(A: Superfield, direction: str) -> GrassmannElement:
    ring = A.alg.ring
    alg = _alg_at(A.alg, A.order - 1)
    return GrassmannElement.build(alg, {m: ring.partial(c, direction) for m, c in A.value.terms.items()})


def partial(A: Superfield, direction: str) -> Superfield:
    """Ordinary ``d/dx+`` or ``d/dx-``; lowers the jet order by one."""
    if A.order < 1:
        raise OrderExhausted("cannot differentiate an order-0 superfield")
    return Superfield(_partial_field(A, direction), A.parity)


def _covariant(A: Superfield, which: str, sign: complex) -> Superfield:
    if A.order < 1:
        raise OrderExhausted("cannot differentiate an order-0 superfield")
    alg = A.alg
    g = alg.theta_plus_id if which == "plus" else alg.theta_minus_id
    low = A.order - 1
    dtheta = _truncate(gr.derive(A.value, g), low)
    dx = _partial_field(A, which)
    theta = dx.alg.gen(g)
    out = dtheta + gr.mul(theta, dx).scale(sign)
    return Superfield(out, A.flip())


def d_plus(A: Superfield) -> Superfield:
    """``D+ = d/dth+ - i th+ d/dx+``."""
    return _covariant(A, "plus", -1j)


def d_minus(A: Superfield) -> Superfield:
    return _covariant(A, "minus", -1j)


def j_plus(A: Superfield) -> Superfield:
    """``J+ = d/dth+ + i th+ d/dx+``."""
    return _covariant(A, "plus", 1j)


def j_minus(A: Superfield) -> Superfield:
    return _covariant(A, "minus", 1j)


D = {"plus": d_plus, "minus": d_minus}


# -- three-vectors -----------------------------------------------------------
@dataclass(frozen=True)
class SuperVector3:
    x: Superfield
    y: Superfield
    z: Superfield

    def __post_init__(self):
        comps = [c for c in (self.x, self.y, self.z) if not c.is_zero()]
        if len({c.parity for c in comps}) > 1:
            raise ParityError("vector components must share parity")
        if len({c.base for c in (self.x, self.y, self.z)}) > 1:
            raise BaseMismatch("vector components at different base points")

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    @property
    def parity(self) -> str:
        for c in self:
            if not c.is_zero():
                return c.parity
        return EVEN

    def map(self, fn) -> "SuperVector3":
        return SuperVector3(*(fn(c) for c in self))

    def scale(self, s) -> "SuperVector3":
        return SuperVector3(*(s * c for c in self))


def super_dot(u: SuperVector3, v: SuperVector3) -> Superfield:
    """``sum_m u_m v_m`` with the ``u`` factors on the left."""
    out = None
    for a, b in zip(u, v):
        if a.base != b.base:
            raise BaseMismatch(f"{a.base} vs {b.base}")
        term = a * b
        out = term if out is None else out + term
    return out
