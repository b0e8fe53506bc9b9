"""Truncated bivariate Taylor jets in the even coordinates ``x+``, ``x-``.

A jet of order ``d`` at base point ``(p, m)`` stores ``c[j][k]`` for
``j + k <= d`` where ``c[j][k] = d+^j d-^k f(p, m) / (j! k!)``.  The triangle
is kept flat in a 1-d complex array (see :func:`layout`), which keeps the
per-coefficient cost low when jets are used as a Grassmann coefficient ring.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BaseMismatch, BranchCut, OrderExhausted, SingularBody

DEFAULT_ORDER = 4


@dataclass(frozen=True)
class BasePoint:
    xplus: complex
    xminus: complex

    def __post_init__(self):
        object.__setattr__(self, "xplus", complex(self.xplus))
        object.__setattr__(self, "xminus", complex(self.xminus))
        if not (cmath.isfinite(self.xplus) and cmath.isfinite(self.xminus)):
            raise ValueError("base point must be finite")

    def as_list(self):
        return [[self.xplus.real, self.xplus.imag], [self.xminus.real, self.xminus.imag]]


class _Layout:
    def __init__(self, d: int):
        self.d = d
        self.pairs = [(j, n - j) for n in range(d + 1) for j in range(n, -1, -1)]
        self.index = {p: i for i, p in enumerate(self.pairs)}
        self.size = len(self.pairs)
        T = self.size
        # product: out = outer(a, b).ravel() @ S
        S = np.zeros((T * T, T))
        for ia, (ja, ka) in enumerate(self.pairs):
            for ib, (jb, kb) in enumerate(self.pairs):
                j, k = ja + jb, ka + kb
                if j + k <= d:
                    S[ia * T + ib, self.index[(j, k)]] = 1.0
        self.product = S
        if d >= 1:
            lower = layout(d - 1)
            self.dplus_src = np.array([self.index[(j + 1, k)] for j, k in lower.pairs])
            self.dplus_mul = np.array([j + 1 for j, k in lower.pairs], dtype=float)
            self.dminus_src = np.array([self.index[(j, k + 1)] for j, k in lower.pairs])
            self.dminus_mul = np.array([k + 1 for j, k in lower.pairs], dtype=float)


@lru_cache(maxsize=None)
def layout(d: int) -> _Layout:
    if d < 0:
        raise OrderExhausted("negative jet order")
    return _Layout(d)


# -- raw array kernels -------------------------------------------------------
def _mul(a: np.ndarray, b: np.ndarray, d: int) -> np.ndarray:
    return np.outer(a, b).ravel() @ layout(d).product


def _partial(a: np.ndarray, d: int, direction: str) -> np.ndarray:
    if d < 1:
        raise OrderExhausted("cannot differentiate an order-0 jet")
    lay = layout(d)
    if direction == "plus":
        return a[lay.dplus_src] * lay.dplus_mul
    if direction == "minus":
        return a[lay.dminus_src] * lay.dminus_mul
    raise ValueError(f"direction must be 'plus' or 'minus', not {direction!r}")


def _truncate(a: np.ndarray, d: int) -> np.ndarray:
    return a[: layout(d).size].copy()


def _series_coeffs(fun: str, body: complex, d: int, r: float | None = None):
    """Taylor coefficients ``f^(k)(body)/k!`` for k = 0..d."""
    if fun == "exp":
        e = cmath.exp(body)
        return [e / math.factorial(k) for k in range(d + 1)]
    if body == 0:
        raise SingularBody(f"{fun} at zero body")
    if fun == "reciprocal":
        return [(-1) ** k * body ** (-k - 1) for k in range(d + 1)]
    if fun == "log":
        _check_branch(body)
        return [cmath.log(body)] + [(-1) ** (k + 1) / (k * body**k) for k in range(1, d + 1)]
    if fun == "pow":
        if float(r).is_integer():
            base = body ** int(r) if r >= 0 else (1 / body) ** int(-r)
        else:
            _check_branch(body)
            base = cmath.exp(r * cmath.log(body))
        out = []
        c = 1.0
        for k in range(d + 1):
            out.append(c * base / body**k)
            c *= (r - k) / (k + 1)
        return out
    raise ValueError(f"unknown function {fun!r}")


def _check_branch(body: complex):
    if body.real <= 0 and abs(body.imag) <= 1e-14 * max(1.0, abs(body)):
        raise BranchCut(f"non-integer power or log at non-positive real body {body}")


def _compose(a: np.ndarray, d: int, coeffs) -> np.ndarray:
    shifted = a.copy()
    shifted[0] = 0
    out = np.zeros_like(a)
    out[0] = coeffs[0]
    power = np.zeros_like(a)
    power[0] = 1
    for k in range(1, d + 1):
        power = _mul(power, shifted, d)
        out = out + coeffs[k] * power
    return out


def _fun(a: np.ndarray, d: int, fun: str, r: float | None = None) -> np.ndarray:
    return _compose(a, d, _series_coeffs(fun, complex(a[0]), d, r))


# -- public jet value --------------------------------------------------------
class Jet:
    """Bivariate truncated Taylor expansion of a complex function."""

    __slots__ = ("coeffs", "order", "base")

    def __init__(self, coeffs, order: int, base: BasePoint):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (layout(order).size,):
            raise ValueError(f"jet of order {order} needs {layout(order).size} coefficients")
        self.coeffs = coeffs
        self.order = order
        self.base = base

    # constructors
    @classmethod
    def constant(cls, value, order: int, base: BasePoint) -> "Jet":
        c = np.zeros(layout(order).size, dtype=complex)
        c[0] = value
        return cls(c, order, base)

    @classmethod
    def coordinate(cls, which: str, order: int, base: BasePoint) -> "Jet":
        c = np.zeros(layout(order).size, dtype=complex)
        if which == "plus":
            c[0] = base.xplus
            if order >= 1:
                c[layout(order).index[(1, 0)]] = 1
        elif which == "minus":
            c[0] = base.xminus
            if order >= 1:
                c[layout(order).index[(0, 1)]] = 1
        else:
            raise ValueError(f"coordinate must be 'plus' or 'minus', not {which!r}")
        return cls(c, order, base)

    @classmethod
    def from_triangle(cls, tri, base: BasePoint) -> "Jet":
        """Build from nested ``tri[j][k]`` (``j + k <= d``)."""
        d = len(tri) - 1
        lay = layout(d)
        c = np.zeros(lay.size, dtype=complex)
        for (j, k), i in lay.index.items():
            c[i] = tri[j][k] if k < len(tri[j]) else 0
        return cls(c, d, base)

    # access
    def __getitem__(self, jk):
        j, k = jk
        if j + k > self.order:
            raise IndexError(f"({j}, {k}) beyond order {self.order}")
        return self.coeffs[layout(self.order).index[(j, k)]]

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    def derivative(self, j: int, k: int) -> complex:
        """``d+^j d-^k f`` at the base point."""
        return self[j, k] * math.factorial(j) * math.factorial(k)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise OrderExhausted(f"cannot raise jet order {self.order} to {order}")
        return Jet(_truncate(self.coeffs, order), order, self.base)

    def _check(self, other: "Jet"):
        if other.order != self.order:
            raise OrderExhausted(f"jet order mismatch {self.order} vs {other.order}")
        if other.base != self.base:
            raise BaseMismatch(f"jet base mismatch {self.base} vs {other.base}")

    def _lift(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return other.coeffs
        if isinstance(other, (int, float, complex, np.number)):
            c = np.zeros_like(self.coeffs)
            c[0] = other
            return c
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet(self.coeffs + o, self.order, self.base)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet(self.coeffs - o, self.order, self.base)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet(o - self.coeffs, self.order, self.base)

    def __neg__(self):
        return Jet(-self.coeffs, self.order, self.base)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return Jet(self.coeffs * other, self.order, self.base)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet(_mul(self.coeffs, o, self.order), self.order, self.base)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return Jet(self.coeffs / other, self.order, self.base)
        if isinstance(other, Jet):
            return self * jet_fun(other, "reciprocal")
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return jet_fun(self, "reciprocal") * other
        return NotImplemented

    def __pow__(self, r):
        return jet_fun(self, "pow", r)

    def __repr__(self):
        return f"Jet(order={self.order}, value={self.value:.6g}, base={self.base})"


def jet_arith(a: Jet, b, op: str) -> Jet:
    """``op`` in {'add', 'mul', 'scale'}; ``scale`` takes a complex ``b``."""
    if op == "add":
        if not isinstance(b, Jet):
            raise TypeError("add needs two jets")
        return a + b
    if op == "mul":
        if not isinstance(b, Jet):
            raise TypeError("mul needs two jets")
        return a * b
    if op == "scale":
        return Jet(a.coeffs * complex(b), a.order, a.base)
    raise ValueError(f"unknown op {op!r}")


def jet_partial(a: Jet, direction: str) -> Jet:
    return Jet(_partial(a.coeffs, a.order, direction), a.order - 1, a.base)


def jet_fun(a: Jet, fun: str, r: float | None = None) -> Jet:
    """Compose with ``exp``, ``reciprocal``, ``log`` or ``pow`` (exponent ``r``)."""
    if fun == "pow" and r is None:
        raise ValueError("pow needs an exponent")
    return Jet(_fun(a.coeffs, a.order, fun, r), a.order, a.base)


def jet_integrate(a: Jet) -> Jet:
    """Antiderivative along ``x+`` vanishing on the line ``x+ = base``.

    Raises the order by one.  Used for lifting ODE solutions, where the
    second coordinate is a dummy.
    """
    d = a.order
    hi = layout(d + 1)
    c = np.zeros(hi.size, dtype=complex)
    lo = layout(d)
    for (j, k), i in lo.index.items():
        c[hi.index[(j + 1, k)]] = a.coeffs[i] / (j + 1)
    return Jet(c, d + 1, a.base)


def compose_univariate(series, inner: Jet) -> Jet:
    """``sum_n series[n] * (inner - inner.value)^n`` as a jet like ``inner``."""
    shifted = inner - inner.value
    out = Jet.constant(0, inner.order, inner.base)
    power = Jet.constant(1, inner.order, inner.base)
    for n, s in enumerate(series):
        if n > inner.order:
            break
        if n:
            power = power * shifted
        out = out + power * s
    return out


@dataclass(frozen=True)
class JetRing:
    """Jets of fixed order at a fixed base point, as a Grassmann coefficient ring.

    Ring values are the raw coefficient arrays, not :class:`Jet` objects.
    """

    order: int
    base: BasePoint

    def zero(self):
        return np.zeros(layout(self.order).size, dtype=complex)

    def one(self):
        c = self.zero()
        c[0] = 1
        return c

    def coerce(self, c):
        if isinstance(c, Jet):
            if c.order != self.order or c.base != self.base:
                raise OrderExhausted(f"jet (order {c.order}, {c.base}) does not fit {self}")
            return c.coeffs
        if isinstance(c, np.ndarray):
            if c.shape != (layout(self.order).size,):
                raise OrderExhausted("coefficient array has wrong size for this ring")
            return c.astype(complex)
        out = self.zero()
        out[0] = c
        return out

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return _mul(a, b, self.order)

    def neg(self, a):
        return -a

    def scale(self, a, s):
        return a * s

    def norm(self, a):
        return float(np.max(np.abs(a)))

    def norms(self, values):
        return np.abs(np.stack(values)).max(axis=1)

    def exp(self, a):
        return _fun(a, self.order, "exp")

    def reciprocal(self, a):
        return _fun(a, self.order, "reciprocal")

    def pow(self, a, r):
        return _fun(a, self.order, "pow", r)

    def log(self, a):
        return _fun(a, self.order, "log")

    def partial(self, a, direction):
        return _partial(a, self.order, direction)

    def lowered(self, order: int) -> "JetRing":
        return JetRing(order, self.base)

    def truncate(self, a, order: int):
        return _truncate(a, order)

    def jet(self, a) -> Jet:
        return Jet(a, self.order, self.base)

    def describe(self, a):
        c = complex(a[0])
        rest = float(np.max(np.abs(a[1:]))) if a.size > 1 else 0.0
        return f"jet({c.real:.6g}{c.imag:+.6g}i|{rest:.3g})"
