"""Polynomial super vector fields and their brackets.

A polynomial is a dict ``{(exponents, odd_mask): coeff}`` over a list of
coordinates, some of which may be odd.  Vector fields act with the left
derivative on odd coordinates, and

    [V, W]^c = V(W^c) - (-1)^{|V||W|} W(V^c).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisExpressionError, DegreeOverflow
from .grassmann import _merge_sign

MAX_DEGREE = 4

CLASSICAL_COORDS = ("z", "zbar", "H", "Q", "Qbar", "U")
SUSY_COORDS = (
    "x+", "x-", "th+", "th-", "phi", "H", "Q+", "Q-",
    "R+", "R-", "S+", "S-", "T+", "T-", "f",
)
SUSY_ODD = frozenset({"th+", "th-", "R+", "R-", "S+", "S-", "T+", "T-"})


@dataclass(frozen=True)
class Coordinates:
    names: tuple
    odd: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "odd", frozenset(self.odd))
        object.__setattr__(self, "_even", tuple(n for n in self.names if n not in self.odd))
        object.__setattr__(self, "_odd", tuple(n for n in self.names if n in self.odd))

    @property
    def even_names(self):
        return self._even

    @property
    def odd_names(self):
        return self._odd


class Poly:
    """Polynomial in even and odd coordinates with complex coefficients."""

    __slots__ = ("coords", "terms")

    def __init__(self, coords: Coordinates, terms: dict | None = None):
        self.coords = coords
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}
        for exps, mask in self.terms:
            if sum(exps) + mask.bit_count() > MAX_DEGREE:
                raise DegreeOverflow(f"degree exceeds {MAX_DEGREE}")

    @classmethod
    def const(cls, coords, c) -> "Poly":
        return cls(coords, {((0,) * len(coords.even_names), 0): complex(c)})

    @classmethod
    def var(cls, coords, name, c=1) -> "Poly":
        ne = len(coords.even_names)
        if name in coords.odd:
            return cls(coords, {((0,) * ne, 1 << coords.odd_names.index(name)): complex(c)})
        exps = [0] * ne
        exps[coords.even_names.index(name)] = 1
        return cls(coords, {(tuple(exps), 0): complex(c)})

    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> int | None:
        ps = {m.bit_count() & 1 for _, m in self.terms}
        if len(ps) > 1:
            raise ValueError("mixed-parity polynomial")
        return ps.pop() if ps else None

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return Poly(self.coords, out)

    def __neg__(self):
        return Poly(self.coords, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "Poly":
        return Poly(self.coords, {k: v * s for k, v in self.terms.items()})

    def __mul__(self, other: "Poly") -> "Poly":
        out: dict = {}
        for (ea, ma), va in self.terms.items():
            for (eb, mb), vb in other.terms.items():
                if ma & mb:
                    continue
                key = (tuple(x + y for x, y in zip(ea, eb)), ma | mb)
                out[key] = out.get(key, 0) + _merge_sign(ma, mb) * va * vb
        return Poly(self.coords, out)

    def derive(self, name: str) -> "Poly":
        """Partial derivative; left derivative for odd coordinates."""
        out: dict = {}
        if name in self.coords.odd:
            bit = 1 << self.coords.odd_names.index(name)
            for (e, m), v in self.terms.items():
                if m & bit:
                    sign = -1 if (m & (bit - 1)).bit_count() & 1 else 1
                    out[(e, m ^ bit)] = out.get((e, m ^ bit), 0) + sign * v
        else:
            idx = self.coords.even_names.index(name)
            for (e, m), v in self.terms.items():
                if e[idx]:
                    e2 = list(e)
                    e2[idx] -= 1
                    key = (tuple(e2), m)
                    out[key] = out.get(key, 0) + e[idx] * v
        return Poly(self.coords, out)

    def __eq__(self, other):
        return isinstance(other, Poly) and (self - other).is_zero()

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (e, m), v in sorted(self.terms.items()):
            factors = [
                f"{n}^{k}" if k > 1 else n for n, k in zip(self.coords.even_names, e) if k
            ]
            factors += [n for i, n in enumerate(self.coords.odd_names) if m >> i & 1]
            parts.append(f"{v:.6g}" + "".join("*" + f for f in factors))
        return " + ".join(parts)


class PolyVectorField:
    """``sum_c comps[c] d/d(c)``; homogeneous in parity."""

    def __init__(self, coords: Coordinates, comps: dict):
        self.coords = coords
        self.comps = {n: p for n, p in comps.items() if not p.is_zero()}
        for n in self.comps:
            if n not in coords.names:
                raise KeyError(f"unknown coordinate {n!r}")

    @property
    def parity(self) -> int:
        """0 for even, 1 for odd (from the component degrees)."""
        for n, p in self.comps.items():
            return (p.parity() + (1 if n in self.coords.odd else 0)) % 2
        return 0

    def apply(self, g: Poly) -> Poly:
        out = Poly(self.coords)
        for n, p in self.comps.items():
            out = out + p * g.derive(n)
        return out

    def component(self, name: str) -> Poly:
        return self.comps.get(name, Poly(self.coords))

    def __add__(self, other):
        names = set(self.comps) | set(other.comps)
        return PolyVectorField(self.coords, {n: self.component(n) + other.component(n) for n in names})

    def scale(self, s):
        return PolyVectorField(self.coords, {n: p.scale(s) for n, p in self.comps.items()})

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        names = set(self.comps) | set(other.comps)
        return all(self.component(n) == other.component(n) for n in names)

    def __repr__(self):
        return " + ".join(f"({p}) d_{n}" for n, p in self.comps.items()) or "0"


def vf_bracket(V: PolyVectorField, W: PolyVectorField) -> PolyVectorField:
    if V.coords != W.coords:
        raise ValueError("vector fields on different coordinates")
    sign = -1 if V.parity and W.parity else 1
    out = {}
    for n in V.coords.names:
        c = V.apply(W.component(n)) - W.apply(V.component(n)).scale(sign)
        if not c.is_zero():
            out[n] = c
    return PolyVectorField(V.coords, out)


# -- classical realization ---------------------------------------------------
CLASSICAL = Coordinates(CLASSICAL_COORDS)


def _cv(name, c=1):
    return Poly.var(CLASSICAL, name, c)


def _cc(c):
    return Poly.const(CLASSICAL, c)


def _poly_in(var: str, coeffs) -> Poly:
    out = Poly(CLASSICAL)
    x = _cv(var)
    power = _cc(1)
    for k, a in enumerate(coeffs):
        if k:
            power = power * x
        if a:
            out = out + power.scale(a)
    return out


def _dpoly(coeffs):
    return [k * a for k, a in enumerate(coeffs)][1:]


def realize_X_eta(coeffs) -> PolyVectorField:
    """``X(eta) = eta d_z + eta' (-2 Q d_Q - U d_U)`` with
    ``eta = sum coeffs[k] z^k``."""
    if len(coeffs) > 3 and any(coeffs[3:]):
        raise DegreeOverflow("eta must have degree <= 2")
    eta = _poly_in("z", coeffs)
    deta = _poly_in("z", _dpoly(coeffs))
    return PolyVectorField(
        CLASSICAL,
        {"z": eta, "Q": deta * _cv("Q", -2), "U": deta * _cv("U", -1)},
    )


def realize_Y_zeta(coeffs) -> PolyVectorField:
    if len(coeffs) > 3 and any(coeffs[3:]):
        raise DegreeOverflow("zeta must have degree <= 2")
    zeta = _poly_in("zbar", coeffs)
    dzeta = _poly_in("zbar", _dpoly(coeffs))
    return PolyVectorField(
        CLASSICAL,
        {"zbar": zeta, "Qbar": dzeta * _cv("Qbar", -2), "U": dzeta * _cv("U", -1)},
    )


def realize_classical(name: str) -> PolyVectorField:
    table = {
        "e1": lambda: realize_X_eta([1]),
        "e3": lambda: realize_X_eta([0, 1]),
        "e5": lambda: realize_X_eta([0, 0, 1]),
        "e2": lambda: realize_Y_zeta([1]),
        "e4": lambda: realize_Y_zeta([0, 1]),
        "e6": lambda: realize_Y_zeta([0, 0, 1]),
        "e0": lambda: PolyVectorField(
            CLASSICAL,
            {"H": _cv("H", -1), "Q": _cv("Q"), "Qbar": _cv("Qbar"), "U": _cv("U", 2)},
        ),
    }
    if name not in table:
        raise KeyError(f"unknown classical generator {name!r}")
    return table[name]()


def classical_realization() -> dict:
    return {f"e{k}": realize_classical(f"e{k}") for k in range(7)}


# -- SUSY realization --------------------------------------------------------
SUSY = Coordinates(SUSY_COORDS, SUSY_ODD)


def _sv(name, c=1):
    return Poly.var(SUSY, name, c)


def _sc(c):
    return Poly.const(SUSY, c)


def realize_susy(name: str) -> PolyVectorField:
    """The eight symmetry generators of the SUSY GC system."""
    dil = lambda pairs: {n: _sv(n, c) for n, c in pairs}  # noqa: E731
    table = {
        "C0": lambda: dil([("H", 1), ("Q+", 1), ("Q-", 1), ("f", -2)]),
        "K0": lambda: {**dil([("H", -1), ("Q+", 1), ("Q-", 1)]), "phi": _sc(2)},
        "K1": lambda: {
            **dil([("x+", -2), ("th+", -1), ("R+", 1), ("R-", 2), ("S-", 1), ("T+", -1), ("Q+", 2)]),
            "phi": _sc(1),
        },
        "K2": lambda: {
            **dil([("x-", -2), ("th-", -1), ("R-", -1), ("S+", 1), ("T+", 2), ("T-", 1), ("Q-", 2)]),
            "phi": _sc(1),
        },
        "P+": lambda: {"x+": _sc(1)},
        "P-": lambda: {"x-": _sc(1)},
        "J+": lambda: {"th+": _sc(1), "x+": _sv("th+", 1j)},
        "J-": lambda: {"th-": _sc(1), "x-": _sv("th-", 1j)},
    }
    if name not in table:
        raise KeyError(f"unknown SUSY generator {name!r}")
    return PolyVectorField(SUSY, table[name]())


def susy_realization() -> dict:
    return {n: realize_susy(n) for n in ("K1", "P+", "J+", "K2", "P-", "J-", "K0", "C0")}


# -- comparison with structure constants -------------------------------------
def _flatten(V: PolyVectorField, keys: list) -> np.ndarray:
    return np.array([V.component(n).terms.get(t, 0) for n, t in keys], dtype=complex)


def express_in_basis(V: PolyVectorField, fields: list, tol: float = 1e-12) -> np.ndarray:
    """Coefficients ``a`` with ``V = sum a_k fields[k]``; raises if not in span."""
    keys = sorted(
        {(n, t) for F in fields + [V] for n, p in F.comps.items() for t in p.terms},
        key=repr,
    )
    if not keys:
        return np.zeros(len(fields), dtype=complex)
    A = np.stack([_flatten(F, keys) for F in fields], axis=1)
    b = _flatten(V, keys)
    a, *_ = np.linalg.lstsq(A, b, rcond=None)
    if np.max(np.abs(A @ a - b), initial=0.0) > tol * max(1.0, np.max(np.abs(b), initial=0.0)):
        raise BasisExpressionError(f"bracket {V} is not in the span of the basis")
    a[np.abs(a) < tol] = 0
    return a


@dataclass
class StructureMatch:
    computed: np.ndarray  # computed[i, j, k]
    mismatches: list  # (name_i, name_j, computed row, tabulated row)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def structure_match(realization: dict, sc, tol: float = 1e-12) -> StructureMatch:
    """Bracket every pair of realized generators and compare with ``sc``."""
    names = list(sc.basis.names)
    fields = [realization[n] for n in names]
    n = len(names)
    computed = np.zeros((n, n, n), dtype=complex)
    mismatches = []
    for i in range(n):
        for j in range(i, n):
            row = express_in_basis(vf_bracket(fields[i], fields[j]), fields, tol)
            computed[i, j] = row
            if np.max(np.abs(row - sc.c[i, j])) > tol:
                mismatches.append((names[i], names[j], row, sc.c[i, j].copy()))
    for i in range(n):
        for j in range(i):
            s = (-1) ** (sc.basis.grade(i) * sc.basis.grade(j))
            computed[i, j] = -s * computed[j, i]
    return StructureMatch(computed, mismatches)
