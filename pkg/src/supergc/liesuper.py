"""Lie superalgebras given by structure constants, with Grassmann-valued
coordinates, graded Jacobi checks and the adjoint action.

Brackets follow ``[X_i, X_j] = sum_k c[i, j, k] X_k``; when both generators
are odd the entry is the anticommutator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import grassmann as gr
from .errors import ParityError, SuperGCError
from .grassmann import GrassmannAlgebra, GrassmannElement, MatrixRing

EVEN, ODD = "even", "odd"


@dataclass(frozen=True)
class BasisSpec:
    names: tuple
    parities: tuple

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "parities", tuple(self.parities))
        if len(set(self.names)) != len(self.names):
            raise ValueError("basis names must be unique")
        if len(self.names) != len(self.parities):
            raise ValueError("one parity per basis name")
        if any(p not in (EVEN, ODD) for p in self.parities):
            raise ValueError("parities must be 'even' or 'odd'")

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def grade(self, i: int) -> int:
        return 1 if self.parities[i] == ODD else 0


class StructureConstants:
    def __init__(self, basis: BasisSpec, c):
        n = len(basis)
        c = np.asarray(c, dtype=complex)
        if c.shape != (n, n, n):
            raise ValueError(f"structure constants need shape {(n, n, n)}")
        self.basis = basis
        self.c = c

    @property
    def n(self) -> int:
        return len(self.basis)

    @classmethod
    def from_relations(cls, basis: BasisSpec, relations: dict) -> "StructureConstants":
        """``relations[(a, b)] = {k: coeff}`` by name; the graded-symmetric
        partner is filled in automatically."""
        n = len(basis)
        c = np.zeros((n, n, n), dtype=complex)
        for (a, b), rhs in relations.items():
            i, j = basis.index(a), basis.index(b)
            sym = -((-1) ** (basis.grade(i) * basis.grade(j)))
            for k, v in rhs.items():
                kk = basis.index(k)
                c[i, j, kk] = v
                c[j, i, kk] = sym * v
        return cls(basis, c)

    def graded_symmetry_residual(self) -> float:
        worst = 0.0
        for i in range(self.n):
            for j in range(self.n):
                s = (-1) ** (self.basis.grade(i) * self.basis.grade(j))
                worst = max(worst, float(np.max(np.abs(self.c[i, j] + s * self.c[j, i]))))
        return worst

    def to_json(self) -> str:
        triples = [
            [int(i), int(j), int(k), [self.c[i, j, k].real, self.c[i, j, k].imag]]
            for i, j, k in zip(*np.nonzero(self.c))
        ]
        return json.dumps(
            {"names": list(self.basis.names), "parities": list(self.basis.parities), "c": triples},
            indent=1,
        )

    @classmethod
    def from_json(cls, text: str) -> "StructureConstants":
        data = json.loads(text)
        basis = BasisSpec(data["names"], data["parities"])
        n = len(basis)
        c = np.zeros((n, n, n), dtype=complex)
        for i, j, k, (re, im) in data["c"]:
            c[i, j, k] = complex(re, im)
        return cls(basis, c)


def susy_algebra() -> StructureConstants:
    """The eight-dimensional symmetry superalgebra of the SUSY GC system."""
    basis = BasisSpec(
        ("K1", "P+", "J+", "K2", "P-", "J-", "K0", "C0"),
        (EVEN, EVEN, ODD, EVEN, EVEN, ODD, EVEN, EVEN),
    )
    return StructureConstants.from_relations(
        basis,
        {
            ("K1", "P+"): {"P+": 2},
            ("K1", "J+"): {"J+": 1},
            ("J+", "J+"): {"P+": 2j},
            ("K2", "P-"): {"P-": 2},
            ("K2", "J-"): {"J-": 1},
            ("J-", "J-"): {"P-": 2j},
        },
    )


CLASSICAL_RELATIONS = {
    ("e1", "e3"): {"e1": 1},
    ("e1", "e5"): {"e3": -2},
    ("e3", "e5"): {"e5": 1},
    ("e2", "e4"): {"e2": 1},
    ("e2", "e6"): {"e4": -2},
    ("e4", "e6"): {"e6": 1},
}


def classical_algebra(relations: dict | None = None) -> StructureConstants:
    """The seven-dimensional algebra ``e0..e6`` with its tabulated relations."""
    basis = BasisSpec(tuple(f"e{k}" for k in range(7)), (EVEN,) * 7)
    return StructureConstants.from_relations(basis, relations or CLASSICAL_RELATIONS)


def super_jacobi_residual(sc: StructureConstants) -> float:
    """Largest coefficient of the graded Jacobi sum over all basis triples.

    ``(-1)^{|a||c|} [a,[b,c]] + (-1)^{|b||a|} [b,[c,a]] + (-1)^{|c||b|} [c,[a,b]]``.
    """
    c = sc.c
    g = np.array([sc.basis.grade(i) for i in range(sc.n)])
    # nested[a, b, c, :] = [a, [b, c]]
    nested = np.einsum("bcm,amk->abck", c, c)
    sa = (-1.0) ** np.einsum("a,c->ac", g, g)
    sb = (-1.0) ** np.einsum("b,a->ba", g, g)
    sc_ = (-1.0) ** np.einsum("c,b->cb", g, g)
    total = (
        sa[:, None, :, None] * nested
        + sb.T[:, :, None, None] * np.transpose(nested, (2, 0, 1, 3))
        + sc_.T[None, :, :, None] * np.transpose(nested, (1, 2, 0, 3))
    )
    return float(np.max(np.abs(total))) if total.size else 0.0


# -- elements with Grassmann coordinates -------------------------------------
class AlgebraElement:
    """``sum_i coords[i] X_i`` with even coordinates on even generators and
    odd coordinates on odd ones."""

    __slots__ = ("coords", "basis", "alg")

    def __init__(self, coords: Sequence, basis: BasisSpec, alg: GrassmannAlgebra):
        if len(coords) != len(basis):
            raise ValueError(f"{len(coords)} coordinates for a {len(basis)}-dimensional basis")
        out = []
        for i, x in enumerate(coords):
            if not isinstance(x, GrassmannElement):
                x = alg.scalar(x)
            if x.alg != alg:
                raise ValueError("coordinates from a different Grassmann algebra")
            want = sc_parity = basis.parities[i]
            got = gr.parity(x)
            if not x.is_zero() and got != want:
                raise ParityError(f"coordinate of {basis.names[i]} is {got}, needs {sc_parity}")
            out.append(x)
        self.coords = tuple(out)
        self.basis = basis
        self.alg = alg

    @classmethod
    def from_dict(cls, sc: StructureConstants, alg: GrassmannAlgebra, values: dict):
        coords = [alg.zero() for _ in range(sc.n)]
        for name, v in values.items():
            coords[sc.basis.index(name)] = v if isinstance(v, GrassmannElement) else alg.scalar(v)
        return cls(coords, sc.basis, alg)

    @classmethod
    def zero(cls, sc: StructureConstants, alg: GrassmannAlgebra):
        return cls([alg.zero()] * sc.n, sc.basis, alg)

    def __add__(self, other):
        return AlgebraElement([a + b for a, b in zip(self.coords, other.coords)], self.basis, self.alg)

    def __sub__(self, other):
        return AlgebraElement([a - b for a, b in zip(self.coords, other.coords)], self.basis, self.alg)

    def __neg__(self):
        return AlgebraElement([-a for a in self.coords], self.basis, self.alg)

    def scale(self, s) -> "AlgebraElement":
        """Left multiplication by an even scalar or even Grassmann element."""
        return AlgebraElement([s * a for a in self.coords], self.basis, self.alg)

    def max_norm(self) -> float:
        return max((a.max_norm() for a in self.coords), default=0.0)

    def isclose(self, other, tol: float = 1e-10) -> bool:
        return (self - other).max_norm() <= tol

    def __repr__(self):
        parts = [
            f"({a}) {n}" for a, n in zip(self.coords, self.basis.names) if not a.is_zero()
        ]
        return "AlgebraElement(" + (" + ".join(parts) or "0") + ")"


def bracket(X: AlgebraElement, Y: AlgebraElement, sc: StructureConstants) -> AlgebraElement:
    """``[X, Y]`` extended bilinearly, X-coefficients on the left."""
    if len(X.coords) != sc.n or len(Y.coords) != sc.n:
        raise ValueError("dimension mismatch")
    alg = X.alg
    out = [alg.zero() for _ in range(sc.n)]
    for i, x in enumerate(X.coords):
        if x.is_zero():
            continue
        for j, y in enumerate(Y.coords):
            if y.is_zero():
                continue
            ks = np.nonzero(sc.c[i, j])[0]
            if not len(ks):
                continue
            sign = -1 if sc.basis.grade(i) and sc.basis.grade(j) else 1
            xy = gr.mul(x, y)
            if sign < 0:
                xy = -xy
            for k in ks:
                out[k] = out[k] + xy.scale(sc.c[i, j, k])
    return AlgebraElement(out, sc.basis, alg)


def basis_element(sc: StructureConstants, alg: GrassmannAlgebra, name: str, coeff=1):
    return AlgebraElement.from_dict(sc, alg, {name: coeff})


# -- adjoint action ----------------------------------------------------------
def adjoint_exp_series(X, Y, sc, max_terms: int = 200, tol: float = 1e-15) -> AlgebraElement:
    """Reference evaluation ``sum_n ad'^n(Y)/n!`` with ``ad'(Z) = [Z, X]``."""
    out = Y
    term = Y
    for n in range(1, max_terms):
        term = bracket(term, X, sc).scale(1.0 / n)
        if term.max_norm() <= tol * max(1.0, out.max_norm()):
            return out + term
        out = out + term
    raise SuperGCError("adjoint series did not converge")


def _adjoint_matrix(X: AlgebraElement, sc: StructureConstants) -> GrassmannElement:
    """Grassmann-valued matrix ``M`` with ``[Y, X] = y . M`` for any ``Y``."""
    n = sc.n
    ring = MatrixRing(n)
    malg = X.alg.with_ring(ring)
    terms: dict = {}
    g = [sc.basis.grade(i) for i in range(n)]
    for i, x in enumerate(X.coords):
        for mask, coeff in x.terms.items():
            block = terms.setdefault(mask, np.zeros((n, n), dtype=complex))
            for j in range(n):
                s = -1 if g[i] and g[j] else 1
                block[j, :] += s * coeff * sc.c[j, i, :]
    return GrassmannElement.build(malg, terms)


def _matrix_exp(M: GrassmannElement) -> GrassmannElement:
    """Scaling and squaring with a Taylor core, in the Grassmann-matrix algebra."""
    alg = M.alg
    norm = M.max_norm() * alg.ring.n
    s = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    A = M.scale(0.5**s)
    out = alg.one()
    term = alg.one()
    for k in range(1, 60):
        term = gr.mul(term, A).scale(1.0 / k)
        out = out + term
        if term.max_norm() < 1e-17:
            break
    for _ in range(s):
        out = gr.mul(out, out)
    return out


def adjoint_exp(X: AlgebraElement, Y: AlgebraElement, sc: StructureConstants) -> AlgebraElement:
    """Adjoint action of ``exp(X)`` on ``Y``.

    Oriented so that ``X = alpha K1`` sends ``P+`` to ``e^{-2 alpha} P+``,
    that is ``Y -> sum_n ad'^n(Y) / n!`` with ``ad'(Z) = [Z, X]``.
    Computed as the row vector of ``Y`` times ``exp(M)``.
    """
    if X.alg != Y.alg:
        raise ValueError("X and Y use different Grassmann algebras")
    E = _matrix_exp(_adjoint_matrix(X, sc))
    alg = Y.alg
    n = sc.n
    out: list[dict] = [dict() for _ in range(n)]
    for j, y in enumerate(Y.coords):
        for my, cy in y.terms.items():
            for me, block in E.terms.items():
                if my & me:
                    continue
                sign = gr._merge_sign(my, me)
                m = my | me
                row = sign * cy * block[j, :]
                for k in np.nonzero(row)[0]:
                    out[k][m] = out[k].get(m, 0) + row[k]
    coords = [GrassmannElement.build(alg, d) for d in out]
    return AlgebraElement(coords, sc.basis, alg)


@dataclass(frozen=True)
class ConjugacyResult:
    ok: bool
    residual: float
    scale: GrassmannElement | None
    image: AlgebraElement


def verify_conjugacy(Y, Yexpected, X, sc, tol: float = 1e-10) -> ConjugacyResult:
    """Is ``Ad(exp X) Y`` an invertible even multiple of ``Yexpected``?"""
    image = adjoint_exp(X, Y, sc)
    lead = next(
        (k for k, c in enumerate(Yexpected.coords) if abs(c.body()) > 0), None
    )
    if lead is None:
        res = image.max_norm()
        return ConjugacyResult(res <= tol and Yexpected.max_norm() == 0, res, None, image)
    num = image.coords[lead]
    if abs(num.body()) == 0:
        return ConjugacyResult(False, float("inf"), None, image)
    s = num / Yexpected.coords[lead]
    res = (image - Yexpected.scale(s)).max_norm()
    return ConjugacyResult(res <= tol * max(1.0, image.max_norm()), res, s, image)
