"""Supersymmetric Gauss-Weingarten frames, Gauss-Codazzi residuals and
fundamental forms for conformally parametrized surfaces.

Index convention: 1 stands for ``+`` and 2 for ``-``.  The Christoffel
symbols of the second kind are named

    R+ = G11^1, R- = G11^2, S+ = G12^1, S- = G12^2, T+ = G22^1, T- = G22^2

with ``G21^k = -G12^k``.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ParityError
from .superfield import (
    EVEN,
    ODD,
    SuperVector3,
    Superfield,
    d_minus,
    d_plus,
    exp,
    power,
    super_dot,
)

GC_NAMES = ("i", "ii", "iii", "iv", "v", "vi")
DEFAULT_TOL = 1e-10

Matrix = list  # 3x3 nested list of Superfield


@dataclass(frozen=True)
class FrameCoefficients:
    phi: Superfield
    H: Superfield
    Qplus: Superfield
    Qminus: Superfield
    Rplus: Superfield
    Rminus: Superfield
    Splus: Superfield
    Sminus: Superfield
    Tplus: Superfield
    Tminus: Superfield
    f: Superfield

    def __post_init__(self):
        for name in ("phi", "H", "Qplus", "Qminus", "f"):
            _expect(getattr(self, name), EVEN, name)
        for name in ("Rplus", "Rminus", "Splus", "Sminus", "Tplus", "Tminus"):
            _expect(getattr(self, name), ODD, name)
        f = self.f
        if any(m & f.alg.theta_mask for m in f.value.terms):
            raise ParityError("f must not depend on th+ or th-")
        if 0 in f.value.terms:
            raise ParityError("f must be bodiless")

    def replace(self, **changes) -> "FrameCoefficients":
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update(changes)
        return FrameCoefficients(**data)

    def items(self):
        return [(f.name, getattr(self, f.name)) for f in fields(self)]

    def gamma(self, i: int, j: int, k: int) -> Superfield:
        """Christoffel symbol of the second kind ``G_ij^k``."""
        table = {
            (1, 1): (self.Rplus, self.Rminus),
            (1, 2): (self.Splus, self.Sminus),
            (2, 2): (self.Tplus, self.Tminus),
        }
        if (i, j) == (2, 1):
            return -table[(1, 2)][k - 1]
        return table[(i, j)][k - 1]


def _expect(field: Superfield, parity: str, name: str):
    if not field.is_zero() and field.parity != parity:
        raise ParityError(f"{name} must be {parity}, got {field.parity}")


@dataclass(frozen=True)
class FrameMatrices:
    Aplus: Matrix
    Aminus: Matrix
    Esign: int = 1


@dataclass(frozen=True)
class FundamentalForms:
    g11: Superfield
    g12: Superfield
    g21: Superfield
    g22: Superfield
    b11: Superfield
    b12: Superfield
    b21: Superfield
    b22: Superfield
    bmixed: list  # bmixed[k-1][i-1] = b^k_i
    ginv: list  # ginv[j-1][k-1] = g^{jk}
    gdisc: Superfield
    bdisc: Superfield


def _zero_like(s: Superfield) -> Superfield:
    return s * 0


def assemble_frames(c: FrameCoefficients, Esign: int = 1) -> FrameMatrices:
    """Gauss-Weingarten matrices ``A+`` and ``A-``."""
    if Esign not in (1, -1):
        raise ValueError("Esign must be +1 or -1")
    ep = exp(c.phi)
    em = exp(-c.phi)
    zero = _zero_like(c.phi)
    half_eHf = 0.5 * ep * c.H * c.f
    Aplus = [
        [c.Rplus, c.Rminus, c.Qplus * c.f],
        [-c.Splus, -c.Sminus, -half_eHf],
        [c.H, 2 * em * c.Qplus, zero],
    ]
    Aminus = [
        [c.Splus, c.Sminus, half_eHf],
        [c.Tplus, c.Tminus, c.Qminus * c.f],
        [-2 * em * c.Qminus, c.H, zero],
    ]
    return FrameMatrices(Aplus, Aminus, Esign)


def gc_residuals(c: FrameCoefficients) -> dict:
    """Left-hand sides of the six SUSY Gauss-Codazzi equations."""
    Rp, Rm, Sp, Sm, Tp, Tm = c.Rplus, c.Rminus, c.Splus, c.Sminus, c.Tplus, c.Tminus
    Qp, Qm, H, phi, f = c.Qplus, c.Qminus, c.H, c.phi, c.f
    ep, em = exp(phi), exp(-phi)
    return {
        "i": d_minus(Rp) + d_plus(Tm) + d_plus(Sp) - d_minus(Sm),
        "ii": d_minus(Rp) - Rm * Tp + d_plus(Sp) + Sm * Sp
        + 0.5 * H * H * ep * f - 2 * Qp * Qm * em * f,
        "iii": Qp * Tm - Rm * Qm + d_minus(Qp) - Qp * d_minus(phi) + 0.5 * ep * d_plus(H),
        "iv": Qm * Rp - Tp * Qp + d_plus(Qm) - Qm * d_plus(phi) - 0.5 * ep * d_minus(H),
        "v": d_minus(Rm) - Sp * Rm - Rm * Tm - Rp * Sm + d_plus(Sm) + 2 * Qp * H * f,
        "vi": d_plus(Tp) + Sm * Tp - Tp * Rp + Tm * Sp - d_minus(Sp) + 2 * Qm * H * f,
    }


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    return [[_sum(A[r][k] * B[k][s] for k in range(3)) for s in range(3)] for r in range(3)]


def _sum(items):
    out = None
    for x in items:
        out = x if out is None else out + x
    return out


def _apply(A: Matrix, fn) -> Matrix:
    return [[fn(x) for x in row] for row in A]


def zcc_residual(m: FrameMatrices) -> Matrix:
    """``D+A- + D-A+ - {E A+, E A-}`` entrywise."""
    diag = (m.Esign, m.Esign, -m.Esign)
    EAp = [[diag[r] * x for x in row] for r, row in enumerate(m.Aplus)]
    EAm = [[diag[r] * x for x in row] for r, row in enumerate(m.Aminus)]
    P = _matmul(EAp, EAm)
    Q = _matmul(EAm, EAp)
    Dp = _apply(m.Aminus, d_plus)
    Dm = _apply(m.Aplus, d_minus)
    return [[Dp[r][s] + Dm[r][s] - P[r][s] - Q[r][s] for s in range(3)] for r in range(3)]


def max_residual(fields_) -> float:
    return max((x.max_abs() for x in fields_), default=0.0)


def fundamental_forms(c: FrameCoefficients) -> FundamentalForms:
    ep, em = exp(c.phi), exp(-c.phi)
    zero = _zero_like(c.phi)
    g12 = 0.5 * ep
    b12 = 0.5 * ep * c.H
    bmixed = [[c.H, -2 * em * c.Qminus], [2 * em * c.Qplus, c.H]]
    ginv = [[zero, -2 * em], [2 * em, zero]]
    forms = FundamentalForms(
        g11=zero, g12=g12, g21=-g12, g22=zero,
        b11=c.Qplus, b12=b12, b21=-b12, b22=c.Qminus,
        bmixed=bmixed, ginv=ginv,
        gdisc=0.25 * exp(2 * c.phi),
        bdisc=c.Qplus * c.Qminus + 0.25 * c.H * c.H * exp(2 * c.phi),
    )
    err = inverse_metric_residual(forms)
    if err > 1e-12 * max(1.0, g12.max_abs() * forms.ginv[1][0].max_abs()):
        raise ArithmeticError(f"inverse metric check failed ({err:.3g})")
    return forms


def inverse_metric_residual(forms: FundamentalForms) -> float:
    """Max deviation of ``[[g11, g21], [g12, g22]] @ [[g^11, g^21], [g^12, g^22]]`` from 1."""
    G = [[forms.g11, forms.g21], [forms.g12, forms.g22]]
    Gi = [[forms.ginv[0][0], forms.ginv[1][0]], [forms.ginv[0][1], forms.ginv[1][1]]]
    worst = 0.0
    for r in range(2):
        for s in range(2):
            entry = G[r][0] * Gi[0][s] + G[r][1] * Gi[1][s]
            if r == s:
                entry = entry - 1
            worst = max(worst, entry.max_abs())
    return worst


def susy_curvature(c: FrameCoefficients) -> Superfield:
    """Gaussian curvature ``4 Q+ Q- e^{-2 phi} + H^2``.

    The mean curvature is the field ``H`` itself.
    """
    return 4 * c.Qplus * c.Qminus * exp(-2 * c.phi) + c.H * c.H


def christoffel_first_kind(c: FrameCoefficients) -> dict:
    """``G_ijk = G_ij^l g_lk`` for all index triples, keyed ``(i, j, k)``."""
    g12 = 0.5 * exp(c.phi)
    g = {(1, 1): None, (1, 2): g12, (2, 1): -g12, (2, 2): None}
    out = {}
    for i in (1, 2):
        for j in (1, 2):
            for k in (1, 2):
                terms = [c.gamma(i, j, l) * g[(l, k)] for l in (1, 2) if g[(l, k)] is not None]
                out[(i, j, k)] = _sum(terms)
    for k in (1, 2):
        if (out[(1, 2, k)] + out[(2, 1, k)]).max_abs() > 1e-12 * max(1.0, out[(1, 2, k)].max_abs()):
            raise ArithmeticError("first-kind symbols fail antisymmetry")
    return out


# -- immersion-level checks ------------------------------------------------
_DS = {1: d_plus, 2: d_minus}


def _vec(F: SuperVector3, op) -> SuperVector3:
    return F.map(op)


def immersion_checks(F: SuperVector3, N: SuperVector3, phi: Superfield, f: Superfield) -> dict:
    """Residuals of the normalization conditions and the extracted products
    ``<D+^2 F, N> = Q+ f``, ``<D- D+ F, N> = e^phi H f / 2``, ``<D-^2 F, N> = Q- f``."""
    DF = {1: _vec(F, d_plus), 2: _vec(F, d_minus)}
    g12 = 0.5 * exp(phi)
    g = {(1, 1): None, (1, 2): g12, (2, 1): -g12, (2, 2): None}
    residuals = {}
    for i in (1, 2):
        for j in (1, 2):
            val = super_dot(DF[i], DF[j])
            if g[(i, j)] is not None:
                val = val - g[(i, j)] * f
            residuals[f"<D{i}F,D{j}F>-g{i}{j}f"] = val
        residuals[f"<D{i}F,N>"] = super_dot(DF[i], N)
    residuals["<N,N>-1"] = super_dot(N, N) - 1
    products = {
        "Q+f": super_dot(_vec(DF[1], d_plus), N),
        "e^phi H f/2": super_dot(_vec(DF[1], d_minus), N),
        "Q-f": super_dot(_vec(DF[2], d_minus), N),
    }
    return {"residuals": residuals, "products": products}


def normalize_normal(N: SuperVector3) -> SuperVector3:
    """``N / sqrt(<N, N>)``; the squared norm must have an invertible body."""
    nn = super_dot(N, N)
    scale = power(nn, -0.5)
    return N.map(lambda c: scale * c)


class NotApplicable:
    """Marker for checks that need data a catalog entry does not carry."""

    def __init__(self, reason: str):
        self.reason = reason

    def __repr__(self):
        return f"NotApplicable({self.reason!r})"

    def __bool__(self):
        return False


def decomposition_residual(F, N, c: FrameCoefficients) -> dict | NotApplicable:
    """Residuals of the second-order decomposition of ``F`` and ``N`` and the
    constraints on ``f``.  Returns :class:`NotApplicable` without an immersion."""
    if F is None or N is None:
        return NotApplicable("no immersion F, N supplied")
    forms = fundamental_forms(c)
    b = {(1, 1): forms.b11, (1, 2): forms.b12, (2, 1): forms.b21, (2, 2): forms.b22}
    DF = {k: _vec(F, _DS[k]) for k in (1, 2)}
    out = {}
    for i in (1, 2):
        for j in (1, 2):
            lhs = _vec(DF[i], _DS[j])
            rhs = [
                c.gamma(i, j, 1) * DF[1].x + c.gamma(i, j, 2) * DF[2].x + b[(i, j)] * c.f * N.x,
                c.gamma(i, j, 1) * DF[1].y + c.gamma(i, j, 2) * DF[2].y + b[(i, j)] * c.f * N.y,
                c.gamma(i, j, 1) * DF[1].z + c.gamma(i, j, 2) * DF[2].z + b[(i, j)] * c.f * N.z,
            ]
            out[f"D{j}D{i}F"] = max((l - r).max_abs() for l, r in zip(lhs, rhs))
    for i in (1, 2):
        DN = _vec(N, _DS[i])
        for a, fk1, fk2 in zip(DN, DF[1], DF[2]):
            res = a - forms.bmixed[0][i - 1] * fk1 - forms.bmixed[1][i - 1] * fk2
            key = f"D{i}N"
            out[key] = max(out.get(key, 0.0), res.max_abs())
    out.update({k: v.max_abs() for k, v in f_constraints(c).items()})
    return out


def f_constraints(c: FrameCoefficients) -> dict:
    """``D_k f - (G_1k^1 + G_2k^2 - D_k phi) f`` and the compatibility term."""
    out = {}
    for k in (1, 2):
        D = _DS[k]
        out[f"Df{k}"] = D(c.f) - (c.gamma(1, k, 1) + c.gamma(2, k, 2) - D(c.phi)) * c.f
    comp = (
        d_minus(c.gamma(1, 1, 1)) + d_minus(c.gamma(2, 1, 2))
        + d_plus(c.gamma(1, 2, 1)) + d_plus(c.gamma(2, 2, 2))
    ) * c.f
    out["DDf"] = comp
    return out

