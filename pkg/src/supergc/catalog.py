"""Invariant-solution families and a verification driver.

Families are built pointwise: every builder takes parameters and a base
point and returns jets there.  Fermionic constants are given generators
``xi1, xi2, ...`` in declaration order; the bodiless function ``f`` uses the
generators after them (bound as ``soul`` in expressions, and ``soul2`` for a
sum of two such pairs when the algebra is large enough).  A fermionic
parameter's value is a complex multiplier of its generator (default 1), so
setting it to 0 removes the constant.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import superfield as sf
from .classical import ClassicalData, classical_curvatures, classical_gc_residuals
from .errors import ParameterError, ParityError
from .geometry import (
    FrameCoefficients,
    assemble_frames,
    f_constraints,
    gc_residuals,
    susy_curvature,
    zcc_residual,
)
from .grassmann import GrassmannAlgebra, GrassmannElement, parity
from .jets import BasePoint, Jet, compose_univariate, jet_fun
from .odes import TaylorFn, from_expression, jet_series, lift_ode, lift_v
from .superfield import EVEN, ODD, SuperContext, Superfield

DEFAULT_GENERATORS = 8
DEFAULT_ORDER = 4
DEFAULT_TOL = 1e-10


# -- schemas -------------------------------------------------------------------
@dataclass(frozen=True)
class FamilySchema:
    name: str
    kind: str  # "susy" or "classical"
    bosonic: dict
    fermionic: tuple = ()
    functions: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    xplus_box: tuple = (-1.0, 1.0)
    xminus_box: tuple = (-1.0, 1.0)
    scan: tuple = ()

    def generators_needed(self, double_soul: bool = False) -> int:
        return len(self.fermionic) + (4 if double_soul else 2)


SCHEMAS = {
    "L39": FamilySchema(
        "L39", "susy",
        bosonic={"eps": 1, "a": 2, "b1": 0.7, "b2": -0.4, "b3": 1.3, "b4": 0.9},
        fermionic=("S0p", "c0", "a0", "a1", "a2", "T0p"),
        functions={"h0": "c0*S0p", "phi1": "0", "psi": "soul"},
        flags={"l1_reading": "a2"},
        scan=("b1", "b2", "b3", "b4", "S0p", "c0", "a0", "a1", "a2", "T0p"),
    ),
    "L27prime": FamilySchema(
        "L27prime", "susy",
        bosonic={"eps": 1, "a": 0.5, "B0p": 1, "B0m": 2, "B1p": 0, "B1m": 0, "k0": 0, "psi0": 1},
        fermionic=("S0p",),
        functions={"phi0": "0"},
        flags={"psi_seed": "soul"},
        scan=("a", "B0p", "B0m", "B1p", "B1m", "k0", "S0p"),
    ),
    "L26doubleprime": FamilySchema(
        "L26doubleprime", "susy",
        bosonic={"a": 2, "l1": 0.6, "l2": -1.1, "rho0": 1, "rho1": 0},
        fermionic=("l0", "R0p", "R0m", "T0m"),
        functions={"A": "1", "G": "0", "rho": "rho0 + rho1*s", "psi": "soul"},
        xplus_box=(0.5, 2.0),
        scan=("l1", "l2", "rho0", "rho1", "l0", "R0p", "R0m", "T0m"),
    ),
    "classical-L12prime": FamilySchema(
        "classical-L12prime", "classical",
        bosonic={"k0": 1, "l0": -2, "a": 1},
        scan=("k0", "l0", "a"),
    ),
    "classical-L17prime": FamilySchema(
        "classical-L17prime", "classical",
        bosonic={"eps": 1, "a": 1, "k0": 1, "v0": 1, "dv0": 0},
        scan=("k0", "a", "eps"),
    ),
}

ALIASES = {
    "l39": "L39", "quan2": "L39",
    "l27prime": "L27prime", "l27'": "L27prime",
    "l26doubleprime": "L26doubleprime", "l26''": "L26doubleprime", "quan1": "L26doubleprime",
    "classical-l12prime": "classical-L12prime", "classi": "classical-L12prime",
    "classical-l17prime": "classical-L17prime",
}


def schema(name: str) -> FamilySchema:
    key = name if name in SCHEMAS else ALIASES.get(name.lower())
    if key is None:
        raise ParameterError(f"unknown family {name!r}; known: {sorted(SCHEMAS)}")
    return SCHEMAS[key]


# -- parameter resolution ------------------------------------------------------
class Resolved:
    """Parameters merged with defaults, with odd constants materialized."""

    def __init__(self, sch: FamilySchema, params: dict | None, n_xi: int | None):
        params = dict(params or {})
        known = set(sch.bosonic) | set(sch.fermionic) | set(sch.functions) | set(sch.flags)
        unknown = set(params) - known
        if unknown:
            raise ParameterError(f"unknown parameters for {sch.name}: {sorted(unknown)}")
        self.schema = sch
        self.flags = {**sch.flags, **{k: params[k] for k in sch.flags if k in params}}
        double = self.flags.get("psi_seed") == "soul2"
        need = sch.generators_needed(double)
        if n_xi is None:
            n_xi = max(DEFAULT_GENERATORS, need)
        if n_xi < need:
            raise ParameterError(f"{sch.name} needs at least {need} generators, got {n_xi}")
        self.n_xi = n_xi
        self.alg = GrassmannAlgebra(n_xi)
        self.bosonic = {}
        for k, v in sch.bosonic.items():
            v = params.get(k, v)
            if isinstance(v, GrassmannElement):
                if parity(v) != EVEN:
                    raise ParityError(f"bosonic parameter {k} must be even")
            else:
                v = complex(v)
                v = v.real if v.imag == 0 else v
            self.bosonic[k] = v
        self.odd = {}
        for idx, k in enumerate(sch.fermionic, start=1):
            v = params.get(k, 1.0)
            if isinstance(v, GrassmannElement):
                if not v.is_zero() and parity(v) != ODD:
                    raise ParityError(f"fermionic parameter {k} must be odd")
                self.odd[k] = v
            else:
                self.odd[k] = self.alg.xi(idx, complex(v))
        m = len(sch.fermionic)
        self.soul = self.alg.xi(m + 1) * self.alg.xi(m + 2)
        self.soul2 = None
        if n_xi >= m + 4:
            self.soul2 = self.soul + self.alg.xi(m + 3) * self.alg.xi(m + 4)
        self.functions = {k: params.get(k, v) for k, v in sch.functions.items()}

    def __getitem__(self, k):
        if k in self.bosonic:
            return self.bosonic[k]
        return self.odd[k]

    def env(self) -> dict:
        env = {**self.bosonic, **self.odd, "soul": self.soul}
        if self.soul2 is not None:
            env["soul2"] = self.soul2
        return env

    def function(self, name: str, order: int, center: complex) -> TaylorFn:
        spec = self.functions[name]
        if isinstance(spec, TaylorFn):
            if abs(spec.center - center) > 1e-14:
                raise ParameterError(f"{name} is centred at {spec.center}, need {center}")
            return spec
        if callable(spec):
            return spec(self, order, center)
        if isinstance(spec, (int, float, complex, GrassmannElement)):
            return TaylorFn.constant(spec, order, center)
        return from_expression(str(spec), self.env(), self.n_xi, order, center)


def _real(v) -> float:
    if isinstance(v, complex):
        if v.imag:
            raise ParameterError(f"expected a real value, got {v}")
        return v.real
    return float(v)


# -- SUSY families -------------------------------------------------------------
def _ctx(P: Resolved, at: BasePoint, order: int) -> SuperContext:
    return SuperContext(P.n_xi, order, at)


def _odd(ctx, P: Resolved, name: str) -> Superfield:
    return ctx.lift(P.odd[name])


def build_L39(p: dict | None, at: BasePoint, order: int = DEFAULT_ORDER, n_xi: int | None = None) -> FrameCoefficients:
    P = p if isinstance(p, Resolved) else Resolved(SCHEMAS["L39"], p, n_xi)
    ctx = _ctx(P, at, order)
    eps, a = P["eps"], P["a"]
    if eps not in (1, -1, 1.0, -1.0):
        raise ParameterError("eps must be +1 or -1")
    if a == 0:
        raise ParameterError("a must be non-zero")
    if abs(a * eps - 1) < 1e-14:
        raise ParameterError("pole: a*eps = 1 makes eps*l0/(a*eps - 1) undefined")
    xp, xm, tt = ctx.xp(), ctx.xm(), ctx.thp() * ctx.thm()
    s = xm - eps * xp
    s0 = at.xminus - eps * at.xplus
    S0, T0 = _odd(ctx, P, "S0p"), _odd(ctx, P, "T0p")
    l0 = _odd(ctx, P, "a0") * S0
    reading = P.flags.get("l1_reading", "a2")
    if reading not in ("a1", "a2"):
        raise ParameterError("l1_reading must be 'a1' or 'a2'")
    l1 = _odd(ctx, P, reading) * S0
    l2 = _odd(ctx, P, "a2") * S0
    h0f = P.function("h0", order, s0)
    h0 = h0f.compose(ctx, s)
    h0s = h0f.derivative().compose(ctx, s)
    phi1 = P.function("phi1", order, s0).compose(ctx, s)
    psi = P.function("psi", order, s0).compose(ctx, s)
    es, e2s = sf.exp(s), sf.exp(2 * s)
    eax, emax = sf.exp(a * xp), sf.exp(-a * xp)
    c = eps / (a * eps - 1)
    e1 = sf.exp((1 - a * eps) * s)
    I = 1j
    H = emax * (h0 + tt * (2 * I * l0 * es))
    Qp = eax * (
        l0 * e2s + l1 * es
        + tt * (0.5 * I * es * (a * h0 + eps * h0s) + l0 * e2s * phi1 + l1 * es * phi1)
    )
    Qm = eax * (
        c * l0 + l2 * e1
        + tt * (-0.5 * I * es * h0s + c * l0 * phi1 + l2 * e1 * phi1)
    )
    return FrameCoefficients(
        phi=2 * a * xp + s + tt * phi1,
        H=H, Qplus=Qp, Qminus=Qm,
        Rplus=P["b2"] * S0, Rminus=P["b1"] * S0,
        Splus=S0, Sminus=S0,
        Tplus=P["b4"] * S0, Tminus=P["b3"] * T0,
        f=psi,
    )


def printed_K_L39(P: Resolved, at: BasePoint, order: int = DEFAULT_ORDER) -> Superfield:
    ctx = _ctx(P, at, order)
    eps, a = P["eps"], P["a"]
    xp, xm, tt = ctx.xp(), ctx.xm(), ctx.thp() * ctx.thm()
    s = xm - eps * xp
    s0 = at.xminus - eps * at.xplus
    S0 = _odd(ctx, P, "S0p")
    l0 = _odd(ctx, P, "a0") * S0
    l1 = _odd(ctx, P, P.flags.get("l1_reading", "a2")) * S0
    l2 = _odd(ctx, P, "a2") * S0
    h0f = P.function("h0", order, s0)
    h0, h0s = h0f.compose(ctx, s), h0f.derivative().compose(ctx, s)
    phi1 = P.function("phi1", order, s0).compose(ctx, s)
    es, e2s, em2s = sf.exp(s), sf.exp(2 * s), sf.exp(-2 * s)
    c = eps / (a * eps - 1)
    e1 = sf.exp((1 - a * eps) * s)
    I = 1j
    qp0 = l0 * e2s + l1 * es
    qm0 = c * l0 + l2 * e1
    qp3 = 0.5 * I * es * (a * h0 + eps * h0s) + l0 * e2s * phi1 + l1 * es * phi1
    qm3 = -0.5 * I * es * h0s + c * l0 * phi1 + l2 * e1 * phi1
    inner = (
        h0 * h0 + tt * (4 * I * h0 * l0 * es)
        + 4 * qp0 * qm0 * em2s * (1 - tt * (2 * phi1))
        + 4 * tt * qp0 * qm3 * em2s
        + 4 * tt * qm0 * qp3 * em2s
    )
    return sf.exp(-2 * a * xp) * inner


def _psi_L27(P: Resolved, order: int, center: complex) -> TaylorFn:
    """``psi`` lifted from ``psi' = (eps B0-/B0+ + phi0') psi`` seeded at the point."""
    eps, B0p, B0m = P["eps"], P["B0p"], P["B0m"]
    if B0p == 0:
        from .errors import SingularBody

        raise SingularBody("B0+ must be invertible")
    seed_name = P.flags.get("psi_seed", "soul")
    seed = P.soul2 if seed_name == "soul2" else P.soul
    if seed is None:
        raise ParameterError("psi_seed 'soul2' needs four spare generators")
    seed = seed * P["psi0"]
    dphi0 = P.function("phi0", order + 1, center).derivative()
    series = [complex(c.body()) if isinstance(c, GrassmannElement) else complex(c) for c in dphi0.coeffs]
    base = BasePoint(center, 0)
    rate_const = eps * B0m / B0p

    def rhs(t, ys):
        rate = compose_univariate(series, t) + rate_const
        return [rate * ys[0]]

    (g,) = lift_ode(rhs, [1.0], center, order)
    coeffs = tuple(seed * complex(c) for c in jet_series(g))
    del base
    return TaylorFn(complex(center), coeffs)


def build_L27prime(p: dict | None, at: BasePoint, order: int = DEFAULT_ORDER, n_xi: int | None = None) -> FrameCoefficients:
    P = p if isinstance(p, Resolved) else Resolved(SCHEMAS["L27prime"], p, n_xi)
    ctx = _ctx(P, at, order)
    eps = P["eps"]
    if eps not in (1, -1, 1.0, -1.0):
        raise ParameterError("eps must be +1 or -1")
    B0p, B0m, B1p, B1m, k0 = (P[k] for k in ("B0p", "B0m", "B1p", "B1m", "k0"))
    xp, xm, tt = ctx.xp(), ctx.xm(), ctx.thp() * ctx.thm()
    S0 = _odd(ctx, P, "S0p")
    phi0 = P.function("phi0", order, at.xminus).compose(ctx, xm)
    psi = _psi_L27(P, order, at.xminus).compose(ctx, xm)
    phi1 = (eps / B0p**2) * (B0m * B1p - B0p * B1m) * xm + k0
    emphi0 = sf.exp(-phi0)
    h0 = 2j * eps * (B1p - B0p * phi1) * emphi0 * psi
    h1 = 2j * eps * B0m * emphi0 * psi
    ex = sf.exp(eps * xp)
    zero = ctx.zero()
    return FrameCoefficients(
        phi=phi0 + phi1 * tt,
        H=ex * (h0 + h1 * tt),
        Qplus=ex * (B0p + B1p * tt) * psi,
        Qminus=ex * (B0m + B1m * tt) * psi,
        Rplus=zero, Rminus=zero,
        Splus=S0, Sminus=P["a"] * S0,
        Tplus=zero, Tminus=zero,
        f=sf.exp(-2 * eps * xp) * psi,
    )


def printed_K_L27prime(P: Resolved, at: BasePoint, order: int = DEFAULT_ORDER) -> Superfield:
    ctx = _ctx(P, at, order)
    eps = P["eps"]
    B0p, B0m, B1p, B1m, k0 = (P[k] for k in ("B0p", "B0m", "B1p", "B1m", "k0"))
    xp, xm, tt = ctx.xp(), ctx.xm(), ctx.thp() * ctx.thm()
    phi0 = P.function("phi0", order, at.xminus).compose(ctx, xm)
    psi = _psi_L27(P, order, at.xminus).compose(ctx, xm)
    phi1 = (eps / B0p**2) * (B0m * B1p - B0p * B1m) * xm + k0
    h0 = 2j * eps * (B1p - B0p * phi1) * sf.exp(-phi0) * psi
    h1 = 2j * eps * B0m * sf.exp(-phi0) * psi
    first = psi * psi * (B0p * B0m + (B0p * B1m + B0m * B1p) * tt)
    first = first / (sf.exp(2 * phi0) * (1 + 2 * phi1 * tt))
    return sf.exp(2 * eps * xp) * (first + h0 * h0 + 2 * h0 * h1 * tt)


def build_L26doubleprime(p: dict | None, at: BasePoint, order: int = DEFAULT_ORDER, n_xi: int | None = None) -> FrameCoefficients:
    P = p if isinstance(p, Resolved) else Resolved(SCHEMAS["L26doubleprime"], p, n_xi)
    ctx = _ctx(P, at, order)
    a = P["a"]
    if a == 0 or a == 0.5:
        raise ParameterError("a must differ from 0 and 1/2")
    xp, xm, tt = ctx.xp(), ctx.xm(), ctx.thp() * ctx.thm()
    x = lambda r: sf.power(xp, r)  # noqa: E731
    l0, R0p, R0m, T0m = (_odd(ctx, P, k) for k in ("l0", "R0p", "R0m", "T0m"))
    B = l0 * R0p * R0m * T0m
    c0 = at.xminus
    A = P.function("A", order, c0).compose(ctx, xm)
    G = P.function("G", order, c0).compose(ctx, xm)
    rhof = P.function("rho", order, c0)
    rho, drho = rhof.compose(ctx, xm), rhof.derivative().compose(ctx, xm)
    psi = P.function("psi", order, c0).compose(ctx, xm)
    corr = 1 + x(-0.5) * tt * G
    zero = ctx.zero()
    return FrameCoefficients(
        phi=sf.log(A * x(-a) * corr),
        H=2j * B * x((a - 2) / 2) * drho * tt,
        Qplus=B * A * x(-(a + 2) / 2) * corr * rho,
        Qminus=(2 / a) * B * x(-a / 2) * corr,
        Rplus=x(-0.5) * P["l1"] * R0p,
        Rminus=x(-1) * P["l2"] * R0m,
        Splus=T0m, Sminus=zero, Tplus=zero, Tminus=T0m,
        f=x(0.5) * psi,
    )


def printed_K_L26doubleprime(P: Resolved, at: BasePoint, order: int = DEFAULT_ORDER) -> Superfield:
    ctx = _ctx(P, at, order)
    a = P["a"]
    xp, xm, tt = ctx.xp(), ctx.xm(), ctx.thp() * ctx.thm()
    l0, R0p, R0m, T0m = (_odd(ctx, P, k) for k in ("l0", "R0p", "R0m", "T0m"))
    B = l0 * R0p * R0m * T0m
    A = P.function("A", order, at.xminus).compose(ctx, xm)
    G = P.function("G", order, at.xminus).compose(ctx, xm)
    rho = P.function("rho", order, at.xminus).compose(ctx, xm)
    return (8 / a) * B / A * sf.power(xp, a - 1) * rho * (1 + sf.power(xp, -0.5) * tt * G)


# -- classical families --------------------------------------------------------
def _classical_order(order: int) -> int:
    if order < 2:
        raise ParameterError("classical checks need jet order >= 2")
    return order


def build_classical_L12prime(p: dict | None, at: BasePoint, order: int = DEFAULT_ORDER) -> ClassicalData:
    P = p if isinstance(p, Resolved) else Resolved(SCHEMAS["classical-L12prime"], p, None)
    order = _classical_order(order)
    k0, l0, a = P["k0"], P["l0"], P["a"]
    if l0 == 0:
        raise ParameterError("l0 = 0 leaves U undefined")
    z = Jet.coordinate("plus", order, at)
    zb = Jet.coordinate("minus", order, at)
    w = z + zb
    return ClassicalData(
        u=cmath.log(-2 * k0 / l0) + 2 * a * w,
        H=l0 * jet_fun(-a * w, "exp"),
        Q=k0 * jet_fun(a * w, "exp"),
        Qbar=k0 * jet_fun(a * w, "exp"),
    )


def build_classical_L17prime(p: dict | None, at: BasePoint, order: int = DEFAULT_ORDER) -> ClassicalData:
    """``v`` is seeded at the symmetry variable of ``at`` and lifted from its ODE."""
    P = p if isinstance(p, Resolved) else Resolved(SCHEMAS["classical-L17prime"], p, None)
    order = _classical_order(order)
    eps, a, k0, v0, dv0 = (P[k] for k in ("eps", "a", "k0", "v0", "dv0"))
    if _real(v0) <= 0:
        raise ParameterError("v seed must be positive")
    z = Jet.coordinate("plus", order, at)
    zb = Jet.coordinate("minus", order, at)
    xi = zb - eps * z
    v_jet, _ = lift_v(k0, a, v0, dv0, xi.value, order)
    v = compose_univariate(jet_series(v_jet), xi)
    return ClassicalData(
        u=2 * a * z + jet_fun(v, "log"),
        H=k0 * jet_fun(v, "pow", -0.5) * jet_fun((a / 2) * (zb - 3 * z), "exp"),
        Q=0.5 * k0 * jet_fun(v, "pow", 0.5) * jet_fun((a / 2) * (z + zb), "exp"),
        Qbar=0.5 * k0 * jet_fun(v, "pow", 0.5) * jet_fun((a / 2) * (z + zb), "exp"),
    )


def ode_residual_L17prime(p: dict | None, xi0: float = 0.0, order: int = 6) -> float:
    """Re-substitute the lifted ``v`` into its ODE; max coefficient at order ``order - 2``."""
    P = p if isinstance(p, Resolved) else Resolved(SCHEMAS["classical-L17prime"], p, None)
    v, _ = lift_v(P["k0"], P["a"], P["v0"], P["dv0"], xi0, order)
    from .jets import jet_partial

    dv = jet_partial(v, "plus")
    ddv = jet_partial(dv, "plus")
    d = order - 2
    t = Jet.coordinate("plus", d, v.base)
    vv, dvv = v.truncate(d), dv.truncate(d)
    res = ddv - (dvv * dvv / vv + (P["k0"] ** 2) * vv * jet_fun(P["a"] * t, "exp"))
    return res.max_abs()


def ode_residual_L27prime(p: dict | None, xminus0: float = 0.0, order: int = 6) -> float:
    """Re-substitute the lifted ``psi`` into ``psi' = (eps B0-/B0+ + phi0') psi``."""
    P = p if isinstance(p, Resolved) else Resolved(SCHEMAS["L27prime"], p, None)
    psi = _psi_L27(P, order, xminus0)
    dpsi = psi.derivative().coeffs
    dphi0 = P.function("phi0", order, xminus0).derivative().coeffs
    rate = [complex(c.body()) if isinstance(c, GrassmannElement) else complex(c) for c in dphi0]
    rate[0] += P["eps"] * P["B0m"] / P["B0p"]
    worst = 0.0
    for n in range(order - 1):
        res = dpsi[n] - sum((psi.coeffs[n - k] * rate[k] for k in range(n + 1)), P.alg.zero())
        worst = max(worst, res.max_norm())
    return worst


BUILDERS = {
    "L39": build_L39,
    "L27prime": build_L27prime,
    "L26doubleprime": build_L26doubleprime,
    "classical-L12prime": build_classical_L12prime,
    "classical-L17prime": build_classical_L17prime,
}

PRINTED_K = {
    "L39": printed_K_L39,
    "L27prime": printed_K_L27prime,
    "L26doubleprime": printed_K_L26doubleprime,
}


# -- reduced ansatz ------------------------------------------------------------
@dataclass
class FieldSlots:
    """``offset + prefactor * (F0 + eta F1 + sigma F2 + eta sigma F3)``."""

    slots: Sequence = (0, 0, 0, 0)
    prefactor: str = "1"
    offset: str = "0"


@dataclass
class ReducedAnsatz:
    xi: str
    fields: dict
    eta: str = "thp"
    sigma: str = "thm"
    params: dict = field(default_factory=dict)


FIELD_PARITY = {
    "phi": EVEN, "H": EVEN, "Qplus": EVEN, "Qminus": EVEN, "f": EVEN,
    "Rplus": ODD, "Rminus": ODD, "Splus": ODD, "Sminus": ODD, "Tplus": ODD, "Tminus": ODD,
}


def _slot_fn(spec, env, n_xi, order, center) -> TaylorFn:
    if isinstance(spec, TaylorFn):
        return spec
    if isinstance(spec, (int, float, complex, GrassmannElement)):
        return TaylorFn.constant(spec, order, center)
    return from_expression(str(spec), env, n_xi, order, center)


def _taylor_parity(fn: TaylorFn) -> str | None:
    seen = set()
    for c in fn.coeffs:
        if isinstance(c, GrassmannElement):
            if not c.is_zero():
                seen.add(parity(c))
        elif c != 0:
            seen.add(EVEN)
    if len(seen) > 1 or "mixed" in seen:
        raise ParityError("slot function has mixed parity")
    return seen.pop() if seen else None


def build_reduced_ansatz(spec: ReducedAnsatz, at: BasePoint, order: int = DEFAULT_ORDER, n_xi: int = DEFAULT_GENERATORS) -> FrameCoefficients:
    from .expr import eval_expr

    ctx = SuperContext(n_xi, order, at)
    env = dict(spec.params)
    s = eval_expr(spec.xi, env, ctx)
    if s.parity != EVEN or any(m for m in s.value.terms):
        raise ParityError("the bosonic symmetry variable must be an even, theta-free function")
    center = s.body_jet().value
    eta = eval_expr(spec.eta, env, ctx)
    sigma = eval_expr(spec.sigma, env, ctx)
    if eta.parity != ODD or sigma.parity != ODD:
        raise ParityError("eta and sigma must be odd")
    factors = [ctx.const(1), eta, sigma, eta * sigma]
    out = {}
    for name, par in FIELD_PARITY.items():
        slots = spec.fields.get(name, FieldSlots())
        if isinstance(slots, (list, tuple)):
            slots = FieldSlots(tuple(slots))
        total = ctx.zero()
        for k, slot in enumerate(slots.slots):
            fn = _slot_fn(slot, env, n_xi, order, center)
            want = par if k in (0, 3) else (ODD if par == EVEN else EVEN)
            got = _taylor_parity(fn)
            if got is not None and got != want:
                raise ParityError(f"slot {k} of {name} must be {want}, got {got}")
            total = total + factors[k] * fn.compose(ctx, s)
        value = eval_expr(slots.prefactor, env, ctx) * total
        value = eval_expr(slots.offset, env, ctx) + value
        out[name] = value
    return FrameCoefficients(**out)


# -- verification --------------------------------------------------------------
@dataclass
class CheckResult:
    name: str
    max_residual: float
    worst_monomial: str | None
    worst_jet_index: tuple | None
    worst_point: tuple | None
    passed: bool
    informational: bool = False

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "max_residual": self.max_residual,
            "worst_monomial": self.worst_monomial,
            "worst_jet_index": list(self.worst_jet_index) if self.worst_jet_index else None,
            "worst_point": list(self.worst_point) if self.worst_point else None,
            "pass": self.passed,
            "informational": self.informational,
        }


@dataclass
class Discrepancy:
    family: str
    equation: str
    max_residual: float
    leading_monomial: str | None
    jet_index: tuple | None
    point: tuple | None
    repair: dict | None = None
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "kind": "DISCREPANCY",
            "family": self.family,
            "equation": self.equation,
            "max_residual": self.max_residual,
            "leading_monomial": self.leading_monomial,
            "jet_index": list(self.jet_index) if self.jet_index else None,
            "point": list(self.point) if self.point else None,
            "repair": self.repair,
            "note": self.note,
        }


@dataclass
class VerificationReport:
    family: str
    params: dict
    checks: list
    discrepancies: list
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.informational)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def failing(self) -> list:
        return [c.name for c in self.checks if not c.passed and not c.informational]

    def as_dict(self) -> dict:
        return {
            "family": self.family,
            "pass": self.passed,
            "checks": [c.as_dict() for c in self.checks],
            "discrepancies": [d.as_dict() for d in self.discrepancies],
        }


class _Acc:
    """Running maximum of a residual over points."""

    def __init__(self, name, tol, informational=False):
        self.name, self.tol, self.info = name, tol, informational
        self.best = (0.0, None, None, None)

    def add_field(self, s: Superfield, point):
        mono, idx, val = s.worst_term()
        if val > self.best[0] or self.best[3] is None:
            if val >= self.best[0]:
                self.best = (val, mono, idx, point)

    def add_value(self, val: float, point, mono=None):
        if val >= self.best[0]:
            self.best = (float(val), mono, None, point)

    def result(self, scale=1.0) -> CheckResult:
        val, mono, idx, pt = self.best
        return CheckResult(self.name, val, mono, idx, pt, val < self.tol * max(1.0, scale), self.info)


def _point_tuple(at: BasePoint):
    return (at.xplus.real, at.xminus.real) if not (at.xplus.imag or at.xminus.imag) else (
        [at.xplus.real, at.xplus.imag], [at.xminus.real, at.xminus.imag])


def sample_points(family: str, n: int, seed: int = 0) -> list:
    sch = schema(family)
    rng = np.random.default_rng(seed)
    xs = rng.uniform(*sch.xplus_box, size=n)
    ys = rng.uniform(*sch.xminus_box, size=n)
    return [BasePoint(x, y) for x, y in zip(xs, ys)]


def _input_scale(c: FrameCoefficients) -> float:
    return max(v.max_abs() for _, v in c.items())


def verify(
    family: str,
    p: dict | None = None,
    points: Sequence[BasePoint] | None = None,
    tol: float = DEFAULT_TOL,
    order: int = DEFAULT_ORDER,
    n_xi: int | None = None,
    repair_scan: bool = True,
) -> VerificationReport:
    """Check a catalog family at the given points and build a report.

    Failing equations are never silently accepted: each produces a
    :class:`Discrepancy` naming the equation and the residual's leading
    monomial, plus a one-parameter repair when the scan finds one.
    """
    sch = schema(family)
    if points is None:
        points = sample_points(sch.name, 10)
    if not points:
        raise ParameterError("verify needs at least one point")
    t0 = time.perf_counter()
    if sch.kind == "classical":
        report = _verify_classical(sch, p, points, tol, order)
    else:
        report = _verify_susy(sch, p, points, tol, order, n_xi, repair_scan)
    report.seconds = time.perf_counter() - t0
    return report


def _verify_susy(sch, p, points, tol, order, n_xi, repair_scan) -> VerificationReport:
    P = Resolved(sch, p, n_xi)
    build = BUILDERS[sch.name]
    accs = {k: _Acc(f"gc_{k}", tol) for k in ("i", "ii", "iii", "iv", "v", "vi")}
    accs["zcc"] = _Acc("zcc", tol)
    accs["curvature_vs_printed"] = _Acc("curvature_vs_printed", tol)
    accs["f_constraint_Df"] = _Acc("f_constraint_Df", tol, informational=True)
    extra: dict = {}
    scale = 1.0
    for at in points:
        pt = _point_tuple(at)
        c = build(P, at, order)
        scale = max(scale, _input_scale(c))
        for k, r in gc_residuals(c).items():
            accs[k].add_field(r, pt)
        for row in zcc_residual(assemble_frames(c)):
            for entry in row:
                accs["zcc"].add_field(entry, pt)
        K = susy_curvature(c)
        Kp = PRINTED_K[sch.name](P, at, order)
        accs["curvature_vs_printed"].add_field(K - Kp, pt)
        fc = f_constraints(c)
        accs["f_constraint_Df"].add_field(fc["Df1"], pt)
        accs["f_constraint_Df"].add_field(fc["Df2"], pt)
        _family_extras(sch.name, c, K, pt, extra, tol)
    checks = [a.result(scale) for a in accs.values()] + list(extra.values())
    discrepancies = []
    for chk in checks:
        if chk.passed or chk.informational:
            continue
        d = Discrepancy(
            sch.name, chk.name, chk.max_residual, chk.worst_monomial,
            chk.worst_jet_index, chk.worst_point,
        )
        if chk.name.startswith("gc_") and repair_scan:
            d.repair = _scan_repair(sch, P, chk.name[3:], points, tol)
        if chk.name == "curvature_vs_printed":
            d.note = "computed 4 Q+ Q- exp(-2 phi) + H^2 differs from the printed curvature"
        discrepancies.append(d)
    params = {**P.bosonic, **{k: str(v) for k, v in P.odd.items()}, **P.flags}
    params.update({k: str(v) for k, v in P.functions.items()})
    return VerificationReport(sch.name, params, checks, discrepancies)


def _family_extras(name, c: FrameCoefficients, K: Superfield, pt, extra: dict, tol: float):
    if name == "L26doubleprime":
        acc = extra.setdefault("H_squared", CheckResult("H_squared", 0.0, None, None, pt, True))
        hh = c.H * c.H
        mono, idx, val = hh.worst_term()
        if val > acc.max_residual:
            extra["H_squared"] = CheckResult("H_squared", val, mono, idx, pt, val == 0.0)
    if name == "L27prime":
        # umbilic iff H^2 - K = -4 Q+ Q- e^{-2 phi} vanishes
        um = (4 * c.Qplus * c.Qminus * sf.exp(-2 * c.phi)).max_abs()
        prev = extra.get("umbilic_measure")
        if prev is None or um > prev.max_residual:
            extra["umbilic_measure"] = CheckResult(
                "umbilic_measure", um, None, None, pt, True, informational=True
            )


def _residual_vector(r: Superfield) -> dict:
    return {m: c for m, c in r.value.terms.items()}


def _flatten_pair(a: dict, b: dict):
    keys = sorted(set(a) | set(b))
    size = next(iter((a or b).values())).size if (a or b) else 0
    za = np.zeros(size, dtype=complex)
    va = np.concatenate([a.get(k, za) for k in keys]) if keys else np.zeros(0)
    vb = np.concatenate([b.get(k, za) for k in keys]) if keys else np.zeros(0)
    return va, vb


def _scan_repair(sch, P: Resolved, eq: str, points, tol) -> dict | None:
    """One-parameter repair: fit ``r(p) = r0 + (p - p0) g`` and confirm."""
    build = BUILDERS[sch.name]
    order = 2
    at = points[0]

    def residual(params):
        Q = Resolved(sch, params, P.n_xi)
        return gc_residuals(build(Q, at, order))[eq]

    base_params = _raw_params(P)
    r0 = _residual_vector(residual(base_params))
    found = []
    for name in sch.scan:
        p0 = _scan_value(P, name)
        if p0 is None:
            continue
        trial = dict(base_params)
        trial[name] = p0 + 1.0
        try:
            r1 = _residual_vector(residual(trial))
        except Exception:
            continue
        v0, v1 = _flatten_pair(r0, r1)
        g = v1 - v0
        gg = np.vdot(g, g).real
        if gg < 1e-24:
            continue
        step = -np.vdot(g, v0) / gg
        target = p0 + step
        if abs(target.imag) < 1e-12:
            target = target.real
        trial[name] = target
        try:
            ok, worst = _confirm(sch, trial, eq, points, tol, P.n_xi)
        except Exception:
            continue
        if ok:
            degenerate = bool(name in P.odd and abs(target) < 1e-9)
            found.append({
                "parameter": name, "from": _jsonable(p0), "to": _jsonable(target),
                "residual_after": worst, "degenerate": degenerate,
            })
    if not found:
        return None
    found.sort(key=lambda c: (c["degenerate"], abs(complex(*c["to"]) if isinstance(c["to"], list) else c["to"])))
    best = dict(found[0])
    best["alternatives"] = [c["parameter"] for c in found[1:]]
    return best


def _jsonable(v):
    v = complex(v)
    return v.real if v.imag == 0 else [v.real, v.imag]


def _confirm(sch, params, eq, points, tol, n_xi):
    build = BUILDERS[sch.name]
    Q = Resolved(sch, params, n_xi)
    worst = 0.0
    for at in points[: min(3, len(points))]:
        worst = max(worst, gc_residuals(build(Q, at, 2))[eq].max_abs())
    return worst < tol, worst


def _raw_params(P: Resolved) -> dict:
    out = dict(P.bosonic)
    out.update(P.flags)
    out.update(P.functions)
    m = P.alg
    for idx, k in enumerate(P.schema.fermionic, start=1):
        v = P.odd[k]
        gen_only = set(v.terms) <= {1 << (idx - 1)}
        out[k] = complex(v.coefficient([idx])) if gen_only else v
    del m
    return out


def _scan_value(P: Resolved, name: str):
    if name in P.bosonic:
        v = P.bosonic[name]
        return None if isinstance(v, GrassmannElement) else complex(v)
    if name in P.odd:
        idx = P.schema.fermionic.index(name) + 1
        v = P.odd[name]
        if set(v.terms) <= {1 << (idx - 1)}:
            return complex(v.coefficient([idx]))
    return None


def _verify_classical(sch, p, points, tol, order) -> VerificationReport:
    P = Resolved(sch, p, None)
    build = BUILDERS[sch.name]
    accs = {k: _Acc(k, tol) for k in ("gauss", "codazzi_zbar", "codazzi_z")}
    kacc = _Acc("gaussian_curvature_zero", tol)
    hmin = None
    for at in points:
        pt = _point_tuple(at)
        d = build(P, at, order)
        for k, r in classical_gc_residuals(d).items():
            accs[k].add_value(r.max_abs(), pt)
        curv = classical_curvatures(d)
        kacc.add_value(abs(curv.K), pt)
        hm = abs(curv.Hmean)
        hmin = hm if hmin is None else min(hmin, hm)
    checks = [a.result() for a in accs.values()] + [kacc.result()]
    checks.append(CheckResult("mean_curvature_nonzero", hmin or 0.0, None, None, None, (hmin or 0.0) > 0.1))
    discrepancies = []
    for chk in checks:
        if chk.passed:
            continue
        d = Discrepancy(sch.name, chk.name, chk.max_residual, None, None, chk.worst_point)
        if chk.name in accs:
            d.repair = _scan_repair_classical(sch, P, chk.name, points, tol, order)
        discrepancies.append(d)
    return VerificationReport(sch.name, dict(P.bosonic), checks, discrepancies)


def _scan_repair_classical(sch, P, eq, points, tol, order):
    build = BUILDERS[sch.name]
    base = dict(P.bosonic)

    def res(params, at):
        return classical_gc_residuals(build(Resolved(sch, params, None), at, order))[eq].coeffs

    at = points[0]
    r0 = res(base, at)
    best = None
    for name in sch.scan:
        p0 = complex(base[name])
        trial = dict(base)
        trial[name] = p0 + 1.0
        try:
            g = res(trial, at) - r0
        except Exception:
            continue
        gg = np.vdot(g, g).real
        if gg < 1e-24:
            continue
        target = p0 - np.vdot(g, r0) / gg
        if abs(target.imag) < 1e-12:
            target = target.real
        trial[name] = target
        try:
            worst = max(np.max(np.abs(res(trial, q))) for q in points[:3])
        except Exception:
            continue
        if worst < tol:
            cand = {"parameter": name, "from": _jsonable(p0), "to": _jsonable(target), "residual_after": float(worst)}
            if best is None:
                best = cand
    return best


# -- perturbations -----------------------------------------------------------------
def perturb(c: FrameCoefficients, rng: np.random.Generator, size: float = 0.3) -> FrameCoefficients:
    """Add a random constant multiple of a random monomial of the right
    parity to one coefficient field (``f`` excepted)."""
    names = [n for n in FIELD_PARITY if n != "f"]
    name = names[rng.integers(len(names))]
    target = getattr(c, name)
    alg = target.alg
    want_odd = FIELD_PARITY[name] == ODD
    while True:
        mask = int(rng.integers(1, 1 << alg.n_gen)) if want_odd else int(rng.integers(0, 1 << alg.n_gen))
        if (mask.bit_count() & 1) == want_odd and mask.bit_count() <= 3:
            break
    ring = alg.ring
    coeff = ring.zero()
    coeff[0] = size * (rng.normal() + 1j * rng.normal())
    if coeff.size > 1:
        coeff[1:3] = size * rng.normal(size=2)
    delta = Superfield(GrassmannElement.build(alg, {mask: coeff}), FIELD_PARITY[name])
    return c.replace(**{name: target + delta})
