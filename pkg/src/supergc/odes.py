"""Functions of one symmetry variable, as Taylor series with Grassmann
coefficients, and jet lifting of ODE solutions.

A :class:`TaylorFn` stores ``c_n`` with ``F(s) = sum_n c_n (s - center)^n``.
Composing it with a bivariate jet for ``s = xi(x+, x-)`` gives the
superfield of the component function at a base point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .grassmann import GrassmannAlgebra, GrassmannElement
from .jets import BasePoint, Jet, jet_integrate, layout
from .superfield import SuperContext, Superfield


@dataclass(frozen=True)
class TaylorFn:
    center: complex
    coeffs: tuple  # GrassmannElement over scalars, or complex

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, order: int, center: complex = 0) -> "TaylorFn":
        zero = value * 0 if isinstance(value, GrassmannElement) else 0j
        return cls(complex(center), (value,) + (zero,) * order)

    def derivative(self) -> "TaylorFn":
        cs = self.coeffs
        out = tuple(cs[n] * n for n in range(1, len(cs)))
        if not out:
            out = (cs[0] * 0,)
        return TaylorFn(self.center, out + (cs[0] * 0,))

    def times(self, g) -> "TaylorFn":
        """Multiply every coefficient by a constant (on the left)."""
        return TaylorFn(self.center, tuple(g * c for c in self.coeffs))

    def value(self):
        return self.coeffs[0]

    def compose(self, ctx: SuperContext, s: Superfield) -> Superfield:
        """``F(s)`` for a theta-free even superfield ``s``."""
        shifted = s - self.center
        out = ctx.zero()
        pw = None
        for n, c in enumerate(self.coeffs):
            if n > ctx.order:
                break
            pw = ctx.const(1) if n == 0 else pw * shifted
            out = out + ctx.const(c) * pw
        return out


def from_superfield(F: Superfield) -> TaylorFn:
    """Read the ``x+`` Taylor coefficients of a superfield evaluated at
    ``(center, 0)``; Grassmann structure is kept, ``x-`` is ignored."""
    alg = GrassmannAlgebra(F.alg.n_xi)
    lay = layout(F.order)
    coeffs = []
    for n in range(F.order + 1):
        idx = lay.index[(n, 0)]
        terms = {m: complex(c[idx]) for m, c in F.value.terms.items()}
        coeffs.append(GrassmannElement.build(alg, terms))
    return TaylorFn(F.base.xplus, tuple(coeffs))


def from_expression(src, env: dict, n_xi: int, order: int, center: complex, var: str = "s") -> TaylorFn:
    """Taylor series of an expression in the symmetry variable ``var``."""
    from .expr import eval_expr

    ctx = SuperContext(n_xi, order, BasePoint(center, 0))
    env = dict(env)
    env[var] = ctx.xp()
    return from_superfield(eval_expr(src, env, ctx))


# -- ODE lifting -------------------------------------------------------------
def lift_ode(rhs: Callable[[Jet, Sequence[Jet]], Sequence[Jet]], y0: Sequence, t0: complex, order: int):
    """Taylor jets of the solution of ``y' = rhs(t, y)``, ``y(t0) = y0``.

    Picard iteration on truncated jets: each sweep fixes one more Taylor
    coefficient, so ``order + 1`` sweeps are exact to the truncation order.
    Jets are univariate (direction ``plus`` at ``(t0, 0)``).
    """
    base = BasePoint(t0, 0)
    t = Jet.coordinate("plus", order, base)
    ys = [Jet.constant(v, order, base) for v in y0]
    for _ in range(order + 1):
        f = rhs(t, ys)
        ys = [
            Jet.constant(v, order, base) + jet_integrate(fi.truncate(order - 1)).truncate(order)
            if order >= 1 else Jet.constant(v, order, base)
            for v, fi in zip(y0, f)
        ]
    return ys


def jet_series(j: Jet) -> np.ndarray:
    """Univariate Taylor coefficients of a jet along ``x+``."""
    lay = layout(j.order)
    return np.array([j.coeffs[lay.index[(n, 0)]] for n in range(j.order + 1)])


def lift_v(k0: float, a: float, v0: float, dv0: float, xi0: float, order: int):
    """Jets of ``v`` for ``v'' = v'^2 / v + k0^2 v e^{a xi}``."""
    from .jets import jet_fun

    def rhs(t, ys):
        v, w = ys
        return [w, w * w / v + (k0 * k0) * v * jet_fun(a * t, "exp")]

    return lift_ode(rhs, [v0, dv0], xi0, order)
