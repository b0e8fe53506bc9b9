"""
Superfields as Grassmann-valued jets
====================================

A superfield on (x+, x-, th+, th-) is stored as a Grassmann element whose
coefficients are truncated Taylor jets at one base point.  Everything below
is exact up to the jet order and floating point.
"""

import numpy as np

from supergc import GrassmannAlgebra, invert, SuperContext, components, d_minus, d_plus, j_plus
from supergc.superfield import partial

# Plain supernumbers first: four odd generators, anticommuting.
alg = GrassmannAlgebra(4)
x1, x2 = alg.xi(1), alg.xi(2)
print("xi1 xi2 + xi2 xi1 =", x1 * x2 + x2 * x1)
print("(1 + xi1 xi2)^-1 =", invert(1 + x1 * x2))

# A context fixes the generator count, the jet order and the base point.
ctx = SuperContext(4, 3, (0.2, -0.5))
xp, xm, thp, thm = ctx.xp(), ctx.xm(), ctx.thp(), ctx.thm()

# An even superfield with all four theta components switched on.
A = xp * xm + thp * ctx.xi(1) + thm * ctx.xi(2) + thp * thm * xp
for name, comp in zip(("a0", "a1", "a2", "a3"), components(A)):
    print(f"{name}: {comp.max_abs():.3f}")

# The covariant derivative squares to -i d/dx+ ...
r = d_plus(d_plus(A)) + 1j * partial(A, "plus")
print("D+^2 A + i dA/dx+  ->", r.max_abs())

# ... anticommutes with its partner ...
r = d_plus(d_minus(A)) + d_minus(d_plus(A))
print("{D+, D-} A         ->", r.max_abs())

# ... and with the supersymmetry generator.
r = j_plus(d_plus(A)) + d_plus(j_plus(A))
print("{J+, D+} A         ->", r.max_abs())

# Every derivative eats one jet order.
print("orders:", A.order, d_plus(A).order, d_plus(d_plus(A)).order)

# The body of a superfield is an ordinary jet; here it is x+ x-.
print("body jet value and gradient:", np.round(A.body_jet().coeffs[:3], 3))
