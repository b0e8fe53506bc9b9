"""
Two classical invariant surfaces
================================

The Gauss-Codazzi system for a conformally parametrized surface is
checked on jets of u, H, Q and Qbar.  One family is a genuine solution;
the other only survives when it stops being a surface worth the name.
"""

import numpy as np

from supergc import catalog as C
from supergc.classical import classical_curvatures, classical_gc_residuals

pts = C.sample_points("classi", 5, seed=3)

# An exponential solution.  The two curvature terms in the Gauss equation
# cancel exactly, the Gaussian curvature vanishes and the mean curvature
# does not: a developable, non-planar piece of surface.
print("exponential family")
for pt in pts:
    d = C.build_classical_L12prime({"k0": 1, "l0": -2, "a": 1}, pt)
    res = max(r.max_abs() for r in classical_gc_residuals(d).values())
    cv = classical_curvatures(d)
    print(f"  ({pt.xplus.real:+.2f}, {pt.xminus.real:+.2f})  GC {res:.1e}  K {abs(cv.K):.1e}  Hmean {abs(cv.Hmean):.3f}")

# The second family carries a function v that solves a nonlinear ODE,
# here lifted to a jet at every base point.  The ODE itself is met to
# round-off, yet Gauss and one Codazzi equation are off by O(k0^2).
print("\nODE family, k0 = 1")
rep = C.verify("classical-L17prime", None, pts)
for ch in rep.checks:
    print(f"  {ch.name:<24} {ch.max_residual:.2e}  {'ok' if ch.passed else 'FAILS'}")
print("  v ODE residual:", C.ode_residual_L17prime(None))

# Gauss reduces to -eps (log v)'' while the ODE forces (log v)'' = k0^2 e^(a xi).
k0, a = 1.2, 0.7
pt = pts[0]
g = classical_gc_residuals(C.build_classical_L17prime({"k0": k0, "a": a}, pt))["gauss"].value
print(f"  Gauss residual {g.real:+.6f} vs -k0^2 e^(a xi) = {(-k0**2 * np.exp(a * (pt.xminus - pt.xplus))).real:+.6f}")

# Switching k0 off repairs the equations and flattens the surface.
rep0 = C.verify("classical-L17prime", {"k0": 0}, pts)
print("\nk0 = 0:", ", ".join(f"{c.name} {'ok' if c.passed else 'FAILS'}" for c in rep0.checks))
