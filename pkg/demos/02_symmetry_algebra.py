"""
The symmetry superalgebra and its adjoint action
================================================

Structure constants are compared against brackets of explicit vector
fields, and the group action is computed as a matrix exponential with
Grassmann-valued entries.
"""

import numpy as np

from supergc import AlgebraElement, GrassmannAlgebra, adjoint_exp, structure_match, super_jacobi_residual, susy_algebra
from supergc.liesuper import classical_algebra
from supergc.vectorfields import classical_realization, susy_realization, vf_bracket

sc = susy_algebra()
print("basis:", ", ".join(sc.basis.names))

# All 36 brackets of the realized generators against the table.
m = structure_match(susy_realization(), sc)
print("susy mismatches:", len(m.mismatches), "| graded Jacobi:", super_jacobi_residual(sc))

# The classical algebra is a different story: two entries carry the
# opposite sign from the brackets of the fields themselves.
cm = structure_match(classical_realization(), classical_algebra())
for a, b, got, want in cm.mismatches:
    k = int(np.argmax(np.abs(got)))
    print(f"[{a},{b}] computed {got[k].real:+.0f} e{k}, tabulated {want[k].real:+.0f} e{k}")
e = classical_realization()
print("[e1,e5] == 2 e3 ?", vf_bracket(e["e1"], e["e5"]) == e["e3"].scale(2))

# Adjoint action.  Scaling by K1 and K2 rescales P+ and P- independently.
alg = GrassmannAlgebra(2)
el = lambda d: AlgebraElement.from_dict(sc, alg, d)  # noqa: E731
alpha, delta, a = 0.3, -0.2, 1.7
out = adjoint_exp(el({"K1": alpha, "K2": delta}), el({"P+": 1, "P-": a}), sc)
print("P+ coefficient", complex(out.coords[sc.basis.index("P+")].body()).real, "vs", np.exp(-2 * alpha))
print("P- coefficient", complex(out.coords[sc.basis.index("P-")].body()).real, "vs", np.exp(-2 * delta) * a)

# With an odd parameter the result picks up a soul along J-.
X = el({"K1": 1.0, "K2": 0.5, "P-": 2.0, "J-": alg.xi(1)})
print(adjoint_exp(X, el({"K2": 1, "P+": 3.0}), sc))
