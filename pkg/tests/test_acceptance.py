"""One test per acceptance criterion, at its stated tolerance and time budget."""

import itertools
import time

import numpy as np
import sympy as sp

from supergc import (
    AlgebraElement,
    BasePoint,
    GrassmannAlgebra,
    SuperContext,
    adjoint_exp,
    assemble_frames,
    classical_curvatures,
    classical_gc_residuals,
    d_minus,
    d_plus,
    derive,
    gc_residuals,
    grassmann_exp,
    invert,
    j_minus,
    j_plus,
    structure_match,
    super_jacobi_residual,
    susy_algebra,
    vf_bracket,
    zcc_residual,
)
from supergc import catalog as C
from supergc.liesuper import CLASSICAL_RELATIONS, classical_algebra
from supergc.superfield import partial
from supergc.vectorfields import classical_realization, express_in_basis, susy_realization

from conftest import random_scalar_element, random_superfield

GC = [f"gc_{k}" for k in ("i", "ii", "iii", "iv", "v", "vi")]


# 1 ---------------------------------------------------------------------------
def test_1_operator_algebra(accept):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    ctx = SuperContext(6, 3, (0.3, -0.7))
    D = {"+": d_plus, "-": d_minus}
    J = {"+": j_plus, "-": j_minus}
    dx = {"+": "plus", "-": "minus"}
    worst = 0.0
    for k in range(100):
        A = random_superfield(ctx, rng, "even" if k % 2 == 0 else "odd")
        res = [d_plus(d_minus(A)) + d_minus(d_plus(A))]
        for s in "+-":
            res.append(D[s](D[s](A)) + 1j * partial(A, dx[s]))
            res.append(J[s](J[s](A)) - 1j * partial(A, dx[s]))
            for t in "+-":
                res.append(J[s](D[t](A)) + D[t](J[s](A)))
        worst = max(worst, max(r.max_abs() for r in res))
    dt = time.perf_counter() - t0
    ok = accept("1 operator algebra", worst < 1e-12 and dt < 5, f"max residual {worst:.2e}, {dt:.2f} s")
    assert ok


# 2 ---------------------------------------------------------------------------
def test_2_susy_table(accept):
    t0 = time.perf_counter()
    sc = susy_algebra()
    m = structure_match(susy_realization(), sc)
    pairs = len(list(itertools.combinations_with_replacement(range(sc.n), 2)))
    jac = super_jacobi_residual(sc)
    dt = time.perf_counter() - t0
    ok = accept(
        "2 susy bracket table",
        pairs == 36 and m.ok and jac == 0 and dt < 1,
        f"{pairs} pairs, {len(m.mismatches)} mismatches, Jacobi {jac} over {sc.n**3} triples, {dt:.2f} s",
    )
    assert ok


# 3 ---------------------------------------------------------------------------
def test_3a_classical_relations_as_stated(accept):
    t0 = time.perf_counter()
    sc = classical_algebra()
    m = structure_match(classical_realization(), sc)
    dt = time.perf_counter() - t0
    bad = ", ".join(f"[{a},{b}]" for a, b, _, _ in m.mismatches)
    ok = accept("3a classical relations as tabulated", m.ok and dt < 1, f"mismatches: {bad or 'none'}, {dt:.2f} s")
    assert ok


def test_3b_classical_subalgebras_close(accept):
    t0 = time.perf_counter()
    e = classical_realization()
    names = [f"e{k}" for k in range(7)]
    fields = [e[n] for n in names]
    assert len(list(itertools.combinations(names, 2))) == 21
    ok_close = True
    for group in (("e1", "e3", "e5"), ("e2", "e4", "e6")):
        for a, b in itertools.combinations(group, 2):
            row = express_in_basis(vf_bracket(e[a], e[b]), fields)
            outside = [names[k] for k in np.nonzero(row)[0] if names[k] not in group]
            ok_close &= not outside
    mutual = all(vf_bracket(e[a], e[b]).is_zero() for a in ("e1", "e3", "e5") for b in ("e2", "e4", "e6"))
    # every pair missing from the table brackets to zero
    listed = set(CLASSICAL_RELATIONS)
    zeros = all(
        vf_bracket(e[a], e[b]).is_zero() for a, b in itertools.combinations(names, 2) if (a, b) not in listed
    )
    dt = time.perf_counter() - t0
    ok = accept("3b classical closure", ok_close and mutual and zeros and dt < 1,
                f"closed {ok_close}, mutual zero {mutual}, unlisted zero {zeros}, {dt:.2f} s")
    assert ok


# 4 ---------------------------------------------------------------------------
def test_4_adjoint_identities(accept):
    t0 = time.perf_counter()
    sc = susy_algebra()
    alg = GrassmannAlgebra(2)
    el = lambda d: AlgebraElement.from_dict(sc, alg, d)  # noqa: E731
    rng = np.random.default_rng(4)
    worst_rel = 0.0
    for _ in range(10):
        al, de, a = rng.uniform(-1.5, 1.5, 3)
        got = adjoint_exp(el({"K1": al, "K2": de}), el({"P+": 1, "P-": a}), sc)
        want = el({"P+": np.exp(-2 * al), "P-": np.exp(-2 * de) * a})
        err = max(abs(complex(g.body()) - complex(w.body())) for g, w in zip(got.coords, want.coords))
        worst_rel = max(worst_rel, err / max(abs(np.exp(-2 * al)), abs(np.exp(-2 * de) * a)))
    alpha, delta, lam, a = 1.0, 0.5, 2.0, 3.0
    rho = alg.xi(1)
    X = el({"K1": alpha, "K2": delta, "P-": lam, "J-": rho})
    want = el({
        "K2": 1,
        "P+": np.exp(-2 * alpha) * a,
        "P-": -(lam / delta) * (np.exp(-2 * delta) - 1),
        "J-": rho * (-(np.exp(-delta) - 1) / delta),
    })
    got = adjoint_exp(X, el({"K2": 1, "P+": a}), sc)
    coeff_err = max((g - w).max_norm() for g, w in zip(got.coords, want.coords))
    dt = time.perf_counter() - t0
    ok = accept("4 adjoint identities", worst_rel < 1e-10 and coeff_err < 1e-10 and dt < 1,
                f"rescaling rel err {worst_rel:.1e}, four-term closed form {coeff_err:.1e}, {dt:.2f} s")
    assert ok


# 5 ---------------------------------------------------------------------------
def test_5_classi(accept):
    t0 = time.perf_counter()
    params = {"k0": 1, "l0": -2, "a": 1}
    worst, Kmax, Hmin = 0.0, 0.0, np.inf
    for pt in C.sample_points("classi", 20, 5):
        d = C.build_classical_L12prime(params, pt)
        worst = max(worst, max(r.max_abs() for r in classical_gc_residuals(d).values()))
        cv = classical_curvatures(d)
        Kmax, Hmin = max(Kmax, abs(cv.K)), min(Hmin, abs(cv.Hmean))
    dt = time.perf_counter() - t0
    k0, l0, a, z, zb = sp.symbols("k0 l0 a z zbar")
    u = sp.log(-2 * k0 / l0) + 2 * a * (z + zb)
    H, Q = l0 * sp.exp(-a * (z + zb)), k0 * sp.exp(a * (z + zb))
    t1 = sp.simplify(sp.Rational(1, 2) * H**2 * sp.exp(u))
    t2 = sp.simplify(-2 * Q * Q * sp.exp(-u))
    at = {k0: 1, l0: -2, a: 1, z: sp.Rational(1, 3), zb: sp.Rational(-1, 5)}
    symbolic = sp.diff(u, z, zb) == 0 and t1 == -k0 * l0 and t2 == k0 * l0 and (t1 + t2).subs(at) == 0
    ok = accept("5 classi", worst < 1e-10 and Kmax < 1e-12 and Hmin > 0.1 and symbolic and dt < 1,
                f"GC {worst:.1e}, |K| {Kmax:.1e}, min|Hmean| {Hmin:.2f}, -k0l0+k0l0 symbolic {symbolic}, {dt:.2f} s")
    assert ok


# 6 ---------------------------------------------------------------------------
def test_6_classical_l17prime(accept):
    t0 = time.perf_counter()
    sets = [{}, {"k0": 1.3, "a": -0.7, "dv0": 0.4}, {"k0": 0.5, "a": 1.1, "v0": 2, "eps": -1}]
    worst, ode = 0.0, 0.0
    for k, p in enumerate(sets):
        ode = max(ode, C.ode_residual_L17prime(p))
        for pt in C.sample_points("classical-L17prime", 10, 60 + k):
            d = C.build_classical_L17prime(p, pt)
            worst = max(worst, max(r.max_abs() for r in classical_gc_residuals(d).values()))
    dt = time.perf_counter() - t0
    ok = accept("6 classical L1,7'", worst < 1e-9 and dt < 2,
                f"GC residual {worst:.2e} (v ODE residual {ode:.1e}), {dt:.2f} s")
    assert ok


# 7 ---------------------------------------------------------------------------
def test_7a_susy_catalog_records(accept):
    t0 = time.perf_counter()
    silent, verdicts = [], []
    for fam in ("L39", "L27prime", "L26doubleprime"):
        rep = C.verify(fam, None, C.sample_points(fam, 10, 7))
        named = {d.equation for d in rep.discrepancies}
        if not rep.passed and not set(rep.failing()) <= named:
            silent.append(fam)
        verdicts.append(f"{fam} {'pass' if rep.passed else 'records ' + ','.join(sorted(named))}")
    dt = time.perf_counter() - t0
    ok = accept("7a susy catalog verdicts", not silent and dt < 30, f"{'; '.join(verdicts)}, {dt:.1f} s")
    assert ok


def test_7b_l26_curvature(accept):
    t0 = time.perf_counter()
    P = C.Resolved(C.SCHEMAS["L26doubleprime"], None, None)
    h2, kerr = 0.0, 0.0
    for pt in C.sample_points("L26doubleprime", 10, 7):
        c = C.build_L26doubleprime(P, pt)
        h2 = max(h2, (c.H * c.H).max_abs())
        kerr = max(kerr, (C.susy_curvature(c) - C.printed_K_L26doubleprime(P, pt, c.H.order)).max_abs())
    dt = time.perf_counter() - t0
    ok = accept("7b L26'' H^2 and K", h2 == 0 and kerr < 1e-10 and dt < 30,
                f"H^2 = {h2}, K vs printed {kerr:.2e}, {dt:.1f} s")
    assert ok


# 8 ---------------------------------------------------------------------------
def _gc_zcc(c):
    g = max(r.max_abs() for r in gc_residuals(c).values())
    z = max(e.max_abs() for row in zcc_residual(assemble_frames(c)) for e in row)
    return g, z


def test_8_gc_zcc_equivalence(accept):
    t0 = time.perf_counter()
    rng = np.random.default_rng(8)
    tol = 1e-10
    rows = []
    for fam in ("L39", "L27prime", "L26doubleprime"):
        pts = C.sample_points(fam, 3, 8)
        bases = [C.BUILDERS[fam](None, pt, 3) for pt in pts]
        rows += [(fam, *_gc_zcc(c)) for c in bases]
        for k in range(20):
            rows.append((fam + "~", *_gc_zcc(C.perturb(bases[k % len(bases)], rng))))
    agree = [(g < tol) == (z < tol) for _, g, z in rows]
    lg = np.log10([max(g, 1e-300) for _, g, _ in rows])
    lz = np.log10([max(z, 1e-300) for _, _, z in rows])
    corr = float(np.corrcoef(np.clip(lg, -16, None), np.clip(lz, -16, None))[0, 1])
    dis = sorted({f for (f, *_), a in zip(rows, agree) if not a})
    dt = time.perf_counter() - t0
    ok = accept("8 GC <=> ZCC", all(agree) and dt < 30,
                f"{sum(agree)}/{len(rows)} verdicts agree (disagreeing: {', '.join(dis) or 'none'}), "
                f"log-residual correlation {corr:.3f}, {dt:.1f} s")
    assert ok


# 9 ---------------------------------------------------------------------------
def test_9_kernel_properties(accept):
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    algs = [GrassmannAlgebra(k) for k in (3, 4, 5)]
    tol, fails, cases = 1e-12, 0, 0
    per = 2000

    def el(alg, parity=None):
        return random_scalar_element(alg, rng, 0.5, parity, scale=0.5)

    for n in range(per):
        alg = algs[n % 3]
        pa, pb = rng.choice(["even", "odd"], 2)
        a, b, c = el(alg, pa), el(alg, pb), el(alg)
        sign = -1 if pa == pb == "odd" else 1
        fails += (a * b - sign * (b * a)).max_norm() > tol
        fails += ((a * b) * c - a * (b * c)).max_norm() > tol
        u = el(alg)
        u = u - u.body() + complex(rng.uniform(0.5, 2), rng.normal())  # body |b| >= 0.5
        fails += (u * invert(u) - 1).max_norm() > tol
        s = el(alg, "even")
        fails += (grassmann_exp(s) * grassmann_exp(-s) - 1).max_norm() > tol
        g = int(rng.integers(1, alg.n_xi + 1))
        x = el(alg)
        lhs = derive(a * x, g)
        rhs = derive(a, g) * x + (-1 if pa == "odd" else 1) * (a * derive(x, g))
        fails += (lhs - rhs).max_norm() > tol
        cases += 5
    dt = time.perf_counter() - t0
    ok = accept("9 kernel properties", cases == 10_000 and fails == 0 and dt < 10,
                f"{cases} cases, {fails} failures, {dt:.2f} s")
    assert ok
