"""JSON scenarios and machine-readable reports.

A scenario is a JSON object with ``"version": 1`` and a ``mode``.  Unknown
keys, and keys that do not belong to the chosen mode, are rejected so a
report is reproducible from its scenario and seed alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import catalog
from .classical import ClassicalData, classical_gc_residuals
from .errors import ScenarioError
from .expr import eval_expr, names_in, parse
from .geometry import FrameCoefficients, assemble_frames, gc_residuals, zcc_residual
from .grassmann import GrassmannAlgebra, GrassmannElement
from .jets import BasePoint
from .liesuper import (
    AlgebraElement,
    adjoint_exp,
    classical_algebra,
    super_jacobi_residual,
    susy_algebra,
    verify_conjugacy,
)
from .superfield import SuperContext, Superfield
from .vectorfields import classical_realization, structure_match, susy_realization

VERSION = 1
MODES = ("susy-gc", "classical-gc", "catalog", "brackets", "adjoint")
COMMON_KEYS = {"version", "mode", "generators", "jet_order", "tolerance", "points", "seed", "params"}
MODE_KEYS = {
    "susy-gc": {"fields"},
    "classical-gc": {"fields"},
    "catalog": {"family", "family_params"},
    "brackets": {"algebra"},
    "adjoint": {"algebra", "X", "Y", "expected"},
}
SUSY_FIELDS = tuple(catalog.FIELD_PARITY)
CLASSICAL_FIELDS = ("u", "H", "Q", "Qbar")


@dataclass
class Scenario:
    mode: str
    generators: int = 8
    jet_order: int = 4
    tolerance: float = 1e-10
    points: Any = None
    seed: int = 0
    params: dict = field(default_factory=dict)
    fields: dict = field(default_factory=dict)
    family: str | None = None
    family_params: dict = field(default_factory=dict)
    algebra: str | None = None
    X: dict = field(default_factory=dict)
    Y: dict = field(default_factory=dict)
    expected: dict | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ScenarioError("a scenario must be a JSON object")
        if data.get("version") != VERSION:
            raise ScenarioError(f"scenario version must be {VERSION}")
        mode = data.get("mode")
        if mode not in MODES:
            raise ScenarioError(f"mode must be one of {', '.join(MODES)}")
        unknown = set(data) - COMMON_KEYS - MODE_KEYS[mode]
        if unknown:
            raise ScenarioError(f"unknown fields for mode {mode}: {sorted(unknown)}")
        kw = {k: v for k, v in data.items() if k != "version"}
        sc = cls(**kw)
        sc.validate()
        return sc

    @classmethod
    def load(cls, path: str) -> "Scenario":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: invalid JSON ({exc})") from exc
        except OSError as exc:
            raise ScenarioError(str(exc)) from exc
        return cls.from_dict(data)

    def validate(self):
        if not isinstance(self.generators, int) or self.generators < 0:
            raise ScenarioError("generators must be a non-negative integer")
        if not isinstance(self.jet_order, int) or self.jet_order < 0:
            raise ScenarioError("jet_order must be a non-negative integer")
        if not self.tolerance > 0:
            raise ScenarioError("tolerance must be positive")
        if self.mode == "susy-gc":
            bad = set(self.fields) - set(SUSY_FIELDS)
            if bad:
                raise ScenarioError(f"unknown SUSY fields {sorted(bad)}")
        if self.mode == "classical-gc":
            bad = set(self.fields) - set(CLASSICAL_FIELDS)
            if bad or len(self.fields) != 4:
                raise ScenarioError(f"classical-gc needs exactly the fields {CLASSICAL_FIELDS}")
        if self.mode == "catalog" and not self.family:
            raise ScenarioError("catalog mode needs a family")
        if self.mode in ("brackets", "adjoint") and self.algebra not in ("susy", "classical"):
            raise ScenarioError("algebra must be 'susy' or 'classical'")
        if self.mode == "adjoint" and (not self.X or not self.Y):
            raise ScenarioError("adjoint mode needs X and Y")


# -- values ------------------------------------------------------------------------
def _number(v):
    if isinstance(v, list) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    return v


def constant_element(src, env: dict, n_xi: int) -> GrassmannElement:
    """A constant Grassmann number from a number or an expression such as ``2*xi1``."""
    alg = GrassmannAlgebra(n_xi)
    src = _number(src)
    if isinstance(src, (int, float, complex)):
        return alg.scalar(src)
    if not isinstance(src, str):
        raise ScenarioError(f"cannot read a constant from {src!r}")
    e = parse(src)
    if names_in(e) & {"xp", "xm", "thp", "thm"}:
        raise ScenarioError(f"{src!r} must not depend on coordinates")
    ctx = SuperContext(n_xi, 0, BasePoint(0, 0))
    val = eval_expr(e, env, ctx).value
    return GrassmannElement.build(alg, {m: complex(c[0]) for m, c in val.terms.items()})


def _env(sc: Scenario) -> dict:
    env: dict = {}
    for k, v in sc.params.items():
        c = constant_element(v, env, sc.generators)
        env[k] = complex(c.body()) if not c.soul().terms else c
    return env


def _points(sc: Scenario, xplus_box=(-1.0, 1.0), xminus_box=(-1.0, 1.0), n_default: int = 10) -> list:
    pts = sc.points
    if isinstance(pts, list):
        out = []
        for p in pts:
            if not isinstance(p, list) or len(p) != 2:
                raise ScenarioError("explicit points are [xp, xm] pairs")
            out.append(BasePoint(_number(p[0]), _number(p[1])))
        if not out:
            raise ScenarioError("no points given")
        return out
    spec = {} if pts is None else pts
    if isinstance(spec, int):
        spec = {"n": spec}
    if not isinstance(spec, dict) or set(spec) - {"n", "xplus", "xminus"}:
        raise ScenarioError("points must be a list of pairs or {n, xplus, xminus}")
    n = int(spec.get("n", n_default))
    if n < 1:
        raise ScenarioError("need at least one point")
    xb, yb = spec.get("xplus", xplus_box), spec.get("xminus", xminus_box)
    rng = np.random.default_rng(sc.seed)
    xs = rng.uniform(*xb, size=n)
    ys = rng.uniform(*yb, size=n)
    return [BasePoint(float(x), float(y)) for x, y in zip(xs, ys)]


# -- report ------------------------------------------------------------------------
@dataclass
class Report:
    mode: str
    per_check: list
    discrepancies: list = field(default_factory=list)
    seed: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.per_check if not c.get("informational"))

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def as_dict(self) -> dict:
        out = {
            "version": VERSION,
            "mode": self.mode,
            "seed": self.seed,
            "pass": self.passed,
            "per_check": self.per_check,
            "discrepancies": self.discrepancies,
        }
        out.update(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(_plain(self.as_dict()), indent=2, sort_keys=False)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return obj.real if obj.imag == 0 else [obj.real, obj.imag]
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    return obj


def _check(name, val, mono, point, ok, jet_index=None):
    return {
        "name": name,
        "max_residual": float(val),
        "worst_monomial": mono,
        "worst_jet_index": list(jet_index) if jet_index else None,
        "worst_point": point,
        "pass": bool(ok),
    }


class _Max:
    def __init__(self):
        self.val, self.mono, self.idx, self.point = 0.0, None, None, None

    def add(self, s, point):
        mono, idx, val = s.worst_term()
        if val > self.val or self.point is None:
            self.val, self.mono, self.idx, self.point = val, mono, idx, point


def _pt(at: BasePoint):
    return [_plain(at.xplus), _plain(at.xminus)]


# -- dispatch ----------------------------------------------------------------------
def run(sc: Scenario) -> Report:
    return {
        "susy-gc": _run_susy,
        "classical-gc": _run_classical,
        "catalog": _run_catalog,
        "brackets": _run_brackets,
        "adjoint": _run_adjoint,
    }[sc.mode](sc)


def _run_susy(sc: Scenario) -> Report:
    env = _env(sc)
    exprs = {k: parse(str(sc.fields.get(k, "0"))) for k in SUSY_FIELDS}
    accs = {k: _Max() for k in ("i", "ii", "iii", "iv", "v", "vi", "zcc")}
    for at in _points(sc):
        ctx = SuperContext(sc.generators, sc.jet_order, at)
        vals = {}
        for k, e in exprs.items():
            v = eval_expr(e, env, ctx)
            if v.is_zero():
                v = Superfield(v.value, catalog.FIELD_PARITY[k])
            vals[k] = v
        c = FrameCoefficients(**vals)
        for k, r in gc_residuals(c).items():
            accs[k].add(r, _pt(at))
        for row in zcc_residual(assemble_frames(c)):
            for entry in row:
                accs["zcc"].add(entry, _pt(at))
    checks, disc = [], []
    for k, a in accs.items():
        name = "zcc" if k == "zcc" else f"gc_{k}"
        ok = a.val < sc.tolerance
        checks.append(_check(name, a.val, a.mono, a.point, ok, a.idx))
        if not ok:
            disc.append({"kind": "FAILED", "equation": name, "max_residual": a.val,
                         "leading_monomial": a.mono, "point": a.point})
    return Report("susy-gc", checks, disc, sc.seed)


def _run_classical(sc: Scenario) -> Report:
    env = _env(sc)
    exprs = {k: parse(str(sc.fields[k])) for k in CLASSICAL_FIELDS}
    accs = {k: _Max() for k in ("gauss", "codazzi_zbar", "codazzi_z")}
    for at in _points(sc):
        ctx = SuperContext(sc.generators, sc.jet_order, at)
        jets = {}
        for k, e in exprs.items():
            v = eval_expr(e, env, ctx)
            if any(v.value.terms.keys() - {0}):
                raise ScenarioError(f"classical field {k} must be a plain function of xp, xm")
            jets[k] = v.body_jet()
        res = classical_gc_residuals(ClassicalData(**jets))
        for k, r in res.items():
            m = accs[k]
            val = r.max_abs()
            if val > m.val or m.point is None:
                m.val, m.point = val, _pt(at)
    checks = [_check(k, a.val, None, a.point, a.val < sc.tolerance) for k, a in accs.items()]
    disc = [{"kind": "FAILED", "equation": c["name"], "max_residual": c["max_residual"], "point": c["worst_point"]}
            for c in checks if not c["pass"]]
    return Report("classical-gc", checks, disc, sc.seed)


def _run_catalog(sc: Scenario) -> Report:
    sch = catalog.schema(sc.family)
    params = {k: _number(v) for k, v in sc.family_params.items()}
    pts = _points(sc, sch.xplus_box, sch.xminus_box)
    n_xi = sc.generators if sch.kind == "susy" else None
    rep = catalog.verify(sch.name, params, pts, sc.tolerance, sc.jet_order, n_xi)
    checks = []
    for c in rep.checks:
        d = c.as_dict()
        checks.append(d)
    return Report("catalog", checks, [d.as_dict() for d in rep.discrepancies], sc.seed,
                  {"family": sch.name, "params": rep.params})


def _algebra(name: str):
    if name == "susy":
        return susy_algebra(), susy_realization()
    return classical_algebra(), classical_realization()


def _run_brackets(sc: Scenario) -> Report:
    table, realization = _algebra(sc.algebra)
    match = structure_match(realization, table)
    names = table.basis.names
    bad = {(a, b): (row, ref) for a, b, row, ref in match.mismatches}
    checks = []
    for i in range(len(names)):
        for j in range(i, len(names)):
            key = (names[i], names[j])
            diff = float(np.max(np.abs(bad[key][0] - bad[key][1]))) if key in bad else 0.0
            checks.append(_check(f"[{names[i]},{names[j]}]", diff, None, None, key not in bad))
    jac = super_jacobi_residual(table)
    checks.append(_check("graded_jacobi", jac, None, None, jac == 0.0))
    disc = []
    for (a, b), (row, ref) in bad.items():
        disc.append({
            "kind": "DISCREPANCY", "equation": f"[{a},{b}]",
            "computed": _expand(row, names), "tabulated": _expand(ref, names),
        })
    return Report("brackets", checks, disc, sc.seed, {"algebra": sc.algebra})


def _expand(row, names) -> dict:
    return {n: _plain(complex(v)) for n, v in zip(names, row) if abs(v) > 0}


def _element(values: dict, table, alg, env) -> AlgebraElement:
    unknown = set(values) - set(table.basis.names)
    if unknown:
        raise ScenarioError(f"unknown generators {sorted(unknown)}")
    return AlgebraElement.from_dict(
        table, alg, {k: constant_element(v, env, alg.n_xi) for k, v in values.items()}
    )


def _run_adjoint(sc: Scenario) -> Report:
    table, _ = _algebra(sc.algebra)
    alg = GrassmannAlgebra(sc.generators)
    env = _env(sc)
    X = _element(sc.X, table, alg, env)
    Y = _element(sc.Y, table, alg, env)
    image = adjoint_exp(X, Y, table)
    out = {"image": {n: str(c) for n, c in zip(table.basis.names, image.coords) if not c.is_zero()}}
    if sc.expected is None:
        return Report("adjoint", [_check("adjoint_exp", 0.0, None, None, True)], [], sc.seed, out)
    Z = _element(sc.expected, table, alg, env)
    res = (image - Z).max_norm()
    checks = [_check("adjoint_exp_vs_expected", res, None, None, res < sc.tolerance)]
    conj = verify_conjugacy(Y, Z, X, table, sc.tolerance)
    checks.append(_check("conjugate_up_to_scale", conj.residual, None, None, conj.ok))
    checks[-1]["informational"] = True
    disc = [] if checks[0]["pass"] else [{"kind": "FAILED", "equation": "adjoint_exp", "max_residual": res}]
    return Report("adjoint", checks, disc, sc.seed, out)


__all__ = ["Scenario", "Report", "run", "constant_element", "VERSION", "MODES"]
