"""``supergc`` command line.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
errors (bad arguments, malformed scenarios, parse or bind errors).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import SuperGCError
from .scenario import Scenario, run

GLOBAL_FLAGS = {
    "generators": ("--generators", int, "number of Grassmann generators K"),
    "jet_order": ("--jet-order", int, "jet truncation order d"),
    "tolerance": ("--tolerance", float, "pass/fail tolerance"),
    "points": ("--points", int, "number of sampled base points"),
    "seed": ("--seed", int, "seed for point sampling"),
}


def _common() -> argparse.ArgumentParser:
    # SUPPRESS defaults let the flags appear before or after the subcommand
    p = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    for dest, (flag, typ, help_) in GLOBAL_FLAGS.items():
        p.add_argument(flag, dest=dest, type=typ, help=help_)
    p.add_argument("--report", dest="report", help="write the JSON report to this file ('-' for stdout)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="supergc",
        description="Verify supersymmetric and classical Gauss-Codazzi systems and their symmetry algebras.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check-gc", parents=[common], help="SUSY Gauss-Codazzi check of a susy-gc scenario")
    p.add_argument("scenario")
    p = sub.add_parser("check-classical", parents=[common], help="classical Gauss-Codazzi check")
    p.add_argument("scenario")
    p = sub.add_parser("adjoint", parents=[common], help="adjoint action of a group element")
    p.add_argument("scenario")
    p = sub.add_parser("run", parents=[common], help="run a scenario of any mode")
    p.add_argument("scenario")
    p = sub.add_parser("brackets", parents=[common], help="realize an algebra and compare its brackets")
    p.add_argument("algebra", choices=["susy", "classical"])
    cat = sub.add_parser("catalog", help="invariant-solution catalog")
    csub = cat.add_subparsers(dest="catalog_command", required=True)
    v = csub.add_parser("verify", parents=[common], help="verify a catalog family")
    v.add_argument("family")
    v.add_argument("--param", action="append", default=[], metavar="K=V", help="family parameter override")
    return parser


def _param_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    try:
        return complex(text.replace("i", "j")) if text.endswith(("i", "j")) else text
    except ValueError:
        return text


def _scenario_from_args(args) -> Scenario:
    cmd = args.command
    if cmd in ("check-gc", "check-classical", "adjoint", "run"):
        sc = Scenario.load(args.scenario)
        want = {"check-gc": "susy-gc", "check-classical": "classical-gc", "adjoint": "adjoint"}.get(cmd)
        if want and sc.mode != want:
            raise SuperGCError(f"{cmd} needs a scenario with mode {want!r}, got {sc.mode!r}")
    elif cmd == "brackets":
        sc = Scenario(mode="brackets", algebra=args.algebra)
    else:
        params = {}
        for item in args.param:
            if "=" not in item:
                raise SuperGCError(f"--param expects K=V, got {item!r}")
            k, v = item.split("=", 1)
            params[k.strip()] = _param_value(v.strip())
        sc = Scenario(mode="catalog", family=args.family, family_params=params)
    for dest in GLOBAL_FLAGS:
        if hasattr(args, dest):
            val = getattr(args, dest)
            if dest == "points":
                sc.points = {"n": val} if not isinstance(sc.points, dict) else {**sc.points, "n": val}
            else:
                setattr(sc, dest, val)
    sc.validate()
    return sc


def _summary(report) -> str:
    lines = []
    for c in report.per_check:
        tag = "info" if c.get("informational") else ("PASS" if c["pass"] else "FAIL")
        mono = f"  at {c['worst_monomial']}" if c.get("worst_monomial") else ""
        lines.append(f"{tag:4}  {c['name']:<26} {c['max_residual']:.3e}{mono}")
    for d in report.discrepancies:
        eq = d.get("equation")
        rep = d.get("repair")
        extra = ""
        if rep:
            to = complex(rep["to"])
            to = complex(round(to.real, 12), round(to.imag, 12)) + 0  # drop -0.0 and round-off
            shown = f"{to.real:.6g}" if to.imag == 0 else f"{to:.6g}"
            extra = f"; repair {rep['parameter']} -> {shown}" + (" (degenerate)" if rep.get("degenerate") else "")
        lines.append(f"{d.get('kind', 'DISCREPANCY')}: {eq}{extra}")
    lines.append("overall: " + ("PASS" if report.passed else "FAIL"))
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        sc = _scenario_from_args(args)
        report = run(sc)
    except SuperGCError as exc:
        print(f"supergc: error: {exc}", file=sys.stderr)
        return 2
    print(_summary(report))
    dest = getattr(args, "report", None)
    if dest:
        text = report.to_json()
        if dest == "-":
            print(text)
        else:
            with open(dest, "w") as fh:
                fh.write(text + "\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
