import math

import numpy as np
import pytest

from supergc import SuperContext, eval_expr, parse, to_string
from supergc.errors import BindError, ParseError
from supergc.expr import Bin, Call, Name, Neg, Num, check_bind

CORPUS = [
    "1", "xp", "-xp", "--xp", "xp + xm", "xp - xm - 1", "xp - (xm - 1)", "2*a*xp",
    "exp(2*a*xp)", "k0*pow(xp, (a - 1)/2)", "xp^2", "xp^2^3", "(xp^2)^3", "-xp^2",
    "(-xp)^2", "xp^-1", "xp/xm/2", "xp/(xm/2)", "log(1 + xp*xm)", "i*thp*thm",
    "xi1*xi2", "thp*thm*exp(xm)", "exp(-a*(xp + xm))", "pow(xp, -0.5)*xi3",
    "1.5e-3*xp", "a*b*c - d/e + f", "exp(log(xp))", "pow(exp(xm), 2)", "xp*(xm + 1)*(xm - 1)",
    "-(xp + 1)", "2^-a", "thp*xi1 + thm*xi2", "(a + b)^2",
]


@pytest.mark.parametrize("src", CORPUS)
def test_roundtrip(src):
    tree = parse(src)
    assert parse(to_string(tree)) == tree


def test_corpus_size():
    assert len(CORPUS) >= 30


def test_precedence():
    assert parse("-xp^2") == Neg(Bin("^", Name("xp"), Num(2)))
    assert parse("xp^2^3") == Bin("^", Name("xp"), Bin("^", Num(2), Num(3)))
    assert parse("a - b - c") == Bin("-", Bin("-", Name("a"), Name("b")), Name("c"))
    assert parse("exp(2*a*xp)") == Call("exp", (Bin("*", Bin("*", Num(2), Name("a")), Name("xp")),))


def test_unbalanced_paren_column():
    with pytest.raises(ParseError) as exc:
        parse("exp(2*a*xp")
    assert exc.value.column == 11 and exc.value.line == 1


def test_error_line_numbers():
    with pytest.raises(ParseError) as exc:
        parse("xp +\n  * 2")
    assert exc.value.line == 2 and exc.value.column == 3


def test_unknown_function():
    with pytest.raises(ParseError):
        parse("sin(xp)")


def test_bind_errors():
    with pytest.raises(BindError):
        check_bind(parse("q*xp"), {})
    with pytest.raises(BindError):
        check_bind(parse("xp/xi1"), {})
    with pytest.raises(BindError):
        check_bind(parse("xp + xi1"), {})
    with pytest.raises(BindError):
        check_bind(parse("xp^xm"), {})
    with pytest.raises(BindError):
        check_bind(parse("exp(thp)"), {})
    assert check_bind(parse("xp^a"), {"a": 0.5}) == "even"
    assert check_bind(parse("thp*xi1*xi2"), {}) == "odd"


def test_eval_examples():
    ctx = SuperContext(4, 2, (0, 0))
    e = eval_expr("exp(xp)", {}, ctx).body_jet()
    assert np.allclose([e[0, 0], e[1, 0], e[2, 0], e[0, 1]], [1, 1, 0.5, 0])
    x = eval_expr("xi1*xi2", {}, ctx)
    assert (x - ctx.xi(1) * ctx.xi(2)).is_zero()
    t = eval_expr("thp*thm*exp(xm)", {}, ctx)
    assert (t - ctx.thp() * ctx.thm() * ctx.jet(eval_expr("exp(xm)", {}, ctx).body_jet())).max_abs() < 1e-15


def test_eval_parameters_and_powers():
    ctx = SuperContext(2, 3, (1.5, 0.2))
    v = eval_expr("k0*pow(xp, (a - 1)/2)", {"k0": 2.0, "a": 2.0}, ctx).body_jet()
    assert abs(v.value - 2 * math.sqrt(1.5)) < 1e-14
    assert abs(v[1, 0] - 2 * 0.5 / math.sqrt(1.5)) < 1e-14
    w = eval_expr("xp^-1 - 1/xp", {}, ctx)
    assert w.max_abs() < 1e-15
    z = eval_expr("i*i + 1", {}, ctx)
    assert z.max_abs() < 1e-15
