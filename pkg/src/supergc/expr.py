"""A small expression language for component functions.

Grammar, loosest binding first::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right associative
    atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'

Reserved names: ``xp``, ``xm`` (even coordinates), ``thp``, ``thm`` and
``xi<n>`` (odd generators) and ``i`` (imaginary unit).  Functions: ``exp``,
``log`` and ``pow(base, r)`` with real ``r``.  Every other name is a
parameter bound at evaluation time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import BindError, ParseError
from .grassmann import GrassmannElement
from .superfield import EVEN, ODD, SuperContext, Superfield, exp, log, power

FUNCTIONS = {"exp": 1, "log": 1, "pow": 2}
_COORDS = {"xp", "xm"}
_ODD_RE = re.compile(r"(thp|thm|xi[1-9][0-9]*)\Z")


# -- AST -------------------------------------------------------------------
@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


# -- lexer -------------------------------------------------------------------
_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(src: str):
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(src):
        if src[pos] == "\n":
            line += 1
            pos += 1
            line_start = pos
            continue
        if src[pos] in " \t\r":
            pos += 1
            continue
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), line, start - line_start + 1))
        pos = m.end()
    toks.append(_Tok("end", "", line, len(src) - line_start + 1))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.toks = _tokenize(src)
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self):
        t = self.toks[self.k]
        self.k += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col)

    def expect(self, text):
        t = self.peek()
        if t.text != text or t.kind != "op":
            if t.kind == "end":
                raise self.error(f"expected {text!r} but input ended (unbalanced parenthesis)")
            raise self.error(f"expected {text!r}, found {t.text!r}")
        return self.take()

    def parse(self):
        e = self.expr()
        if self.peek().kind != "end":
            raise self.error(f"unexpected {self.peek().text!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            e = Bin(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.take().text
            e = Bin(op, e, self.unary())
        return e

    def unary(self):
        if self.peek().kind == "op" and self.peek().text == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            return Bin("^", base, self.unary())
        return base

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return Num(float(t.text))
        if t.kind == "name":
            self.take()
            if self.peek().kind == "op" and self.peek().text == "(":
                if t.text not in FUNCTIONS:
                    raise self.error(f"unknown function {t.text!r}", t)
                self.take()
                args = [self.expr()]
                while self.peek().kind == "op" and self.peek().text == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != FUNCTIONS[t.text]:
                    raise self.error(f"{t.text} takes {FUNCTIONS[t.text]} argument(s)", t)
                return Call(t.text, tuple(args))
            return Name(t.text)
        if t.kind == "op" and t.text == "(":
            self.take()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {t.text!r}")


def parse(src: str):
    return _Parser(src).parse()


# -- printer -----------------------------------------------------------------
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _fmt_num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() and abs(v) < 1e15 else repr(float(v))


def to_string(e) -> str:
    """Source text that parses back to ``e``."""
    return _show(e, 0)


def _show(e, ctx: int) -> str:
    if isinstance(e, Num):
        return _fmt_num(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}(" + ", ".join(_show(a, 0) for a in e.args) + ")"
    if isinstance(e, Neg):
        s = "-" + _show(e.arg, _PREC["neg"])
        return f"({s})" if ctx > _PREC["neg"] else s
    if isinstance(e, Bin):
        p = _PREC[e.op]
        if e.op == "^":
            s = f"{_show(e.left, p + 1)}^{_show(e.right, _PREC['neg'])}"
        else:
            s = f"{_show(e.left, p)} {e.op} {_show(e.right, p + 1)}"
        return f"({s})" if ctx > p else s
    raise TypeError(f"not an expression node: {e!r}")


# -- binding and evaluation --------------------------------------------------
def _param_parity(value) -> str:
    if isinstance(value, Superfield):
        return value.parity
    if isinstance(value, GrassmannElement):
        from .grassmann import parity

        p = parity(value)
        if p == "mixed":
            raise BindError("parameters must have definite parity")
        return p
    return EVEN


def _is_real_scalar(value) -> bool:
    return isinstance(value, (int, float, np.floating, np.integer)) or (
        isinstance(value, complex) and value.imag == 0
    )


def names_in(e) -> set:
    if isinstance(e, Name):
        return {e.name}
    if isinstance(e, Neg):
        return names_in(e.arg)
    if isinstance(e, Bin):
        return names_in(e.left) | names_in(e.right)
    if isinstance(e, Call):
        return set().union(*(names_in(a) for a in e.args))
    return set()


def check_bind(e, env: Mapping) -> str:
    """Static checks; returns the parity of ``e`` or raises :class:`BindError`."""
    if isinstance(e, Num):
        return EVEN
    if isinstance(e, Name):
        n = e.name
        if n in _COORDS or n == "i":
            return EVEN
        if _ODD_RE.match(n):
            return ODD
        if n not in env:
            raise BindError(f"unknown identifier {n!r}")
        return _param_parity(env[n])
    if isinstance(e, Neg):
        return check_bind(e.arg, env)
    if isinstance(e, Call):
        if e.fn == "pow":
            _real_constant(e.args[1], env)
        p = check_bind(e.args[0], env)
        if p != EVEN:
            raise BindError(f"{e.fn} of an odd expression")
        return EVEN
    if isinstance(e, Bin):
        lp = check_bind(e.left, env)
        if e.op == "^":
            _exponent(e.right, env)
            if lp != EVEN:
                raise BindError("power of an odd expression")
            return EVEN
        rp = check_bind(e.right, env)
        if e.op in "+-":
            if lp != rp and not (_is_zero_literal(e.left) or _is_zero_literal(e.right)):
                raise BindError(f"adding {lp} and {rp} terms")
            return lp
        if e.op == "/" and rp == ODD:
            raise BindError("division by an odd expression")
        return EVEN if lp == rp else ODD
    raise TypeError(f"not an expression node: {e!r}")


def _is_zero_literal(e) -> bool:
    return isinstance(e, Num) and e.value == 0


def _exponent(e, env) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Neg):
        return -_exponent(e.arg, env)
    if isinstance(e, Name) and e.name in env and _is_real_scalar(env[e.name]):
        return float(np.real(env[e.name]))
    raise BindError("'^' needs a real literal or real parameter exponent; use pow() otherwise")


def _real_constant(e, env) -> float:
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Name):
        if e.name in env and _is_real_scalar(env[e.name]):
            return float(np.real(env[e.name]))
        raise BindError(f"exponent name {e.name!r} is not a real parameter")
    if isinstance(e, Neg):
        return -_real_constant(e.arg, env)
    if isinstance(e, Bin) and e.op in "+-*/":
        a, b = _real_constant(e.left, env), _real_constant(e.right, env)
        return {"+": a + b, "-": a - b, "*": a * b, "/": a / b if b else float("nan")}[e.op]
    if isinstance(e, Bin) and e.op == "^":
        return _real_constant(e.left, env) ** _exponent(e.right, env)
    raise BindError("pow exponent must be a real constant expression")


def eval_expr(e, env: Mapping, ctx: SuperContext) -> Superfield:
    """Evaluate ``e`` (AST or source text) as a superfield at ``ctx``."""
    if isinstance(e, str):
        e = parse(e)
    check_bind(e, env)
    return _eval(e, env, ctx)


def _lift(value, ctx: SuperContext) -> Superfield:
    if isinstance(value, Superfield):
        return value
    if isinstance(value, GrassmannElement):
        return ctx.lift(value)
    return ctx.const(complex(value))


def _eval(e, env, ctx):
    if isinstance(e, Num):
        return ctx.const(e.value)
    if isinstance(e, Name):
        n = e.name
        if n == "xp":
            return ctx.xp()
        if n == "xm":
            return ctx.xm()
        if n == "thp":
            return ctx.thp()
        if n == "thm":
            return ctx.thm()
        if n == "i":
            return ctx.const(1j)
        if _ODD_RE.match(n):
            return ctx.xi(int(n[2:]))
        return _lift(env[n], ctx)
    if isinstance(e, Neg):
        return -_eval(e.arg, env, ctx)
    if isinstance(e, Call):
        a = _eval(e.args[0], env, ctx)
        if e.fn == "exp":
            return exp(a)
        if e.fn == "log":
            return log(a)
        return power(a, _real_constant(e.args[1], env))
    if isinstance(e, Bin):
        left = _eval(e.left, env, ctx)
        if e.op == "^":
            r = _exponent(e.right, env)
            if float(r).is_integer() and r >= 0:
                return left ** int(r)
            return power(left, r)
        right = _eval(e.right, env, ctx)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        return left / right
    raise TypeError(f"not an expression node: {e!r}")
