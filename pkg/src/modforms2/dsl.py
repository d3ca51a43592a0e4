"""A small expression language over lam-graded q-series.

Grammar (precedence high to low)::

    atom    := INT | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'
    power   := atom ['^' ['-'] INT]
    unary   := '-' unary | power
    term    := unary (('*' | '/') unary)*
    expr    := term (('+' | '-') term)*

Functions: ``delta`` (q d/dq), ``dlog`` (delta f / f), ``dz`` (d/dz, raises
the lam-degree), ``scale2`` (z -> 2z), ``neg``, and the grading casts
``lam`` / ``lam2`` (multiply by lam, lam**2).
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from . import catalog
from .series import (
    UNIT,
    GradedSeries,
    GradingError,
    LaurentSeries,
    SeriesError,
    delta,
    dlog,
    eq_to_order,
    scale_arg,
    z_deriv,
)


class ParseError(ValueError):
    def __init__(self, offset: int, message: str, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"syntax error at offset {offset}: {message}")


class EvalError(ValueError):
    pass


# ---------------------------------------------------------------------------
# tree


@dataclass(frozen=True)
class Expr:
    pos: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class Num(Expr):
    value: Fraction


@dataclass(frozen=True)
class Name(Expr):
    id: str


@dataclass(frozen=True)
class BinOp(Expr):
    left: Expr
    right: Expr
    symbol = "?"


class Add(BinOp):
    symbol = "+"


class Sub(BinOp):
    symbol = "-"


class Mul(BinOp):
    symbol = "*"


class Div(BinOp):
    symbol = "/"


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Call(Expr):
    func: str
    args: tuple[Expr, ...]


def _lam(k):
    return lambda g: GradedSeries(g.degree + k, g.body)


FUNCTIONS: dict[str, Callable[[GradedSeries], GradedSeries]] = {
    "delta": lambda g: GradedSeries(g.degree, delta(g.body)),
    "dlog": lambda g: GradedSeries(0, dlog(g.body)),
    "dz": z_deriv,
    "scale2": lambda g: GradedSeries(g.degree, scale_arg(g.body, 2)),
    "neg": lambda g: -g,
    "lam": _lam(1),
    "lam2": _lam(2),
}


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(bad, f"unexpected character {text[bad]!r}", text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.peek()
        if val != value or kind != "op":
            got = "end of input" if kind == "eof" else repr(val)
            raise ParseError(pos, f"expected {value!r}, got {got}", self.text)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "eof":
            raise ParseError(pos, f"expected operator or end of input, got {val!r}", self.text)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, pos = self.advance()
            right = self.term()
            left = (Add if op == "+" else Sub)(left, right, pos=pos)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.advance()
            right = self.unary()
            left = (Mul if op == "*" else Div)(left, right, pos=pos)
        return left

    def unary(self) -> Expr:
        kind, val, pos = self.peek()
        if kind == "op" and val == "-":
            self.advance()
            return Neg(self.unary(), pos=pos)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.advance()
            sign = 1
            if self.peek()[:2] == ("op", "-"):
                self.advance()
                sign = -1
            kind, val, p = self.peek()
            if kind != "int":
                got = "end of input" if kind == "eof" else repr(val)
                raise ParseError(p, f"expected integer exponent, got {got}", self.text)
            self.advance()
            return Pow(base, sign * int(val), pos=pos)
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.peek()
        if kind == "int":
            self.advance()
            return Num(Fraction(int(val)), pos=pos)
        if kind == "name":
            self.advance()
            if self.peek()[:2] == ("op", "("):
                if val not in FUNCTIONS:
                    raise ParseError(pos, f"unknown function {val!r}; expected one of {sorted(FUNCTIONS)}", self.text)
                self.advance()
                args = [self.expr()]
                while self.peek()[:2] == ("op", ","):
                    self.advance()
                    args.append(self.expr())
                self.expect(")")
                if len(args) != 1:
                    raise ParseError(pos, f"{val}() takes one argument, got {len(args)}", self.text)
                return Call(val, tuple(args), pos=pos)
            return Name(val, pos=pos)
        if kind == "op" and val == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        got = "end of input" if kind == "eof" else repr(val)
        raise ParseError(pos, f"expected number, name or '(', got {got}", self.text)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printer

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _prec(e: Expr) -> int:
    return _PREC.get(type(e), 5)


def to_text(e: Expr) -> str:
    """Canonical text; ``parse(to_text(e)) == e``."""
    if isinstance(e, Num):
        return str(e.value)  # parse() only yields integer literals
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Call):
        return f"{e.func}({', '.join(to_text(a) for a in e.args)})"
    if isinstance(e, Neg):
        inner = to_text(e.operand)
        if _prec(e.operand) < _PREC[Neg]:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Pow):
        inner = to_text(e.base)
        if _prec(e.base) <= _PREC[Pow]:
            inner = f"({inner})"
        return f"{inner}^{e.exponent}"
    if isinstance(e, BinOp):
        p = _prec(e)
        left = to_text(e.left)
        if _prec(e.left) < p:
            left = f"({left})"
        right = to_text(e.right)
        if _prec(e.right) <= p:
            right = f"({right})"
        return f"{left} {e.symbol} {right}"
    raise TypeError(e)


# ---------------------------------------------------------------------------
# environment and evaluation

ENV_NAMES = tuple(catalog.CATALOG)


class Environment:
    """Catalog bindings at a common order, built on first use.

    ``overrides`` replaces individual bindings (used for fault injection and
    user-supplied series).
    """

    def __init__(self, order: int, overrides: Mapping[str, GradedSeries | LaurentSeries] | None = None):
        self.order = order
        self._overrides = {
            k: v if isinstance(v, GradedSeries) else GradedSeries(0, v) for k, v in (overrides or {}).items()
        }

    @property
    def precision_floor(self) -> int:
        return UNIT * self.order

    def names(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(ENV_NAMES + tuple(self._overrides)))

    def __contains__(self, name: str) -> bool:
        return name in self._overrides or name in catalog.CATALOG

    def __getitem__(self, name: str) -> GradedSeries:
        if name in self._overrides:
            return self._overrides[name]
        try:
            return catalog.build(name, self.order)
        except KeyError:
            raise EvalError(f"unbound name {name!r}") from None

    def with_bindings(self, **bindings) -> "Environment":
        merged = dict(self._overrides)
        merged.update(bindings)
        return Environment(self.order, merged)


def evaluate(e: Expr, env: Environment) -> GradedSeries:
    if isinstance(e, Num):
        return GradedSeries(0, LaurentSeries.constant(e.value))
    if isinstance(e, Name):
        if e.id not in env:
            raise EvalError(f"unbound name {e.id!r} at offset {e.pos}")
        return env[e.id]
    if isinstance(e, Neg):
        return -evaluate(e.operand, env)
    if isinstance(e, Pow):
        base = evaluate(e.base, env)
        try:
            return base**e.exponent
        except SeriesError as err:
            raise EvalError(f"in {to_text(e)}: {err}") from err
    if isinstance(e, Call):
        return FUNCTIONS[e.func](evaluate(e.args[0], env))
    if isinstance(e, BinOp):
        a, b = evaluate(e.left, env), evaluate(e.right, env)
        try:
            if isinstance(e, Add):
                return a + b
            if isinstance(e, Sub):
                return a - b
            if isinstance(e, Mul):
                return a * b
            return a / b
        except GradingError:
            raise EvalError(
                f"lam-degree mismatch in {to_text(e)!r}: left has degree {a.degree}, right has degree {b.degree}"
            ) from None
        except SeriesError as err:
            raise EvalError(f"in {to_text(e)!r}: {err}") from err
    raise TypeError(e)


def eval_text(text: str, env: Environment) -> GradedSeries:
    return evaluate(parse(text), env)


# ---------------------------------------------------------------------------
# identity checks


@dataclass
class Mismatch:
    exponent24: int
    lhs: Fraction
    rhs: Fraction

    def as_dict(self) -> dict:
        return {"exponent24": self.exponent24, "lhs": str(self.lhs), "rhs": str(self.rhs)}


@dataclass
class IdentityReport:
    id: str
    order: int
    status: str  # "pass" | "fail" | "error"
    mismatch: Mismatch | None = None
    ms: float = 0.0
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def as_dict(self) -> dict:
        d = {
            "id": self.id,
            "order": self.order,
            "status": self.status,
            "mismatch": self.mismatch.as_dict() if self.mismatch else None,
            "ms": round(self.ms, 3),
        }
        if self.message:
            d["message"] = self.message
        return d


def _is_exact_zero(g: GradedSeries) -> bool:
    return g.body.is_exact and g.body.is_zero()


def compare(lhs: GradedSeries, rhs: GradedSeries, order: int, ident: str = "") -> IdentityReport:
    """Compare two evaluated sides over their full common window, which must reach q**order."""
    if lhs.degree != rhs.degree and not (_is_exact_zero(lhs) or _is_exact_zero(rhs)):
        raise EvalError(f"lam-degree mismatch between sides: lhs {lhs.degree}, rhs {rhs.degree}")
    window = min(lhs.precision, rhs.precision)
    if window < UNIT * order:
        have = window / UNIT
        return IdentityReport(
            ident, order, "error",
            message=f"insufficient order: identity known below q^{have:g}, requested q^{order}",
        )
    res = eq_to_order(lhs.body, rhs.body, window)
    if res:
        return IdentityReport(ident, order, "pass")
    return IdentityReport(ident, order, "fail", Mismatch(res.exponent, res.lhs, res.rhs))


def check_identity(lhs: str, rhs: str, env: Environment, order: int | None = None, ident: str = "") -> IdentityReport:
    """Parse, evaluate and compare two sides. Parse and grading errors propagate."""
    order = env.order if order is None else order
    t0 = time.perf_counter()
    left, right = parse(lhs), parse(rhs)
    report = compare(evaluate(left, env), evaluate(right, env), order, ident)
    report.ms = 1000 * (time.perf_counter() - t0)
    return report
