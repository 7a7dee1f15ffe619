"""Symbolic expressions in a single real variable.

A small self-contained expression language: decimal literals, one declared
variable, the unary functions sin/cos/tan/exp/log/sinh/cosh/tanh/sqrt, the
binary operators ``+ - * / ^`` and unary minus.  Expressions are immutable
trees supporting exact differentiation, shallow simplification and printing
to fully parenthesized text that reparses to an equivalent tree.

Grammar (no implicit multiplication)::

    expr    := term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := '-' factor | power
    power   := atom ('^' factor)?          # right associative
    atom    := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.  General
powers ``a^b`` with a non-constant exponent are evaluated as
``exp(b*log(a))`` and therefore require ``a > 0`` at the evaluation point;
constant exponents follow the usual real-power rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union


class ExprError(ValueError):
    """Base class for expression errors."""


class ParseError(ExprError):
    """Syntax or unknown-identifier error, with a 0-based byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class EvalDomainError(ExprError):
    """Evaluation left the definition domain of a subexpression."""

    def __init__(self, message: str, node: "Expression"):
        super().__init__(f"{message} in '{to_text(node)}'")
        self.node = node


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expression"


@dataclass(frozen=True)
class Add:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Sub:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Mul:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Div:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Pow:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Fun:
    name: str
    arg: "Expression"


Expression = Union[Num, Var, Neg, Add, Sub, Mul, Div, Pow, Fun]

FUNCTION_NAMES = ("sin", "cos", "tan", "exp", "log", "sinh", "cosh", "tanh", "sqrt")

_MATH_FUNCS: dict[str, Callable[[float], float]] = {name: getattr(math, name) for name in FUNCTION_NAMES}


# ---------------------------------------------------------------------------
# lexer / parser
# ---------------------------------------------------------------------------

_OPERATORS = "+-*/^()"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, value, offset) tokens; kind in {num, ident, op, end}."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c in _OPERATORS:
            tokens.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or (c == "." and i + 1 < n and text[i + 1].isdigit()):
            start = i
            while i < n and text[i].isdigit():
                i += 1
            if i < n and text[i] == ".":
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
            tokens.append(("num", text[start:i], start))
            continue
        if c.isalpha() or c == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(("ident", text[start:i], start))
            continue
        raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str, int]], var_name: str):
        self.tokens = tokens
        self.pos = 0
        self.var_name = var_name

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, value, offset = self.peek()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", offset)
        return self.advance()

    def parse_expr(self) -> Expression:
        node = self.parse_term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.parse_term()
                node = Add(node, rhs) if value == "+" else Sub(node, rhs)
            else:
                return node

    def parse_term(self) -> Expression:
        node = self.parse_factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.advance()
                rhs = self.parse_factor()
                node = Mul(node, rhs) if value == "*" else Div(node, rhs)
            else:
                return node

    def parse_factor(self) -> Expression:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return Neg(self.parse_factor())
        return self.parse_power()

    def parse_power(self) -> Expression:
        base = self.parse_atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            # exponent may itself carry a unary minus, e.g. x^-2
            return Pow(base, self.parse_factor())
        return base

    def parse_atom(self) -> Expression:
        kind, value, offset = self.advance()
        if kind == "num":
            return Num(float(value))
        if kind == "ident":
            nkind, nvalue, _ = self.peek()
            if nkind == "op" and nvalue == "(":
                if value not in _MATH_FUNCS:
                    raise ParseError(f"unknown function {value!r}", offset)
                self.advance()
                arg = self.parse_expr()
                self.expect_op(")")
                return Fun(value, arg)
            if value != self.var_name:
                raise ParseError(f"unknown identifier {value!r}", offset)
            return Var(value)
        if kind == "op" and value == "(":
            node = self.parse_expr()
            self.expect_op(")")
            return node
        raise ParseError("expected a number, identifier or '('", offset)


def parse(text: str, var_name: str) -> Expression:
    """Parse ``text`` over the single variable ``var_name``."""
    if not text or not text.strip():
        raise ParseError("empty expression", 0)
    parser = _Parser(_tokenize(text), var_name)
    node = parser.parse_expr()
    kind, _, offset = parser.peek()
    if kind != "end":
        raise ParseError("trailing input", offset)
    return node


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def is_constant(e: Expression) -> bool:
    """True when no variable occurs in the tree."""
    if isinstance(e, Num):
        return True
    if isinstance(e, Var):
        return False
    if isinstance(e, Neg):
        return is_constant(e.arg)
    if isinstance(e, Fun):
        return is_constant(e.arg)
    return is_constant(e.left) and is_constant(e.right)


def _eval_pow(node: Pow, base: float, expo: float, const_exponent: bool) -> float:
    if const_exponent:
        if base == 0.0 and expo < 0.0:
            raise EvalDomainError("0 raised to a negative power", node)
        try:
            result = base ** expo
        except (ValueError, OverflowError) as exc:
            raise EvalDomainError(f"invalid power {base!r} ^ {expo!r}", node) from exc
        if isinstance(result, complex):
            raise EvalDomainError("negative base with fractional exponent", node)
        return result
    if base <= 0.0:
        raise EvalDomainError("non-constant exponent requires a positive base", node)
    return math.exp(expo * math.log(base))


def evaluate(e: Expression, x: float) -> float:
    """IEEE double value of ``e`` at the point ``x``.

    Raises EvalDomainError (naming the offending subexpression) for log or
    sqrt of a negative number, division by zero, or an invalid power.
    """
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return float(x)
    if isinstance(e, Neg):
        return -evaluate(e.arg, x)
    if isinstance(e, Add):
        return evaluate(e.left, x) + evaluate(e.right, x)
    if isinstance(e, Sub):
        return evaluate(e.left, x) - evaluate(e.right, x)
    if isinstance(e, Mul):
        return evaluate(e.left, x) * evaluate(e.right, x)
    if isinstance(e, Div):
        denom = evaluate(e.right, x)
        if denom == 0.0:
            raise EvalDomainError("division by zero", e)
        return evaluate(e.left, x) / denom
    if isinstance(e, Pow):
        return _eval_pow(e, evaluate(e.left, x), evaluate(e.right, x), is_constant(e.right))
    if isinstance(e, Fun):
        value = evaluate(e.arg, x)
        if e.name == "log" and value <= 0.0:
            raise EvalDomainError("log of a non-positive number", e)
        if e.name == "sqrt" and value < 0.0:
            raise EvalDomainError("sqrt of a negative number", e)
        try:
            return _MATH_FUNCS[e.name](value)
        except (ValueError, OverflowError) as exc:
            raise EvalDomainError(f"{e.name} out of range", e) from exc
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# differentiation
# ---------------------------------------------------------------------------

def _d(e: Expression) -> Expression:
    if isinstance(e, Num):
        return Num(0.0)
    if isinstance(e, Var):
        return Num(1.0)
    if isinstance(e, Neg):
        return Neg(_d(e.arg))
    if isinstance(e, Add):
        return Add(_d(e.left), _d(e.right))
    if isinstance(e, Sub):
        return Sub(_d(e.left), _d(e.right))
    if isinstance(e, Mul):
        return Add(Mul(_d(e.left), e.right), Mul(e.left, _d(e.right)))
    if isinstance(e, Div):
        num = Sub(Mul(_d(e.left), e.right), Mul(e.left, _d(e.right)))
        return Div(num, Pow(e.right, Num(2.0)))
    if isinstance(e, Pow):
        a, b = e.left, e.right
        if is_constant(b):
            return Mul(Mul(b, Pow(a, Sub(b, Num(1.0)))), _d(a))
        # a^b = exp(b log a):  (a^b)' = a^b (b' log a + b a'/a)
        inner = Add(Mul(_d(b), Fun("log", a)), Div(Mul(b, _d(a)), a))
        return Mul(e, inner)
    if isinstance(e, Fun):
        u, du = e.arg, _d(e.arg)
        outer = {
            "sin": lambda: Fun("cos", u),
            "cos": lambda: Neg(Fun("sin", u)),
            "tan": lambda: Add(Num(1.0), Pow(Fun("tan", u), Num(2.0))),
            "exp": lambda: Fun("exp", u),
            "log": lambda: Div(Num(1.0), u),
            "sqrt": lambda: Div(Num(1.0), Mul(Num(2.0), Fun("sqrt", u))),
            "sinh": lambda: Fun("cosh", u),
            "cosh": lambda: Fun("sinh", u),
            "tanh": lambda: Sub(Num(1.0), Pow(Fun("tanh", u), Num(2.0))),
        }[e.name]()
        return Mul(outer, du)
    raise TypeError(f"not an expression node: {e!r}")


def differentiate(e: Expression, order: int = 1) -> Expression:
    """Exact symbolic derivative of the given order, lightly simplified."""
    if order < 1:
        raise ValueError("derivative order must be >= 1")
    node = e
    for _ in range(order):
        node = simplify(_d(node))
    return node


# ---------------------------------------------------------------------------
# simplification
# ---------------------------------------------------------------------------

def _is_num(e: Expression, value: float) -> bool:
    return isinstance(e, Num) and e.value == value


def simplify(e: Expression) -> Expression:
    """Value-preserving shallow simplification: constant folding plus 0/1
    identity elimination.  Idempotent; no polynomial canonicalization."""
    if isinstance(e, (Num, Var)):
        return e
    if isinstance(e, Neg):
        arg = simplify(e.arg)
        if isinstance(arg, Num):
            return Num(-arg.value)
        if isinstance(arg, Neg):
            return arg.arg
        return Neg(arg)
    if isinstance(e, Fun):
        arg = simplify(e.arg)
        node = Fun(e.name, arg)
        if isinstance(arg, Num):
            try:
                return Num(evaluate(node, 0.0))
            except ExprError:
                return node
        return node

    left = simplify(e.left)
    right = simplify(e.right)
    node = type(e)(left, right)
    if isinstance(left, Num) and isinstance(right, Num):
        try:
            return Num(evaluate(node, 0.0))
        except ExprError:
            return node
    if isinstance(node, Add):
        if _is_num(left, 0.0):
            return right
        if _is_num(right, 0.0):
            return left
    elif isinstance(node, Sub):
        if _is_num(right, 0.0):
            return left
        if _is_num(left, 0.0):
            return Neg(right)
    elif isinstance(node, Mul):
        if _is_num(left, 0.0) or _is_num(right, 0.0):
            return Num(0.0)
        if _is_num(left, 1.0):
            return right
        if _is_num(right, 1.0):
            return left
    elif isinstance(node, Div):
        if _is_num(right, 1.0):
            return left
        if _is_num(left, 0.0):
            return Num(0.0)
    elif isinstance(node, Pow):
        if _is_num(right, 1.0):
            return left
        if _is_num(right, 0.0):
            return Num(1.0)
    return node


# ---------------------------------------------------------------------------
# printing and compilation
# ---------------------------------------------------------------------------

def to_text(e: Expression) -> str:
    """Fully parenthesized canonical text; reparses to an equivalent tree."""
    if isinstance(e, Num):
        # a bare leading minus would rebind below ^, e.g. in (-2 ^ 2)
        return f"({e.value!r})" if e.value < 0 else repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_text(e.arg)})"
    if isinstance(e, Fun):
        return f"{e.name}({to_text(e.arg)})"
    symbol = {Add: "+", Sub: "-", Mul: "*", Div: "/", Pow: "^"}[type(e)]
    return f"({to_text(e.left)} {symbol} {to_text(e.right)})"


def to_source(e: Expression) -> str:
    """Python source for the tree (names sin..sqrt left free)."""
    if isinstance(e, Num):
        return f"({e.value!r})" if e.value < 0 else repr(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_source(e.arg)})"
    if isinstance(e, Fun):
        return f"{e.name}({to_source(e.arg)})"
    symbol = {Add: "+", Sub: "-", Mul: "*", Div: "/", Pow: "**"}[type(e)]
    return f"({to_source(e.left)} {symbol} {to_source(e.right)})"


def compile_fn(e: Expression, var_name: str, numpy_backend: bool = False):
    """Compile the tree to a fast ``f(x)`` callable.

    The math backend (default) is fastest for scalars; the numpy backend
    accepts arrays.  Domain violations surface as ValueError/ZeroDivision
    from the backend rather than EvalDomainError; use :func:`evaluate` when
    precise error attribution matters.
    """
    if numpy_backend:
        import numpy as np

        namespace = {name: getattr(np, name) for name in FUNCTION_NAMES}
    else:
        namespace = dict(_MATH_FUNCS)
    namespace["__builtins__"] = {}
    return eval(f"lambda {var_name}: {to_source(e)}", namespace)  # noqa: S307 - own AST only
