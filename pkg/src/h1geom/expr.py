"""Arithmetic-expression parser with forward-mode dual-number differentiation.

Grammar (standard precedence, ^ right-associative and tighter than unary minus):

    expr    := term  (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Identifiers are the variables u, v, t, the constants pi and e, and the
function names sin cos tan sinh cosh tanh sqrt exp ln abs atan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "Expr",
    "Dual2",
    "ParseError",
    "EvalError",
    "ExprDomainError",
    "parse",
    "pretty",
    "evaluate",
    "eval_dual",
    "eval_dual_t",
    "FUNCTIONS",
    "VARIABLES",
    "CONSTANTS",
]

VARIABLES = ("u", "v", "t")
CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = ("sin", "cos", "tan", "sinh", "cosh", "tanh", "sqrt", "exp", "ln", "abs", "atan")

SQRT_CLAMP = 1e-12  # arguments in [-SQRT_CLAMP, 0] are clamped to 0 before the domain check


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class EvalError(ValueError):
    pass


class ExprDomainError(EvalError):
    """Function argument outside its domain; carries the offending subexpression."""

    def __init__(self, message: str, subexpr: "Expr"):
        super().__init__(f"{message} in '{pretty(subexpr)}'")
        self.subexpr = subexpr


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: float
    pos: int = 0


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Const:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Unary:
    operand: "Expr"
    pos: int = 0


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Expr"
    right: "Expr"
    pos: int = 0


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"
    pos: int = 0


Expr = Union[Num, Var, Const, Unary, Bin, Call]


# ---------------------------------------------------------------------------
# Tokenizer / parser


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num' | 'ident' | 'op' | 'lparen' | 'rparen' | 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
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
            tokens.append(_Token("num", text[start:i], start))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            tokens.append(_Token("ident", text[start:i], start))
            continue
        if ch in "+-*/^":
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("lparen", ch, i))
            i += 1
            continue
        if ch == ")":
            tokens.append(_Token("rparen", ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            found = tok.text or "end of input"
            raise ParseError(f"expected {want!r}, found {found!r}", tok.pos)
        return self.advance()

    def parse(self) -> Expr:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance()
            node = Bin(op.text, node, self.term(), op.pos)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance()
            node = Bin(op.text, node, self.unary(), op.pos)
        return node

    def unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Unary(self.unary(), tok.pos)
        return self.power()

    def power(self) -> Expr:
        node = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            # right operand at unary level gives right associativity and 2^-3
            node = Bin("^", node, self.unary(), tok.pos)
        return node

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text), tok.pos)
        if tok.kind == "lparen":
            self.advance()
            node = self.expr()
            self.expect("rparen")
            return node
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if name in FUNCTIONS:
                self.expect("lparen", "(")
                arg = self.expr()
                self.expect("rparen")
                return Call(name, arg, tok.pos)
            if name in VARIABLES:
                return Var(name, tok.pos)
            if name in CONSTANTS:
                return Const(name, tok.pos)
            raise ParseError(f"unknown identifier {name!r}", tok.pos)
        found = tok.text or "end of input"
        raise ParseError(f"expected a value, found {found!r}", tok.pos)


def parse(text: str) -> Expr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Pretty printer (fixed point of parse-then-print)

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _level(e: Expr) -> int:
    if isinstance(e, Bin):
        if e.op in "+-":
            return _LEVEL_ADD
        if e.op in "*/":
            return _LEVEL_MUL
        return _LEVEL_POW
    if isinstance(e, Unary):
        return _LEVEL_UNARY
    return _LEVEL_ATOM


def pretty(e: Expr) -> str:
    if isinstance(e, Num):
        return f"{e.value:.17g}"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Call):
        return f"{e.fn}({pretty(e.arg)})"
    if isinstance(e, Unary):
        inner = pretty(e.operand)
        if _level(e.operand) < _LEVEL_UNARY:
            inner = f"({inner})"
        return f"-{inner}"
    if isinstance(e, Bin):
        mine = _level(e)
        left, right = pretty(e.left), pretty(e.right)
        if e.op == "^":
            if _level(e.left) <= _LEVEL_POW:
                left = f"({left})"
            if _level(e.right) < _LEVEL_UNARY:
                right = f"({right})"
        else:
            if _level(e.left) < mine:
                left = f"({left})"
            if _level(e.right) <= mine:
                right = f"({right})"
        return f"{left}{e.op}{right}"
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# Dual numbers


@dataclass(frozen=True)
class Dual2:
    """Value with exact first partials with respect to two active variables."""

    value: float
    d_u: float = 0.0
    d_v: float = 0.0

    def __add__(self, o):
        return Dual2(self.value + o.value, self.d_u + o.d_u, self.d_v + o.d_v)

    def __sub__(self, o):
        return Dual2(self.value - o.value, self.d_u - o.d_u, self.d_v - o.d_v)

    def __neg__(self):
        return Dual2(-self.value, -self.d_u, -self.d_v)

    def __mul__(self, o):
        return Dual2(
            self.value * o.value,
            self.value * o.d_u + self.d_u * o.value,
            self.value * o.d_v + self.d_v * o.value,
        )

    def __truediv__(self, o):
        val = _ieee_div(self.value, o.value)
        den = o.value * o.value
        return Dual2(
            val,
            _ieee_div(self.d_u * o.value - self.value * o.d_u, den),
            _ieee_div(self.d_v * o.value - self.value * o.d_v, den),
        )

    def chain(self, value: float, slope: float) -> "Dual2":
        return Dual2(value, slope * self.d_u, slope * self.d_v)


def _ieee_div(a: float, b: float) -> float:
    if b != 0.0:
        return a / b
    if a == 0.0 or math.isnan(a):
        return math.nan
    return math.copysign(math.inf, a) * math.copysign(1.0, b)


def _safe_pow(b: float, p: float) -> float:
    if b == 0.0:
        if p > 0.0:
            return 0.0
        return 1.0 if p == 0.0 else math.inf
    try:
        return b ** p
    except OverflowError:
        even = p == float(int(p)) and int(p) % 2 == 0
        return math.inf if (b > 0.0 or even) else -math.inf


def _dual_pow(base: Dual2, expo: Dual2, node: Expr) -> Dual2:
    b, p = base.value, expo.value
    if expo.d_u == 0.0 and expo.d_v == 0.0:
        if p == float(int(p)) and abs(p) < 1e15:
            n = int(p)
            if n == 0:
                return Dual2(1.0, 0.0, 0.0)
            val = _safe_pow(b, float(n))
            slope = n * _safe_pow(b, float(n - 1)) if (b != 0.0 or n >= 1) else math.inf
            return base.chain(val, slope)
        if b < 0.0:
            raise ExprDomainError(f"negative base {b!r} with non-integer exponent", node)
        val = _safe_pow(b, p)
        slope = p * _safe_pow(b, p - 1.0) if b > 0.0 else (0.0 if p > 1.0 else math.inf)
        return base.chain(val, slope)
    if b <= 0.0:
        raise ExprDomainError(f"non-positive base {b!r} with varying exponent", node)
    val = _safe_pow(b, p)
    du = val * (expo.d_u * math.log(b) + p * base.d_u / b)
    dv = val * (expo.d_v * math.log(b) + p * base.d_v / b)
    return Dual2(val, du, dv)


def _safe(fn, x: float) -> float:
    try:
        return fn(x)
    except OverflowError:
        return math.copysign(math.inf, x) if fn in (math.sinh,) else math.inf


def _dual_call(fn: str, arg: Dual2, node: Expr) -> Dual2:
    x = arg.value
    if fn == "sin":
        return arg.chain(math.sin(x), math.cos(x))
    if fn == "cos":
        return arg.chain(math.cos(x), -math.sin(x))
    if fn == "tan":
        t = math.tan(x)
        return arg.chain(t, 1.0 + t * t)
    if fn == "sinh":
        return arg.chain(_safe(math.sinh, x), _safe(math.cosh, x))
    if fn == "cosh":
        return arg.chain(_safe(math.cosh, x), _safe(math.sinh, x))
    if fn == "tanh":
        t = math.tanh(x)
        return arg.chain(t, 1.0 - t * t)
    if fn == "exp":
        v = _safe(math.exp, x)
        return arg.chain(v, v)
    if fn == "ln":
        if x <= 0.0:
            raise ExprDomainError(f"ln of non-positive value {x!r}", node)
        return arg.chain(math.log(x), 1.0 / x)
    if fn == "sqrt":
        if x < 0.0:
            if x < -SQRT_CLAMP:
                raise ExprDomainError(f"sqrt of negative value {x!r}", node)
            x = 0.0
        root = math.sqrt(x)
        if root == 0.0:
            du = 0.0 if arg.d_u == 0.0 else math.copysign(math.inf, arg.d_u)
            dv = 0.0 if arg.d_v == 0.0 else math.copysign(math.inf, arg.d_v)
            return Dual2(0.0, du, dv)
        return arg.chain(root, 0.5 / root)
    if fn == "abs":
        sign = 0.0 if x == 0.0 else math.copysign(1.0, x)
        return arg.chain(abs(x), sign)
    if fn == "atan":
        return arg.chain(math.atan(x), 1.0 / (1.0 + x * x))
    raise EvalError(f"unknown function {fn!r}")


def _eval(e: Expr, bindings: dict[str, Dual2]) -> Dual2:
    if isinstance(e, Num):
        return Dual2(e.value)
    if isinstance(e, Const):
        return Dual2(CONSTANTS[e.name])
    if isinstance(e, Var):
        try:
            return bindings[e.name]
        except KeyError:
            raise EvalError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Unary):
        return -_eval(e.operand, bindings)
    if isinstance(e, Call):
        return _dual_call(e.fn, _eval(e.arg, bindings), e)
    if isinstance(e, Bin):
        left = _eval(e.left, bindings)
        right = _eval(e.right, bindings)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        if e.op == "/":
            return left / right
        if e.op == "^":
            return _dual_pow(left, right, e)
    raise TypeError(f"not an expression node: {e!r}")


def evaluate(e: Expr, bindings: dict[str, float]) -> float:
    """IEEE double evaluation with all free variables bound."""
    duals = {name: Dual2(float(val)) for name, val in bindings.items()}
    return _eval(e, duals).value


def eval_dual(e: Expr, u: float, v: float) -> Dual2:
    """Value and exact partials for an expression in the variables u and v."""
    return _eval(e, {"u": Dual2(float(u), 1.0, 0.0), "v": Dual2(float(v), 0.0, 1.0)})


def eval_dual_t(e: Expr, t: float) -> Dual2:
    """Value and d/dt (in the d_u slot) for a single-variable expression in t."""
    return _eval(e, {"t": Dual2(float(t), 1.0, 0.0)})
