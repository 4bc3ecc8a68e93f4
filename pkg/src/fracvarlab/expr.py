"""Expression front end: text -> AST -> stack program -> evaluatable function.

Grammar (loosest to tightest binding):

    expr   :=  term  (('+' | '-') term)*
    term   :=  factor (('*' | '/') factor)*
    factor :=  '-' factor | power
    power  :=  atom ('^' factor)?          # right-associative
    atom   :=  NUMBER | 'x' | name '(' expr {',' expr} ')' | '(' expr ')'

so ``-x^2`` parses as ``-(x^2)`` and ``x^-2`` is legal.  ``powabs(u, a)``
is ``|u|^a`` as a primitive: the |x|^alpha test family must never route a
fractional exponent through a negative base.

Undefined values travel in-band as NaN; infinities are ordinary IEEE
values.  Evaluation is pure and can run from many threads at once.
"""

import functools
import math
import re
from dataclasses import dataclass

import numpy as np

from . import backend
from ._evalcore_py import (OP_ABS, OP_ADD, OP_CONST, OP_COS, OP_COT, OP_DIV,
                           OP_EXP, OP_LOG, OP_MUL, OP_NEG, OP_POW, OP_POWABS,
                           OP_SETX, OP_SIGN, OP_SIN, OP_SQRT, OP_SUB, OP_TAN,
                           OP_X)

STACK_LIMIT = 32  # must match the kernels' stack size

FUNCTIONS = {
    "abs": (OP_ABS, 1), "sign": (OP_SIGN, 1), "sin": (OP_SIN, 1),
    "cos": (OP_COS, 1), "tan": (OP_TAN, 1), "cot": (OP_COT, 1),
    "exp": (OP_EXP, 1), "log": (OP_LOG, 1), "sqrt": (OP_SQRT, 1),
    "pow": (OP_POW, 2), "powabs": (OP_POWABS, 2),
}


class ParseError(ValueError):
    """Syntax error with the offending position and what was expected."""

    def __init__(self, position, expected, found=""):
        self.position = position
        self.expected = expected
        self.found = found
        shown = found if found else "end of input"
        super().__init__(f"at position {position}: expected {expected}, found {shown!r}")


class UnknownIdentifier(ParseError):
    def __init__(self, name, position):
        self.name = name
        ParseError.__init__(self, position, "a known function or 'x'", name)
        self.args = (f"at position {position}: unknown identifier {name!r}",)


# ---------------------------------------------------------------- AST

@dataclass(frozen=True)
class Lit:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Bin:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Expr = Lit | Var | Neg | Bin | Call

_TOKEN_RE = re.compile(r"""
      (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<op>[-+*/^(),])
    | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(pos, "a number, name or operator", text[pos])
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value, what):
        kind, text, pos = self.peek()
        if text != value:
            raise ParseError(pos, what, text)
        return self.take()

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = Bin(op, node, self.factor())
        return node

    def factor(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return Bin("^", base, self.factor())
        return base

    def atom(self):
        kind, text, pos = self.peek()
        if kind == "num":
            self.take()
            return Lit(float(text))
        if kind == "name":
            self.take()
            if text == "x":
                return Var()
            if text not in FUNCTIONS:
                raise UnknownIdentifier(text, pos)
            arity = FUNCTIONS[text][1]
            self.expect("(", f"'(' after {text}")
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.expect(")", "')'")
            if len(args) != arity:
                raise ParseError(pos, f"{arity} argument(s) to {text}",
                                 f"{len(args)} arguments")
            return Call(text, tuple(args))
        if text == "(":
            self.take()
            node = self.expr()
            self.expect(")", "')'")
            return node
        raise ParseError(pos, "a number, 'x', function call or '('", text)


def parse(text: str) -> Expr:
    """Parse an expression; raises ParseError / UnknownIdentifier."""
    parser = _Parser(_tokenize(text))
    node = parser.expr()
    kind, tok, pos = parser.peek()
    if kind != "end":
        raise ParseError(pos, "end of input", tok)
    return node


def to_text(e: Expr) -> str:
    """Fully parenthesized form; reparsing yields a structurally equal tree."""
    if isinstance(e, Lit):
        return repr(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        return f"(-{to_text(e.operand)})"
    if isinstance(e, Bin):
        return f"({to_text(e.left)} {e.op} {to_text(e.right)})"
    return f"{e.name}({', '.join(to_text(a) for a in e.args)})"


# ---------------------------------------------------------------- compiler

_BIN_OPS = {"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV, "^": OP_POW}


def _emit(e, code, consts):
    if isinstance(e, Lit):
        code += [OP_CONST, len(consts)]
        consts.append(e.value)
        return 1
    if isinstance(e, Var):
        code.append(OP_X)
        return 1
    if isinstance(e, Neg):
        d = _emit(e.operand, code, consts)
        code.append(OP_NEG)
        return d
    if isinstance(e, Bin):
        d1 = _emit(e.left, code, consts)
        d2 = _emit(e.right, code, consts)
        code.append(_BIN_OPS[e.op])
        return max(d1, 1 + d2)
    op, arity = FUNCTIONS[e.name]
    if arity == 1:
        d = _emit(e.args[0], code, consts)
        code.append(op)
        return d
    d1 = _emit(e.args[0], code, consts)
    d2 = _emit(e.args[1], code, consts)
    code.append(op)
    return max(d1, 1 + d2)


@functools.lru_cache(maxsize=512)
def compile_expr(e: Expr):
    """Compile an AST into (code, consts) arrays for the kernel."""
    code, consts = [], []
    depth = _emit(e, code, consts)
    if depth > STACK_LIMIT:
        raise ValueError(f"expression nests deeper than {STACK_LIMIT}")
    return (np.asarray(code, dtype=np.intc),
            np.asarray(consts if consts else [0.0], dtype=np.float64))


def eval_expr(e: Expr, x: float) -> float:
    """Evaluate an AST at a point (extended reals; NaN = undefined)."""
    code, consts = compile_expr(e)
    return backend.eval_program(code, consts, float(x))


# ---------------------------------------------------------------- domains

@dataclass(frozen=True)
class PoleFamily:
    """Poles at offset + k*period (single pole when period is None)."""

    offset: float
    period: float | None = None

    def locations_in(self, lo, hi):
        if self.period is None:
            return [self.offset] if lo <= self.offset <= hi else []
        k0 = math.ceil((lo - self.offset) / self.period)
        k1 = math.floor((hi - self.offset) / self.period)
        return [self.offset + k * self.period for k in range(k0, k1 + 1)]

    def shifted(self, s):
        return PoleFamily(self.offset + s, self.period)

    def arg_scaled(self, a):
        return PoleFamily(self.offset / a,
                          None if self.period is None else self.period / abs(a))


@dataclass(frozen=True)
class Domain:
    """Declared domain: one interval, minus a set of listed pole families.

    Pole locations are metadata for scanners (evaluation at a float near a
    pole still returns whatever libm produces); the interval is where
    evaluation is defined at all.
    """

    lo: float = -math.inf
    hi: float = math.inf
    poles: tuple = ()

    def contains(self, x):
        return self.lo <= x <= self.hi

    def poles_in(self, lo, hi):
        pts = sorted(p for fam in self.poles for p in fam.locations_in(lo, hi))
        return pts

    def shifted(self, s):
        # domain of x -> f(x + s): defined where x + s was defined
        return Domain(self.lo - s, self.hi - s,
                      tuple(f.shifted(-s) for f in self.poles))

    def arg_scaled(self, a):
        lo, hi = self.lo / a, self.hi / a
        if a < 0:
            lo, hi = hi, lo
        return Domain(lo, hi, tuple(f.arg_scaled(a) for f in self.poles))


ALL_REALS = Domain()


def _affine(e):
    """Return (a, b) with e == a*x + b when e is affine in x, else None."""
    if isinstance(e, Lit):
        return (0.0, e.value)
    if isinstance(e, Var):
        return (1.0, 0.0)
    if isinstance(e, Neg):
        inner = _affine(e.operand)
        return None if inner is None else (-inner[0], -inner[1])
    if isinstance(e, Bin):
        l, r = _affine(e.left), _affine(e.right)
        if e.op == "+" and l and r:
            return (l[0] + r[0], l[1] + r[1])
        if e.op == "-" and l and r:
            return (l[0] - r[0], l[1] - r[1])
        if e.op == "*" and l and r:
            if l[0] == 0.0:
                return (l[1] * r[0], l[1] * r[1])
            if r[0] == 0.0:
                return (r[1] * l[0], r[1] * l[1])
        if e.op == "/" and l and r and r[0] == 0.0 and r[1] != 0.0:
            return (l[0] / r[1], l[1] / r[1])
    return None


def _const_value(e):
    aff = _affine(e)
    return aff[1] if aff is not None and aff[0] == 0.0 else None


def analyze_domain(e: Expr) -> Domain:
    """Best-effort static domain: intervals from log/sqrt of affine
    arguments, pole families from tan/cot and from negative powers or
    divisions with affine arguments.  Anything it cannot see stays in-band
    (evaluation returns NaN/inf on its own)."""
    lo, hi = -math.inf, math.inf
    poles = []

    def visit(node):
        nonlocal lo, hi
        if isinstance(node, Neg):
            visit(node.operand)
            return
        if isinstance(node, Bin):
            visit(node.left)
            visit(node.right)
            if node.op == "/":
                aff = _affine(node.right)
                if aff and aff[0] != 0.0:
                    poles.append(PoleFamily(-aff[1] / aff[0]))
            if node.op == "^":
                expo = _const_value(node.right)
                aff = _affine(node.left)
                if expo is not None and expo < 0 and aff and aff[0] != 0.0:
                    poles.append(PoleFamily(-aff[1] / aff[0]))
            return
        if isinstance(node, Call):
            for a in node.args:
                visit(a)
            aff = _affine(node.args[0])
            if node.name in ("tan", "cot") and aff and aff[0] != 0.0:
                a, b = aff
                anchor = math.pi / 2 if node.name == "tan" else 0.0
                poles.append(PoleFamily((anchor - b) / a, math.pi / abs(a)))
            elif node.name in ("log", "sqrt") and aff and aff[0] != 0.0:
                a, b = aff
                root = -b / a
                if a > 0:
                    lo = max(lo, root)
                else:
                    hi = min(hi, root)
            elif node.name in ("pow", "powabs"):
                expo = _const_value(node.args[1])
                if expo is not None and expo < 0 and aff and aff[0] != 0.0:
                    poles.append(PoleFamily(-aff[1] / aff[0]))
            return

    visit(e)
    return Domain(lo, hi, tuple(poles))


# ---------------------------------------------------------------- functions

class RealFunction:
    """Evaluatable real -> extended-real mapping with a declared domain.

    Subclasses are immutable and picklable; evaluation is pure, so any
    instance may be shared across threads or worker processes.
    """

    domain: Domain = ALL_REALS
    label: str = "<fn>"

    def __call__(self, x: float) -> float:
        raise NotImplementedError

    def eval_many(self, xs) -> np.ndarray:
        return np.asarray([self(float(x)) for x in xs], dtype=np.float64)

    def __repr__(self):
        return f"{type(self).__name__}({self.label})"


class ExprFunction(RealFunction):
    """A parsed expression compiled to a kernel program."""

    def __init__(self, code, consts, domain, label):
        self.code = np.asarray(code, dtype=np.intc)
        self.consts = np.asarray(consts, dtype=np.float64)
        self.domain = domain
        self.label = label

    def __call__(self, x):
        return backend.eval_program(self.code, self.consts, float(x))

    def eval_many(self, xs):
        return backend.eval_program_many(self.code, self.consts,
                                         np.asarray(xs, dtype=np.float64))

    def translated(self, shift):
        # prepend: x <- x + shift (same float op order as f(x + shift))
        idx = len(self.consts)
        code = np.concatenate((np.asarray([OP_X, OP_CONST, idx, OP_ADD, OP_SETX],
                                          dtype=np.intc), self.code))
        consts = np.concatenate((self.consts, [shift]))
        return ExprFunction(code, consts, self.domain.shifted(shift),
                            f"translate({self.label}, {shift!r})")

    def arg_scaled(self, a):
        idx = len(self.consts)
        code = np.concatenate((np.asarray([OP_X, OP_CONST, idx, OP_MUL, OP_SETX],
                                          dtype=np.intc), self.code))
        consts = np.concatenate((self.consts, [a]))
        return ExprFunction(code, consts, self.domain.arg_scaled(a),
                            f"scale_arg({self.label}, {a!r})")

    def out_scaled(self, c):
        idx = len(self.consts)
        code = np.concatenate((self.code,
                               np.asarray([OP_CONST, idx, OP_MUL], dtype=np.intc)))
        consts = np.concatenate((self.consts, [c]))
        return ExprFunction(code, consts, self.domain,
                            f"scale_out({self.label}, {c!r})")


@dataclass(frozen=True, repr=False)
class CallableFunction(RealFunction):
    """Wraps a picklable Python callable as a RealFunction."""

    fn: object
    domain: Domain = ALL_REALS
    label: str = "<callable>"

    def __call__(self, x):
        return float(self.fn(float(x)))


@dataclass(frozen=True, repr=False)
class TranslatedFunction(RealFunction):
    inner: RealFunction
    shift: float

    def __call__(self, x):
        return self.inner(x + self.shift)

    @property
    def domain(self):
        return self.inner.domain.shifted(self.shift)

    @property
    def label(self):
        return f"translate({self.inner.label}, {self.shift!r})"


@dataclass(frozen=True, repr=False)
class ScaledFunction(RealFunction):
    """x -> out_scale * inner(arg_scale * x)."""

    inner: RealFunction
    arg_scale: float = 1.0
    out_scale: float = 1.0

    def __call__(self, x):
        v = self.inner(self.arg_scale * x)
        return v if self.out_scale == 1.0 else self.out_scale * v

    @property
    def domain(self):
        return self.inner.domain.arg_scaled(self.arg_scale)

    @property
    def label(self):
        return f"scaled({self.inner.label}, {self.arg_scale!r}, {self.out_scale!r})"


@dataclass(frozen=True, repr=False)
class ComposedFunction(RealFunction):
    """x -> outer(inner(x)); used by the compound-variation checks."""

    outer: RealFunction
    inner: RealFunction
    domain: Domain = ALL_REALS

    def __call__(self, x):
        return self.outer(self.inner(x))

    @property
    def label(self):
        return f"compose({self.outer.label}, {self.inner.label})"


def parse_function(text: str) -> ExprFunction:
    """Parse expression text into a compiled, domain-annotated function."""
    tree = parse(text)
    code, consts = compile_expr(tree)
    return ExprFunction(code, consts, analyze_domain(tree), text.strip())
