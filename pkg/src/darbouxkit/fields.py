"""Closed-form scalar fields over two coordinates.

Fields are immutable expression trees built from constants, the two
coordinates, arithmetic, integer powers, ``exp`` and partial derivatives.
There is no symbolic simplification or differentiation: a
:class:`Partial` node is evaluated by expanding its argument to a higher
jet order and shifting coefficients, so every derivative is exact.

The first coordinate is always the spatial ``x``.  The second one is ``y``
for AKNS/sinh-Gordon and ``t`` for NLBq/Kaup; the parser accepts both names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import jets
from .errors import FieldOverflowError, FieldSyntaxError, PoleError
from .jets import DEFAULT_ORDERS, Jet2

EXP_GUARD = 700.0


class Point2(NamedTuple):
    a: float
    b: float


class FieldExpr:
    """Base class of all expression nodes; supplies operator sugar."""

    __slots__ = ()

    def __add__(self, other):
        return Add(self, as_field(other))

    def __radd__(self, other):
        return Add(as_field(other), self)

    def __sub__(self, other):
        return Sub(self, as_field(other))

    def __rsub__(self, other):
        return Sub(as_field(other), self)

    def __mul__(self, other):
        return Mul(self, as_field(other))

    def __rmul__(self, other):
        return Mul(as_field(other), self)

    def __truediv__(self, other):
        return Div(self, as_field(other))

    def __rtruediv__(self, other):
        return Div(as_field(other), self)

    def __neg__(self):
        return Mul(Constant(-1.0), self)

    def __pow__(self, n):
        return PowInt(self, n)

    def children(self) -> tuple[FieldExpr, ...]:
        return ()


@dataclass(frozen=True, eq=True, repr=False)
class Constant(FieldExpr):
    value: float

    def __repr__(self):
        return f"Constant({self.value!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Coordinate(FieldExpr):
    axis: int  # 0 -> x, 1 -> y / t

    def __post_init__(self):
        if self.axis not in (0, 1):
            raise ValueError("coordinate axis must be 0 or 1")

    def __repr__(self):
        return "Coordinate(first)" if self.axis == 0 else "Coordinate(second)"


@dataclass(frozen=True, eq=True, repr=False)
class _Binary(FieldExpr):
    left: FieldExpr
    right: FieldExpr

    def children(self):
        return (self.left, self.right)

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


class Add(_Binary):
    pass


class Sub(_Binary):
    pass


class Mul(_Binary):
    pass


class Div(_Binary):
    pass


@dataclass(frozen=True, eq=True, repr=False)
class PowInt(FieldExpr):
    base: FieldExpr
    exponent: int

    def __post_init__(self):
        if int(self.exponent) != self.exponent:
            raise TypeError("PowInt exponent must be an integer")

    def children(self):
        return (self.base,)

    def __repr__(self):
        return f"PowInt({self.base!r}, {self.exponent})"


@dataclass(frozen=True, eq=True, repr=False)
class Exp(FieldExpr):
    arg: FieldExpr

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Exp({self.arg!r})"


@dataclass(frozen=True, eq=True, repr=False)
class Partial(FieldExpr):
    """Mixed partial derivative ``d^{da+db} arg / dx^da d(y|t)^db``."""

    arg: FieldExpr
    da: int
    db: int

    def __post_init__(self):
        if self.da < 0 or self.db < 0:
            raise ValueError("derivative counts must be non-negative")

    def children(self):
        return (self.arg,)

    def __repr__(self):
        return f"Partial({self.arg!r}, {self.da}, {self.db})"


X = Coordinate(0)
Y = Coordinate(1)
T = Y


def as_field(v) -> FieldExpr:
    if isinstance(v, FieldExpr):
        return v
    if isinstance(v, (int, float, np.floating, np.integer)):
        return Constant(float(v))
    raise TypeError(f"cannot use {type(v).__name__} as a field")


def const(c: float) -> Constant:
    return Constant(float(c))


def exp(f) -> Exp:
    return Exp(as_field(f))


def d(f: FieldExpr, da: int = 1, db: int = 0) -> FieldExpr:
    """Partial-derivative node; nested partials are merged into one node."""
    if da == 0 and db == 0:
        return f
    if isinstance(f, Partial):
        return Partial(f.arg, f.da + da, f.db + db)
    return Partial(f, da, db)


def dx(f: FieldExpr, n: int = 1) -> FieldExpr:
    return d(f, n, 0)


def db(f: FieldExpr, n: int = 1) -> FieldExpr:
    """Derivative in the second coordinate (``y`` or ``t``)."""
    return d(f, 0, n)


# ----------------------------------------------------------------------------
# evaluation


def _topo_order(roots: Sequence[FieldExpr]):
    """Children-first ordering of the DAG reachable from ``roots``."""
    order: list[FieldExpr] = []
    seen: set[int] = set()
    parent: dict[int, tuple[FieldExpr, str]] = {}
    for root in roots:
        if id(root) in seen:
            continue
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for slot, child in zip(_slot_names(node), node.children()):
                if id(child) not in seen:
                    parent.setdefault(id(child), (node, slot))
                    stack.append((child, False))
    return order, parent


def _slot_names(node: FieldExpr) -> tuple[str, ...]:
    if isinstance(node, _Binary):
        return ("left", "right")
    if isinstance(node, PowInt):
        return ("base",)
    if isinstance(node, (Exp, Partial)):
        return ("arg",)
    return ()


def _path_to(node: FieldExpr, parent) -> str:
    parts = [type(node).__name__]
    cur = node
    while id(cur) in parent:
        up, slot = parent[id(cur)]
        parts.append(f"{type(up).__name__}.{slot}")
        cur = up
    return "/".join(reversed(parts))


class Evaluation(NamedTuple):
    jets: list[Jet2]
    # min over every divisor g of |g| / (|g| + |g_a| + |g_b|), a scale-free
    # estimate of the distance to the zero set of g; 0 on an exact pole,
    # inf where no division occurs
    pole_margin: np.ndarray


def _is_divisor(node: FieldExpr, child: FieldExpr) -> bool:
    if isinstance(node, Div):
        return child is node.right
    return isinstance(node, PowInt) and node.exponent < 0


def _divisor_margin(g: Jet2) -> np.ndarray:
    v = np.abs(g.coeffs[0, 0])
    slope = np.abs(g.coeffs[1, 0]) + np.abs(g.coeffs[0, 1])
    with np.errstate(invalid="ignore"):
        m = v / (v + slope)
    return np.where(v == 0, 0.0, m)


def evaluate_many(
    roots: Sequence[FieldExpr],
    point,
    order_a: int = DEFAULT_ORDERS[0],
    order_b: int = DEFAULT_ORDERS[1],
    *,
    strict: bool = True,
) -> Evaluation:
    """Evaluate several fields sharing subexpressions, at one point or a batch.

    ``point`` is a :class:`Point2`, an ``(a, b)`` pair of scalars, or a pair of
    equally shaped arrays (a batch).  Every node is expanded once, at the
    highest order any of its consumers needs.  With ``strict=False`` exact
    poles yield NaN entries instead of raising :class:`PoleError`.
    """
    a = np.asarray(point[0], dtype=float)
    b = np.asarray(point[1], dtype=float)
    a, b = np.broadcast_arrays(a, b)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValueError("evaluation point must be finite")
    batch = a.shape

    order, parent = _topo_order(roots)
    need: dict[int, tuple[int, int]] = {}
    for r in roots:
        cur = need.get(id(r), (-1, -1))
        need[id(r)] = (max(cur[0], order_a), max(cur[1], order_b))
    for node in reversed(order):
        oa, ob = need[id(node)]
        if isinstance(node, Partial):
            demand = (oa + node.da, ob + node.db)
        else:
            demand = (oa, ob)
        for child in node.children():
            dem = demand
            if _is_divisor(node, child):
                # the pole guard needs the divisor's gradient
                dem = (max(dem[0], 1), max(dem[1], 1))
            cur = need.get(id(child), (-1, -1))
            need[id(child)] = (max(cur[0], dem[0]), max(cur[1], dem[1]))

    margin = np.full(batch, np.inf)
    val: dict[int, Jet2] = {}

    def child_jet(child, oa, ob):
        return val[id(child)].truncate(oa, ob)

    for node in order:
        oa, ob = need[id(node)]
        if isinstance(node, Constant):
            out = jets.jet_const(np.full(batch, node.value), oa, ob)
        elif isinstance(node, Coordinate):
            out = jets.jet_const(a if node.axis == 0 else b, oa, ob)
            if (oa, ob)[node.axis] >= 1:
                if node.axis == 0:
                    out.coeffs[1, 0] = 1.0
                else:
                    out.coeffs[0, 1] = 1.0
        elif isinstance(node, Add):
            out = child_jet(node.left, oa, ob) + child_jet(node.right, oa, ob)
        elif isinstance(node, Sub):
            out = child_jet(node.left, oa, ob) - child_jet(node.right, oa, ob)
        elif isinstance(node, Mul):
            out = jets.jet_mul(child_jet(node.left, oa, ob), child_jet(node.right, oa, ob))
        elif isinstance(node, Div):
            num = child_jet(node.left, oa, ob)
            den = child_jet(node.right, oa, ob)
            zero = den.value == 0
            if np.any(zero) and strict:
                raise PoleError(f"pole at evaluation point in {_path_to(node, parent)}")
            margin = np.fmin(margin, _divisor_margin(val[id(node.right)]))
            out = jets.jet_div(num, den, on_pole="nan")
        elif isinstance(node, PowInt):
            base = child_jet(node.base, oa, ob)
            if node.exponent < 0:
                zero = base.value == 0
                margin = np.fmin(margin, _divisor_margin(val[id(node.base)]))
                if np.any(zero):
                    if strict:
                        raise PoleError(f"pole at evaluation point in {_path_to(node, parent)}")
                    base = Jet2(np.where(zero, np.nan, base.coeffs))
            out = jets.jet_powi(base, node.exponent)
        elif isinstance(node, Exp):
            arg = child_jet(node.arg, oa, ob)
            if np.any(arg.value > EXP_GUARD):
                raise FieldOverflowError(
                    f"exp argument exceeds {EXP_GUARD:g} in {_path_to(node, parent)}",
                    path=_path_to(node, parent),
                )
            out = jets.jet_exp(arg)
        elif isinstance(node, Partial):
            out = child_jet(node.arg, oa + node.da, ob + node.db).diff(node.da, node.db)
        else:
            raise TypeError(f"unknown field node {type(node).__name__}")
        if strict and not np.all(np.isfinite(out.coeffs)):
            raise FieldOverflowError(
                f"non-finite value in {_path_to(node, parent)}", path=_path_to(node, parent)
            )
        val[id(node)] = out

    return Evaluation([val[id(r)].truncate(order_a, order_b) for r in roots], margin)


def evaluate(
    f: FieldExpr,
    p,
    order_a: int = DEFAULT_ORDERS[0],
    order_b: int = DEFAULT_ORDERS[1],
) -> Jet2:
    """Truncated Taylor expansion of ``f`` about ``p``."""
    return evaluate_many([f], p, order_a, order_b).jets[0]


def value(f: FieldExpr, p) -> float | np.ndarray:
    """Plain value of ``f`` at ``p`` (scalar or batch)."""
    return evaluate(f, p, 0, 0).value


# ----------------------------------------------------------------------------
# structural transforms


def reflect(f: FieldExpr) -> FieldExpr:
    """The field ``(x, y) -> f(-x, -y)``."""
    memo: dict[int, FieldExpr] = {}
    order, _ = _topo_order([f])
    for node in order:
        if isinstance(node, Constant):
            out = node
        elif isinstance(node, Coordinate):
            out = Mul(Constant(-1.0), node)
        elif isinstance(node, _Binary):
            out = type(node)(memo[id(node.left)], memo[id(node.right)])
        elif isinstance(node, PowInt):
            out = PowInt(memo[id(node.base)], node.exponent)
        elif isinstance(node, Exp):
            out = Exp(memo[id(node.arg)])
        elif isinstance(node, Partial):
            # chain rule for the sign flip of both coordinates
            inner = Partial(memo[id(node.arg)], node.da, node.db)
            out = inner if (node.da + node.db) % 2 == 0 else Mul(Constant(-1.0), inner)
        else:
            raise TypeError(type(node).__name__)
        memo[id(node)] = out
    return memo[id(f)]


def node_count(f: FieldExpr) -> int:
    return len(_topo_order([f])[0])


# ----------------------------------------------------------------------------
# text form

_OPS = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


def to_text(f: FieldExpr, second: str = "y") -> str:
    """Fully parenthesised text that :func:`parse_field` reads back."""
    if isinstance(f, Constant):
        s = repr(float(f.value))
        return f"({s})" if f.value < 0 or s in ("inf", "-inf", "nan") else s
    if isinstance(f, Coordinate):
        return "x" if f.axis == 0 else second
    if isinstance(f, _Binary):
        return f"({to_text(f.left, second)} {_OPS[type(f)]} {to_text(f.right, second)})"
    if isinstance(f, PowInt):
        return f"({to_text(f.base, second)})^{f.exponent}"
    if isinstance(f, Exp):
        return f"exp({to_text(f.arg, second)})"
    if isinstance(f, Partial):
        raise ValueError("derivative nodes have no text form")
    raise TypeError(type(f).__name__)


def tree_string(f: FieldExpr, indent: str = "  ") -> str:
    """Indented one-node-per-line rendering, used by ``parse-check``."""
    lines: list[str] = []

    def walk(node, depth):
        pad = indent * depth
        if isinstance(node, Constant):
            lines.append(f"{pad}Constant {node.value!r}")
        elif isinstance(node, Coordinate):
            lines.append(f"{pad}Coordinate {'first' if node.axis == 0 else 'second'}")
        elif isinstance(node, PowInt):
            lines.append(f"{pad}PowInt {node.exponent}")
        elif isinstance(node, Partial):
            lines.append(f"{pad}Partial ({node.da},{node.db})")
        else:
            lines.append(f"{pad}{type(node).__name__}")
        for c in node.children():
            walk(c, depth + 1)

    walk(f, 0)
    return "\n".join(lines)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


class _Token(NamedTuple):
    kind: str
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise FieldSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        out.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(_Token("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.toks[self.i]

    def take(self) -> _Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> None:
        tok = self.peek()
        if tok.text != text or tok.kind == "end":
            what = "end of input" if tok.kind == "end" else repr(tok.text)
            raise FieldSyntaxError(f"expected {text!r}, found {what}", tok.offset)
        self.take()

    def expr(self) -> FieldExpr:
        node = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> FieldExpr:
        node = self.factor()
        while self.peek().text in ("*", "/") and self.peek().kind == "op":
            op = self.take().text
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self) -> FieldExpr:
        node = self.atom()
        if self.peek().text == "^":
            self.take()
            sign = 1
            if self.peek().text in ("+", "-"):
                sign = -1 if self.take().text == "-" else 1
            tok = self.peek()
            if tok.kind != "num" or not tok.text.isdigit():
                raise FieldSyntaxError("expected integer exponent", tok.offset)
            self.take()
            node = PowInt(node, sign * int(tok.text))
        return node

    def atom(self) -> FieldExpr:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Constant(float(tok.text))
        if tok.kind == "name":
            self.take()
            if tok.text == "x":
                return X
            if tok.text in ("y", "t"):
                return Y
            if tok.text == "exp":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Exp(inner)
            raise FieldSyntaxError(f"unknown identifier {tok.text!r}", tok.offset)
        if tok.text == "(":
            self.take()
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.text == "-":
            self.take()
            inner = self.atom()
            if isinstance(inner, Constant):
                return Constant(-inner.value)
            return Mul(Constant(-1.0), inner)
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise FieldSyntaxError(f"unexpected {what}", tok.offset)


def parse_field(text: str) -> FieldExpr:
    """Parse the field grammar::

        expr   := term (('+'|'-') term)*
        term   := factor (('*'|'/') factor)*
        factor := atom ('^' signed-integer)?
        atom   := number | 'x' | 'y' | 't' | 'exp' '(' expr ')' | '(' expr ')' | '-' atom
    """
    p = _Parser(text)
    node = p.expr()
    tok = p.peek()
    if tok.kind != "end":
        raise FieldSyntaxError(f"unexpected {tok.text!r}", tok.offset)
    return node


def sample_points(
    n: int,
    box: tuple[float, float, float, float] = (-3.0, 3.0, -3.0, 3.0),
    seed: int = 12345,
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic pseudo-random points in ``[a0, a1] x [b0, b1]``."""
    rng = np.random.default_rng(seed)
    a = rng.uniform(box[0], box[1], n)
    b = rng.uniform(box[2], box[3], n)
    return a, b

