"""Independent derivative oracle: Richardson-extrapolated finite differences.

Fields are re-evaluated in multiprecision arithmetic (``mpmath``), so the
difference quotients are not swamped by float64 rounding.  Only nodes without
``Partial`` are supported; the oracle must not share the jet machinery it is
meant to check.
"""

from __future__ import annotations

from math import comb

import mpmath

from .fields import Add, Constant, Coordinate, Div, Exp, FieldExpr, Mul, PowInt, Sub, _topo_order

DPS = 60

# Expressions for the kernel soundness check: polynomial, rational,
# exponential, nested and mixed compositions of both variables.
KERNEL_CORPUS = (
    "x",
    "x*y",
    "x^3*y^2",
    "(1 + x)^5",
    "x^2*y - 3*x*y^3 + 2",
    "1/(2 + x)",
    "1/(3 + x*y)",
    "(x - y)/(4 + x^2)",
    "y/(1 + x^2 + y^2)",
    "(2 + x)^-3",
    "exp(x)",
    "exp(2*x - 0.5*y)",
    "exp(x*y)",
    "exp(x^2 - y)",
    "exp(-(x^2 + y^2))",
    "exp(exp(0.3*x))",
    "exp(x)/(1 + exp(x))",
    "exp(2*x - y)/(1 + exp(2*x - y))^2",
    "x*exp(-y)",
    "(1 + exp(x + y))^-2",
    "exp(x/(2 + y))",
    "1/(1 + exp(x) + exp(2*y) + 0.25*exp(x + 2*y))",
    "(x^2 + 1)*exp(0.5*x*y)",
    "exp(x*y - y^2/3)/(3 + x)",
    "(1 + x*y)^3/(5 + y^2)",
    "exp(x)*exp(y) - exp(x + y) + x",
    "(x + 2*y)^4 - 1/(6 + x)",
    "exp(0.7*x)*(x + 2)/(1 + y^2)",
    "exp(-(x - 0.5*y)^2)",
    "0.5*exp(3*x - 1.5*y)/(1 + 0.5*exp(3*x - 1.5*y))",
)


def mp_compile(f: FieldExpr):
    """Return ``g(a, b)`` evaluating ``f`` in mpmath arithmetic."""
    order, _ = _topo_order([f])
    slot = {id(node): n for n, node in enumerate(order)}
    steps = []
    for node in order:
        if isinstance(node, Constant):
            steps.append(("c", node.value))
        elif isinstance(node, Coordinate):
            steps.append(("a" if node.axis == 0 else "b", None))
        elif isinstance(node, (Add, Sub, Mul, Div)):
            steps.append((type(node).__name__, (slot[id(node.left)], slot[id(node.right)])))
        elif isinstance(node, PowInt):
            steps.append(("pow", (slot[id(node.base)], node.exponent)))
        elif isinstance(node, Exp):
            steps.append(("exp", slot[id(node.arg)]))
        else:
            raise TypeError(f"oracle cannot evaluate {type(node).__name__} nodes")

    def g(a, b):
        val = []
        for kind, arg in steps:
            if kind == "c":
                out = mpmath.mpf(arg)
            elif kind == "a":
                out = a
            elif kind == "b":
                out = b
            elif kind == "Add":
                out = val[arg[0]] + val[arg[1]]
            elif kind == "Sub":
                out = val[arg[0]] - val[arg[1]]
            elif kind == "Mul":
                out = val[arg[0]] * val[arg[1]]
            elif kind == "Div":
                out = val[arg[0]] / val[arg[1]]
            elif kind == "pow":
                out = val[arg[0]] ** arg[1]
            else:
                out = mpmath.exp(val[arg])
            val.append(out)
        return val[-1]

    return g


def mp_eval(f: FieldExpr, a, b):
    """Value of ``f`` at ``(a, b)`` in mpmath arithmetic."""
    return mp_compile(f)(a, b)


def _central(g, a, b, i: int, k: int, h):
    # product of i-th and k-th central differences; error is even in h
    total = mpmath.mpf(0)
    for p in range(i + 1):
        cp = (-1) ** p * comb(i, p)
        da = (mpmath.mpf(i) / 2 - p) * h
        for q in range(k + 1):
            cq = (-1) ** q * comb(k, q)
            db = (mpmath.mpf(k) / 2 - q) * h
            total += cp * cq * g(a + da, b + db)
    return total / h ** (i + k)


def fd_partial(f: FieldExpr, point, i: int, k: int, *, h0: float = 0.125, levels: int = 6) -> float:
    """``d^{i+k} f / da^i db^k`` at ``point`` by Richardson extrapolation."""
    with mpmath.workdps(DPS):
        a, b = mpmath.mpf(point[0]), mpmath.mpf(point[1])
        g = mp_compile(f)
        if i == 0 and k == 0:
            return float(g(a, b))
        h = mpmath.mpf(h0)
        table = [_central(g, a, b, i, k, h / 2**j) for j in range(levels)]
        for m in range(1, levels):
            fac = mpmath.mpf(4) ** m
            table = [(fac * table[j + 1] - table[j]) / (fac - 1) for j in range(len(table) - 1)]
        return float(table[0])
