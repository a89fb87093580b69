"""Programmatic acceptance suites that are not plain residual scans.

``figure_morphology`` samples soliton profiles with the same code path as the
``soliton`` command and checks crest height, crest count and crest speed.
``kernel_soundness`` compares jet derivatives with an independent
finite-difference oracle and checks two algebraic identities of the jets.
"""

from __future__ import annotations

import math
from math import comb

import numpy as np

from .fields import Point2, evaluate_many, exp, parse_field, sample_points
from .figures import GridSpec, crests, sample, soliton_field
from .oracle import KERNEL_CORPUS, fd_partial
from .residuals import ResidualEntry, ResidualReport
from .solitons import Mode

FD_TOL = 1e-6
IDENTITY_TOL = 1e-12
FD_MAX_ORDER = 4  # i + k
FD_POINTS = 3
FD_BOX = (-1.0, 1.0, -1.0, 1.0)


def _entry(name, r, n, label, tol, worst=None) -> ResidualEntry:
    return ResidualEntry(name, float(r), worst, n, 0, label=label, tolerance=tol)


# ----------------------------------------------------------------------------
# figure morphology


def _one_soliton(label, family, a0, mode: Mode, peak, speed, grid: GridSpec) -> list[ResidualEntry]:
    out = sample(soliton_field(family, a0, [mode], "Mx"), grid)
    step = (grid.a_max - grid.a_min) / (grid.n_a - 1)
    height_err, loc_err, count_err = 0.0, 0.0, 0
    for j, b in enumerate(out.b):
        cs = crests(out.a, out.values[:, j])
        count_err = max(count_err, abs(len(cs) - 1))
        if len(cs) != 1:
            continue
        xc, h = cs[0]
        height_err = max(height_err, abs(h - peak))
        # F = 1 on the line x = x0 + speed * b
        loc_err = max(loc_err, abs(xc - (mode.x0 + speed * b)))
    n = out.values.size
    return [
        _entry("CREST_COUNT", count_err, n, f"{label} single crest", 0.0),
        _entry("CREST_HEIGHT", height_err, n, f"{label} crest height {peak:g}", 1e-6),
        _entry("CREST_SPEED", loc_err / step, n, f"{label} crest on F=1 (grid steps)", 0.5),
    ]


def _two_soliton(label, family, a0, modes, grid: GridSpec) -> ResidualEntry:
    out = sample(soliton_field(family, a0, modes, "Mx"), grid)
    bad = sum(len(crests(out.a, out.values[:, j])) != 2 for j in range(len(out.b)))
    return _entry("CREST_COUNT", bad, out.values.size, f"{label} two crests per column", 0.0)


def _finite(label, family, a0, modes, grid: GridSpec) -> ResidualEntry:
    vals = sample(soliton_field(family, a0, modes, "Mx"), grid).values
    return _entry("FINITE", int(np.sum(~np.isfinite(vals))), vals.size, f"{label} no poles on the box", 0.0)


def figure_morphology() -> ResidualReport:
    fine_y = GridSpec.parse("a=-3:3:601,b=-2:2:9")
    fine_t = GridSpec.parse("a=-3:3:601,b=-1:1:11")
    box = GridSpec.parse("a=-3:3:61,b=-3:3:61")
    entries: list[ResidualEntry] = []
    # AKNS k=1, a0=0.5: peak k^2, crest x = x0 + (a0/k^2) y
    entries += _one_soliton("akns 1-soliton", "akns", 0.5, Mode(1.0), 1.0, 0.5, fine_y)
    # NLBq a=2, a0=1: peak a0 + kappa^2/4 with kappa = a - a0/a, crest x = x0 + (a + a0/a) t
    kappa = 2.0 - 0.5
    entries += _one_soliton("nlbq 1-soliton", "nlbq", 1.0, Mode(2.0), 1.0 + kappa**2 / 4, 2.5, fine_t)
    entries.append(
        _two_soliton("akns 2-soliton", "akns", 0.5, [Mode(1.0, -2.0), Mode(2.0, 2.0)], GridSpec.parse("a=-6:6:1201,b=-1:1:5"))
    )
    entries.append(
        _two_soliton("nlbq 2-soliton", "nlbq", 1.0, [Mode(2.0, -2.0), Mode(3.0, 2.0)], GridSpec.parse("a=-6:6:1201,b=-0.3:0.3:5"))
    )
    entries.append(_finite("akns 2-soliton", "akns", 0.5, [Mode(1.0), Mode(2.0)], box))
    entries.append(_finite("nlbq 2-soliton", "nlbq", 1.0, [Mode(2.0), Mode(3.0)], box))
    return ResidualReport(entries, name="figure-morphology")


# ----------------------------------------------------------------------------
# kernel soundness


def _orders():
    return [(i, k) for i in range(FD_MAX_ORDER + 1) for k in range(min(3, FD_MAX_ORDER - i) + 1)]


def fd_comparison(expr: str, points: int = FD_POINTS, seed: int = 99) -> tuple[float, Point2]:
    """Worst ``|jet - fd| / max(1, |fd|)`` over derivatives up to total order 4."""
    f = parse_field(expr)
    a, b = sample_points(points, FD_BOX, seed)
    jet = evaluate_many([f], (a, b), FD_MAX_ORDER, 3, strict=True).jets[0]
    worst, where = 0.0, None
    for i, k in _orders():
        exact = np.atleast_1d(jet.partial(i, k))
        for n in range(points):
            ref = fd_partial(f, (a[n], b[n]), i, k)
            r = abs(exact[n] - ref) / max(1.0, abs(ref))
            if r > worst or where is None:
                worst, where = r, Point2(float(a[n]), float(b[n]))
    return worst, where


def _leibniz(f, g, pts) -> float:
    oa, ob = 4, 3
    jf, jg, jfg = evaluate_many([f, g, f * g], pts, oa, ob, strict=True).jets
    worst = 0.0
    for i in range(oa + 1):
        for k in range(ob + 1):
            total = 0.0
            scale = 0.0
            for p in range(i + 1):
                for q in range(k + 1):
                    t = comb(i, p) * comb(k, q) * jf.partial(p, q) * jg.partial(i - p, k - q)
                    total = total + t
                    scale = scale + np.abs(t)
            r = np.abs(jfg.partial(i, k) - total) / (1.0 + scale)
            worst = max(worst, float(np.max(r)))
    return worst


def _exp_hom(f, g, pts) -> float:
    lhs, rhs = evaluate_many([exp(f + g), exp(f) * exp(g)], pts, 4, 3, strict=True).jets
    diff = np.abs(lhs.coeffs - rhs.coeffs)
    return float(np.max(diff / (1.0 + np.abs(rhs.coeffs))))


def kernel_soundness(corpus=KERNEL_CORPUS) -> ResidualReport:
    entries = []
    fd_worst, fd_where, fd_expr = 0.0, None, ""
    for expr in corpus:
        r, p = fd_comparison(expr)
        if r >= fd_worst:
            fd_worst, fd_where, fd_expr = r, p, expr
    n = len(corpus) * FD_POINTS * len(_orders())
    entries.append(_entry("JET_VS_FD", fd_worst, n, f"{len(corpus)} expressions (worst {fd_expr})", FD_TOL, fd_where))

    pts = sample_points(8, FD_BOX, 5)
    fields = [parse_field(e) for e in corpus]
    pairs = list(zip(fields, fields[1:] + fields[:1]))
    lb = max(_leibniz(f, g, pts) for f, g in pairs)
    eh = max(_exp_hom(f, g, pts) for f, g in pairs)
    m = len(pairs) * pts[0].size
    entries.append(_entry("LEIBNIZ", lb, m, "product rule on corpus pairs", IDENTITY_TOL))
    entries.append(_entry("EXP_HOMOMORPHISM", eh, m, "exp(f+g) = exp(f) exp(g)", IDENTITY_TOL))
    if not math.isfinite(fd_worst):
        entries[0] = _entry("JET_VS_FD", math.inf, n, "non-finite comparison", FD_TOL)
    return ResidualReport(entries, name="kernel-soundness")
