"""Sampling soliton fields on regular grids, CSV output and crest detection."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fields import FieldExpr, dx, evaluate_many
from .solitons import Family, Mode, SolitonSpec, akns_soliton, nlbq_soliton

FIELDS = ("M", "Mx")


@dataclass(frozen=True)
class GridSpec:
    a_min: float
    a_max: float
    n_a: int
    b_min: float
    b_max: float
    n_b: int

    def __post_init__(self):
        if self.n_a < 1 or self.n_b < 1:
            raise ValueError("grid needs at least one point per axis")

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        """Parse ``a=min:max:n,b=min:max:n``."""
        parts = {}
        for chunk in text.split(","):
            m = re.fullmatch(r"\s*([ab])\s*=\s*([^:]+):([^:]+):(\d+)\s*", chunk)
            if not m:
                raise ValueError(f"bad grid component {chunk!r}; expected a=min:max:n,b=min:max:n")
            parts[m.group(1)] = (float(m.group(2)), float(m.group(3)), int(m.group(4)))
        if set(parts) != {"a", "b"}:
            raise ValueError("grid needs both a= and b= components")
        (a0, a1, na), (b0, b1, nb) = parts["a"], parts["b"]
        return cls(a0, a1, na, b0, b1, nb)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linspace(self.a_min, self.a_max, self.n_a), np.linspace(self.b_min, self.b_max, self.n_b)


@dataclass(frozen=True)
class GridOutput:
    """Row-major samples: ``a`` is the outer loop, ``b`` the inner one."""

    a: np.ndarray
    b: np.ndarray
    values: np.ndarray  # shape (n_a, n_b)
    labels: tuple[str, str, str] = ("a", "b", "value")

    def rows(self):
        for i, av in enumerate(self.a):
            for j, bv in enumerate(self.b):
                yield av, bv, self.values[i, j]

    def to_csv(self) -> str:
        lines = [",".join(self.labels)]
        lines += [f"{fmt(a)},{fmt(b)},{fmt(v)}" for a, b, v in self.rows()]
        return "\n".join(lines) + "\n"


def fmt(v: float) -> str:
    """Shortest round-trip decimal (full double precision, locale-free)."""
    v = float(v)
    if v == 0:
        v = 0.0
    return repr(v)


def soliton_field(family, a0: float, modes: Sequence[Mode], field: str = "M") -> FieldExpr:
    spec = SolitonSpec(Family(family), float(a0), tuple(modes))
    M = akns_soliton(spec) if spec.family is Family.AKNS else nlbq_soliton(spec)
    if field == "M":
        return M
    if field == "Mx":
        return dx(M)
    raise ValueError(f"unknown field {field!r}; choose from {FIELDS}")


def sample(f: FieldExpr, grid: GridSpec) -> GridOutput:
    a, b = grid.axes()
    A, B = np.meshgrid(a, b, indexing="ij")
    vals = evaluate_many([f], (A, B), 0, 0, strict=True).jets[0].value
    return GridOutput(a, b, np.asarray(vals, dtype=float))


def crests(a: np.ndarray, column: np.ndarray) -> list[tuple[float, float]]:
    """Interior strict local maxima ``(a, value)`` of one grid column."""
    out = []
    for i in range(1, len(column) - 1):
        if column[i] > column[i - 1] and column[i] >= column[i + 1]:
            out.append((float(a[i]), float(column[i])))
    return out
