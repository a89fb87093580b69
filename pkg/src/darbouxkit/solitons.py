"""Seed solutions, exponential eigenfunctions and closed-form solitons.

Two families are covered:

* AKNS, ``M(x, y)``, seed ``M = a0*y``;
* the non-local Boussinesq system (NLBq), ``M(x, t)`` with partner ``N``,
  seed ``M = a0*x``.

Every closed form is returned as a :class:`~darbouxkit.fields.FieldExpr`, so
its derivatives (and hence residuals) are exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InvalidModeError, SingularSpecError
from .fields import FieldExpr, T, X, Y, const, dx, db, exp


class Family(enum.Enum):
    AKNS = "akns"
    NLBQ = "nlbq"


@dataclass(frozen=True)
class Mode:
    """One soliton mode: wavenumber (``k`` for AKNS, ``a`` for NLBq) and offset."""

    k: float
    x0: float = 0.0


@dataclass(frozen=True)
class SolitonSpec:
    family: Family
    a0: float
    modes: tuple[Mode, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "modes", tuple(self.modes))

    @property
    def count(self) -> int:
        return len(self.modes)

    def validate(self) -> None:
        """Raise :class:`SingularSpecError` naming the first violated inequality."""
        if self.count not in (1, 2):
            raise SingularSpecError(f"soliton count must be 1 or 2, got {self.count}")
        ks = [m.k for m in self.modes]
        if self.family is Family.AKNS:
            for i, k in enumerate(ks, 1):
                if k == 0:
                    raise SingularSpecError(f"k{i} != 0 violated (k{i} = 0)")
            if self.count == 2:
                k1, k2 = ks
                if k1 + k2 == 0:
                    raise SingularSpecError(f"k1 + k2 != 0 violated (k1={k1}, k2={k2})")
                if k1 * k1 == k2 * k2:
                    raise SingularSpecError(f"k1^2 != k2^2 violated (k1={k1}, k2={k2})")
        else:
            for i, a in enumerate(ks, 1):
                if a == 0:
                    raise SingularSpecError(f"a{i} != 0 violated (a{i} = 0)")
                if a * a == self.a0:
                    raise SingularSpecError(f"a{i}^2 != a0 violated (a{i}={a}, a0={self.a0})")
            if self.count == 2:
                a1, a2 = ks
                if a1 * a2 == self.a0:
                    raise SingularSpecError(f"a1*a2 != a0 violated (a1={a1}, a2={a2}, a0={self.a0})")


@dataclass(frozen=True)
class EigenData:
    """Eigenfunction with its spectral parameter and (optionally) its manifold.

    For AKNS ``psi`` is the scalar eigenfunction and ``manifold_x = psi**2``.
    For NLBq ``psi`` is the plus-branch eigenfunction, ``psi_minus`` the minus
    one, and ``manifold_x = psi * psi_minus``.
    """

    psi: FieldExpr
    lam: float
    manifold: FieldExpr | None = None
    psi_minus: FieldExpr | None = None

    @property
    def psi_plus(self) -> FieldExpr:
        return self.psi


# ----------------------------------------------------------------------------
# AKNS


def akns_seed(a0: float) -> FieldExpr:
    return const(a0) * Y


def akns_eigen(k: float, a0: float, x0: float = 0.0) -> EigenData:
    """``psi = exp(k x - (a0/k) y)``, ``lambda = -k^2``, ``phi = (alpha + psi^2)/(2k)``."""
    if k == 0:
        raise InvalidModeError("akns eigenfunction needs k != 0")
    psi = exp(const(k) * X - const(a0 / k) * Y)
    alpha = math.exp(2.0 * k * x0)
    phi = (const(alpha) + psi**2) / const(2.0 * k)
    return EigenData(psi=psi, lam=-k * k, manifold=phi)


def _akns_F(mode: Mode, a0: float) -> FieldExpr:
    k = mode.k
    return exp(const(2.0 * k) * (X - const(a0 / k**2) * Y - const(mode.x0)))


def akns_phase_factor(k1: float, k2: float) -> float:
    return ((k1 - k2) / (k1 + k2)) ** 2


def akns_tau(spec: SolitonSpec) -> FieldExpr:
    """Hirota form of the manifold (one mode) or tau-function (two modes)."""
    spec.validate()
    if spec.family is not Family.AKNS:
        raise ValueError("akns_tau needs an AKNS spec")
    if spec.count == 1:
        (m,) = spec.modes
        alpha = math.exp(2 * m.k * m.x0)
        return const(alpha / (2 * m.k)) * (const(1.0) + _akns_F(m, spec.a0))
    m1, m2 = spec.modes
    F1, F2 = _akns_F(m1, spec.a0), _akns_F(m2, spec.a0)
    A12 = akns_phase_factor(m1.k, m2.k)
    scale = math.exp(2 * m1.k * m1.x0 + 2 * m2.k * m2.x0) / (4 * m1.k * m2.k)
    return const(scale) * (const(1.0) + F1 + F2 + const(A12) * F1 * F2)


def akns_tau_seed(spec: SolitonSpec) -> FieldExpr:
    """Two-mode tau written through the seed eigenfunctions and constants alpha_i."""
    spec.validate()
    m1, m2 = spec.modes
    e1 = akns_eigen(m1.k, spec.a0, m1.x0)
    e2 = akns_eigen(m2.k, spec.a0, m2.x0)
    a1, a2 = math.exp(2 * m1.k * m1.x0), math.exp(2 * m2.k * m2.x0)
    prod = (const(a1) + e1.psi**2) * (const(a2) + e2.psi**2) / const(4 * m1.k * m2.k)
    return prod - e1.psi**2 * e2.psi**2 / const((m1.k + m2.k) ** 2)


def akns_soliton(spec: SolitonSpec) -> FieldExpr:
    """One-soliton ``a0 y + phi_x/phi`` or two-soliton ``a0 y + tau_x/tau``."""
    spec.validate()
    if spec.family is not Family.AKNS:
        raise ValueError("akns_soliton needs an AKNS spec")
    tau = akns_tau(spec)
    return akns_seed(spec.a0) + dx(tau) / tau


# ----------------------------------------------------------------------------
# NLBq


def nlbq_seed(a0: float) -> FieldExpr:
    return const(a0) * X


def nlbq_seed_partner(a0: float) -> FieldExpr:
    """Partner ``N`` of the seed: ``N_x = M_t = 0`` and ``M_x N_t = 2 M_x^3``."""
    return const(2.0 * a0 * a0) * T


def _nlbq_check_mode(a: float, a0: float) -> None:
    if a == 0:
        raise InvalidModeError("nlbq eigenfunction needs a != 0")
    if a * a == a0:
        raise SingularSpecError(f"a^2 != a0 violated (a={a}, a0={a0})")


def nlbq_eigen(a: float, a0: float, x0: float = 0.0) -> EigenData:
    """Exponential eigenfunction pair of the seed ``M = a0 x``."""
    _nlbq_check_mode(a, a0)
    b = a0 / a
    psi_p = exp(const(a) * (X - const(a) * T))
    psi_m = exp(const(-b) * (X - const(b) * T))
    alpha = math.exp((a - b) * x0)
    phi = const(a / (a * a - a0)) * (const(alpha) + psi_p * psi_m)
    return EigenData(psi=psi_p, lam=a + b, manifold=phi, psi_minus=psi_m)


def _nlbq_F(mode: Mode, a0: float) -> FieldExpr:
    a = mode.k
    kappa = a - a0 / a
    return exp(const(kappa) * (X - const(a + a0 / a) * T - const(mode.x0)))


def nlbq_phase_factor(a1: float, a2: float, a0: float) -> float:
    return a0 * ((a2 - a1) / (a1 * a2 - a0)) ** 2


def nlbq_tau(spec: SolitonSpec) -> FieldExpr:
    spec.validate()
    if spec.family is not Family.NLBQ:
        raise ValueError("nlbq_tau needs an NLBq spec")
    a0 = spec.a0
    alphas = [math.exp((m.k - a0 / m.k) * m.x0) for m in spec.modes]
    if spec.count == 1:
        (m,) = spec.modes
        return const(alphas[0] * m.k / (m.k**2 - a0)) * (const(1.0) + _nlbq_F(m, a0))
    m1, m2 = spec.modes
    a1, a2 = m1.k, m2.k
    F1, F2 = _nlbq_F(m1, a0), _nlbq_F(m2, a0)
    A12 = nlbq_phase_factor(a1, a2, a0)
    scale = a1 * a2 * alphas[0] * alphas[1] / ((a1 * a1 - a0) * (a2 * a2 - a0))
    return const(scale) * (const(1.0) + F1 + F2 + const(A12) * F1 * F2)


def nlbq_tau_seed(spec: SolitonSpec) -> FieldExpr:
    spec.validate()
    a0 = spec.a0
    m1, m2 = spec.modes
    a1, a2 = m1.k, m2.k
    e1 = nlbq_eigen(a1, a0, m1.x0)
    e2 = nlbq_eigen(a2, a0, m2.x0)
    al1 = math.exp((a1 - a0 / a1) * m1.x0)
    al2 = math.exp((a2 - a0 / a2) * m2.x0)
    c1 = a1 * a2 / ((a1 * a1 - a0) * (a2 * a2 - a0))
    c2 = a1 * a2 / (a2 * a1 - a0) ** 2
    prod = (const(al1) + e1.psi * e1.psi_minus) * (const(al2) + e2.psi * e2.psi_minus)
    return const(c1) * prod - const(c2) * e1.psi_minus * e2.psi * e1.psi * e2.psi_minus


def nlbq_soliton(spec: SolitonSpec) -> FieldExpr:
    """``a0 x + phi_x/phi`` (one mode) or ``a0 x + tau_x/tau`` (two modes)."""
    tau = nlbq_tau(spec)
    return nlbq_seed(spec.a0) + dx(tau) / tau


def nlbq_soliton_partner(spec: SolitonSpec) -> FieldExpr:
    """``N`` matching :func:`nlbq_soliton`, incremented by ``tau_t / tau``."""
    tau = nlbq_tau(spec)
    return nlbq_seed_partner(spec.a0) + db(tau) / tau


def make_spec(family, a0: float, modes: Sequence[tuple[float, float] | Mode]) -> SolitonSpec:
    ms = tuple(m if isinstance(m, Mode) else Mode(*m) for m in modes)
    return SolitonSpec(Family(family), float(a0), ms)
