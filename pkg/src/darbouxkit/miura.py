"""Backlund partners and Miura maps: AKNS -> sinh-Gordon, NLBq -> Kaup.

Two solutions ``m`` and ``m_hat`` of the same equation related by a Backlund
transformation give a solution ``u = m - m_hat``, ``eta = m + m_hat`` of the
coupled two-branch system.  Eigenfunctions of the ``m`` Lax pair induce the
two-component eigenfunctions of the coupled system.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .darboux import VALIDATION_TOL, _worst
from .errors import NotABacklundPairError, NotAnEigenfunctionError, PoleError
from .fields import FieldExpr, const, d, dx, evaluate_many, sample_points
from .residuals import (
    DEFAULT_BOX,
    Bindings,
    EquationId,
    ResidualReport,
    scan_grid,
)

PROBE_POINTS = 20
PROBE_SEED = 777


class MiuraFamily(enum.Enum):
    SINH_GORDON = "sinh-gordon"
    KAUP = "kaup"


@dataclass(frozen=True)
class MiuraPair:
    family: MiuraFamily
    m: FieldExpr
    m_hat: FieldExpr
    u: FieldExpr
    eta: FieldExpr


@dataclass(frozen=True)
class CoupledEigen:
    """Two-component eigenfunction ``(psi, psi_hat)``.

    For sinh-Gordon both ``a`` and ``a_hat`` are set and ``lam = -a a_hat``.
    For Kaup the minus branch carries ``a`` and the plus branch ``a_hat``;
    the other constant is ``None``.
    """

    psi: FieldExpr
    psi_hat: FieldExpr
    lam: float
    a: float | None = None
    a_hat: float | None = None


def _probe_all_zero(f: FieldExpr) -> bool:
    a, b = sample_points(PROBE_POINTS, seed=PROBE_SEED)
    vals = evaluate_many([f], (a, b), 0, 0, strict=False).jets[0].value
    return bool(np.all(vals == 0))


def _backlund(m: FieldExpr, num: FieldExpr, den: FieldExpr) -> FieldExpr:
    if _probe_all_zero(den):
        if _probe_all_zero(num):
            return m
        raise PoleError("Backlund denominator vanishes identically while its numerator does not")
    return m + num / (const(2.0) * den)


def backlund_partner_akns(m: FieldExpr) -> FieldExpr:
    """``m_hat = m + m_xy / (2 m_y)``; the seed case ``m_y = m_xy = 0`` gives ``m``."""
    return _backlund(m, d(m, 1, 1), d(m, 0, 1))


def backlund_partner_nlbq(m: FieldExpr) -> FieldExpr:
    """``m_hat = m + (m_xx - m_t) / (2 m_x)``; identically constant ``m_x`` with zero numerator gives ``m``."""
    return _backlund(m, d(m, 2, 0) - d(m, 0, 1), d(m, 1, 0))


def _pair(family: MiuraFamily, eq: EquationId, m, m_hat, validate: bool) -> MiuraPair:
    if validate:
        r = _worst(eq, Bindings(m=m, m_hat=m_hat))
        if r > VALIDATION_TOL:
            raise NotABacklundPairError(f"fields fail {eq.name}", r)
    return MiuraPair(family, m, m_hat, m - m_hat, m + m_hat)


def shg_from_pair(m: FieldExpr, m_hat: FieldExpr, *, validate: bool = True) -> MiuraPair:
    return _pair(MiuraFamily.SINH_GORDON, EquationId.SHG_MM, m, m_hat, validate)


def kaup_from_pair(m: FieldExpr, m_hat: FieldExpr, *, validate: bool = True) -> MiuraPair:
    return _pair(MiuraFamily.KAUP, EquationId.KAUP_MM, m, m_hat, validate)


def _require_eigen(eqs, b: Bindings, what: str) -> None:
    for eq in eqs:
        r = _worst(eq, b)
        if r > VALIDATION_TOL:
            raise NotAnEigenfunctionError(f"{what} fails {eq.name}: residual {r:.3e}")


def shg_coupled_eigen(
    psi: FieldExpr, u: FieldExpr, a: float, lam: float, *, m: FieldExpr | None = None
) -> CoupledEigen:
    """``psi_hat = (psi_x + u psi)/a`` and ``a_hat = -lambda/a``.

    When ``m`` is given, ``psi`` is first checked against the AKNS Lax pair
    of ``m``.
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    if m is not None:
        _require_eigen(
            (EquationId.AKNS_LAX_X, EquationId.AKNS_LAX_Y), Bindings(M=m, psi=psi, lam=lam), "psi"
        )
    psi_hat = (dx(psi) + u * psi) / const(a)
    return CoupledEigen(psi=psi, psi_hat=psi_hat, lam=lam, a=a, a_hat=-lam / a)


def shg_hat_manifold(phi: FieldExpr, ce: CoupledEigen) -> FieldExpr:
    """``phi_hat = (psi psi_hat - a_hat phi) / a``, so that ``phi_hat_x = psi_hat^2``."""
    return (ce.psi * ce.psi_hat - const(ce.a_hat) * phi) / const(ce.a)


def kaup_coupled_eigen_minus(
    psi_minus: FieldExpr,
    u: FieldExpr,
    eta: FieldExpr,
    a: float,
    lam: float,
    *,
    m: FieldExpr | None = None,
) -> CoupledEigen:
    """``psi_hat^- = (psi^-_x + (u + lambda) psi^-) / a``."""
    if a == 0:
        raise ValueError("a must be nonzero")
    if m is not None:
        _require_eigen((EquationId.NLBQ_LAX_MINUS,), Bindings(M=m, psi_minus=psi_minus, lam=lam), "psi_minus")
    psi_hat = (dx(psi_minus) + (u + const(lam)) * psi_minus) / const(a)
    return CoupledEigen(psi=psi_minus, psi_hat=psi_hat, lam=lam, a=a)


def kaup_coupled_eigen_plus(
    psi_plus: FieldExpr,
    u: FieldExpr,
    eta: FieldExpr,
    a_hat: float,
    lam: float,
    *,
    m: FieldExpr | None = None,
) -> CoupledEigen:
    """``psi_hat^+ = -2 a_hat psi^+_x / (u_x + eta_x)``."""
    if a_hat == 0:
        raise ValueError("a_hat must be nonzero")
    if m is not None:
        _require_eigen((EquationId.NLBQ_LAX_PLUS,), Bindings(M=m, psi_plus=psi_plus, lam=lam), "psi_plus")
    psi_hat = const(-2.0 * a_hat) * dx(psi_plus) / (dx(u) + dx(eta))
    return CoupledEigen(psi=psi_plus, psi_hat=psi_hat, lam=lam, a_hat=a_hat)


def kaup_hat_manifold(phi: FieldExpr, minus: CoupledEigen, plus: CoupledEigen) -> FieldExpr:
    """``phi_hat = (psi^- psi_hat^+ - a_hat phi) / a``, so that ``phi_hat_x = psi_hat^+ psi_hat^-``."""
    return (minus.psi * plus.psi_hat - const(plus.a_hat) * phi) / const(minus.a)


def kaup_bindings(pair: MiuraPair, minus: CoupledEigen, plus: CoupledEigen, **extra) -> Bindings:
    return Bindings(
        m=pair.m,
        m_hat=pair.m_hat,
        u=pair.u,
        eta=pair.eta,
        psi_plus=plus.psi,
        psi_hat_plus=plus.psi_hat,
        psi_minus=minus.psi,
        psi_hat_minus=minus.psi_hat,
        a=minus.a,
        a_hat=plus.a_hat,
        lam=minus.lam,
        **extra,
    )


def kaup_coupling_check(
    pair: MiuraPair,
    minus: CoupledEigen,
    plus: CoupledEigen,
    phi: FieldExpr,
    phi_hat: FieldExpr,
    *,
    box=DEFAULT_BOX,
    n_a: int = 20,
    n_b: int = 20,
    tolerance: float = 1e-8,
) -> ResidualReport:
    """Coupling condition, its parameter identities and its x-derivative on a grid."""
    b = kaup_bindings(pair, minus, plus, phi=phi, phi_hat=phi_hat)
    entries = [
        scan_grid(eq, b, box, n_a, n_b, label="coupling")
        for eq in (EquationId.KAUP_COUPLING, EquationId.KAUP_COUPLING_DX)
    ]
    return ResidualReport(entries, tolerance, name="kaup-coupling")


__all__ = [
    "MiuraFamily",
    "MiuraPair",
    "CoupledEigen",
    "backlund_partner_akns",
    "backlund_partner_nlbq",
    "shg_from_pair",
    "kaup_from_pair",
    "shg_coupled_eigen",
    "shg_hat_manifold",
    "kaup_coupled_eigen_minus",
    "kaup_coupled_eigen_plus",
    "kaup_hat_manifold",
    "kaup_bindings",
    "kaup_coupling_check",
]
