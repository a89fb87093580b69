"""Darboux transformations and tau-functions for AKNS and NLBq.

Inputs are arbitrary closed-form eigenfunctions (not only seed ones), so the
outputs can be fed back in to iterate further.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass

import numpy as np

from .errors import DegeneratePairError, MissingManifoldError, NotAnEigenfunctionError
from .fields import FieldExpr, const, db, dx, sample_points
from .residuals import Bindings, EquationId, residual_values
from .solitons import EigenData

VALIDATION_POINTS = 20
VALIDATION_SEED = 20240
VALIDATION_TOL = 1e-8


def _worst(eq: EquationId, b: Bindings) -> float:
    a, t = sample_points(VALIDATION_POINTS, seed=VALIDATION_SEED)
    res, margin = residual_values(eq, b, a, t, strict=False)
    ok = (margin >= 1e-9) & np.isfinite(res)
    return float(np.max(res[ok])) if np.any(ok) else 0.0


def _check(eq: EquationId, b: Bindings, what: str) -> None:
    r = _worst(eq, b)
    if r > VALIDATION_TOL:
        raise NotAnEigenfunctionError(f"{what} fails {eq.name}: residual {r:.3e}")


@dataclass(frozen=True)
class DarbouxPairAKNS:
    """Two eigenfunctions of the AKNS Lax pair for the same potential."""

    e1: EigenData
    e2: EigenData
    potential: FieldExpr
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        if self.e1.lam == self.e2.lam:
            raise DegeneratePairError(f"equal spectral parameters lambda = {self.e1.lam}")
        if validate:
            for i, e in enumerate((self.e1, self.e2), 1):
                b = Bindings(M=self.potential, psi=e.psi, lam=e.lam)
                _check(EquationId.AKNS_LAX_X, b, f"e{i}")
                _check(EquationId.AKNS_LAX_Y, b, f"e{i}")
                if e.manifold is not None:
                    _check(EquationId.AKNS_MANIFOLD, Bindings(phi=e.manifold, psi=e.psi), f"e{i} manifold")


@dataclass(frozen=True)
class DarbouxPairNLBQ:
    """Two eigenfunction pairs ``(psi+, psi-)`` of the NLBq Lax pairs for one potential."""

    e1: EigenData
    e2: EigenData
    potential: FieldExpr
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        if self.e1.lam == self.e2.lam:
            raise DegeneratePairError(f"equal spectral parameters lambda = {self.e1.lam}")
        for i, e in enumerate((self.e1, self.e2), 1):
            if e.psi_minus is None:
                raise ValueError(f"e{i} lacks the minus-branch eigenfunction")
        if validate:
            for i, e in enumerate((self.e1, self.e2), 1):
                _check(EquationId.NLBQ_LAX_PLUS, Bindings(M=self.potential, psi_plus=e.psi, lam=e.lam), f"e{i}+")
                _check(
                    EquationId.NLBQ_LAX_MINUS,
                    Bindings(M=self.potential, psi_minus=e.psi_minus, lam=e.lam),
                    f"e{i}-",
                )
                if e.manifold is not None:
                    _check(
                        EquationId.NLBQ_MANIFOLD,
                        Bindings(phi=e.manifold, psi_plus=e.psi, psi_minus=e.psi_minus),
                        f"e{i} manifold",
                    )


def _manifolds(p) -> tuple[FieldExpr, FieldExpr]:
    if p.e1.manifold is None or p.e2.manifold is None:
        raise MissingManifoldError("both eigenfunctions need a singular manifold")
    return p.e1.manifold, p.e2.manifold


# ----------------------------------------------------------------------------
# AKNS


def omega_akns(p: DarbouxPairAKNS) -> FieldExpr:
    """``Omega = (psi1 psi2_x - psi2 psi1_x) / (lambda1 - lambda2)``, so ``Omega_x = psi1 psi2``."""
    l1, l2 = p.e1.lam, p.e2.lam
    if l1 == l2:
        raise DegeneratePairError("equal spectral parameters")
    psi1, psi2 = p.e1.psi, p.e2.psi
    return (psi1 * dx(psi2) - psi2 * dx(psi1)) / const(l1 - l2)


def darboux_manifold_akns(p: DarbouxPairAKNS) -> FieldExpr:
    """``phi2' = phi2 - Omega^2 / phi1``."""
    phi1, phi2 = _manifolds(p)
    om = omega_akns(p)
    return phi2 - om * om / phi1


def darboux_eigen_akns(p: DarbouxPairAKNS, *, with_manifold: bool = True) -> EigenData:
    """Transformed eigenfunction ``psi2' = psi2 - psi1 Omega / phi1`` for ``M + phi1_x/phi1``."""
    if p.e1.manifold is None:
        raise MissingManifoldError("the first eigenfunction needs its singular manifold")
    om = omega_akns(p)
    psi = p.e2.psi - p.e1.psi * om / p.e1.manifold
    manifold = darboux_manifold_akns(p) if with_manifold and p.e2.manifold is not None else None
    return EigenData(psi=psi, lam=p.e2.lam, manifold=manifold)


def tau_akns(p: DarbouxPairAKNS) -> FieldExpr:
    """``tau12 = phi2 phi1 - Omega^2`` (equal to ``phi2' phi1``)."""
    phi1, phi2 = _manifolds(p)
    om = omega_akns(p)
    return phi2 * phi1 - om * om


def iterate_akns(M: FieldExpr, manifold: FieldExpr) -> FieldExpr:
    """``M + phi_x / phi``."""
    return M + dx(manifold) / manifold


# ----------------------------------------------------------------------------
# NLBq


def omega_pm_nlbq(p: DarbouxPairNLBQ) -> tuple[FieldExpr, FieldExpr]:
    """``(Omega+, Omega-)``: the bracket ``(psi1+ psi2+_x - psi2+ psi1+_x)/(lambda2 - lambda1)``
    scaled by ``psi1-/psi1+_x`` and by ``psi2-/psi2+_x``.

    For seed eigenfunctions ``Omega+ = a2/(a1 a2 - a0) psi1- psi2+`` and
    ``Omega- = a1/(a1 a2 - a0) psi1+ psi2-``.
    """
    l1, l2 = p.e1.lam, p.e2.lam
    if l1 == l2:
        raise DegeneratePairError("equal spectral parameters")
    p1, p2 = p.e1.psi, p.e2.psi
    m1, m2 = p.e1.psi_minus, p.e2.psi_minus
    bracket = (p1 * dx(p2) - p2 * dx(p1)) / const(l2 - l1)
    return bracket * m1 / dx(p1), bracket * m2 / dx(p2)


def darboux_manifold_nlbq(p: DarbouxPairNLBQ) -> FieldExpr:
    """``phi2' = phi2 - Omega+ Omega- / phi1``."""
    phi1, phi2 = _manifolds(p)
    op, om = omega_pm_nlbq(p)
    return phi2 - op * om / phi1


def darboux_eigen_nlbq(p: DarbouxPairNLBQ, *, with_manifold: bool = True) -> EigenData:
    if p.e1.manifold is None:
        raise MissingManifoldError("the first eigenfunction needs its singular manifold")
    phi1 = p.e1.manifold
    op, om = omega_pm_nlbq(p)
    psi_p = p.e2.psi - p.e1.psi * op / phi1
    psi_m = p.e2.psi_minus - p.e1.psi_minus * om / phi1
    manifold = darboux_manifold_nlbq(p) if with_manifold and p.e2.manifold is not None else None
    return EigenData(psi=psi_p, lam=p.e2.lam, manifold=manifold, psi_minus=psi_m)


def tau_nlbq(p: DarbouxPairNLBQ) -> FieldExpr:
    phi1, phi2 = _manifolds(p)
    op, om = omega_pm_nlbq(p)
    return phi2 * phi1 - op * om


def iterate_nlbq(M: FieldExpr, N: FieldExpr, manifold: FieldExpr) -> tuple[FieldExpr, FieldExpr]:
    """``(M + phi_x/phi, N + phi_t/phi)``."""
    return M + dx(manifold) / manifold, N + db(manifold) / manifold
