"""Catalogue of equations as evaluatable residuals, plus grid scans and reports.

Every equation is stored as one or more *components*.  A component is a list
of additive terms (``FieldExpr``) whose exact sum vanishes when the equation
holds.  Its normalized residual at a point is

    |sum(terms)| / (1 + sum(|term|))

and the residual of the equation is the maximum over its components.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import EmptyScanError, MissingBindingError
from .fields import (
    Constant,
    FieldExpr,
    Point2,
    as_field,
    const,
    d,
    evaluate_many,
    reflect,
)

DEFAULT_BOX = (-3.0, 3.0, -3.0, 3.0)
DEFAULT_GRID = (20, 20)
DEFAULT_POLE_GUARD = 1e-9
DEFAULT_TOLERANCE = 1e-8

PARAM_ROLES = ("lambda", "a", "a_hat", "a0")


# ----------------------------------------------------------------------------
# bindings


class Bindings(Mapping):
    """Role name -> field (``FieldExpr``) or scalar parameter.

    ``lam`` is accepted as an alias for ``lambda`` so that keyword
    construction works: ``Bindings(M=m, psi=psi, lam=-1.0)``.
    """

    def __init__(self, mapping: Mapping | None = None, **kw):
        items = dict(mapping or {})
        items.update(kw)
        if "lam" in items:
            items["lambda"] = items.pop("lam")
        self._items: dict[str, FieldExpr | float] = {}
        for role, val in items.items():
            if role in PARAM_ROLES and not isinstance(val, FieldExpr):
                self._items[role] = float(val)
            else:
                self._items[role] = as_field(val)

    def __getitem__(self, role):
        try:
            return self._items[role]
        except KeyError:
            raise MissingBindingError(f"missing binding {role!r}") from None

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def replace(self, **kw) -> Bindings:
        new = dict(self._items)
        if "lam" in kw:
            kw["lambda"] = kw.pop("lam")
        new.update(kw)
        return Bindings(new)

    def __repr__(self):
        return f"Bindings({sorted(self._items)})"


# ----------------------------------------------------------------------------
# manifold-derived quantities


def _dx(f, n=1):
    return d(f, n, 0)


def _db(f, n=1):
    return d(f, 0, n)


def sm_v(phi: FieldExpr) -> FieldExpr:
    """``phi_xx / phi_x``."""
    return _dx(phi, 2) / _dx(phi)


def sm_q(phi: FieldExpr) -> FieldExpr:
    """``phi_b / phi_x`` (``q`` for AKNS, ``w`` for NLBq)."""
    return _db(phi) / _dx(phi)


sm_w = sm_q


def sm_s(phi: FieldExpr) -> FieldExpr:
    """Schwarzian ``v_x - v^2/2``."""
    v = sm_v(phi)
    return _dx(v) - v * v / const(2.0)


def log_dx(f: FieldExpr) -> FieldExpr:
    return _dx(f) / f


# ----------------------------------------------------------------------------
# equation builders; each returns a list of components (lists of terms)

Terms = list[FieldExpr]


def _c(x: float) -> Constant:
    return const(x)


def _neg(ts: Iterable[FieldExpr]) -> Terms:
    return [-t for t in ts]


def _akns_pde(M):
    return [[d(M, 3, 1), _c(4) * _db(M) * _dx(M, 2), _c(8) * _dx(M) * d(M, 1, 1)]]


def _akns_int(M):
    My, Mxy = _db(M), d(M, 1, 1)
    return [[_c(2) * My * d(M, 2, 1), _c(8) * _dx(M) * My * My, -(Mxy * Mxy)]]


def _akns_lax_x(M, psi, lam):
    return [[_dx(psi, 2), _c(2) * _dx(M) * psi, _c(lam) * psi]]


def _akns_lax_y(M, psi, lam):
    return [[_c(2 * lam) * _db(psi), d(M, 1, 1) * psi, _c(-2) * _db(M) * _dx(psi)]]


def _nlbq_lax_plus(M, psi, lam):
    Mx = _dx(M)
    return [
        [
            _c(2) * Mx * _dx(psi, 2),
            _c(2) * Mx * Mx * psi,
            -(_db(M) * _dx(psi)),
            -(_dx(M, 2) * _dx(psi)),
            _c(-2 * lam) * Mx * _dx(psi),
        ],
        [_db(psi), -_dx(psi, 2), _c(2 * lam) * _dx(psi), _c(-2) * Mx * psi],
    ]


def _nlbq_lax_minus(M, psi, lam):
    Mx = _dx(M)
    return [
        [
            _c(2) * Mx * _dx(psi, 2),
            _c(2) * Mx * Mx * psi,
            _db(M) * _dx(psi),
            -(_dx(M, 2) * _dx(psi)),
            _c(2 * lam) * Mx * _dx(psi),
        ],
        [_db(psi), _dx(psi, 2), _c(2 * lam) * _dx(psi), _c(2) * Mx * psi],
    ]


def _nlbq_single(M):
    Mx, Mxx, Mt = _dx(M), _dx(M, 2), _db(M)
    return [
        [
            Mx * Mx * _db(M, 2),
            -(Mx * Mx * _dx(M, 4)),
            _c(-4) * Mx * Mx * Mx * Mxx,
            _c(-2) * Mx * Mt * d(M, 1, 1),
            _c(2) * Mx * Mxx * _dx(M, 3),
            Mxx * Mt * Mt,
            -(Mxx * Mxx * Mxx),
        ]
    ]


def _matrix_rows(lhs: Sequence[FieldExpr], mat, vec: Sequence[FieldExpr]) -> list[Terms]:
    comps = []
    for row_lhs, row in zip(lhs, mat):
        terms = [row_lhs]
        for coef, comp in zip(row, vec):
            if coef is None:
                continue
            terms.append(-(coef * comp))
        comps.append(terms)
    return comps


def _b_akns_pde(b):
    return _akns_pde(b["M"])


def _b_akns_int(b):
    return _akns_int(b["M"])


def _b_akns_lax_x(b):
    return _akns_lax_x(b["M"], b["psi"], b["lambda"])


def _b_akns_lax_y(b):
    return _akns_lax_y(b["M"], b["psi"], b["lambda"])


def _b_akns_trunc_mx(b):
    M, phi, lam = b["M"], b["phi"], b["lambda"]
    v = sm_v(phi)
    return [[_dx(M), _dx(v) / _c(4), v * v / _c(8), _c(lam / 2)]]


def _b_akns_trunc_my(b):
    M, phi, lam = b["M"], b["phi"], b["lambda"]
    return [[_db(M), _db(sm_v(phi)) / _c(2), _c(-lam) * sm_q(phi)]]


def _b_akns_sm_s(b):
    phi, lam = b["phi"], b["lambda"]
    return [[_db(sm_s(phi)), _c(-4 * lam) * _dx(sm_q(phi))]]


def _b_akns_sm_compat(b):
    phi = b["phi"]
    v, q, s = sm_v(phi), sm_q(phi), sm_s(phi)
    return [
        [_db(v), -_dx(q, 2), -(_dx(q) * v), -(q * _dx(v))],
        [_db(s), -_dx(q, 3), _c(-2) * s * _dx(q), -(q * _dx(s))],
    ]


def _b_akns_sm_is_akns(b):
    # p_x = (s - 2 lambda)/4 and p_y = lambda q; the AKNS equation for p
    phi, lam = b["phi"], b["lambda"]
    q, s = sm_q(phi), sm_s(phi)
    return [
        [_c(lam) * _dx(q, 3), _c(lam) * q * _dx(s), _c(2 * lam) * s * _dx(q), _c(-4 * lam * lam) * _dx(q)],
        # compatibility of the two first derivatives of p
        [_db(s) / _c(4), _c(-lam) * _dx(q)],
    ]


def _b_akns_manifold(b):
    return [[_dx(b["phi"]), -(b["psi"] * b["psi"])]]


def _b_shg_sys_1(b):
    u, eta = b["u"], b["eta"]
    return [[d(u, 1, 1), _c(2) * u * _db(eta)]]


def _b_shg_sys_2(b):
    u, eta = b["u"], b["eta"]
    return [[_dx(eta), u * u]]


def _b_shg_mm(b):
    m, mh = b["m"], b["m_hat"]
    return [
        [d(m, 1, 1), _c(2) * m * _db(m), _c(-2) * mh * _db(m)],
        [d(mh, 1, 1), _c(-2) * m * _db(mh), _c(2) * mh * _db(mh)],
    ]


def _b_shg_bt(b):
    m, mh = b["m"], b["m_hat"]
    return [
        [mh, -m, -(d(m, 1, 1) / (_c(2) * _db(m)))],
        [m, -mh, -(d(mh, 1, 1) / (_c(2) * _db(mh)))],
    ]


def _b_shg_bt_product(b):
    m, mh = b["m"], b["m_hat"]
    return [[d(m, 1, 1) * _db(mh), _db(m) * d(mh, 1, 1)]]


def _b_shg_miura(b):
    m, mh, u = b["m"], b["m_hat"], b["u"]
    return [
        [_c(2) * _dx(m), -_dx(u), u * u],
        [_c(2) * _dx(mh), _dx(u), u * u],
    ]


def _shg_A(u, phi, phi_hat):
    return sm_v(phi) / _c(2) + u, sm_v(phi_hat) / _c(2) - u


def _b_shg_coupling(b):
    u, phi, phih = b["u"], b["phi"], b["phi_hat"]
    A, Ah = _shg_A(u, phi, phih)
    L, Lh = log_dx(phi), log_dx(phih)
    return [[L * Lh, -(A * L), -(Ah * Lh)]]


def _b_shg_coupling_dx(b):
    u, phi, phih = b["u"], b["phi"], b["phi_hat"]
    A, Ah = _shg_A(u, phi, phih)
    v, vh = sm_v(phi), sm_v(phih)
    return [
        [_dx(A), -(A * (vh - A - Ah))],
        [_dx(A), -(A * (vh - v) / _c(2))],
        [_dx(Ah), -(Ah * (v - A - Ah))],
        [_dx(Ah), -(Ah * (v - vh) / _c(2))],
    ]


def _b_shg_first_order(b):
    u, psi, psih, a, ah = b["u"], b["psi"], b["psi_hat"], b["a"], b["a_hat"]
    return [
        [_dx(psi), _c(-a) * psih, u * psi],
        [_dx(psih), _c(-ah) * psi, -(u * psih)],
    ]


def _b_shg_lax_hat(b):
    mh, psih, lam = b["m_hat"], b["psi_hat"], b["lambda"]
    return _akns_lax_x(mh, psih, lam) + _akns_lax_y(mh, psih, lam)


def _b_shg_y_pair(b):
    u, eta, psi, psih, a, ah = b["u"], b["eta"], b["psi"], b["psi_hat"], b["a"], b["a_hat"]
    return [
        [_c(2 * ah) * _db(psi), (_db(u) + _db(eta)) * psih],
        [_c(2 * a) * _db(psih), -((_db(u) - _db(eta)) * psi)],
    ]


def _b_shg_matrix(b):
    u, eta, psi, psih = b["u"], b["eta"], b["psi"], b["psi_hat"]
    a, ah, lam = b["a"], b["a_hat"], b["lambda"]
    vec = (psi, psih)
    comps = _matrix_rows((_dx(psi), _dx(psih)), [[-u, _c(a)], [_c(ah), u]], vec)
    uy, ey = _db(u), _db(eta)
    comps += _matrix_rows(
        (_db(_c(2 * ah) * psi), _db(_c(2 * a) * psih)),
        [[None, -(uy + ey)], [uy - ey, None]],
        vec,
    )
    comps.append([_c(lam), _c(a * ah)])
    return comps


def _b_shg_coupling_int(b):
    psi, psih, phi, phih = b["psi"], b["psi_hat"], b["phi"], b["phi_hat"]
    a, ah = b["a"], b["a_hat"]
    return [
        [_c(a) * phih, _c(ah) * phi, -(psi * psih)],
        [_c(a) * psih * psih, _c(ah) * psi * psi, -_dx(psi * psih)],
    ]


def _b_nlbq_sys(b):
    M, N = b["M"], b["N"]
    Mx = _dx(M)
    return [
        [_dx(N), -_db(M)],
        [Mx * _db(N), -(Mx * _dx(M, 3)), _c(-2) * Mx * Mx * Mx, -(_db(M) * _db(M)), _dx(M, 2) * _dx(M, 2)],
    ]


def _b_nlbq_single(b):
    return _nlbq_single(b["M"])


def _b_nlbq_trunc_mx(b):
    M, phi, lam = b["M"], b["phi"], b["lambda"]
    v, w = sm_v(phi), sm_w(phi)
    W = w + _c(2 * lam)
    return [[_dx(M), -(W * W) / _c(4), v * v / _c(4)]]


def _b_nlbq_trunc_mt(b):
    M, phi, lam = b["M"], b["phi"], b["lambda"]
    v, w = sm_v(phi), sm_w(phi)
    W = w + _c(2 * lam)
    return [
        [
            _db(M),
            -(W * _dx(v)) / _c(2),
            v * _dx(w) / _c(2),
            -((w + _c(lam)) * (W * W - v * v)) / _c(2),
        ]
    ]


def _b_nlbq_sm_1(b):
    phi = b["phi"]
    v, w = sm_v(phi), sm_w(phi)
    return [[_db(v), -_dx(w, 2), -(_dx(w) * v), -(w * _dx(v))]]


def _b_nlbq_sm_2(b):
    phi, lam = b["phi"], b["lambda"]
    v, w = sm_v(phi), sm_w(phi)
    W = w + _c(2 * lam)
    return [[_db(w), -_dx(v, 2), _dx(v * v) / _c(2), -_dx(_c(1.5) * W * W), _c(2 * lam) * _dx(w)]]


def _b_nlbq_lax_plus(b):
    return _nlbq_lax_plus(b["M"], b["psi_plus"], b["lambda"])


def _b_nlbq_lax_minus(b):
    return _nlbq_lax_minus(b["M"], b["psi_minus"], b["lambda"])


def _b_nlbq_manifold(b):
    return [[_dx(b["phi"]), -(b["psi_plus"] * b["psi_minus"])]]


def _b_nlbq_symmetry(b):
    # plus pair on (-M(-x,-t), psi(-x,-t)) at p against minus pair on (M, psi) at -p
    M, psi, lam = b["M"], b["psi"], b["lambda"]
    Mt, psit = -reflect(M), reflect(psi)
    plus = _nlbq_lax_plus(Mt, psit, lam)
    minus = _nlbq_lax_minus(M, psi, lam)
    c1 = plus[0] + [-reflect(t) for t in minus[0]]
    c2 = plus[1] + [reflect(t) for t in minus[1]]
    return [c1, c2]


def _b_kaup_sys_1(b):
    u, eta = b["u"], b["eta"]
    return [[_db(u), -_dx(eta, 2), _c(-2) * u * _dx(u)]]


def _b_kaup_sys_2(b):
    u, eta = b["u"], b["eta"]
    return [[_db(eta), -_dx(u, 2), _c(-2) * u * _dx(eta)]]


def _b_kaup_mm(b):
    m, mh = b["m"], b["m_hat"]
    return [
        [_db(m), -_dx(m, 2), _c(-2) * m * _dx(m), _c(2) * mh * _dx(m)],
        [_db(mh), _dx(mh, 2), _c(-2) * m * _dx(mh), _c(2) * mh * _dx(mh)],
    ]


def _b_kaup_nlbq_m(b):
    return _nlbq_single(b["m"])


def _b_kaup_nlbq_mhat(b):
    return _nlbq_single(b["m_hat"])


def _b_kaup_bt(b):
    m, mh = b["m"], b["m_hat"]
    return [
        [m, -mh, -((_db(mh) + _dx(mh, 2)) / (_c(2) * _dx(mh)))],
        [mh, -m, -((_dx(m, 2) - _db(m)) / (_c(2) * _dx(m)))],
    ]


def _b_kaup_miura_dx(b):
    m, mh, u = b["m"], b["m_hat"], b["u"]
    return [
        [_c(2) * _dx(m, 2), -_dx(u, 2), _c(2) * u * _dx(u), -_db(u)],
        [_c(2) * _dx(mh, 2), _dx(u, 2), _c(2) * u * _dx(u), -_db(u)],
    ]


def _kaup_A(u, phi, phih):
    v, w, vh, wh = sm_v(phi), sm_w(phi), sm_v(phih), sm_w(phih)
    return (v - w) / _c(2) + u, (vh + wh) / _c(2) - u


def _b_kaup_coupling(b):
    u, phi, phih, lam = b["u"], b["phi"], b["phi_hat"], b["lambda"]
    psim, psiph = b["psi_minus"], b["psi_hat_plus"]
    A, Ah = _kaup_A(u, phi, phih)
    v, w, vh, wh = sm_v(phi), sm_w(phi), sm_v(phih), sm_w(phih)
    L, Lh = log_dx(phi), log_dx(phih)
    U = u + _c(lam)
    return [
        [L * Lh, -(A * L), -(Ah * Lh)],
        [u, _c(-lam), -(vh + wh - v + w) / _c(2)],
        [A, -U, -log_dx(psim)],
        [Ah, U, -log_dx(psiph)],
        [U, -log_dx(psiph), log_dx(psim)],
    ]


def _b_kaup_coupling_dx(b):
    u, phi, phih = b["u"], b["phi"], b["phi_hat"]
    A, Ah = _kaup_A(u, phi, phih)
    v, w, vh, wh = sm_v(phi), sm_w(phi), sm_v(phih), sm_w(phih)
    Bm = (vh - wh - v + w) / _c(2)
    Bp = (v + w - vh - wh) / _c(2)
    return [
        [_dx(A), -(A * (vh - A - Ah))],
        [_dx(A), -(A * Bm)],
        [Bm, -log_dx(b["psi_hat_minus"]), log_dx(b["psi_minus"])],
        [_dx(Ah), -(Ah * (v - A - Ah))],
        [_dx(Ah), -(Ah * Bp)],
        [Bp, -log_dx(b["psi_plus"]), log_dx(b["psi_hat_plus"])],
    ]


def _b_kaup_first_order(b):
    u, eta, lam, a, ah = b["u"], b["eta"], b["lambda"], b["a"], b["a_hat"]
    pm, pmh, pp, pph = b["psi_minus"], b["psi_hat_minus"], b["psi_plus"], b["psi_hat_plus"]
    U = u + _c(lam)
    ux, ex = _dx(u), _dx(eta)
    return [
        [_dx(pm), _c(-a) * pmh, U * pm],
        [_dx(pph), _c(-ah) * pp, -(U * pph)],
        [_c(a) * _dx(pmh), -((ux - ex) / _c(2) * pm)],
        [_c(ah) * _dx(pp), (ux + ex) / _c(2) * pph],
    ]


def _b_kaup_matrix_x(b):
    u, eta, lam, a, ah = b["u"], b["eta"], b["lambda"], b["a"], b["a_hat"]
    pm, pmh, pp, pph = b["psi_minus"], b["psi_hat_minus"], b["psi_plus"], b["psi_hat_plus"]
    U = u + _c(lam)
    ux, ex = _dx(u), _dx(eta)
    comps = _matrix_rows((_dx(pm), _dx(pmh)), [[-U, _c(a)], [(ux - ex) / _c(2 * a), None]], (pm, pmh))
    comps += _matrix_rows((_dx(pp), _dx(pph)), [[None, -(ux + ex) / _c(2 * ah)], [_c(ah), U]], (pp, pph))
    return comps


def _b_kaup_matrix_t(b):
    u, eta, lam, a, ah = b["u"], b["eta"], b["lambda"], b["a"], b["a_hat"]
    pm, pmh, pp, pph = b["psi_minus"], b["psi_hat_minus"], b["psi_plus"], b["psi_hat_plus"]
    ux, ex, uxx, exx = _dx(u), _dx(eta), _dx(u, 2), _dx(eta, 2)
    um = u - _c(lam)
    sq = u * u - _c(lam * lam)
    minus = [
        [-((ex + ux) / _c(2) + sq), _c(a) * um],
        [(exx - uxx - um * (ex - ux)) / _c(2 * a), (ux - ex) / _c(2)],
    ]
    plus = [
        [(ux + ex) / _c(2), (-exx - uxx - um * (ex + ux)) / _c(2 * ah)],
        [_c(ah) * um, (ex - ux) / _c(2) + sq],
    ]
    comps = _matrix_rows((_db(pm), _db(pmh)), minus, (pm, pmh))
    comps += _matrix_rows((_db(pp), _db(pph)), plus, (pp, pph))
    return comps


def _b_appd_identity(b):
    M, pp, pm = b["M"], b["psi_plus"], b["psi_minus"]
    return [[_dx(pp) * _dx(pm), _dx(M) * pp * pm]]


def _b_field_match(b):
    return [[b["f"], -b["g"]]]


@dataclass(frozen=True)
class _EqSpec:
    fields: tuple[str, ...]
    params: tuple[str, ...]
    formula: str
    build: Callable[[Bindings], list[Terms]]


class EquationId(enum.Enum):
    """Every equation the package can check.  See :attr:`formula` for each one."""

    AKNS_PDE = "AKNS_PDE"
    AKNS_INTEGRATED = "AKNS_INTEGRATED"
    AKNS_LAX_X = "AKNS_LAX_X"
    AKNS_LAX_Y = "AKNS_LAX_Y"
    AKNS_TRUNC_MX = "AKNS_TRUNC_MX"
    AKNS_TRUNC_MY = "AKNS_TRUNC_MY"
    AKNS_SM_S = "AKNS_SM_S"
    AKNS_SM_COMPAT = "AKNS_SM_COMPAT"
    AKNS_SM_IS_AKNS = "AKNS_SM_IS_AKNS"
    AKNS_MANIFOLD = "AKNS_MANIFOLD"
    SHG_SYS_1 = "SHG_SYS_1"
    SHG_SYS_2 = "SHG_SYS_2"
    SHG_MM = "SHG_MM"
    SHG_BT = "SHG_BT"
    SHG_BT_PRODUCT = "SHG_BT_PRODUCT"
    SHG_MIURA = "SHG_MIURA"
    SHG_COUPLING = "SHG_COUPLING"
    SHG_COUPLING_DX = "SHG_COUPLING_DX"
    SHG_FIRST_ORDER = "SHG_FIRST_ORDER"
    SHG_LAX_HAT = "SHG_LAX_HAT"
    SHG_Y_PAIR = "SHG_Y_PAIR"
    SHG_MATRIX = "SHG_MATRIX"
    SHG_COUPLING_INT = "SHG_COUPLING_INT"
    NLBQ_SYS = "NLBQ_SYS"
    NLBQ_SINGLE = "NLBQ_SINGLE"
    NLBQ_TRUNC_MX = "NLBQ_TRUNC_MX"
    NLBQ_TRUNC_MT = "NLBQ_TRUNC_MT"
    NLBQ_SM_1 = "NLBQ_SM_1"
    NLBQ_SM_2 = "NLBQ_SM_2"
    NLBQ_LAX_PLUS = "NLBQ_LAX_PLUS"
    NLBQ_LAX_MINUS = "NLBQ_LAX_MINUS"
    NLBQ_MANIFOLD = "NLBQ_MANIFOLD"
    NLBQ_SYMMETRY = "NLBQ_SYMMETRY"
    KAUP_SYS_1 = "KAUP_SYS_1"
    KAUP_SYS_2 = "KAUP_SYS_2"
    KAUP_MM = "KAUP_MM"
    KAUP_NLBQ_M = "KAUP_NLBQ_M"
    KAUP_NLBQ_MHAT = "KAUP_NLBQ_MHAT"
    KAUP_BT = "KAUP_BT"
    KAUP_MIURA_DX = "KAUP_MIURA_DX"
    KAUP_COUPLING = "KAUP_COUPLING"
    KAUP_COUPLING_DX = "KAUP_COUPLING_DX"
    KAUP_FIRST_ORDER = "KAUP_FIRST_ORDER"
    KAUP_MATRIX_X = "KAUP_MATRIX_X"
    KAUP_MATRIX_T = "KAUP_MATRIX_T"
    APPD_IDENTITY = "APPD_IDENTITY"
    FIELD_MATCH = "FIELD_MATCH"

    @property
    def spec(self) -> _EqSpec:
        return _CATALOG[self]

    @property
    def fields(self) -> tuple[str, ...]:
        return self.spec.fields

    @property
    def params(self) -> tuple[str, ...]:
        return self.spec.params

    @property
    def roles(self) -> tuple[str, ...]:
        return self.spec.fields + self.spec.params

    @property
    def formula(self) -> str:
        return self.spec.formula

    @classmethod
    def parse(cls, name: str) -> EquationId:
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown equation id {name!r}") from None


_E = EquationId
_CATALOG: dict[EquationId, _EqSpec] = {
    _E.AKNS_PDE: _EqSpec(("M",), (), "M_yxxx + 4 M_y M_xx + 8 M_x M_xy = 0", _b_akns_pde),
    _E.AKNS_INTEGRATED: _EqSpec(("M",), (), "2 M_y M_xxy + 8 M_x M_y^2 - M_xy^2 = 0", _b_akns_int),
    _E.AKNS_LAX_X: _EqSpec(("M", "psi"), ("lambda",), "psi_xx + (2 M_x + lambda) psi = 0", _b_akns_lax_x),
    _E.AKNS_LAX_Y: _EqSpec(
        ("M", "psi"), ("lambda",), "2 lambda psi_y + M_xy psi - 2 M_y psi_x = 0", _b_akns_lax_y
    ),
    _E.AKNS_TRUNC_MX: _EqSpec(
        ("M", "phi"), ("lambda",), "M_x + (v_x + v^2/2 + 2 lambda)/4 = 0", _b_akns_trunc_mx
    ),
    _E.AKNS_TRUNC_MY: _EqSpec(("M", "phi"), ("lambda",), "M_y = (-v_y + 2 lambda q)/2", _b_akns_trunc_my),
    _E.AKNS_SM_S: _EqSpec(("phi",), ("lambda",), "s_y = 4 lambda q_x", _b_akns_sm_s),
    _E.AKNS_SM_COMPAT: _EqSpec(
        ("phi",), (), "v_y = (q_x + q v)_x; s_y = q_xxx + 2 s q_x + q s_x", _b_akns_sm_compat
    ),
    _E.AKNS_SM_IS_AKNS: _EqSpec(
        ("phi",),
        ("lambda",),
        "p with p_x = (s - 2 lambda)/4, p_y = lambda q solves the AKNS equation",
        _b_akns_sm_is_akns,
    ),
    _E.AKNS_MANIFOLD: _EqSpec(("phi", "psi"), (), "phi_x = psi^2", _b_akns_manifold),
    _E.SHG_SYS_1: _EqSpec(("u", "eta"), (), "u_xy + 2 u eta_y = 0", _b_shg_sys_1),
    _E.SHG_SYS_2: _EqSpec(("u", "eta"), (), "eta_x + u^2 = 0", _b_shg_sys_2),
    _E.SHG_MM: _EqSpec(
        ("m", "m_hat"),
        (),
        "m_xy + 2 (m - m_hat) m_y = 0; m_hat_xy - 2 (m - m_hat) m_hat_y = 0",
        _b_shg_mm,
    ),
    _E.SHG_BT: _EqSpec(
        ("m", "m_hat"),
        (),
        "m_hat = m + m_xy/(2 m_y); m = m_hat + m_hat_xy/(2 m_hat_y)",
        _b_shg_bt,
    ),
    _E.SHG_BT_PRODUCT: _EqSpec(("m", "m_hat"), (), "(m_y m_hat_y)_x = 0", _b_shg_bt_product),
    _E.SHG_MIURA: _EqSpec(
        ("m", "m_hat", "u"), (), "2 m_x = u_x - u^2; 2 m_hat_x = -u_x - u^2", _b_shg_miura
    ),
    _E.SHG_COUPLING: _EqSpec(
        ("u", "phi", "phi_hat"),
        (),
        "L Lh = A L + Ah Lh, L = phi_x/phi, A = v/2 + u, Ah = vh/2 - u",
        _b_shg_coupling,
    ),
    _E.SHG_COUPLING_DX: _EqSpec(
        ("u", "phi", "phi_hat"),
        (),
        "A_x = A (vh - A - Ah) = A (vh - v)/2; Ah_x = Ah (v - A - Ah) = Ah (v - vh)/2",
        _b_shg_coupling_dx,
    ),
    _E.SHG_FIRST_ORDER: _EqSpec(
        ("u", "psi", "psi_hat"),
        ("a", "a_hat"),
        "psi_x = a psi_hat - u psi; psi_hat_x = a_hat psi + u psi_hat",
        _b_shg_first_order,
    ),
    _E.SHG_LAX_HAT: _EqSpec(
        ("m_hat", "psi_hat"), ("lambda",), "AKNS Lax pair for (m_hat, psi_hat)", _b_shg_lax_hat
    ),
    _E.SHG_Y_PAIR: _EqSpec(
        ("u", "eta", "psi", "psi_hat"),
        ("a", "a_hat"),
        "2 a_hat psi_y = -(u_y + eta_y) psi_hat; 2 a psi_hat_y = (u_y - eta_y) psi",
        _b_shg_y_pair,
    ),
    _E.SHG_MATRIX: _EqSpec(
        ("u", "eta", "psi", "psi_hat"),
        ("a", "a_hat", "lambda"),
        "(psi, psi_hat)_x = [[-u, a], [a_hat, u]] (psi, psi_hat); "
        "(2 a_hat psi, 2 a psi_hat)_y = [[0, -(u_y + eta_y)], [u_y - eta_y, 0]] (psi, psi_hat); "
        "lambda = -a a_hat",
        _b_shg_matrix,
    ),
    _E.SHG_COUPLING_INT: _EqSpec(
        ("psi", "psi_hat", "phi", "phi_hat"),
        ("a", "a_hat"),
        "a phi_hat + a_hat phi = psi psi_hat (and its x-derivative)",
        _b_shg_coupling_int,
    ),
    _E.NLBQ_SYS: _EqSpec(
        ("M", "N"), (), "N_x = M_t; M_x N_t = M_x M_xxx + 2 M_x^3 + M_t^2 - M_xx^2", _b_nlbq_sys
    ),
    _E.NLBQ_SINGLE: _EqSpec(
        ("M",),
        (),
        "M_x^2 (M_tt - M_xxxx) = 4 M_x^3 M_xx + 2 M_x (M_t M_tx - M_xx M_xxx) - M_xx (M_t^2 - M_xx^2)",
        _b_nlbq_single,
    ),
    _E.NLBQ_TRUNC_MX: _EqSpec(
        ("M", "phi"), ("lambda",), "M_x = ((w + 2 lambda)^2 - v^2)/4", _b_nlbq_trunc_mx
    ),
    _E.NLBQ_TRUNC_MT: _EqSpec(
        ("M", "phi"),
        ("lambda",),
        "M_t = ((w + 2 lambda) v_x - v w_x + (w + lambda)((w + 2 lambda)^2 - v^2))/2",
        _b_nlbq_trunc_mt,
    ),
    _E.NLBQ_SM_1: _EqSpec(("phi",), (), "v_t = (w_x + w v)_x", _b_nlbq_sm_1),
    _E.NLBQ_SM_2: _EqSpec(
        ("phi",),
        ("lambda",),
        "w_t = (v_x - v^2/2 + 3/2 (w + 2 lambda)^2 - 2 lambda (w + 2 lambda))_x",
        _b_nlbq_sm_2,
    ),
    _E.NLBQ_LAX_PLUS: _EqSpec(
        ("M", "psi_plus"),
        ("lambda",),
        "2 M_x (psi_xx + M_x psi) = (M_t + M_xx + 2 lambda M_x) psi_x; "
        "psi_t = psi_xx - 2 lambda psi_x + 2 M_x psi",
        _b_nlbq_lax_plus,
    ),
    _E.NLBQ_LAX_MINUS: _EqSpec(
        ("M", "psi_minus"),
        ("lambda",),
        "2 M_x (psi_xx + M_x psi) = -(M_t - M_xx + 2 lambda M_x) psi_x; "
        "psi_t = -psi_xx - 2 lambda psi_x - 2 M_x psi",
        _b_nlbq_lax_minus,
    ),
    _E.NLBQ_MANIFOLD: _EqSpec(
        ("phi", "psi_plus", "psi_minus"), (), "phi_x = psi_plus psi_minus", _b_nlbq_manifold
    ),
    _E.NLBQ_SYMMETRY: _EqSpec(
        ("M", "psi"),
        ("lambda",),
        "plus-pair residual of (-M(-x,-t), psi(-x,-t)) at p equals the minus-pair residual "
        "of (M, psi) at -p (second row with opposite sign)",
        _b_nlbq_symmetry,
    ),
    _E.KAUP_SYS_1: _EqSpec(("u", "eta"), (), "u_t = eta_xx + 2 u u_x", _b_kaup_sys_1),
    _E.KAUP_SYS_2: _EqSpec(("u", "eta"), (), "eta_t = u_xx + 2 u eta_x", _b_kaup_sys_2),
    _E.KAUP_MM: _EqSpec(
        ("m", "m_hat"),
        (),
        "m_t = m_xx + 2 (m - m_hat) m_x; m_hat_t = -m_hat_xx + 2 (m - m_hat) m_hat_x",
        _b_kaup_mm,
    ),
    _E.KAUP_NLBQ_M: _EqSpec(("m",), (), "NLBq single equation for m", _b_kaup_nlbq_m),
    _E.KAUP_NLBQ_MHAT: _EqSpec(("m_hat",), (), "NLBq single equation for m_hat", _b_kaup_nlbq_mhat),
    _E.KAUP_BT: _EqSpec(
        ("m", "m_hat"),
        (),
        "m = m_hat + (m_hat_t + m_hat_xx)/(2 m_hat_x); m_hat = m + (m_xx - m_t)/(2 m_x)",
        _b_kaup_bt,
    ),
    _E.KAUP_MIURA_DX: _EqSpec(
        ("m", "m_hat", "u"),
        (),
        "2 m_xx = u_xx - 2 u u_x + u_t; 2 m_hat_xx = -u_xx - 2 u u_x + u_t",
        _b_kaup_miura_dx,
    ),
    _E.KAUP_COUPLING: _EqSpec(
        ("u", "phi", "phi_hat", "psi_minus", "psi_hat_plus"),
        ("lambda",),
        "L Lh = A L + Ah Lh with A = (v - w)/2 + u, Ah = (vh + wh)/2 - u; "
        "u = lambda + (vh + wh - v + w)/2; A = u + lambda + psi^-_x/psi^-; "
        "Ah = -(u + lambda) + psih^+_x/psih^+; u + lambda = psih^+_x/psih^+ - psi^-_x/psi^-",
        _b_kaup_coupling,
    ),
    _E.KAUP_COUPLING_DX: _EqSpec(
        ("u", "phi", "phi_hat", "psi_plus", "psi_minus", "psi_hat_plus", "psi_hat_minus"),
        (),
        "A_x = A (vh - A - Ah) = A (vh - wh - v + w)/2, (vh - wh - v + w)/2 = log-derivative "
        "difference of psih^-, psi^-; hat analogue",
        _b_kaup_coupling_dx,
    ),
    _E.KAUP_FIRST_ORDER: _EqSpec(
        ("u", "eta", "psi_plus", "psi_minus", "psi_hat_plus", "psi_hat_minus"),
        ("a", "a_hat", "lambda"),
        "psi^-_x = a psih^- - (u + lambda) psi^-; psih^+_x = a_hat psi^+ + (u + lambda) psih^+; "
        "a psih^-_x = (u_x - eta_x)/2 psi^-; a_hat psi^+_x = -(u_x + eta_x)/2 psih^+",
        _b_kaup_first_order,
    ),
    _E.KAUP_MATRIX_X: _EqSpec(
        ("u", "eta", "psi_plus", "psi_minus", "psi_hat_plus", "psi_hat_minus"),
        ("a", "a_hat", "lambda"),
        "spatial two-component Lax pairs for (psi^-, psih^-) and (psi^+, psih^+)",
        _b_kaup_matrix_x,
    ),
    _E.KAUP_MATRIX_T: _EqSpec(
        ("u", "eta", "psi_plus", "psi_minus", "psi_hat_plus", "psi_hat_minus"),
        ("a", "a_hat", "lambda"),
        "temporal two-component Lax pairs for (psi^-, psih^-) and (psi^+, psih^+)",
        _b_kaup_matrix_t,
    ),
    _E.APPD_IDENTITY: _EqSpec(
        ("M", "psi_plus", "psi_minus"), (), "psi^+_x psi^-_x + M_x psi^+ psi^- = 0", _b_appd_identity
    ),
    _E.FIELD_MATCH: _EqSpec(("f", "g"), (), "f = g", _b_field_match),
}


# ----------------------------------------------------------------------------
# evaluation


def residual_components(eq: EquationId, b: Bindings | Mapping) -> list[Terms]:
    """Build the term lists of ``eq``; rejects incomplete bindings."""
    eq = EquationId(eq)
    if not isinstance(b, Bindings):
        b = Bindings(b)
    missing = [r for r in eq.roles if r not in b]
    if missing:
        raise MissingBindingError(f"{eq.name} needs bindings {missing}")
    for r in eq.params:
        if isinstance(b[r], FieldExpr):
            raise TypeError(f"{eq.name}: parameter {r!r} must be a scalar")
    return eq.spec.build(b)


def _component_residuals(components: list[Terms], a, bb, strict: bool):
    roots = [t for comp in components for t in comp]
    ev = evaluate_many(roots, (a, bb), 0, 0, strict=strict)
    vals = [j.value for j in ev.jets]
    out = None
    k = 0
    for comp in components:
        cv = vals[k : k + len(comp)]
        k += len(comp)
        total = sum(cv)
        scale = 1.0 + sum(np.abs(v) for v in cv)
        r = np.abs(total) / scale
        out = r if out is None else np.maximum(out, r)
    return np.asarray(out, dtype=float), ev.pole_margin


def residual_values(eq: EquationId, b, a, bb, *, strict: bool = False):
    """Residuals at a batch of points; returns ``(residuals, pole_margin)``."""
    comps = residual_components(eq, b)
    return _component_residuals(comps, a, bb, strict)


def evaluate_residual(eq: EquationId, b, p) -> float:
    """Normalized residual of ``eq`` at a single point ``p``.

    Raises :class:`PoleError` if a divisor vanishes at ``p``.
    """
    r, _ = _component_residuals(residual_components(eq, b), float(p[0]), float(p[1]), True)
    return float(r)


# ----------------------------------------------------------------------------
# reports


@dataclass
class ResidualEntry:
    equation: EquationId | str
    max_relative_residual: float
    worst_point: Point2 | None
    points_evaluated: int
    points_skipped_near_pole: int
    label: str = ""
    tolerance: float | None = None
    expect: str = "holds"

    def passed(self, default_tolerance: float = DEFAULT_TOLERANCE) -> bool:
        tol = self.tolerance if self.tolerance is not None else default_tolerance
        r = self.max_relative_residual
        if not math.isfinite(r):
            return False
        return r <= tol if self.expect == "holds" else r >= tol

    @property
    def name(self) -> str:
        return self.equation.name if isinstance(self.equation, EquationId) else str(self.equation)

    def to_dict(self, default_tolerance: float = DEFAULT_TOLERANCE) -> dict:
        tol = self.tolerance if self.tolerance is not None else default_tolerance
        return {
            "label": self.label,
            "equation": self.name,
            "max_relative_residual": self.max_relative_residual,
            "worst_point": None if self.worst_point is None else [self.worst_point.a, self.worst_point.b],
            "points_evaluated": self.points_evaluated,
            "points_skipped_near_pole": self.points_skipped_near_pole,
            "tolerance": tol,
            "expect": self.expect,
            "pass": self.passed(default_tolerance),
        }


@dataclass
class ResidualReport:
    entries: list[ResidualEntry] = field(default_factory=list)
    tolerance: float = DEFAULT_TOLERANCE
    name: str = ""

    @property
    def passed(self) -> bool:
        return all(e.passed(self.tolerance) for e in self.entries)

    @property
    def max_relative_residual(self) -> float:
        held = [e.max_relative_residual for e in self.entries if e.expect == "holds"]
        return max(held, default=0.0)

    def failures(self) -> list[ResidualEntry]:
        return [e for e in self.entries if not e.passed(self.tolerance)]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "entries": [e.to_dict(self.tolerance) for e in self.entries],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            tol = e.tolerance if e.tolerance is not None else self.tolerance
            op = "<=" if e.expect == "holds" else ">="
            status = "PASS" if e.passed(self.tolerance) else "FAIL"
            tag = f"{e.label} " if e.label else ""
            out.append(
                f"{status} {tag}[{e.name}] max={e.max_relative_residual:.3e} {op} {tol:.0e}"
                f" (n={e.points_evaluated}, skipped={e.points_skipped_near_pole})"
            )
        return out


def scan_points(
    eq: EquationId,
    b,
    a,
    bb,
    *,
    pole_guard: float = DEFAULT_POLE_GUARD,
    label: str = "",
    tolerance: float | None = None,
    expect: str = "holds",
) -> ResidualEntry:
    """Maximum residual over the given points.

    A point is skipped when its pole margin (the smallest scale-free distance
    estimate ``|g| / (|g| + |g_a| + |g_b|)`` over all divisors ``g``) is below
    ``pole_guard``, or when the residual is not finite.  Ties in the maximum
    resolve to the first point in C order.
    """
    if pole_guard <= 0:
        raise ValueError("pole_guard must be positive")
    a = np.asarray(a, dtype=float)
    bb = np.asarray(bb, dtype=float)
    a, bb = np.broadcast_arrays(a, bb)
    res, margin = residual_values(eq, b, a, bb, strict=False)
    res = np.broadcast_to(res, a.shape).ravel()
    margin = np.broadcast_to(margin, a.shape).ravel()
    skip = (margin < pole_guard) | ~np.isfinite(res)
    n_eval = int(np.count_nonzero(~skip))
    if n_eval == 0:
        raise EmptyScanError(f"{EquationId(eq).name}: every point was skipped near a pole")
    masked = np.where(skip, -np.inf, res)
    idx = int(np.argmax(masked))
    return ResidualEntry(
        equation=EquationId(eq),
        max_relative_residual=float(masked[idx]),
        worst_point=Point2(float(a.ravel()[idx]), float(bb.ravel()[idx])),
        points_evaluated=n_eval,
        points_skipped_near_pole=int(skip.size - n_eval),
        label=label,
        tolerance=tolerance,
        expect=expect,
    )


def grid(box=DEFAULT_BOX, n_a: int = DEFAULT_GRID[0], n_b: int = DEFAULT_GRID[1]):
    """Regular ``n_a x n_b`` grid over ``box = (a_min, a_max, b_min, b_max)``, ij-indexed."""
    if n_a < 2 or n_b < 2:
        raise ValueError("grid needs at least 2 points per axis")
    a0, a1, b0, b1 = box
    return np.meshgrid(np.linspace(a0, a1, n_a), np.linspace(b0, b1, n_b), indexing="ij")


def scan_grid(
    eq: EquationId,
    b,
    box=DEFAULT_BOX,
    n_a: int = DEFAULT_GRID[0],
    n_b: int = DEFAULT_GRID[1],
    pole_guard: float = DEFAULT_POLE_GUARD,
    **kw,
) -> ResidualEntry:
    A, B = grid(box, n_a, n_b)
    return scan_points(eq, b, A, B, pole_guard=pole_guard, **kw)
