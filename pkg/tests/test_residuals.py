import json
import math

import numpy as np
import pytest

from darbouxkit.errors import EmptyScanError, MissingBindingError
from darbouxkit.fields import FieldExpr, X, Y, const, d, exp, parse_field, reflect
from darbouxkit.residuals import (
    Bindings,
    EquationId,
    ResidualEntry,
    ResidualReport,
    _component_residuals,
    _nlbq_lax_minus,
    _nlbq_lax_plus,
    evaluate_residual,
    grid,
    residual_components,
    residual_values,
    scan_grid,
    scan_points,
    sm_q,
    sm_s,
    sm_v,
)
from darbouxkit.scenarios import Check, check_bindings
from darbouxkit.solitons import akns_eigen

A, B = grid()
E = EquationId


def worst_components(components):
    res, _ = _component_residuals(components, A, B, strict=True)
    return float(np.max(res))


# ----------------------------------------------------------------------------
# normalization and bindings


def test_relative_normalization():
    # FIELD_MATCH terms are f and -g; residual |f - g| / (1 + |f| + |g|)
    r = evaluate_residual(E.FIELD_MATCH, Bindings(f=const(3.0), g=const(1.0)), (0.0, 0.0))
    assert r == pytest.approx(2.0 / 5.0)


def test_component_maximum():
    comps = [[const(1.0), const(-1.0)], [const(2.0)]]
    res, margin = _component_residuals(comps, 0.0, 0.0, True)
    assert float(res) == pytest.approx(2.0 / 3.0)
    assert math.isinf(float(margin))


def test_bindings_alias_and_types():
    b = Bindings(M=parse_field("x*y"), lam=2)
    assert b["lambda"] == 2.0 and isinstance(b["lambda"], float)
    assert isinstance(b["M"], FieldExpr)
    assert set(b) == {"M", "lambda"}
    assert b.replace(lam=3.0)["lambda"] == 3.0
    with pytest.raises(MissingBindingError):
        b["psi"]


def test_missing_role_reported():
    with pytest.raises(MissingBindingError, match="psi"):
        residual_components(E.AKNS_LAX_X, Bindings(M=X, lam=1.0))


def test_parameter_must_be_scalar():
    with pytest.raises(TypeError):
        residual_components(E.AKNS_LAX_X, {"M": X, "psi": X, "lambda": X})


def test_equation_metadata():
    eq = EquationId.parse("akns_lax_y")
    assert eq is E.AKNS_LAX_Y
    assert eq.params == ("lambda",)
    assert eq.roles == ("M", "psi", "lambda")
    assert "psi_y" in eq.formula
    with pytest.raises(ValueError):
        EquationId.parse("NOT_AN_EQUATION")


# ----------------------------------------------------------------------------
# scans


def test_scan_tie_break_is_first_point():
    b = Bindings(f=const(2.0), g=const(1.0))
    entry = scan_points(E.FIELD_MATCH, b, np.array([[1.0, 2.0], [3.0, 4.0]]), np.zeros((2, 2)))
    assert entry.worst_point == (1.0, 0.0)
    assert entry.points_evaluated == 4


def test_scan_all_points_on_pole():
    with pytest.raises(EmptyScanError):
        scan_points(E.FIELD_MATCH, Bindings(f=1 / X, g=const(0.0)), np.zeros(3), np.ones(3))


def test_scan_requires_positive_guard():
    with pytest.raises(ValueError):
        scan_points(E.FIELD_MATCH, Bindings(f=X, g=X), A, B, pole_guard=0.0)


def test_pole_guard_skips_zero_crossing_of_manifold():
    # alpha = -1 puts a zero of phi on the line 2x = y, through nodes of a 21x21 grid
    e = akns_eigen(1.0, 0.5)
    phi = (const(-1.0) + e.psi**2) / const(2.0)
    M = const(0.5) * Y + d(phi, 1, 0) / phi
    entry = scan_grid(E.AKNS_PDE, Bindings(M=M), n_a=21, n_b=21)
    assert entry.points_skipped_near_pole > 0
    assert entry.points_evaluated + entry.points_skipped_near_pole == 441
    assert entry.max_relative_residual <= 1e-8


def test_grid_shape_and_validation():
    a, b = grid((0, 1, 2, 3), 3, 4)
    assert a.shape == (3, 4)
    assert b[0, -1] == 3.0
    with pytest.raises(ValueError):
        grid(n_a=1)


# ----------------------------------------------------------------------------
# scale invariance of manifold-derived quantities


@pytest.mark.parametrize("c", [-2.5, 1e-3, 7.0])
def test_scale_invariance(c):
    e = akns_eigen(1.3, 0.5, 0.2)
    phi, cphi = e.manifold, const(c) * e.manifold
    for fn in (sm_v, sm_q, sm_s):
        b = Bindings(f=fn(phi), g=fn(cphi))
        assert scan_grid(E.FIELD_MATCH, b).max_relative_residual <= 1e-12
    for eq in (E.AKNS_SM_S, E.AKNS_SM_IS_AKNS, E.AKNS_TRUNC_MX):
        b = Bindings(phi=phi, lam=e.lam, M=const(0.5) * Y)
        r1, _ = residual_values(eq, b, A, B)
        r2, _ = residual_values(eq, b.replace(phi=cphi), A, B)
        assert np.max(np.abs(r1 - r2)) <= 1e-12


def test_sm_is_akns_from_seed_manifold():
    e = akns_eigen(2.0, 0.5, -0.3)
    assert scan_grid(E.AKNS_SM_IS_AKNS, Bindings(phi=e.manifold, lam=e.lam)).max_relative_residual <= 1e-8


# ----------------------------------------------------------------------------
# zero on solutions, nonzero on negative controls, for every equation id

PERTURBATION = parse_field("0.3*x^3*y + 0.2*exp(0.5*x)")
# these hold for any bound fields; their negative controls alter the formula instead
IDENTITIES = {E.AKNS_SM_COMPAT, E.NLBQ_SM_1, E.NLBQ_SYMMETRY}
NLBQ_SIDE = ("NLBQ", "KAUP", "APPD")


def _positive(eq, akns_env, nlbq_env):
    env = nlbq_env if eq.name.startswith(NLBQ_SIDE) else akns_env
    bind = {"f": "M2", "g": "M2_closed"} if eq is E.FIELD_MATCH else {}
    return check_bindings(Check(eq, bind=bind), env)


@pytest.mark.parametrize("eq", list(EquationId), ids=lambda e: e.name)
def test_zero_on_solution(eq, akns_env, nlbq_env):
    assert scan_grid(eq, _positive(eq, akns_env, nlbq_env)).max_relative_residual <= 1e-8


@pytest.mark.parametrize("eq", [e for e in EquationId if e not in IDENTITIES], ids=lambda e: e.name)
def test_nonzero_on_perturbed_field(eq, akns_env, nlbq_env):
    b = _positive(eq, akns_env, nlbq_env)
    role = next(r for r in eq.roles if isinstance(b[r], FieldExpr))
    bad = b.replace(**{role: b[role] + PERTURBATION})
    assert scan_grid(eq, bad).max_relative_residual >= 1e-3


@pytest.mark.parametrize(
    "eq", [e for e in EquationId if "lambda" in e.params and e not in IDENTITIES], ids=lambda e: e.name
)
def test_nonzero_on_perturbed_lambda(eq, akns_env, nlbq_env):
    env = nlbq_env if eq.name.startswith(NLBQ_SIDE) else akns_env
    if "phi" in eq.roles and "u" not in eq.roles:
        # seed manifolds depend on one phase only and do not feel lambda
        b = check_bindings(Check(eq, bind={"M": "M1", "phi": "phi2p", "lambda": "lambda2"}), env)
    else:
        b = _positive(eq, akns_env, nlbq_env)
    assert scan_grid(eq, b).max_relative_residual <= 1e-8
    assert scan_grid(eq, b.replace(lam=b["lambda"] + 0.1)).max_relative_residual >= 1e-3


@pytest.mark.parametrize("eq", [E.AKNS_SM_COMPAT, E.NLBQ_SM_1])
def test_identity_equations_with_a_flipped_term(eq, akns_env):
    phi = akns_env["phi2p"]
    comps = residual_components(eq, Bindings(phi=phi, lam=-1.0))
    assert worst_components(comps) <= 1e-8
    flipped = [[-comp[0]] + comp[1:] for comp in comps]
    assert worst_components(flipped) >= 1e-3


def test_symmetry_needs_the_sign_flip_of_m(nlbq_env):
    M, psi, lam = nlbq_env["M1"], nlbq_env["psi_plus2p"], nlbq_env["lambda2"]
    plus = _nlbq_lax_plus(reflect(M), reflect(psi), lam)  # M not negated
    minus = _nlbq_lax_minus(M, psi, lam)
    comps = [plus[0] + [-reflect(t) for t in minus[0]], plus[1] + [reflect(t) for t in minus[1]]]
    assert worst_components(comps) >= 1e-3


def test_symmetry_holds_for_arbitrary_fields():
    b = Bindings(M=parse_field("x*t + exp(0.3*x)"), psi=parse_field("exp(0.7*x + 0.3*t)*(x + 2)"), lam=1.3)
    assert scan_grid(E.NLBQ_SYMMETRY, b).max_relative_residual <= 1e-10


def test_printed_nlbq_variant_of_kaup_equation_fails(nlbq_env):
    """With ``m_t m_xx`` in place of ``m_t m_tx`` the single equation is nonzero on solutions."""
    m = nlbq_env["m"]
    mx, mxx, mt = d(m, 1, 0), d(m, 2, 0), d(m, 0, 1)
    comps = [
        [
            mx * mx * d(m, 0, 2),
            -(mx * mx * d(m, 4, 0)),
            const(-4) * mx * mx * mx * mxx,
            const(-2) * mx * mt * mxx,
            const(2) * mx * mxx * d(m, 3, 0),
            mxx * mt * mt,
            -(mxx * mxx * mxx),
        ]
    ]
    assert worst_components(comps) >= 1e-3
    assert scan_grid(E.KAUP_NLBQ_M, Bindings(m=m)).max_relative_residual <= 1e-8


# ----------------------------------------------------------------------------
# reports


def test_entry_expectations():
    held = ResidualEntry(E.AKNS_PDE, 1e-10, None, 4, 0)
    assert held.passed() and not held.passed(1e-12)
    viol = ResidualEntry(E.AKNS_PDE, 1e-2, None, 4, 0, expect="violated", tolerance=1e-3)
    assert viol.passed()
    assert not ResidualEntry("X", math.nan, None, 0, 0).passed()
    assert not ResidualEntry("X", math.inf, None, 0, 0, expect="violated").passed()


def test_report_serialization():
    b = Bindings(f=exp(X), g=exp(X))
    rep = ResidualReport([scan_grid(E.FIELD_MATCH, b, label="same")], name="demo")
    d_ = json.loads(rep.to_json())
    assert d_["pass"] is True
    assert d_["entries"][0]["equation"] == "FIELD_MATCH"
    assert d_["entries"][0]["points_evaluated"] == 400
    assert rep.lines()[0].startswith("PASS same [FIELD_MATCH] max=")
    assert rep.max_relative_residual == d_["entries"][0]["max_relative_residual"]
    assert rep.failures() == []


def test_report_is_deterministic():
    b = Bindings(f=parse_field("x*y"), g=parse_field("x*y + 1e-9"))
    r1 = ResidualReport([scan_grid(E.FIELD_MATCH, b)]).to_json()
    r2 = ResidualReport([scan_grid(E.FIELD_MATCH, b)]).to_json()
    assert r1 == r2
