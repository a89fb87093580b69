"""Closed-form solitons: frozen values, validation and PDE residuals."""

import re

import pytest

from darbouxkit.errors import InvalidModeError, SingularSpecError
from darbouxkit.fields import dx, value
from darbouxkit.residuals import Bindings, EquationId, scan_grid
from darbouxkit.solitons import (
    Family,
    Mode,
    SolitonSpec,
    akns_eigen,
    akns_phase_factor,
    akns_soliton,
    akns_tau,
    akns_tau_seed,
    make_spec,
    nlbq_eigen,
    nlbq_phase_factor,
    nlbq_soliton,
    nlbq_soliton_partner,
    nlbq_tau,
    nlbq_tau_seed,
)

AKNS1 = make_spec("akns", 0.5, [(1.0, 0.0)])
AKNS2 = make_spec("akns", 0.5, [(1.0, 0.0), (2.0, 0.0)])
NLBQ1 = make_spec("nlbq", 1.0, [(2.0, 0.0)])
NLBQ2 = make_spec("nlbq", 1.0, [(2.0, 0.0), (3.0, 0.0)])

# frozen analytic values at the origin, where every F_i = 1
FROZEN = [
    (AKNS1, 1.0, 1.0),  # M = phi_x/phi = 1; M_x = k^2 at the crest
    (AKNS2, 15 / 7, None),  # (2 + 4 + 6/9) / (3 + 1/9)
    (NLBQ1, 0.75, 1.5625),  # kappa/2 with kappa = 1.5; M_x = a0 + kappa^2/4
]


@pytest.mark.parametrize("spec, m0, mx0", FROZEN)
def test_frozen_values_at_origin(spec, m0, mx0):
    M = akns_soliton(spec) if spec.family is Family.AKNS else nlbq_soliton(spec)
    assert value(M, (0.0, 0.0)) == pytest.approx(m0, rel=1e-14)
    if mx0 is not None:
        assert value(dx(M), (0.0, 0.0)) == pytest.approx(mx0, rel=1e-14)


def test_phase_factors():
    assert akns_phase_factor(1.0, 2.0) == pytest.approx(1 / 9)
    assert nlbq_phase_factor(2.0, 3.0, 1.0) == pytest.approx((1 / 5) ** 2)


def test_eigen_parameters():
    e = akns_eigen(2.0, 0.5)
    assert e.lam == -4.0
    n = nlbq_eigen(2.0, 1.0)
    assert n.lam == 2.5
    assert n.psi_plus is n.psi


@pytest.mark.parametrize(
    "family, a0, modes, message",
    [
        ("akns", 0.5, [(0.0, 0.0)], "k1 != 0"),
        ("akns", 0.5, [(1.0, 0.0), (-1.0, 0.0)], "k1 + k2 != 0"),
        ("akns", 0.5, [(1.0, 0.0), (1.0, 0.0)], "k1^2 != k2^2"),
        ("nlbq", 1.0, [(1.0, 0.0)], "a1^2 != a0"),
        ("nlbq", 4.0, [(1.0, 0.0), (4.0, 0.0)], "a1*a2 != a0"),
        ("nlbq", 1.0, [(0.0, 0.0)], "a1 != 0"),
        ("akns", 0.5, [], "count"),
    ],
)
def test_singular_specs_name_the_invariant(family, a0, modes, message):
    with pytest.raises(SingularSpecError, match=re.escape(message)):
        make_spec(family, a0, modes).validate()


def test_zero_mode_eigenfunction_rejected():
    with pytest.raises(InvalidModeError):
        akns_eigen(0.0, 0.5)
    with pytest.raises(InvalidModeError):
        nlbq_eigen(0.0, 1.0)
    with pytest.raises(SingularSpecError):
        nlbq_eigen(1.0, 1.0)


def test_family_mismatch():
    with pytest.raises(ValueError):
        akns_tau(NLBQ1)
    with pytest.raises(ValueError):
        nlbq_tau(AKNS1)


@pytest.mark.parametrize("spec", [AKNS1, AKNS2, make_spec("akns", -0.3, [(1.5, 0.4), (-0.7, -1.0)])])
def test_akns_solitons_solve_pde(spec):
    assert scan_grid(EquationId.AKNS_PDE, Bindings(M=akns_soliton(spec))).max_relative_residual <= 1e-8


@pytest.mark.parametrize("spec", [NLBQ1, NLBQ2, make_spec("nlbq", 0.5, [(1.5, 0.3), (2.5, -0.5)])])
def test_nlbq_solitons_solve_system(spec):
    b = Bindings(M=nlbq_soliton(spec), N=nlbq_soliton_partner(spec))
    assert scan_grid(EquationId.NLBQ_SYS, b).max_relative_residual <= 1e-8
    assert scan_grid(EquationId.NLBQ_SINGLE, b).max_relative_residual <= 1e-8


@pytest.mark.parametrize(
    "spec, tau, seed",
    [
        (make_spec("akns", 0.5, [(1.0, 0.3), (2.0, -0.4)]), akns_tau, akns_tau_seed),
        (make_spec("nlbq", 1.0, [(2.0, 0.3), (3.0, -0.4)]), nlbq_tau, nlbq_tau_seed),
    ],
)
def test_hirota_form_equals_seed_form_with_offsets(spec, tau, seed):
    b = Bindings(f=tau(spec), g=seed(spec))
    assert scan_grid(EquationId.FIELD_MATCH, b).max_relative_residual <= 1e-12


def test_offset_shifts_crest():
    spec = SolitonSpec(Family.AKNS, 0.5, (Mode(1.0, 1.25),))
    assert value(dx(akns_soliton(spec)), (1.25, 0.0)) == pytest.approx(1.0, rel=1e-14)
