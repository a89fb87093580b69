import pytest

from darbouxkit.darboux import (
    DarbouxPairAKNS,
    DarbouxPairNLBQ,
    darboux_eigen_akns,
    darboux_eigen_nlbq,
    darboux_manifold_akns,
    iterate_akns,
    iterate_nlbq,
    omega_akns,
    omega_pm_nlbq,
    tau_akns,
    tau_nlbq,
)
from darbouxkit.errors import DegeneratePairError, MissingManifoldError, NotAnEigenfunctionError
from darbouxkit.fields import dx, value
from darbouxkit.residuals import Bindings, EquationId, scan_grid
from darbouxkit.solitons import EigenData, akns_eigen, akns_seed, nlbq_eigen, nlbq_seed, nlbq_seed_partner

A0 = 0.5


def worst(eq, **kw):
    return scan_grid(eq, Bindings(**kw)).max_relative_residual


@pytest.fixture
def akns_pair():
    return DarbouxPairAKNS(akns_eigen(1.0, A0), akns_eigen(2.0, A0), akns_seed(A0))


@pytest.fixture
def nlbq_pair():
    return DarbouxPairNLBQ(nlbq_eigen(2.0, 1.0), nlbq_eigen(3.0, 1.0), nlbq_seed(1.0))


def test_omega_derivative_is_eigen_product(akns_pair):
    om = omega_akns(akns_pair)
    b = Bindings(f=dx(om), g=akns_pair.e1.psi * akns_pair.e2.psi)
    assert scan_grid(EquationId.FIELD_MATCH, b).max_relative_residual <= 1e-13


def test_transformed_eigen_frozen_value(akns_pair):
    # psi1 = phi1 = 1 and Omega = 1/3 at the origin
    e = darboux_eigen_akns(akns_pair)
    assert value(e.psi, (0.0, 0.0)) == pytest.approx(2 / 3, rel=1e-15)
    assert value(omega_akns(akns_pair), (0.0, 0.0)) == pytest.approx(1 / 3, rel=1e-15)


def test_akns_covariance(akns_pair):
    M1 = iterate_akns(akns_pair.potential, akns_pair.e1.manifold)
    e = darboux_eigen_akns(akns_pair)
    assert worst(EquationId.AKNS_LAX_X, M=M1, psi=e.psi, lam=e.lam) <= 1e-8
    assert worst(EquationId.AKNS_LAX_Y, M=M1, psi=e.psi, lam=e.lam) <= 1e-8
    assert worst(EquationId.AKNS_MANIFOLD, phi=e.manifold, psi=e.psi) <= 1e-9


def test_printed_eigen_variant_is_not_covariant(akns_pair):
    """``psi2 - Omega`` (without the ``psi1/phi1`` factor) fails the new Lax pair."""
    M1 = iterate_akns(akns_pair.potential, akns_pair.e1.manifold)
    variant = akns_pair.e2.psi - omega_akns(akns_pair)
    assert worst(EquationId.AKNS_LAX_X, M=M1, psi=variant, lam=akns_pair.e2.lam) >= 1e-3


def test_tau_factorizes(akns_pair):
    tau = tau_akns(akns_pair)
    fac = darboux_manifold_akns(akns_pair) * akns_pair.e1.manifold
    assert worst(EquationId.FIELD_MATCH, f=tau, g=fac) <= 1e-12


def test_equal_spectral_parameters_rejected():
    e = akns_eigen(1.0, A0)
    with pytest.raises(DegeneratePairError):
        DarbouxPairAKNS(e, akns_eigen(-1.0, A0), akns_seed(A0))


def test_non_eigenfunction_rejected():
    e1 = akns_eigen(1.0, A0)
    bad = EigenData(psi=akns_eigen(2.0, A0).psi, lam=-3.0, manifold=None)
    with pytest.raises(NotAnEigenfunctionError, match="AKNS_LAX_X"):
        DarbouxPairAKNS(e1, bad, akns_seed(A0))
    # skipping validation builds the pair anyway
    DarbouxPairAKNS(e1, bad, akns_seed(A0), validate=False)


def test_wrong_manifold_rejected():
    e2 = akns_eigen(2.0, A0)
    bad = EigenData(psi=e2.psi, lam=e2.lam, manifold=2 * e2.manifold)
    with pytest.raises(NotAnEigenfunctionError, match="manifold"):
        DarbouxPairAKNS(akns_eigen(1.0, A0), bad, akns_seed(A0))


def test_missing_manifold():
    e1 = akns_eigen(1.0, A0)
    p = DarbouxPairAKNS(EigenData(e1.psi, e1.lam), akns_eigen(2.0, A0), akns_seed(A0))
    with pytest.raises(MissingManifoldError):
        darboux_eigen_akns(p)
    with pytest.raises(MissingManifoldError):
        tau_akns(p)


def test_three_soliton_by_iterating_non_seed_eigenfunctions():
    seed = akns_seed(A0)
    e1, e2, e3 = (akns_eigen(k, A0, x0) for k, x0 in ((1.0, -1.0), (1.6, 0.0), (2.2, 1.0)))
    M1 = iterate_akns(seed, e1.manifold)
    e2p = darboux_eigen_akns(DarbouxPairAKNS(e1, e2, seed))
    e3p = darboux_eigen_akns(DarbouxPairAKNS(e1, e3, seed))
    pair = DarbouxPairAKNS(e2p, e3p, M1)
    M3 = iterate_akns(M1, tau_akns(pair))
    assert worst(EquationId.AKNS_PDE, M=M3) <= 1e-8
    e3pp = darboux_eigen_akns(pair)
    M2 = iterate_akns(M1, e2p.manifold)
    assert worst(EquationId.AKNS_LAX_X, M=M2, psi=e3pp.psi, lam=e3pp.lam) <= 1e-8


def test_nlbq_covariance_and_tau(nlbq_pair):
    M1, N1 = iterate_nlbq(nlbq_pair.potential, nlbq_seed_partner(1.0), nlbq_pair.e1.manifold)
    e = darboux_eigen_nlbq(nlbq_pair)
    assert worst(EquationId.NLBQ_LAX_PLUS, M=M1, psi_plus=e.psi, lam=e.lam) <= 1e-8
    assert worst(EquationId.NLBQ_LAX_MINUS, M=M1, psi_minus=e.psi_minus, lam=e.lam) <= 1e-8
    M2, N2 = iterate_nlbq(nlbq_pair.potential, nlbq_seed_partner(1.0), tau_nlbq(nlbq_pair))
    assert worst(EquationId.NLBQ_SYS, M=M2, N=N2) <= 1e-8
    assert worst(EquationId.NLBQ_SYS, M=M1, N=N1) <= 1e-8


def test_nlbq_omegas_match_seed_closed_form(nlbq_pair):
    op, om = omega_pm_nlbq(nlbq_pair)
    e1, e2 = nlbq_pair.e1, nlbq_pair.e2
    assert worst(EquationId.FIELD_MATCH, f=op, g=(3 / 5) * e1.psi_minus * e2.psi) <= 1e-10
    assert worst(EquationId.FIELD_MATCH, f=om, g=(2 / 5) * e1.psi * e2.psi_minus) <= 1e-10


def test_nlbq_equal_lambda_rejected():
    # a and a0/a give the same lambda
    with pytest.raises(DegeneratePairError):
        DarbouxPairNLBQ(nlbq_eigen(2.0, 1.0), nlbq_eigen(0.5, 1.0), nlbq_seed(1.0))


def test_nlbq_pair_needs_minus_branch():
    e = nlbq_eigen(2.0, 1.0)
    with pytest.raises(ValueError, match="minus"):
        DarbouxPairNLBQ(EigenData(e.psi, e.lam, e.manifold), nlbq_eigen(3.0, 1.0), nlbq_seed(1.0))


def test_nlbq_non_eigenfunction_rejected():
    e1, e2 = nlbq_eigen(2.0, 1.0), nlbq_eigen(3.0, 1.0)
    bad = EigenData(e2.psi, e2.lam + 0.2, None, e2.psi_minus)
    with pytest.raises(NotAnEigenfunctionError):
        DarbouxPairNLBQ(e1, bad, nlbq_seed(1.0))
