"""Soliton constructions (Darboux, tau-function, Backlund, Miura) for the AKNS,
NLBq, sinh-Gordon and Kaup systems, verified by exact residuals computed with
truncated Taylor jets."""

from .darboux import (
    DarbouxPairAKNS,
    DarbouxPairNLBQ,
    darboux_eigen_akns,
    darboux_eigen_nlbq,
    darboux_manifold_akns,
    darboux_manifold_nlbq,
    iterate_akns,
    iterate_nlbq,
    omega_akns,
    omega_pm_nlbq,
    tau_akns,
    tau_nlbq,
)
from .errors import *  # noqa: F401,F403
from .fields import T, X, Y, const, d, db, dx, evaluate, exp, parse_field, value
from .jets import Jet2
from .residuals import Bindings, EquationId, ResidualEntry, ResidualReport, scan_grid, scan_points
from .scenarios import VerificationScenario, load_scenario, run_builtin, run_suite
from .solitons import (
    EigenData,
    Family,
    Mode,
    SolitonSpec,
    akns_eigen,
    akns_seed,
    akns_soliton,
    make_spec,
    nlbq_eigen,
    nlbq_seed,
    nlbq_seed_partner,
    nlbq_soliton,
    nlbq_soliton_partner,
)

__version__ = "0.1.0"
