"""Verification scenarios: a construction pipeline plus a list of checks.

A scenario file is YAML with these top-level keys::

    name: akns-two-soliton-full
    family: akns                 # akns | nlbq
    seed: {a0: 0.5}
    modes:                       # k for AKNS, a for NLBq; x0 defaults to 0
      - {k: 1.0, x0: 0.0}
      - {k: 2.0}
    chain: [darboux]             # subset of darboux, backlund, miura (in that order)
    coupling: {a: 1.5, a_hat: 0.7}   # miura only; sinh-Gordon derives a_hat itself
    grid: {box: [-3, 3, -3, 3], n: [20, 20], pole_guard: 1.0e-9}
    tolerance: 1.0e-8
    equations:
      - AKNS_PDE                 # default bindings
      - equation: FIELD_MATCH
        label: closed form vs Darboux
        bind: {f: M2_closed, g: M2}
        points: {random: 50, seed: 7}
        tolerance: 1.0e-9
      - equation: AKNS_LAX_X
        perturb: {lambda: 0.1}   # added to scalar bindings
        expect: violated         # pass iff residual >= tolerance
        tolerance: 1.0e-3

Binding values name fields built by the pipeline (see :func:`build_fields`),
or are numbers, or are field expressions in the text grammar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Mapping

import numpy as np
import yaml

from . import darboux as dbx
from . import miura as mra
from . import solitons as sol
from .errors import DarbouxKitError, FieldSyntaxError, ScenarioError
from .fields import FieldExpr, const, parse_field, sample_points
from .residuals import (
    DEFAULT_BOX,
    DEFAULT_GRID,
    DEFAULT_POLE_GUARD,
    DEFAULT_TOLERANCE,
    Bindings,
    EquationId,
    ResidualEntry,
    ResidualReport,
    grid,
    scan_points,
)

CHAIN_STAGES = ("darboux", "backlund", "miura")

# role -> pipeline field, where the default differs from the role name
_E = EquationId
_DEFAULT_BIND: dict[EquationId, dict[str, str]] = {
    _E.AKNS_PDE: {"M": "M_top"},
    _E.AKNS_INTEGRATED: {"M": "M_top"},
    _E.AKNS_LAX_X: {"M": "M1", "psi": "psi2p", "lambda": "lambda2"},
    _E.AKNS_LAX_Y: {"M": "M1", "psi": "psi2p", "lambda": "lambda2"},
    _E.AKNS_MANIFOLD: {"phi": "phi2p", "psi": "psi2p"},
    _E.NLBQ_SYS: {"M": "M_top", "N": "N_top"},
    _E.NLBQ_SINGLE: {"M": "M_top"},
    _E.NLBQ_LAX_PLUS: {"M": "M1", "psi_plus": "psi_plus2p", "lambda": "lambda2"},
    _E.NLBQ_LAX_MINUS: {"M": "M1", "psi_minus": "psi_minus2p", "lambda": "lambda2"},
    _E.NLBQ_MANIFOLD: {"phi": "phi2p", "psi_plus": "psi_plus2p", "psi_minus": "psi_minus2p"},
    _E.NLBQ_SYMMETRY: {"M": "M_top", "psi": "psi_plus1", "lambda": "lambda1"},
    _E.APPD_IDENTITY: {"M": "m"},
    _E.SHG_LAX_HAT: {},
}
for _eq in (
    _E.AKNS_TRUNC_MX,
    _E.AKNS_TRUNC_MY,
    _E.AKNS_SM_S,
    _E.AKNS_SM_COMPAT,
    _E.AKNS_SM_IS_AKNS,
    _E.NLBQ_TRUNC_MX,
    _E.NLBQ_TRUNC_MT,
    _E.NLBQ_SM_1,
    _E.NLBQ_SM_2,
):
    _DEFAULT_BIND[_eq] = {"M": "M0", "phi": "phi1", "lambda": "lambda1"}


@dataclass
class Sampling:
    """Either a regular grid or ``random`` pseudo-random points."""

    box: tuple[float, float, float, float] = DEFAULT_BOX
    n: tuple[int, int] = DEFAULT_GRID
    random: int | None = None
    seed: int = 12345
    pole_guard: float = DEFAULT_POLE_GUARD

    def points(self):
        if self.random is not None:
            return sample_points(self.random, self.box, self.seed)
        return grid(self.box, *self.n)


@dataclass
class Check:
    equation: EquationId
    bind: dict[str, Any] = field(default_factory=dict)
    label: str = ""
    tolerance: float | None = None
    expect: str = "holds"
    perturb: dict[str, float] = field(default_factory=dict)
    sampling: Sampling | None = None


@dataclass
class VerificationScenario:
    name: str
    family: sol.Family
    a0: float
    modes: tuple[sol.Mode, ...]
    chain: tuple[str, ...] = ()
    checks: list[Check] = field(default_factory=list)
    sampling: Sampling = field(default_factory=Sampling)
    tolerance: float = DEFAULT_TOLERANCE
    coupling: dict[str, float] = field(default_factory=dict)
    description: str = ""

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ScenarioError("tolerance must be positive")
        bad = [s for s in self.chain if s not in CHAIN_STAGES]
        if bad:
            raise ScenarioError(f"unknown chain stage(s) {bad}; allowed {CHAIN_STAGES}")
        if "miura" in self.chain and not {"darboux", "backlund"} <= set(self.chain):
            raise ScenarioError("the miura stage needs the darboux and backlund stages before it")
        if "darboux" in self.chain and len(self.modes) < 2:
            raise ScenarioError("the darboux stage needs two modes")


# ----------------------------------------------------------------------------
# pipeline


def build_fields(sc: VerificationScenario) -> dict[str, FieldExpr | float]:
    """Construct every named field of the pipeline, stage by stage."""
    env: dict[str, FieldExpr | float] = {"a0": sc.a0}
    stage = "seed"
    try:
        akns = sc.family is sol.Family.AKNS
        a0 = sc.a0
        env["M0"] = sol.akns_seed(a0) if akns else sol.nlbq_seed(a0)
        if not akns:
            env["N0"] = sol.nlbq_seed_partner(a0)
        eig = []
        for i, mode in enumerate(sc.modes, 1):
            stage = f"eigenfunction {i}"
            e = sol.akns_eigen(mode.k, a0, mode.x0) if akns else sol.nlbq_eigen(mode.k, a0, mode.x0)
            eig.append(e)
            env[f"psi{i}"] = e.psi
            env[f"lambda{i}"] = e.lam
            env[f"phi{i}"] = e.manifold
            if not akns:
                env[f"psi_plus{i}"] = e.psi
                env[f"psi_minus{i}"] = e.psi_minus
        if sc.modes:
            stage = "first iteration"
            if akns:
                env["M1"] = dbx.iterate_akns(env["M0"], eig[0].manifold)
                env["M1_closed"] = sol.akns_soliton(sol.SolitonSpec(sc.family, a0, sc.modes[:1]))
            else:
                env["M1"], env["N1"] = dbx.iterate_nlbq(env["M0"], env["N0"], eig[0].manifold)
                one = sol.SolitonSpec(sc.family, a0, sc.modes[:1])
                env["M1_closed"] = sol.nlbq_soliton(one)
                env["N1_closed"] = sol.nlbq_soliton_partner(one)
            env["M_top"] = env["M1"]
            env["N_top"] = env.get("N1")
        if "darboux" in sc.chain:
            stage = "darboux"
            two = sol.SolitonSpec(sc.family, a0, sc.modes[:2])
            if akns:
                pair = dbx.DarbouxPairAKNS(eig[0], eig[1], env["M0"])
                env["omega"] = dbx.omega_akns(pair)
                e2p = dbx.darboux_eigen_akns(pair)
                env["psi2p"] = e2p.psi
                env["tau"] = dbx.tau_akns(pair)
                env["tau_closed"] = sol.akns_tau(two)
                env["tau_seed"] = sol.akns_tau_seed(two)
                env["M2"] = dbx.iterate_akns(env["M0"], env["tau"])
                env["M2_closed"] = sol.akns_soliton(two)
                env["M2_iter"] = dbx.iterate_akns(env["M1"], e2p.manifold)
            else:
                pair = dbx.DarbouxPairNLBQ(eig[0], eig[1], env["M0"])
                env["omega_plus"], env["omega_minus"] = dbx.omega_pm_nlbq(pair)
                e2p = dbx.darboux_eigen_nlbq(pair)
                env["psi2p"] = env["psi_plus2p"] = e2p.psi
                env["psi_minus2p"] = e2p.psi_minus
                env["tau"] = dbx.tau_nlbq(pair)
                env["tau_closed"] = sol.nlbq_tau(two)
                env["tau_seed"] = sol.nlbq_tau_seed(two)
                env["M2"], env["N2"] = dbx.iterate_nlbq(env["M0"], env["N0"], env["tau"])
                env["M2_closed"] = sol.nlbq_soliton(two)
                env["N2_closed"] = sol.nlbq_soliton_partner(two)
                env["M2_iter"], env["N2_iter"] = dbx.iterate_nlbq(env["M1"], env["N1"], e2p.manifold)
                env["N_top"] = env["N2"]
            env["phi2p"] = e2p.manifold
            env["tau_factor"] = e2p.manifold * eig[0].manifold
            env["M_top"] = env["M2"]
        if "backlund" in sc.chain:
            stage = "backlund"
            env["m"] = env["M1"]
            env["m_hat"] = (mra.backlund_partner_akns if akns else mra.backlund_partner_nlbq)(env["m"])
        if "miura" in sc.chain:
            stage = "miura"
            if akns:
                pr = mra.shg_from_pair(env["m"], env["m_hat"])
            else:
                pr = mra.kaup_from_pair(env["m"], env["m_hat"])
            env["u"], env["eta"] = pr.u, pr.eta
            lam = env["lambda2"]
            env["lambda"] = lam
            env["phi"] = env["phi2p"]
            if "a" not in sc.coupling:
                raise ScenarioError("the miura stage needs coupling.a")
            a = float(sc.coupling["a"])
            if akns:
                ce = mra.shg_coupled_eigen(env["psi2p"], pr.u, a, lam, m=pr.m)
                env.update(psi=ce.psi, psi_hat=ce.psi_hat, a=ce.a, a_hat=ce.a_hat)
                env["phi_hat"] = mra.shg_hat_manifold(env["phi"], ce)
            else:
                if "a_hat" not in sc.coupling:
                    raise ScenarioError("the Kaup miura stage needs coupling.a_hat")
                ah = float(sc.coupling["a_hat"])
                mi = mra.kaup_coupled_eigen_minus(env["psi_minus2p"], pr.u, pr.eta, a, lam, m=pr.m)
                pl = mra.kaup_coupled_eigen_plus(env["psi_plus2p"], pr.u, pr.eta, ah, lam, m=pr.m)
                env.update(
                    psi_plus=pl.psi,
                    psi_minus=mi.psi,
                    psi_hat_plus=pl.psi_hat,
                    psi_hat_minus=mi.psi_hat,
                    a=a,
                    a_hat=ah,
                )
                env["phi_hat"] = mra.kaup_hat_manifold(env["phi"], mi, pl)
    except ScenarioError:
        raise
    except DarbouxKitError as exc:
        raise ScenarioError(f"{sc.name}: pipeline stage {stage!r} failed: {exc}") from exc
    return env


def _resolve(value, env, role: str, sc_name: str):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, FieldExpr):
        return value
    if isinstance(value, str):
        if value in env:
            if env[value] is None:
                raise ScenarioError(f"{sc_name}: field {value!r} is not available in this pipeline")
            return env[value]
        try:
            return parse_field(value)
        except FieldSyntaxError as exc:
            raise ScenarioError(
                f"{sc_name}: binding {role}={value!r} is neither a pipeline field nor a valid expression ({exc})"
            ) from None
    raise ScenarioError(f"{sc_name}: cannot bind {role} to {value!r}")


def check_bindings(check: Check, env: Mapping, sc_name: str = "") -> Bindings:
    eq = check.equation
    defaults = _DEFAULT_BIND.get(eq, {})
    out = {}
    for role in eq.roles:
        if role in check.bind:
            src = check.bind[role]
        else:
            src = defaults.get(role, role)
            if src not in env or env[src] is None:
                raise ScenarioError(
                    f"{sc_name}: {eq.name} needs {role!r}; pipeline has no field {src!r} "
                    f"(add a chain stage or a bind entry)"
                )
        out[role] = _resolve(src, env, role, sc_name)
    for role, delta in check.perturb.items():
        if role not in out or isinstance(out[role], FieldExpr):
            raise ScenarioError(f"{sc_name}: can only perturb bound scalar parameters, not {role!r}")
        out[role] = out[role] + float(delta)
    return Bindings(out)


def run_suite(sc: VerificationScenario) -> ResidualReport:
    """Build the pipeline, evaluate every check, aggregate into one report."""
    env = build_fields(sc)
    report = ResidualReport([], sc.tolerance, name=sc.name)
    for check in sc.checks:
        b = check_bindings(check, env, sc.name)
        smp = check.sampling or sc.sampling
        A, B = smp.points()
        try:
            entry = scan_points(
                check.equation,
                b,
                A,
                B,
                pole_guard=smp.pole_guard,
                label=check.label,
                tolerance=check.tolerance,
                expect=check.expect,
            )
        except DarbouxKitError as exc:
            raise ScenarioError(f"{sc.name}: check {check.label or check.equation.name} failed: {exc}") from exc
        report.entries.append(entry)
    return report


# ----------------------------------------------------------------------------
# YAML loading


def _sampling(d: Mapping | None, base: Sampling | None = None) -> Sampling:
    base = base or Sampling()
    if d is None:
        return base
    if not isinstance(d, Mapping):
        raise ScenarioError("grid/points must be a mapping")
    unknown = set(d) - {"box", "n", "random", "seed", "pole_guard"}
    if unknown:
        raise ScenarioError(f"unknown sampling keys {sorted(unknown)}")
    box = tuple(float(v) for v in d.get("box", base.box))
    n = d.get("n", base.n)
    n = (int(n), int(n)) if isinstance(n, (int, float)) else tuple(int(v) for v in n)
    if len(box) != 4 or len(n) != 2:
        raise ScenarioError("box needs 4 numbers and n needs 2 integers")
    return Sampling(
        box=box,
        n=n,
        random=d.get("random", None if "n" in d else base.random),
        seed=int(d.get("seed", base.seed)),
        pole_guard=float(d.get("pole_guard", base.pole_guard)),
    )


def _check(item, sc_name: str, base: Sampling) -> Check:
    try:
        if isinstance(item, str):
            return Check(EquationId.parse(item))
        if not isinstance(item, Mapping) or "equation" not in item:
            raise ScenarioError(f"{sc_name}: each equation entry is an id or a mapping with 'equation'")
        unknown = set(item) - {"equation", "bind", "label", "tolerance", "expect", "perturb", "points"}
        if unknown:
            raise ScenarioError(f"{sc_name}: unknown equation keys {sorted(unknown)}")
        expect = item.get("expect", "holds")
        if expect not in ("holds", "violated"):
            raise ScenarioError(f"{sc_name}: expect must be 'holds' or 'violated'")
        bind = dict(item.get("bind") or {})
        if "lam" in bind:
            bind["lambda"] = bind.pop("lam")
        return Check(
            equation=EquationId.parse(item["equation"]),
            bind=bind,
            label=str(item.get("label", "")),
            tolerance=None if item.get("tolerance") is None else float(item["tolerance"]),
            expect=expect,
            perturb={k: float(v) for k, v in (item.get("perturb") or {}).items()},
            sampling=_sampling(item["points"], base) if "points" in item else None,
        )
    except ValueError as exc:
        raise ScenarioError(f"{sc_name}: {exc}") from None


def scenario_from_dict(d: Mapping) -> VerificationScenario:
    if not isinstance(d, Mapping):
        raise ScenarioError("scenario must be a mapping")
    unknown = set(d) - {"name", "family", "seed", "modes", "chain", "coupling", "equations", "grid", "tolerance", "description"}
    if unknown:
        raise ScenarioError(f"unknown scenario keys {sorted(unknown)}")
    name = str(d.get("name", "unnamed"))
    try:
        family = sol.Family(str(d["family"]).lower())
    except KeyError:
        raise ScenarioError(f"{name}: missing 'family'") from None
    except ValueError:
        raise ScenarioError(f"{name}: family must be 'akns' or 'nlbq'") from None
    seed = d.get("seed") or {}
    a0 = float(seed.get("a0", 0.0)) if isinstance(seed, Mapping) else float(seed)
    modes = []
    for m in d.get("modes") or []:
        if not isinstance(m, Mapping):
            raise ScenarioError(f"{name}: each mode is a mapping with k (or a) and optional x0")
        k = m.get("k", m.get("a"))
        if k is None:
            raise ScenarioError(f"{name}: mode without k")
        modes.append(sol.Mode(float(k), float(m.get("x0", 0.0))))
    base = _sampling(d.get("grid"))
    chain = d.get("chain") or []
    if isinstance(chain, str):
        chain = [chain]
    return VerificationScenario(
        name=name,
        family=family,
        a0=a0,
        modes=tuple(modes),
        chain=tuple(str(s).lower() for s in chain),
        checks=[_check(item, name, base) for item in d.get("equations") or []],
        sampling=base,
        tolerance=float(d.get("tolerance", DEFAULT_TOLERANCE)),
        coupling={k: float(v) for k, v in (d.get("coupling") or {}).items()},
        description=str(d.get("description", "")),
    )


def load_scenario(path: str | Path) -> VerificationScenario:
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"{path}: not valid YAML: {exc}") from None
    return scenario_from_dict(data)


# ----------------------------------------------------------------------------
# built-in scenarios

_AKNS_1 = """
name: akns-one-soliton
description: AKNS one-soliton solves the AKNS equation on the default grid
family: akns
seed: {a0: 0.5}
modes: [{k: 1.0, x0: 0.0}]
equations:
  - {equation: AKNS_PDE, label: one-soliton, bind: {M: M1_closed}}
  - {equation: FIELD_MATCH, label: closed form vs iteration, bind: {f: M1_closed, g: M1}, tolerance: 1.0e-9}
"""

_AKNS_2 = """
name: akns-two-soliton-full
description: AKNS two-soliton, closed form vs Darboux, covariance, tau and manifold equations
family: akns
seed: {a0: 0.5}
modes: [{k: 1.0, x0: 0.0}, {k: 2.0, x0: 0.0}]
chain: [darboux]
equations:
  - {equation: AKNS_PDE, label: two-soliton, bind: {M: M2_closed}}
  - {equation: FIELD_MATCH, label: closed form vs Darboux, bind: {f: M2_closed, g: M2},
     points: {random: 50, seed: 7}, tolerance: 1.0e-9}
  - {equation: FIELD_MATCH, label: iterated twice vs tau, bind: {f: M2_iter, g: M2}, tolerance: 1.0e-9}
  - {equation: AKNS_LAX_X, label: covariance}
  - {equation: AKNS_LAX_Y, label: covariance}
  - {equation: FIELD_MATCH, label: tau vs seed closed form, bind: {f: tau, g: tau_seed}, tolerance: 1.0e-10}
  - {equation: AKNS_SM_S, label: seed manifold}
  - {equation: AKNS_SM_COMPAT, label: seed manifold}
"""

_AKNS_COV = """
name: akns-darboux-covariance
description: transformed eigenfunction solves the transformed Lax pair; perturbed lambda does not
family: akns
seed: {a0: 0.5}
modes: [{k: 1.0, x0: 0.0}, {k: 2.0, x0: 0.0}]
chain: [darboux]
equations:
  - {equation: AKNS_LAX_X, label: covariance}
  - {equation: AKNS_LAX_Y, label: covariance}
  - {equation: AKNS_MANIFOLD, label: iterated manifold, tolerance: 1.0e-9}
  - {equation: AKNS_LAX_X, label: negative control lambda+0.1, perturb: {lambda: 0.1},
     expect: violated, tolerance: 1.0e-3}
  - {equation: AKNS_LAX_Y, label: negative control lambda+0.1, perturb: {lambda: 0.1},
     expect: violated, tolerance: 1.0e-3}
"""

_AKNS_TAU = """
name: akns-tau-consistency
description: generic tau equals the seed closed form and factorizes as phi2' phi1
family: akns
seed: {a0: 0.5}
modes: [{k: 1.0, x0: 0.0}, {k: 2.0, x0: 0.0}]
chain: [darboux]
equations:
  - {equation: FIELD_MATCH, label: tau vs seed closed form, bind: {f: tau, g: tau_seed}, tolerance: 1.0e-10}
  - {equation: FIELD_MATCH, label: tau vs Hirota form, bind: {f: tau, g: tau_closed}, tolerance: 1.0e-10}
  - {equation: FIELD_MATCH, label: factorization, bind: {f: tau, g: tau_factor},
     points: {random: 100, seed: 11}, tolerance: 1.0e-12}
"""

_AKNS_SM = """
name: akns-singular-manifold
description: seed manifolds solve the singular-manifold equations; derived p solves AKNS
family: akns
seed: {a0: 0.5}
modes: [{k: 1.0, x0: 0.0}, {k: 2.0, x0: 0.0}]
chain: [darboux]
equations:
  - {equation: AKNS_SM_S, label: phi1, tolerance: 1.0e-9}
  - {equation: AKNS_SM_COMPAT, label: phi1, tolerance: 1.0e-9}
  - {equation: AKNS_SM_S, label: phi2, bind: {phi: phi2, lambda: lambda2}, tolerance: 1.0e-9}
  - {equation: AKNS_SM_COMPAT, label: phi2, bind: {phi: phi2}, tolerance: 1.0e-9}
  - {equation: AKNS_SM_IS_AKNS, label: p from phi1}
  - {equation: AKNS_SM_IS_AKNS, label: p from phi2, bind: {phi: phi2, lambda: lambda2}}
  - {equation: AKNS_TRUNC_MX, label: seed truncation}
  - {equation: AKNS_TRUNC_MY, label: seed truncation}
  - {equation: AKNS_TRUNC_MX, label: iterated truncation, bind: {M: M1, phi: phi2p, lambda: lambda2}}
  - {equation: AKNS_TRUNC_MY, label: iterated truncation, bind: {M: M1, phi: phi2p, lambda: lambda2}}
  - {equation: AKNS_SM_S, label: iterated manifold, bind: {phi: phi2p, lambda: lambda2}}
"""

_NLBQ = """
name: nlbq-mirror
description: NLBq one- and two-soliton, Darboux covariance, tau consistency, discrete symmetry
family: nlbq
seed: {a0: 1.0}
modes: [{a: 2.0, x0: 0.0}, {a: 3.0, x0: 0.0}]
chain: [darboux]
equations:
  - {equation: NLBQ_SINGLE, label: one-soliton, bind: {M: M1_closed}}
  - {equation: NLBQ_SYS, label: one-soliton, bind: {M: M1_closed, N: N1_closed}}
  - {equation: NLBQ_SINGLE, label: two-soliton, bind: {M: M2_closed}}
  - {equation: NLBQ_SYS, label: two-soliton, bind: {M: M2_closed, N: N2_closed}}
  - {equation: FIELD_MATCH, label: closed form vs Darboux, bind: {f: M2_closed, g: M2},
     points: {random: 50, seed: 7}, tolerance: 1.0e-9}
  - {equation: FIELD_MATCH, label: iterated twice vs tau, bind: {f: M2_iter, g: M2}, tolerance: 1.0e-9}
  - {equation: NLBQ_LAX_PLUS, label: covariance}
  - {equation: NLBQ_LAX_MINUS, label: covariance}
  - {equation: NLBQ_MANIFOLD, label: iterated manifold, tolerance: 1.0e-9}
  - {equation: NLBQ_LAX_PLUS, label: negative control lambda+0.1, perturb: {lambda: 0.1},
     expect: violated, tolerance: 1.0e-3}
  - {equation: NLBQ_LAX_MINUS, label: negative control lambda+0.1, perturb: {lambda: 0.1},
     expect: violated, tolerance: 1.0e-3}
  - {equation: FIELD_MATCH, label: tau vs seed closed form, bind: {f: tau, g: tau_seed}, tolerance: 1.0e-10}
  - {equation: FIELD_MATCH, label: tau vs Hirota form, bind: {f: tau, g: tau_closed}, tolerance: 1.0e-10}
  - {equation: FIELD_MATCH, label: factorization, bind: {f: tau, g: tau_factor},
     points: {random: 100, seed: 11}, tolerance: 1.0e-12}
  - {equation: NLBQ_TRUNC_MX, label: seed truncation}
  - {equation: NLBQ_TRUNC_MT, label: seed truncation}
  - {equation: NLBQ_SM_1, label: seed manifold}
  - {equation: NLBQ_SM_2, label: seed manifold}
  - {equation: NLBQ_TRUNC_MX, label: iterated truncation, bind: {M: M1, phi: phi2p, lambda: lambda2}}
  - {equation: NLBQ_TRUNC_MT, label: iterated truncation, bind: {M: M1, phi: phi2p, lambda: lambda2}}
  - {equation: NLBQ_SYMMETRY, label: discrete symmetry, tolerance: 1.0e-10,
     bind: {M: M2, psi: "exp(0.7*x + 0.3*t)*(x + 2)", lambda: 1.3}}
  - {equation: NLBQ_SYMMETRY, label: discrete symmetry on eigenfunction, tolerance: 1.0e-10,
     bind: {M: M1, psi: psi_plus2p, lambda: lambda2}}
"""

_SHG = """
name: shg-from-akns-soliton
description: sinh-Gordon solution and Lax pair from the AKNS one-soliton and its Backlund partner
family: akns
seed: {a0: 0.5}
modes: [{k: 1.0, x0: 0.0}, {k: 2.0, x0: 0.0}]
chain: [darboux, backlund, miura]
coupling: {a: 1.5}
equations:
  - {equation: AKNS_PDE, label: partner solves AKNS, bind: {M: m_hat}}
  - {equation: AKNS_INTEGRATED, label: partner, bind: {M: m_hat}}
  - SHG_MM
  - SHG_BT
  - {equation: SHG_BT_PRODUCT, tolerance: 1.0e-9}
  - SHG_SYS_1
  - SHG_SYS_2
  - {equation: SHG_MIURA, tolerance: 1.0e-9}
  - SHG_FIRST_ORDER
  - SHG_LAX_HAT
  - SHG_Y_PAIR
  - SHG_MATRIX
  - SHG_COUPLING
  - SHG_COUPLING_DX
  - SHG_COUPLING_INT
"""

_KAUP = """
name: kaup-from-nlbq-soliton
description: Kaup solution and two-component Lax pairs from the NLBq one-soliton
family: nlbq
seed: {a0: 1.0}
modes: [{a: 2.0, x0: 0.0}, {a: 3.0, x0: 0.0}]
chain: [darboux, backlund, miura]
coupling: {a: 1.5, a_hat: 0.7142857142857143}
equations:
  - {equation: KAUP_NLBQ_MHAT, label: partner solves NLBq}
  - KAUP_NLBQ_M
  - KAUP_MM
  - KAUP_BT
  - KAUP_SYS_1
  - KAUP_SYS_2
  - {equation: KAUP_MIURA_DX, tolerance: 1.0e-9}
  - KAUP_FIRST_ORDER
  - KAUP_MATRIX_X
  - KAUP_MATRIX_T
  - {equation: APPD_IDENTITY, tolerance: 1.0e-10}
  - {equation: APPD_IDENTITY, label: seed eigenfunctions, bind: {M: M0, psi_plus: psi_plus1, psi_minus: psi_minus1},
     tolerance: 1.0e-10}
  - KAUP_COUPLING
  - KAUP_COUPLING_DX
"""

_NEG = """
name: negative-control-lambda
description: deliberately corrupted spectral parameter; expected to FAIL
family: akns
seed: {a0: 0.5}
modes: [{k: 1.0, x0: 0.0}, {k: 2.0, x0: 0.0}]
chain: [darboux]
equations:
  - {equation: AKNS_LAX_X, label: lambda+0.1, perturb: {lambda: 0.1}}
"""

BUILTIN_YAML: dict[str, str] = {}
for _text in (_AKNS_1, _AKNS_2, _AKNS_COV, _AKNS_TAU, _AKNS_SM, _NLBQ, _SHG, _KAUP, _NEG):
    BUILTIN_YAML[yaml.safe_load(_text)["name"]] = _text


def builtin_scenario(name: str) -> VerificationScenario:
    try:
        return scenario_from_dict(yaml.safe_load(BUILTIN_YAML[name]))
    except KeyError:
        raise ScenarioError(f"unknown builtin {name!r}; choose from {builtin_names()}") from None


# Criteria-ordered names; the last two are programmatic suites (see selfcheck).
ACCEPTANCE_BUILTINS = (
    "akns-one-soliton",
    "akns-two-soliton-full",
    "akns-darboux-covariance",
    "akns-tau-consistency",
    "akns-singular-manifold",
    "nlbq-mirror",
    "shg-from-akns-soliton",
    "kaup-from-nlbq-soliton",
    "figure-morphology",
    "kernel-soundness",
)


def builtin_names() -> list[str]:
    return list(ACCEPTANCE_BUILTINS) + ["negative-control-lambda"]


def run_builtin(name: str) -> ResidualReport:
    from . import selfcheck

    if name == "figure-morphology":
        return selfcheck.figure_morphology()
    if name == "kernel-soundness":
        return selfcheck.kernel_soundness()
    return run_suite(builtin_scenario(name))
