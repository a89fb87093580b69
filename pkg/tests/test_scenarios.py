import textwrap

import pytest
import yaml

from darbouxkit.errors import ScenarioError
from darbouxkit.residuals import EquationId
from darbouxkit.scenarios import (
    ACCEPTANCE_BUILTINS,
    BUILTIN_YAML,
    Check,
    VerificationScenario,
    build_fields,
    builtin_names,
    builtin_scenario,
    check_bindings,
    load_scenario,
    run_builtin,
    run_suite,
    scenario_from_dict,
)
from darbouxkit.solitons import Family, Mode


def from_yaml(text):
    return scenario_from_dict(yaml.safe_load(textwrap.dedent(text)))


MINIMAL = """
name: tiny
family: akns
seed: {a0: 0.5}
modes: [{k: 1.0}]
grid: {box: [-2, 2, -1, 1], n: [6, 5]}
equations:
  - AKNS_PDE
  - {equation: AKNS_LAX_X, bind: {psi: psi1, lam: lambda1, M: M0}, label: seed pair}
"""


def test_minimal_scenario_runs():
    sc = from_yaml(MINIMAL)
    assert sc.family is Family.AKNS and sc.modes == (Mode(1.0, 0.0),)
    assert sc.checks[1].bind["lambda"] == "lambda1"  # lam alias
    rep = run_suite(sc)
    assert rep.passed
    assert [e.points_evaluated for e in rep.entries] == [30, 30]
    assert rep.entries[1].label == "seed pair"


def test_load_from_file(tmp_path):
    p = tmp_path / "s.yaml"
    p.write_text(MINIMAL)
    assert load_scenario(p).name == "tiny"
    p.write_text("name: [unclosed")
    with pytest.raises(ScenarioError, match="YAML"):
        load_scenario(p)


@pytest.mark.parametrize(
    "patch, message",
    [
        ({"colour": "red"}, "unknown scenario keys"),
        ({"family": "kdv"}, "family"),
        ({"chain": ["miura"]}, "miura stage needs"),
        ({"chain": ["darboux"]}, "two modes"),
        ({"chain": ["twist"]}, "unknown chain stage"),
        ({"tolerance": 0}, "positive"),
        ({"equations": ["NOPE"]}, "NOPE"),
        ({"equations": [{"equation": "AKNS_PDE", "expect": "maybe"}]}, "expect"),
        ({"equations": [{"equation": "AKNS_PDE", "weight": 2}]}, "unknown equation keys"),
        ({"grid": {"box": [0, 1]}}, "box needs 4"),
        ({"modes": [{"x0": 1.0}]}, "mode without k"),
    ],
)
def test_invalid_scenarios(patch, message):
    d = yaml.safe_load(MINIMAL)
    d.update(patch)
    with pytest.raises(ScenarioError, match=message):
        scenario_from_dict(d)


def test_missing_family():
    with pytest.raises(ScenarioError, match="family"):
        scenario_from_dict({"name": "x"})


def test_pipeline_error_names_the_stage():
    sc = VerificationScenario("bad", Family.AKNS, 0.5, (Mode(1.0), Mode(1.0)), chain=("darboux",))
    with pytest.raises(ScenarioError, match="'darboux'"):
        build_fields(sc)
    sc = VerificationScenario("zero", Family.AKNS, 0.5, (Mode(0.0),))
    with pytest.raises(ScenarioError, match="eigenfunction 1"):
        build_fields(sc)


def test_miura_needs_coupling():
    d = yaml.safe_load(BUILTIN_YAML["shg-from-akns-soliton"])
    del d["coupling"]
    with pytest.raises(ScenarioError, match="coupling.a"):
        build_fields(scenario_from_dict(d))


def test_unavailable_field_is_reported():
    sc = from_yaml(MINIMAL)
    env = build_fields(sc)
    with pytest.raises(ScenarioError, match="psi2p"):
        check_bindings(Check(EquationId.AKNS_LAX_X), env, "tiny")


def test_bad_expression_binding():
    env = build_fields(from_yaml(MINIMAL))
    with pytest.raises(ScenarioError, match="neither a pipeline field"):
        check_bindings(Check(EquationId.AKNS_PDE, bind={"M": "x +"}), env)


def test_expression_and_number_bindings():
    env = build_fields(from_yaml(MINIMAL))
    b = check_bindings(Check(EquationId.AKNS_LAX_X, bind={"M": "0.5*t", "psi": "psi1", "lambda": -1}), env)
    assert b["lambda"] == -1.0


def test_perturb_only_scalars():
    env = build_fields(from_yaml(MINIMAL))
    with pytest.raises(ScenarioError, match="scalar"):
        check_bindings(Check(EquationId.AKNS_PDE, perturb={"M": 0.1}), env)


def test_builtins_are_valid_and_named():
    assert len(ACCEPTANCE_BUILTINS) == 10
    for name in BUILTIN_YAML:
        assert builtin_scenario(name).name == name
    assert set(BUILTIN_YAML) <= set(builtin_names())
    assert set(builtin_names()) - set(BUILTIN_YAML) == {"figure-morphology", "kernel-soundness"}
    with pytest.raises(ScenarioError, match="unknown builtin"):
        builtin_scenario("nope")


def test_negative_control_fails_on_lax_x():
    rep = run_builtin("negative-control-lambda")
    assert not rep.passed
    assert [e.equation for e in rep.failures()] == [EquationId.AKNS_LAX_X]


def test_violated_expectation():
    d = yaml.safe_load(MINIMAL)
    d["equations"] = [
        {"equation": "AKNS_LAX_X", "bind": {"psi": "psi1", "lam": "lambda1", "M": "M0"},
         "perturb": {"lambda": 0.1}, "expect": "violated", "tolerance": 1e-3},
    ]
    rep = run_suite(scenario_from_dict(d))
    assert rep.passed and rep.entries[0].max_relative_residual >= 1e-3


def test_per_check_random_points():
    d = yaml.safe_load(MINIMAL)
    d["equations"] = [{"equation": "AKNS_PDE", "points": {"random": 7, "seed": 3}}]
    rep = run_suite(scenario_from_dict(d))
    assert rep.entries[0].points_evaluated == 7
