import math

import numpy as np
import pytest

from hio_framework.hierarchy.gate import (
    INFINITY,
    GateConfig,
    GateDecision,
    ReferenceMode,
    decide,
    gate_accepts,
    next_reference,
    read_decision_log,
    write_decision_log,
)
from hio_framework.hierarchy.hier_model import NetworkId
from hio_framework.system.errors import ConfigError, GateError


@pytest.mark.parametrize(
    "reference, candidate, epsilon, accepted",
    [
        (1.0, 1.2, 1.0, False),
        (1.0, 0.9, 1.0, True),
        (1.0, 1.05, 1.1, True),
        (1.0, 1.0, 1.0, True),
        (1.0, 1e9, INFINITY, True),
        (2.0, 0.0, 0.0, True),
        (2.0, 0.1, 0.0, False),
    ],
)
def test_gate_rule_cases(reference, candidate, epsilon, accepted):
    assert gate_accepts(candidate, reference, epsilon) is accepted
    decision = decide(NetworkId.P, 1, candidate, reference, epsilon)
    assert decision.accepted is accepted


def test_gate_truth_table_over_random_triples():
    rng = np.random.default_rng(0)
    epsilons = [1.0, 1.1, INFINITY, 0.9, 2.0]
    cases = 0
    for _ in range(2000):
        reference, candidate = rng.exponential(size=2) * 10
        for epsilon in epsilons:
            decision = decide(NetworkId.C, cases, candidate, reference, epsilon)
            expected = math.isinf(epsilon) or candidate <= epsilon * reference
            assert decision.accepted == expected
            cases += 1
    assert cases >= 10_000


def test_decision_contradicting_the_rule_is_rejected():
    with pytest.raises(GateError):
        GateDecision(3, NetworkId.P, 1.0, 1.2, 1.0, accepted=True)


@pytest.mark.parametrize(
    "mode, accepted, expected",
    [
        (ReferenceMode.LAST_ACCEPTED, True, 0.8),
        (ReferenceMode.LAST_ACCEPTED, False, 1.0),
        (ReferenceMode.RUNNING_BEST, True, 0.8),
        (ReferenceMode.PRETRAINED_FIXED, True, 1.5),
        (ReferenceMode.PRETRAINED_FIXED, False, 1.5),
    ],
)
def test_reference_update_policies(mode, accepted, expected):
    candidate = 0.8 if accepted else 1.3
    decision = decide(NetworkId.P, 1, candidate, 1.0, 1.0)
    assert next_reference(mode, decision, pretrained_loss=1.5) == expected


def test_running_best_keeps_the_minimum_under_a_loose_gate():
    decision = decide(NetworkId.P, 1, 1.05, 1.0, 1.1)
    assert decision.accepted
    assert next_reference(ReferenceMode.RUNNING_BEST, decision, 2.0) == 1.0
    assert next_reference(ReferenceMode.LAST_ACCEPTED, decision, 2.0) == 1.05


@pytest.mark.parametrize(
    "overrides",
    [{"epsilon": -0.1}, {"epsilon": float("nan")}, {"gate_interval_steps": 0}],
)
def test_invalid_gate_configs(overrides):
    with pytest.raises(ConfigError):
        GateConfig(**overrides)


def test_gate_config_accepts_enum_values_by_name():
    cfg = GateConfig(epsilon="inf", reference_mode="running_best", gate_data="training")
    assert cfg.is_unbounded
    assert cfg.reference_mode is ReferenceMode.RUNNING_BEST
    assert cfg.to_dict()["gate_data"] == "training"


def test_decision_log_round_trip(tmp_path):
    decisions = [
        decide(NetworkId.P, 1, 0.5, 0.6, 1.0),
        decide(NetworkId.C, 1, 0.7, 0.6, 1.0),
        decide(NetworkId.P, 2, 3.0, 0.5, INFINITY),
    ]
    path = write_decision_log(decisions, tmp_path / "gate.jsonl")
    assert len(path.read_text().splitlines()) == 3
    assert read_decision_log(path) == decisions
