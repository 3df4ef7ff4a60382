import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import wtap.algorithm as algorithm
from wtap.algorithm import wtap_approx
from wtap.bundles import Bundle, BundleConstraint
from wtap.errors import InfeasibleError, ResourceLimitError
from wtap.instance import WtapInstance, is_feasible
from wtap.params import AlgorithmParams
from wtap.rounding import BundleRowViolated

from conftest import random_instance

REPORT_KEYS = {"lp_value", "opt_if_known", "output_cost", "ratio", "per_pair", "cuts_added",
               "bundles_added", "restarts", "timings_ms", "feasible", "ledger", "aggregate_check"}


def test_single_edge():
    inst = WtapInstance(range(2), [(0, 1)], [(0, 1, 3)])
    links, cost, report = wtap_approx(inst)
    assert cost == 3 and [l.id for l in links] == [0]
    assert report["output_cost"] == "3"


def test_star_is_optimal(star):
    res = wtap_approx(star, oracle=True)
    assert res.cost == 2 and res.report["ratio"] == "1"
    assert res.report["lp_value"] == "2"
    assert REPORT_KEYS <= set(res.report)
    json.dumps(res.report)


def test_infeasible():
    inst = WtapInstance(range(3), [(0, 1), (1, 2)], [(0, 1, 1)])
    with pytest.raises(InfeasibleError):
        wtap_approx(inst)


def test_report_in_original_units():
    inst = WtapInstance(range(3), [(0, 1), (1, 2)], [(0, 1, "1/3"), (1, 2, "2/3"), (0, 2, "5/3")])
    res = wtap_approx(inst, oracle=True)
    assert res.report["lp_value"] == "1" == res.report["output_cost"]
    assert sum(Fraction(p["cost"]) for p in res.report["per_pair"]) == 1


def test_restart_limit(monkeypatch, star):
    row = BundleConstraint({0: Fraction(1)}, Fraction(1), Bundle((), frozenset(), star.lineage))

    def always_violated(pair, center, ctx):
        raise BundleRowViolated(row)

    monkeypatch.setattr(algorithm, "round_pair", always_violated)
    with pytest.raises(ResourceLimitError):
        wtap_approx(star, AlgorithmParams.default(max_restarts=2))


def test_restart_adds_row(monkeypatch, star):
    real = algorithm.round_pair
    calls = []
    row = BundleConstraint({0: Fraction(1), 1: Fraction(1), 2: Fraction(1)}, Fraction(2),
                           Bundle((), frozenset(), star.lineage))

    def once(pair, center, ctx):
        if not calls:
            calls.append(1)
            raise BundleRowViolated(row)
        return real(pair, center, ctx)

    monkeypatch.setattr(algorithm, "round_pair", once)
    res = wtap_approx(star)
    assert res.report["restarts"] == 1 and res.report["bundles_added"] == 1


@given(st.integers(0, 500))
def test_random_within_twice_opt(seed):
    inst = random_instance(seed, n_max=14)
    res = wtap_approx(inst, oracle=True)
    opt = Fraction(res.report["opt_if_known"])
    assert is_feasible(inst, res.links)
    assert res.cost <= 2 * opt
    assert Fraction(res.report["lp_value"]) <= opt
    assert res.report["aggregate_check"]
