from __future__ import annotations

from outerstring import suite
from outerstring.construct import lowerbound_instance

from .test_arrangement import TRIANGLE


def test_analyze_triangle():
    rec = suite.analyze_instance(TRIANGLE, brute_levels=True)
    assert rec["maxLevel"] == 1 and rec["gammaSizes"] == [3, 3]
    assert rec["arboricity"] == 2 and rec["degeneracy"] == 2
    assert rec["bound"] == 4 * 2 * 2 and rec["boundOk"]
    assert rec["halving"] == [] and rec["bruteMatch"]


def test_analyze_folk():
    rec = suite.analyze_instance(lowerbound_instance(4))
    assert rec["arboricity"] == 2 and rec["bicliqueFree2t"] and rec["sparsityOk"]
    assert "bruteMatch" not in rec


def test_override_and_quick():
    cfg = suite.SuiteConfig.quick(5)
    assert cfg.seed == 5 and cfg.random_instances < suite.SuiteConfig().random_instances
    assert cfg.override({"lower_m": [2, 3]}).lower_m == (2, 3)


def test_quick_suite_passes():
    results = suite.run_suite(suite.SuiteConfig.quick(3))
    assert [r.number for r in results] == list(range(1, 9))
    assert all(r.passed for r in results), [r.line() for r in results if not r.passed]
    assert results[0].line().startswith("[PASS] criterion 1")
