import json

import pytest

from zdecheck.suites import SUITES, RunConfig, run_suite

SMALL = RunConfig(q_max=6, T_max=20, samples=30)


@pytest.fixture(scope="module")
def ctx():
    return {}


@pytest.mark.parametrize("name", [s for s in SUITES if s not in ("powersum", "mertens")])
def test_suite_runs_clean(name, ctx):
    recs = run_suite(name, SMALL, ctx)
    assert recs
    json.dumps(recs)
    assert all(r["verdict"] in ("holds", "not_applicable") for r in recs), \
        [r for r in recs if r["verdict"] not in ("holds", "not_applicable")][:3]


def test_config_validation():
    for bad in (RunConfig(q_max=101), RunConfig(T_max=0), RunConfig(suites=["x"]),
                RunConfig(seeds={"x": 1}), RunConfig(precision_bits=10), RunConfig(samples=0)):
        with pytest.raises(ValueError):
            bad.validate()
    RunConfig(suites=list(SUITES), seeds={"bounds": 3}).validate()


def test_seeds_change_sweeps():
    a = run_suite("functional-equation", RunConfig(q_max=6, T_max=20, samples=5, seeds={"functional-equation": 1}))
    b = run_suite("functional-equation", RunConfig(q_max=6, T_max=20, samples=5, seeds={"functional-equation": 2}))
    assert a != b
