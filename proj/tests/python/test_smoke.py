"""Smoke tests for the pnta Python bindings."""

import os
import pathlib

import pytest

import pnta

ROOT = pathlib.Path(os.environ.get("PNTA_SOURCE_DIR",
                                   pathlib.Path(__file__).resolve().parents[2]))

FISCHER_CLOSED = """
const k = 2;

template P {
  clocks c;
  init Init_Diff;
  state Init_Diff;
  state b1_Diff inv c <= k;
  state b2_Mypid;
  state CS_mypid;
  trans Init_Diff -> b1_Diff { reset c; when P in {Init_Diff, b1_Diff}; }
  trans b1_Diff -> b2_Mypid { reset c; when P in {Init_Diff, b1_Diff}; }
  trans b2_Mypid -> CS_mypid { guard c >= 3; }
  trans b2_Mypid -> Init_Diff { guard c >= 3; }
  trans CS_mypid -> Init_Diff { }
}

system {
  P: param;
}
"""


@pytest.fixture(scope="module")
def fischer():
    text = (ROOT / "models" / "fischer_reduced.pnta").read_text()
    return pnta.parse_model(text)


def test_parse_and_validate(fischer):
    spec = fischer.spec
    assert [t.name for t in spec.templates] == ["P"]
    assert len(spec.templates[0].states) == 4
    assert pnta.validate_network(spec) == []


def test_model_round_trip(fischer):
    again = pnta.parse_model(pnta.print_model(fischer))
    assert pnta.print_model(again) == pnta.print_model(fischer)


def test_cutoff_is_nine(fischer):
    spec = fischer.spec
    prop = pnta.parse_property("forall i:P . A G[>=0] !CS_mypid(i)", spec)
    cv = pnta.compute_cutoff(spec, prop)
    assert cv.sizes == [9]
    assert cv.reasons == ["2*4+1 (indexed template)"]


def test_check_mutex(fischer):
    spec = fischer.spec
    prop = pnta.parse_property(
        "forall i:P, j:P with i != j . A G[>=0] "
        "!(CS_mypid(i) & CS_mypid(j))", spec)
    verdict = pnta.check(spec, [3], prop)
    assert verdict.truth
    assert verdict.states_explored > 0


def test_counterexample_trace(fischer):
    spec = fischer.spec
    prop = pnta.parse_property("forall i:P . A F[>=0] CS_mypid(i)", spec)
    verdict = pnta.check(spec, [2], prop)
    assert not verdict.truth
    assert verdict.trace is not None
    assert verdict.trace.startswith("# run class=infinite")


def test_discrete_oracle_on_closed_model():
    doc = pnta.parse_model(FISCHER_CLOSED)
    prop = pnta.parse_property("forall i:P . E F[>=0] CS_mypid(i)", doc.spec)
    goal = pnta.ground_formula(prop, [1])

    reach = pnta.discrete_reach(doc.spec, [2], goal)
    assert reach.reachable
    assert "CS_mypid" in reach.trace

    bounded = pnta.discrete_reach(doc.spec, [2], goal, bound=("<=", "1"))
    assert not bounded.reachable

    runs = pnta.classify_runs(doc.spec, [2], pnta.ground_not(goal))
    assert runs.has_infinite_avoiding
    # Fischer's timelock (b1 at its invariant bound, peer stuck in b2) is a
    # deadlocked run that never visits CS.
    assert runs.has_deadlocked_avoiding

    assert pnta.discrete_check(doc.spec, [2], prop)


def test_strict_model_raises_engine_limitation(fischer):
    prop = pnta.parse_property("forall i:P . E F[>=0] CS_mypid(i)",
                               fischer.spec)
    with pytest.raises(pnta.PntaError) as e:
        pnta.discrete_check(fischer.spec, [2], prop)
    assert e.value.kind == "StrictConstraintUnsupported"
    assert e.value.engine_limitation


def test_abstraction_pipeline():
    text = (ROOT / "models" / "fischer_full.pnta").read_text()
    doc = pnta.parse_model(text)
    tagged = pnta.product(doc.spec.templates[0], doc.bindings["P"])
    assert len(tagged.tmpl.states) == 8
    guarded = pnta.add_mutex_guards(tagged)
    pruned = pnta.prune_unreachable(guarded)
    assert len(pruned.states) == 6


def test_lemma_suite_small():
    params = pnta.GenParams()
    params.seed = 3
    report = pnta.run_suite("mono", params, 5)
    assert report.trials == 5
    assert not report.violations
    assert report.text().rstrip().endswith("violations=0 trials=5 seed=3")


def test_dbm_basics():
    z = pnta.DBM.zero(2)
    z.up()
    u = pnta.DBM.universal(2)
    assert u.includes(z)
    assert not z.includes(u)
    pt = z.sample_point()
    assert pt[1] == pt[2]
