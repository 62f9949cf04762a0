import json

import pytest

from toricmmp.errors import UnknownScenario
from toricmmp.scenarios import SCENARIOS, ScenarioReport, fano_fiber_walls, run_scenario
from toricmmp import corpus

COUNTS = {"flip": 10, "sato": 8, "nonqgor": 7, "fano112": 11, "morifiber": 17}


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_scenario_passes(name):
    rep = run_scenario(name)
    assert rep.error is None
    assert [a.label for a in rep.assertions if not a.passed] == []
    assert len(rep.assertions) == COUNTS[name]


def test_unknown_scenario():
    with pytest.raises(UnknownScenario):
        run_scenario("nope")


def test_report_rendering():
    rep = ScenarioReport("demo")
    rep.check("one equals one", 1, 1)
    rep.check("two equals three", 2, 3)
    assert not rep.passed
    doc = rep.to_json()
    assert json.loads(json.dumps(doc))["assertions"][1]["passed"] is False
    text = rep.to_text()
    assert text.splitlines()[0] == "scenario demo: FAIL"
    assert "expected 2" in text


def test_fano_fiber_walls_lie_over_the_positive_ray():
    f = corpus.fano_morphism()
    walls = fano_fiber_walls(f)
    assert walls
    plus = f.target.rays.index((1,))
    assert all(f.cone_map(w.tau) == frozenset([plus]) for w in walls)
