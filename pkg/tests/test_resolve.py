from fractions import Fraction
from itertools import permutations

import pytest

from detsing.cli import data_path
from detsing.detvar import DetPresentation, PolyMatrix
from detsing.formats import loads_presentation, loads_script, parse_script_file
from detsing.polycore import VarSet, parse_poly
from detsing.resolve import (POSITIVE_DIM, SINGULAR, SMOOTH, divisor_incidence, rational_points,
                             rational_roots, run_script, run_transform, smoothness_report)
from detsing.tjurina import ChartIndex, chart_presentation, eliminate_linear
from detsing.formats import parse_presentation_file

from conftest import ORACLE, P

F = Fraction


def gens(vs, *texts):
    vs = VarSet(vs.split()) if isinstance(vs, str) else vs
    return [parse_poly(t, vs) for t in texts], vs


def test_rational_roots():
    assert rational_roots([F(-2), F(1)]) == ([F(2)], True)
    assert rational_roots([F(-2), F(0), F(1)]) == ([], False)
    roots, ok = rational_roots([F(0), F(-1), F(0), F(1)])  # x^3 - x
    assert roots == [-1, 0, 1] and ok
    assert rational_roots([F(-1, 4), F(0), F(1)]) == ([F(-1, 2), F(1, 2)], True)


def test_rational_points():
    g, vs = gens("x y", "x^2 - 1", "y - x")
    assert rational_points(g, vs) == ([(F(-1), F(-1)), (F(1), F(1))], True)
    g, vs = gens("x y", "x^2 - 2", "y")
    assert rational_points(g, vs) == ([], False)


def test_smooth_examples():
    g, vs = gens("x y v", "x + y + v^2*x*y")
    r = smoothness_report(g, vs)
    assert r.verdict == SMOOTH and "1" in r.certificate
    g, vs = gens("x z w", "x^2 + z^3 + w^2*x")
    r = smoothness_report(g, vs)
    assert r.verdict == SINGULAR and r.points == [(0, 0, 0)] and r.complete
    g, vs = gens("x y z", "x")
    assert smoothness_report(g, vs).verdict == SMOOTH


def test_empty_variety():
    g, vs = gens("x y", "x", "x - 1")
    assert smoothness_report(g, vs).verdict == "empty"


def test_run_transform_ex41(ex41):
    vs0 = ex41.ambient.extend(["a1", "a3"])
    res = run_transform(ex41, ChartIndex((2,)), saturate_by=parse_poly("y*w", vs0))
    rem = res.chart.remaining_vars()
    got = set(res.generators)
    for s in ("y^2*w^2 - a1*a3", "w^3 - a1*y", "y^3 - a3*w"):
        assert parse_poly(s, rem) in got


def test_run_transform_a4():
    p = parse_presentation_file(data_path("a4.dsp"))
    res = run_transform(p, ChartIndex((1,)))
    assert res.generators == [P(ORACLE["a4_chart1"], res.chart.remaining_vars())]
    assert res.smoothness.verdict == SINGULAR and res.smoothness.points == [(0, 0, 0)]


def test_run_transform_t1():
    p = loads_presentation("vars x y z\ntype 1 1 1\n(x*y - z^5)\n")
    res = run_transform(p, ChartIndex(()))
    assert res.generators == [p.F[0, 0]]


def test_nonnormal_positive_dim():
    p = parse_presentation_file(data_path("nonnormal.dsp"))
    res = run_transform(p, ChartIndex((1,)), candidates=[(0, 0, 1), (0, 0, 2)])
    rem = res.chart.remaining_vars()
    g = P(ORACLE["nonnormal_chart1"], rem)
    assert res.generators in ([g], [-g])
    assert res.smoothness.verdict == POSITIVE_DIM and res.smoothness.singular_dim == 1
    assert all(ok for _, ok in res.smoothness.candidates) is ORACLE["nonnormal_axis_in_J"]


def _step2_chart1():
    p = loads_presentation("vars x z w\ntype 2 2 2\n(x) (z^2)\n(-z) (x + w^2)\n")
    return chart_presentation(p, ChartIndex((1,)))


def test_incidence_singular_meeting():
    # E1 = V(z, a2) and E2 = V(x, w) in step-2 chart 1
    cp = _step2_chart1()
    vs = cp.vars
    led = divisor_incidence(cp, {"E1": [parse_poly("z", vs), parse_poly("a2", vs)],
                                 "E2": [parse_poly("x", vs), parse_poly("w", vs)]})
    inc = led.get("E1", "E2")
    assert inc.meets and inc.dim == 0
    assert inc.points == [(0, 0, 0, 0)] and inc.smooth == [False]


def test_incidence_validation():
    cp = _step2_chart1()
    vs = cp.vars
    e = [parse_poly("x", vs), parse_poly("w", vs)]
    with pytest.raises(ValueError):
        divisor_incidence(cp, [("E2", e), ("E2", e)])
    with pytest.raises(ValueError):
        divisor_incidence(cp, {"E2": e, "E9": [parse_poly("x - 1", vs), parse_poly("w", vs)],
                               "E3": e})


def test_e7_script():
    rep = run_script(parse_script_file(data_path("e7.rsc")))
    assert rep.passed, [str(f) for f in rep.failures]
    assert all(s.det_ok for s in rep.steps)
    assert all(s.chain_ok for s in rep.steps[1:])
    last = rep.steps[-1]
    assert [c.transform.smoothness.verdict for c in last.charts] == [SMOOTH, SMOOTH]
    meets = last.meeting_points("E7")
    assert sorted(o for o, _, _ in meets) == ["E4", "E5", "E6"]
    assert last.meeting_points_distinct("E7")


def test_e7_e1_e2_never_meet():
    rep = run_script(parse_script_file(data_path("e7.rsc")))
    assert ("E1", "E2") in rep.edges  # only through the step-2 chart E1 lives in
    step3 = rep.steps[2]
    for c in step3.charts:
        names = set(c.ledger.divisors) if c.ledger else set()
        assert not {"E1", "E2"} <= names


def _graph_iso(e1, e2):
    v1 = sorted({v for e in e1 for v in e})
    v2 = sorted({v for e in e2 for v in e})
    s2 = {frozenset(e) for e in e2}
    return len(v1) == len(v2) and any(
        {frozenset((m[a], m[b])) for a, b in e1} == s2
        for m in (dict(zip(v1, p)) for p in permutations(v2)))


def test_e7_dual_graph_is_e7_diagram():
    rep = run_script(parse_script_file(data_path("e7.rsc")))
    reference = [("E1", "E3"), ("E3", "E6"), ("E6", "E7"), ("E7", "E5"), ("E5", "E2"), ("E7", "E4")]
    assert _graph_iso(rep.edges, reference)
    degrees = sorted(sum(v in e for e in rep.edges) for v in rep.vertices)
    assert degrees == [1, 1, 1, 2, 2, 2, 3]


def test_a4_script():
    rep = run_script(parse_script_file(data_path("a4.rsc")))
    assert rep.passed
    for s in rep.steps:
        for c in s.charts:
            if c.continued_by is None:
                assert c.transform.smoothness.verdict == SMOOTH


def test_wrong_det_single_step():
    s = loads_script("step 1\n vars x y z\n claim x*y - z^3\n matrix\n  (x) (z)\n  (z) (y)\n chart 1\n")
    rep = run_script(s)
    assert not rep.passed
    f = rep.failures[0]
    assert (f.step, f.kind) == (1, "det check") and f.polynomial


def test_chain_failure_reports_residual():
    # step 2 made self-consistent but no longer the output of step 1
    src = open(data_path("a4.rsc")).read()
    src = src.replace("claim x*y - z^2\n  matrix\n    (x) (z)\n    (z) (y)",
                      "claim x*y - z^2 - x^3\n  matrix\n    (x) (z)\n    (z) (y - x^2)", 1)
    rep = run_script(loads_script(src))
    assert [(f.step, f.kind) for f in rep.failures] == [(2, "chain check")]
    assert rep.failures[0].polynomial
