import pytest

from relhom.algebra.homological import projective, simple
from relhom.algebra.library import EXAMPLES, get_example
from relhom.approximation.approx import injectives_subcat, projectives_subcat
from relhom.services.runner import (
    DemoRunner,
    algebra_check,
    approximation_check,
    complex_check,
    membership_check,
    negative_controls,
    radical_layers,
    resolution_check,
)
from relhom.services.serialization import load_complex


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_algebra_check_on_library(name, p):
    report = algebra_check(get_example(name, p))
    assert report.passed, report.failures()


def test_radical_layers(a2, dual):
    assert radical_layers(projective(a2, 0)) == [2, 1, 0]
    assert radical_layers(projective(dual, 0)) == [2, 1, 0]
    assert radical_layers(simple(a2, 0)) == [1, 0]


def test_negative_controls_fail_as_expected(p):
    report = negative_controls(p)
    assert report.passed, report.failures()
    assert len(report.checks) == 3


def test_complex_check_flags_nonzero_square(a2_gf2, data_dir):
    c = load_complex(a2_gf2, data_dir / "square_nonzero_complex.json")
    report = complex_check([c])
    assert not report.passed
    assert [f.name for f in report.failures()] == ["d_squared_zero"]
    # l'indice du complexe dans le corpus remplace son nom
    assert report.failures()[0].details == {"degree": 0, "complex": 0}


def test_complex_check_flags_non_linear_differential(a2_gf2):
    p0 = {"dims": [1, 1], "action": {"a": [[1]]}}
    doc = {"schema": 1, "kind": "complex", "terms": [p0, p0], "differentials": [[[[1]], [[0]]]]}
    report = complex_check([load_complex(a2_gf2, doc)])
    assert not report.passed
    assert report.failures()[0].name == "differential_linear"


def test_complex_check_reports_cohomology(a2_gf2):
    s0 = {"dims": [1, 0]}
    doc = {"schema": 1, "kind": "complex", "name": "s0", "terms": [s0]}
    report = complex_check([load_complex(a2_gf2, doc)])
    assert report.passed
    assert report.cohomology["s0"] == {0: [1, 0]}


def test_approximation_and_resolution_checks(a2):
    modules = [simple(a2, 0), simple(a2, 1)]
    assert approximation_check(projectives_subcat(a2), modules).passed
    assert approximation_check(injectives_subcat(a2), modules, side="left").passed
    report = resolution_check(projectives_subcat(a2), modules)
    assert report.passed
    assert report.terms["S0"] == [[1, 1], [0, 1]]
    payload = report.complexes["S0"]
    assert (payload.lo, [t.dims for t in payload.terms]) == (-1, [[0, 1], [1, 1], [1, 0]])
    assert resolution_check(injectives_subcat(a2), modules, co=True).passed


def test_resolution_check_reports_bound(dual):
    report = resolution_check(projectives_subcat(dual), [simple(dual, 0)], max_len=2)
    assert not report.passed


def test_membership_check(a2, dual):
    assert not membership_check([simple(a2, 0)]).passed
    assert membership_check([simple(dual, 0)], injective=True).passed


def test_demo_totalization_reaches_positive_width(a2):
    runner = DemoRunner(a2.p, seed=0, count=1)
    report = runner._totalization(a2, projectives_subcat(a2), injectives_subcat(a2), [])
    assert report.passed, report.failures()
    widths = [c.details["width"] for c in report.checks if c.name == "width_within_bound" and "width" in c.details]
    assert max(widths) == 1


def test_demo_totalization_skips_unbounded_terms(dual):
    # Proj-résolution de S0 infinie sur k[x]/(x²) : le complexe est écarté, pas en échec
    runner = DemoRunner(dual.p, seed=0, count=1, max_len=2)
    report = runner._totalization(dual, projectives_subcat(dual), injectives_subcat(dual), [])
    assert report.passed, report.failures()
    assert any(c.details.get("skipped") for c in report.checks)
