import pytest

from relhom.algebra.homological import injective, projective, simple
from relhom.algebra.library import get_example
from relhom.approximation.approx import all_members, projectives_subcat
from relhom.complexes.complex import stalk
from relhom.core.exceptions import GorensteinError
from relhom.gorenstein.profile import (
    build_profile,
    check_proj_inj_restriction,
    gorenstein_dimension,
    is_gorenstein_injective,
    is_gorenstein_projective,
    profile_report,
)


@pytest.mark.parametrize(
    "name, expected",
    [
        ("dual_numbers", 0),
        ("a2", 1),
        ("nakayama_cycle", 0),
        ("triangular_dual_numbers", 1),
        ("commutative_square_zero", 0),
    ],
)
def test_gorenstein_dimension(name, expected):
    assert gorenstein_dimension(get_example(name, 2), bound=4) == expected


def test_gorenstein_projectives_over_a2(a2):
    assert is_gorenstein_projective(projective(a2, 0))
    assert is_gorenstein_projective(projective(a2, 1))
    # héréditaire : les Gorenstein projectifs sont les projectifs
    assert not is_gorenstein_projective(simple(a2, 0))
    assert is_gorenstein_injective(injective(a2, 0))
    assert not is_gorenstein_injective(simple(a2, 1))


def test_simple_is_gorenstein_projective_over_dual_numbers(dual):
    assert is_gorenstein_projective(simple(dual, 0))
    assert is_gorenstein_injective(simple(dual, 0))


def test_profile_generators(a2_gf2, dual_gf2):
    profile = build_profile(a2_gf2)
    assert profile.dimension == 1
    assert len(profile.gproj.generators) == 2
    assert len(profile.ginj.generators) == 2
    assert profile.window == 2 + 4
    dual = build_profile(dual_gf2)
    assert dual.dimension == 0
    assert len(dual.gproj.generators) == 2


def test_triangular_algebra_has_non_projective_gorenstein_projectives(triangular_gf2):
    profile = build_profile(triangular_gf2)
    assert profile.dimension == 1
    assert not all_members(projectives_subcat(triangular_gf2), profile.gproj.generators)


def test_dimension_bound_is_enforced(a2_gf2):
    with pytest.raises(GorensteinError) as exc:
        build_profile(a2_gf2, bound=0)
    assert exc.value.error_code == "DIMENSION_EXCEEDS_BOUND"


@pytest.mark.parametrize("name", ["a2", "dual_numbers"])
def test_profile_report_passes(name):
    profile = build_profile(get_example(name, 2))
    report = profile_report(profile)
    assert report.passed, report.failures()
    assert report.dimension == profile.dimension


def test_self_injective_profile_carries_note(dual_gf2):
    report = profile_report(build_profile(dual_gf2))
    assert report.notes


def test_proj_inj_restriction_over_a2(a2_gf2):
    profile = build_profile(a2_gf2)
    report = check_proj_inj_restriction(
        profile,
        proj_complexes=[stalk(projective(a2_gf2, 1))],
        inj_complexes=[stalk(injective(a2_gf2, 0))],
    )
    assert report.passed, report.failures()


def test_proj_inj_restriction_flags_bad_input(a2_gf2):
    profile = build_profile(a2_gf2)
    report = check_proj_inj_restriction(profile, proj_complexes=[stalk(simple(a2_gf2, 0))])
    assert not report.passed
    assert report.failures()[0].name == "input_projective"
