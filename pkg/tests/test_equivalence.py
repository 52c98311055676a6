import pytest

from relhom.algebra.homological import hom_space, injective, projective, simple
from relhom.approximation.approx import all_members, injectives_subcat, projectives_subcat
from relhom.complexes.complex import ChainMap, stalk
from relhom.complexes.homotopy import homotopy_inverse
from relhom.core.exceptions import ComplexValidationError, FactorizationError
from relhom.equivalence.functor import FunctorSession, verify_equivalence
from relhom.gorenstein.profile import build_profile
from relhom.services.corpus import CorpusBuilder, build_corpus


@pytest.fixture
def session(a2):
    return FunctorSession(projectives_subcat(a2), injectives_subcat(a2))


def test_f_object_is_a_coresolution_by_injectives(a2, session):
    c = stalk(projective(a2, 1))
    fc, theta = session.f_object(c)
    assert all_members(injectives_subcat(a2), fc.terms)
    assert theta.is_chain_map()
    assert theta.source is c
    # le choix est fixé pour la session
    assert session.f_object(c)[0] is fc


def test_f_object_of_y_member_is_identity(a2, session):
    c = stalk(projective(a2, 0))  # P0 = I1
    fc, theta = session.f_object(c)
    assert fc is c
    assert theta.equals(ChainMap.identity(c))


def test_f_object_rejects_non_x_complex(a2, session):
    with pytest.raises(ComplexValidationError) as exc:
        session.f_object(stalk(simple(a2, 0)))
    assert exc.value.error_code == "NOT_X_COMPLEX"


def test_g_object_rejects_non_y_complex(a2, session):
    with pytest.raises(ComplexValidationError) as exc:
        session.g_object(stalk(projective(a2, 1)))
    assert exc.value.error_code == "NOT_Y_COMPLEX"


def test_unit_and_counit_are_equivalences(a2, session):
    unit = homotopy_inverse(session.unit(stalk(projective(a2, 1))))
    assert unit is not None and unit.verify()
    counit = homotopy_inverse(session.counit(stalk(injective(a2, 0))))
    assert counit is not None and counit.verify()


def test_verify_equivalence_on_a2(a2, session):
    p0, p1 = stalk(projective(a2, 0)), stalk(projective(a2, 1))
    f = ChainMap(p1, p0, {0: hom_space(projective(a2, 1), projective(a2, 0))[0]})
    report = verify_equivalence(
        session,
        x_complexes=[p1, p0],
        y_complexes=[stalk(injective(a2, 0))],
        maps=[f, ChainMap.identity(p0)],
    )
    assert report.passed, report.failures()
    names = {c.name for c in report.checks}
    assert {"unit", "counit", "shift", "f_map_square", "cone", "f_composition"} <= names


def test_empty_corpus_is_vacuous(session):
    report = verify_equivalence(session)
    assert report.passed
    assert report.checks[0].details["vacuous"]


def test_seeded_zero_theta_is_detected(a2, session):
    c = stalk(projective(a2, 1))
    target = stalk(injective(a2, 1))
    session.seed(c, target, ChainMap.zero(c, target))
    report = verify_equivalence(session, x_complexes=[c])
    assert not report.passed
    assert any(f.name == "theta_left_quasi_iso" for f in report.failures())


def test_composition_failure_is_recorded(a2, session, monkeypatch):
    p0, p1 = stalk(projective(a2, 0)), stalk(projective(a2, 1))
    f = ChainMap(p1, p0, {0: hom_space(projective(a2, 1), projective(a2, 0))[0]})

    def failing_f_map(g):
        raise FactorizationError("F(f) introuvable", error_code="LIFT_FAILED")

    monkeypatch.setattr(session, "f_map", failing_f_map)
    report = verify_equivalence(session, maps=[f, ChainMap.identity(p0)])
    compositions = [c for c in report.checks if c.name == "f_composition"]
    assert compositions
    assert all(not c.passed and c.details["error"] == "LIFT_FAILED" for c in compositions)


def test_gorenstein_pair_equivalence_on_triangular_algebra(triangular_gf2):
    profile = build_profile(triangular_gf2)
    session = FunctorSession(profile.gproj, profile.ginj)
    corpus = build_corpus(triangular_gf2, profile.gproj, seed=0, count=2)
    y_complexes = CorpusBuilder(triangular_gf2, seed=1).subcat_complexes(profile.ginj, 2)
    report = verify_equivalence(session, corpus.complexes, y_complexes, corpus.maps)
    assert report.passed, report.failures()
    assert {"unit", "counit", "f_composition"} <= {c.name for c in report.checks}
