import pytest

from relhom.algebra.homological import projective, projective_cover, simple
from relhom.algebra.modules import ModuleMap
from relhom.approximation.approx import injectives_subcat, projectives_subcat
from relhom.approximation.resolution import resolution
from relhom.complexes.complex import ChainMap, stalk
from relhom.core.exceptions import ResolutionBoundExceededError
from relhom.services.corpus import CorpusBuilder
from relhom.totalization.lifting import (
    RelativeResolver,
    counit_equivalence,
    is_right_quasi_iso,
    lift_through_epsilon,
    verify_totalization,
)
from relhom.totalization.quasi_bicomplex import (
    build_quasi_bicomplex,
    lift_to_chain_map,
    required_width,
    total_dims,
    totalize,
)


def test_lift_of_identity_along_resolution(a2):
    res = resolution(projectives_subcat(a2), simple(a2, 0))
    lift = lift_to_chain_map(res, res, ModuleMap.identity(res.module))
    assert lift.is_chain_map()


def test_required_width_is_max_resolution_dimension(a2):
    proj = projectives_subcat(a2)
    assert required_width(proj, stalk(simple(a2, 0))) == 1
    assert required_width(proj, stalk(projective(a2, 0))) == 0


def test_required_width_beyond_bound(dual):
    with pytest.raises(ResolutionBoundExceededError) as exc:
        required_width(projectives_subcat(dual), stalk(simple(dual, 0)), bound=2)
    assert exc.value.error_code == "WIDTH_EXCEEDS_BOUND"


def test_totalization_of_stalk(a2):
    proj = projectives_subcat(a2)
    qb = build_quasi_bicomplex(proj, stalk(simple(a2, 0)))
    assert qb.verify()
    at = totalize(qb)
    assert total_dims(at) == {-1: [0, 1], 0: [1, 1]}
    assert at.epsilon.is_chain_map()
    assert is_right_quasi_iso(proj, at.epsilon)


def test_verify_totalization_with_balanced_partner(a2):
    s0 = simple(a2, 0)
    cover = projective_cover(s0)
    m = stalk(s0)
    f = ChainMap(stalk(cover.source), m, {0: cover})
    report = verify_totalization(projectives_subcat(a2), m, y=injectives_subcat(a2), maps=(f,))
    assert report.passed, report.failures()
    assert report.width == 1
    names = {c.name for c in report.checks}
    assert {"epsilon_left_quasi_iso", "epsilon_factorization"} <= names


def test_verify_totalization_on_exact_sequence(a2):
    for m in CorpusBuilder(a2).acyclic_complexes():
        report = verify_totalization(projectives_subcat(a2), m, y=injectives_subcat(a2))
        assert report.passed, report.failures()


def test_totalization_of_random_complexes(a2):
    builder = CorpusBuilder(a2, seed=3)
    proj = projectives_subcat(a2)
    for m in [builder.three_term(simple(a2, 1), projective(a2, 0)), builder.two_term(simple(a2, 0), simple(a2, 0))]:
        assert verify_totalization(proj, m).passed


def test_lift_through_epsilon_is_exact(a2):
    proj = projectives_subcat(a2)
    m = stalk(simple(a2, 0))
    at = totalize(build_quasi_bicomplex(proj, m))
    g = lift_through_epsilon(at, at.epsilon)
    assert (at.epsilon @ g).equals(at.epsilon)


def test_relative_resolver_memoizes(a2):
    resolver = RelativeResolver(projectives_subcat(a2))
    m = stalk(simple(a2, 0))
    assert resolver.i_shriek(m) is resolver.i_shriek(m)
    g, witness = resolver.i_shriek_map(ChainMap.identity(m))
    at = resolver.i_shriek(m)
    assert g.is_chain_map()
    assert (at.epsilon @ g).equals(at.epsilon)
    assert resolver.same_up_to_homotopy(g, ChainMap.identity(at.total)) is not None


def test_counit_on_projective_complex(a2):
    eq = counit_equivalence(projectives_subcat(a2), stalk(projective(a2, 0)))
    assert eq is not None
    assert eq.verify()
