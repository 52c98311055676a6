import pytest

from relhom.algebra.homological import injective, projective, simple
from relhom.algebra.modules import ModuleMap, direct_sum
from relhom.approximation.approx import (
    SubcatSpec,
    factor_through,
    hom_rank,
    injectives_subcat,
    is_admissible,
    is_coadmissible,
    left_approximation,
    membership,
    projectives_subcat,
    right_approximation,
)
from relhom.approximation.resolution import (
    coresolution,
    coresolution_dim,
    resolution,
    resolution_dim,
    resolution_pair,
)
from relhom.balanced.acyclicity import is_right_acyclic, left_acyclicity_defects, right_acyclicity_defects
from relhom.complexes.complex import is_acyclic
from relhom.core.exceptions import DimensionMismatchError, ResolutionBoundExceededError


def test_empty_subcategory_is_rejected():
    with pytest.raises(DimensionMismatchError) as exc:
        SubcatSpec([], name="vide")
    assert exc.value.error_code == "EMPTY_SUBCATEGORY"


def test_right_approximation_by_projectives(a2):
    proj = projectives_subcat(a2)
    approx = right_approximation(proj, simple(a2, 0))
    assert approx.is_epic()
    assert approx.object.dims == (1, 1)
    # chaque base de Hom(g, S0) se relève le long de θ
    assert set(approx.certificates) == {0, 1}


def test_left_approximation_by_injectives(a2):
    inj = injectives_subcat(a2)
    approx = left_approximation(inj, simple(a2, 1))
    assert approx.is_monic()
    assert approx.object.dims == (1, 1)


def test_factor_through_approximation(a2):
    proj = projectives_subcat(a2)
    s0 = simple(a2, 0)
    approx = right_approximation(proj, s0)
    p0 = projective(a2, 0)
    f = right_approximation(SubcatSpec([p0]), s0).theta
    g = factor_through(approx, f)
    assert g is not None
    assert (approx.theta @ g).equals(f)


def test_membership_is_closed_under_sums(a2):
    proj = projectives_subcat(a2)
    both = direct_sum([projective(a2, 0), projective(a2, 1)]).module
    assert membership(proj, both)
    assert not membership(proj, simple(a2, 0))
    assert membership(proj, simple(a2, 1))  # S1 = P1
    assert membership(injectives_subcat(a2), simple(a2, 0))  # S0 = I0


def test_admissibility_is_structural_for_projectives(a2):
    report = is_admissible(projectives_subcat(a2), [simple(a2, 0)])
    assert report.structural
    assert report.admissible
    assert report.passed


def test_simples_are_not_admissible_without_projectives(a2):
    s1 = SubcatSpec([simple(a2, 1)], name="S1")
    report = is_admissible(s1, [simple(a2, 0)])
    assert not report.structural
    assert not report.admissible


def test_injectives_are_coadmissible(a2):
    report = is_coadmissible(injectives_subcat(a2), [simple(a2, 1)])
    assert report.admissible


def test_projective_resolution_of_simple(a2):
    proj = projectives_subcat(a2)
    res = resolution(proj, simple(a2, 0))
    assert res.length == 1
    assert all(membership(proj, t) for t in res.terms)
    assert is_acyclic(res.augmented())
    assert is_right_acyclic(proj, res.augmented())
    assert (res.complex().lo, res.complex().hi) == (-1, 0)


@pytest.mark.parametrize("strategy", ["approximation", "classical_first"])
def test_strategies_agree_on_length(a2, strategy):
    res = resolution(projectives_subcat(a2), simple(a2, 0), strategy=strategy)
    assert res.length == 1


def test_member_resolves_in_one_step(a2):
    proj = projectives_subcat(a2)
    res = resolution(proj, projective(a2, 0))
    assert res.length == 0
    assert res.augmentation.equals(ModuleMap.identity(projective(a2, 0)))


def test_injective_coresolution(a2):
    inj = injectives_subcat(a2)
    cores = coresolution(inj, simple(a2, 1))
    assert cores.length == 1
    assert cores.terms[0].dims == injective(a2, 1).dims
    assert is_acyclic(cores.augmented())
    assert (cores.complex().lo, cores.complex().hi) == (0, 1)


def test_resolution_bound_over_dual_numbers(dual):
    proj = projectives_subcat(dual)
    with pytest.raises(ResolutionBoundExceededError) as exc:
        resolution(proj, simple(dual, 0), max_len=3)
    assert exc.value.error_code == "RESOLUTION_BOUND_EXCEEDED"
    assert resolution_dim(proj, simple(dual, 0), 3) is None
    assert coresolution_dim(injectives_subcat(dual), simple(dual, 0), 3) is None


def test_resolution_dimensions_over_a2(a2):
    assert resolution_dim(projectives_subcat(a2), simple(a2, 0), 4) == 1
    assert coresolution_dim(injectives_subcat(a2), simple(a2, 1), 4) == 1
    assert resolution_dim(projectives_subcat(a2), projective(a2, 1), 4) == 0


def test_resolution_pair_is_independent_of_generator_order(a2):
    first, second = resolution_pair(projectives_subcat(a2), simple(a2, 0), 4)
    assert first.length == second.length
    assert [t.dims for t in first.terms] == [t.dims for t in second.terms]


def test_hom_rank_of_epic_approximation(a2):
    proj = projectives_subcat(a2)
    approx = right_approximation(proj, simple(a2, 0))
    for image_rank, hom_dim in hom_rank(proj, approx.theta):
        assert image_rank == hom_dim


def test_pruned_approximation_drops_redundant_summands(a2):
    proj = projectives_subcat(a2)
    p0 = projective(a2, 0)
    full = right_approximation(proj, p0)
    pruned = right_approximation(proj, p0, prune=True)
    # Hom(P1, P0) se factorise par l'identité de P0
    assert full.object.dims == (1, 2)
    assert pruned.object.dims == (1, 1)
    assert pruned.is_epic()
    assert set(pruned.certificates) == {0, 1}
    for image_rank, hom_dim in hom_rank(proj, pruned.theta):
        assert image_rank == hom_dim


def test_membership_with_pruned_approximation(a2):
    proj = projectives_subcat(a2)
    total = direct_sum([projective(a2, 0), projective(a2, 1), projective(a2, 0)]).module
    assert membership(proj, total)
    assert not membership(proj, simple(a2, 0))


def test_truncated_resolution_keeps_its_window(dual):
    proj, inj = projectives_subcat(dual), injectives_subcat(dual)
    res = resolution(proj, simple(dual, 0), max_len=3, truncate=True)
    assert res.truncated and res.length == 3 and res.cut_degree == -3
    ignore = [res.cut_degree]
    assert not right_acyclicity_defects(proj, res.augmented(), ignore)
    assert not left_acyclicity_defects(inj, res.augmented(), ignore)
    # sans fenêtre, le bord coupé reste visible
    assert {d["degree"] for d in right_acyclicity_defects(proj, res.augmented())} == {-3}


def test_truncated_coresolution_mirrors_resolution(dual):
    inj = injectives_subcat(dual)
    cores = coresolution(inj, simple(dual, 0), max_len=2, truncate=True)
    assert cores.truncated and cores.cut_degree == 2
    assert not left_acyclicity_defects(inj, cores.augmented(), [cores.cut_degree])


def test_finite_resolution_is_never_marked_truncated(a2):
    res = resolution(projectives_subcat(a2), simple(a2, 0), max_len=4, truncate=True)
    assert not res.truncated and res.cut_degree is None


def test_dimensions_are_none_without_admissibility(a2):
    s1 = SubcatSpec([simple(a2, 1)], name="S1")
    assert resolution_dim(s1, simple(a2, 0), 3) is None
    assert coresolution_dim(projectives_subcat(a2), simple(a2, 0), 3) is None
