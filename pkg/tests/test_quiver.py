import pytest

from relhom.algebra.homological import (
    _hom_basis,
    cosyzygy,
    ext_dim,
    ext_dim_injective,
    hom_dim,
    hom_space,
    injective,
    injective_dimension,
    projective,
    projective_cover,
    projective_dimension,
    regular_module,
    simple,
    syzygy,
)
from relhom.algebra.library import EXAMPLES, get_example
from relhom.algebra.modules import Module, ModuleMap, cokernel, direct_sum, dual_module, kernel
from relhom.algebra.quiver import AlgebraPresentation, Arrow, Quiver, Relation, build_algebra
from relhom.core.exceptions import (
    AlgebraPresentationError,
    InfiniteDimensionalError,
    ModuleValidationError,
    ResolutionBoundExceededError,
)
from relhom.linalg.exactlin import Matrix


def test_example_dimensions(p):
    expected = {
        "dual_numbers": 2,
        "a2": 3,
        "nakayama_cycle": 4,
        "triangular_dual_numbers": 6,
        "commutative_square_zero": 4,
        "semisimple": 2,
    }
    for name, dim in expected.items():
        assert get_example(name, p).dim() == dim


def test_unknown_example():
    with pytest.raises(AlgebraPresentationError) as exc:
        get_example("nope")
    assert exc.value.error_code == "UNKNOWN_EXAMPLE"
    assert sorted(EXAMPLES) == exc.value.context["available"]


def test_loop_without_relation_is_infinite():
    quiver = Quiver(1, (Arrow(0, 0, "x"),))
    with pytest.raises(InfiniteDimensionalError) as exc:
        build_algebra(AlgebraPresentation(quiver, (), 2, 2, "k[x]"))
    assert exc.value.error_code == "NO_NILPOTENCY_CERTIFICATE"


def test_relation_must_have_length_two():
    quiver = Quiver(2, (Arrow(0, 1, "a"),))
    relation = Relation(((1, ("a",)),))
    with pytest.raises(AlgebraPresentationError) as exc:
        build_algebra(AlgebraPresentation(quiver, (relation,), 2, 2))
    assert exc.value.error_code == "NON_ADMISSIBLE_RELATION"


def test_quiver_validation():
    with pytest.raises(AlgebraPresentationError) as exc:
        Quiver(1, (Arrow(0, 0, "x"), Arrow(0, 0, "x")))
    assert exc.value.error_code == "DUPLICATE_ARROW"
    with pytest.raises(AlgebraPresentationError) as exc:
        Quiver(1, (Arrow(0, 2, "a"),))
    assert exc.value.error_code == "ARROW_OUT_OF_RANGE"


def test_opposite_is_involutive(a2):
    assert a2.opposite().opposite() is a2
    assert a2.opposite().dim() == a2.dim()


def test_a2_standard_modules(a2):
    assert projective(a2, 0).dims == (1, 1)
    assert projective(a2, 1).dims == (0, 1)
    assert injective(a2, 0).dims == (1, 0)
    assert injective(a2, 1).dims == (1, 1)
    assert regular_module(a2).dims == (1, 2)


def test_module_relation_check(dual):
    with pytest.raises(ModuleValidationError) as exc:
        Module(dual, [1], {"x": Matrix(dual.p, [[1]])})
    assert exc.value.error_code == "RELATION_VIOLATED"


def test_module_map_must_commute(dual):
    s = simple(dual, 0)
    r = projective(dual, 0)
    with pytest.raises(ModuleValidationError) as exc:
        ModuleMap(s, r, [Matrix(dual.p, [[1], [1]])])
    assert exc.value.error_code == "MAP_NOT_LINEAR"


def test_hom_dimensions(a2):
    p0, p1, s0 = projective(a2, 0), projective(a2, 1), simple(a2, 0)
    assert hom_dim(p0, s0) == 1
    assert hom_dim(p1, p0) == 1
    assert hom_dim(p0, p1) == 0
    assert hom_dim(s0, p0) == 0


def test_cover_kernel_and_cokernel(a2):
    s0 = simple(a2, 0)
    cover = projective_cover(s0)
    assert cover.is_surjective()
    assert cover.source.dims == (1, 1)
    k, inclusion = kernel(cover)
    assert k.dims == (0, 1)
    assert (cover @ inclusion).is_zero()
    c, projection = cokernel(inclusion)
    assert c.dims == s0.dims
    assert projection.is_surjective()


def test_direct_sum_injections_and_projections(a2):
    s = direct_sum([simple(a2, 0), projective(a2, 0)])
    assert s.module.dims == (2, 1)
    for i, (inj, proj) in enumerate(zip(s.injections, s.projections)):
        assert (proj @ inj).equals(ModuleMap.identity(s.summands[i]))


def test_duality_is_involutive(a2):
    p0 = projective(a2, 0)
    assert dual_module(dual_module(p0)) is p0
    assert dual_module(p0).algebra is a2.opposite()


def test_syzygies_over_a2(a2):
    assert syzygy(simple(a2, 0)).dims == (0, 1)
    assert syzygy(simple(a2, 1)).is_zero()
    assert cosyzygy(simple(a2, 1)).dims == (1, 0)


def test_ext_over_a2(a2):
    s0, s1 = simple(a2, 0), simple(a2, 1)
    assert ext_dim(s0, s1, 1) == 1
    assert ext_dim_injective(s0, s1, 1) == 1
    assert ext_dim(s1, s0, 1) == 0
    assert ext_dim(s0, s1, 2) == 0


def test_homological_dimensions(a2, dual):
    assert projective_dimension(simple(a2, 0), 4) == 1
    assert injective_dimension(simple(a2, 1), 4) == 1
    assert projective_dimension(simple(dual, 0), 4) is None
    assert injective_dimension(projective(dual, 0), 4) == 0


def test_relation_with_longer_terms_has_no_certificate():
    # x² = x³ : x n'est pas nilpotent malgré une relation dans J²
    quiver = Quiver(1, (Arrow(0, 0, "x"),))
    relation = Relation(((1, ("x", "x")), (-1, ("x", "x", "x"))))
    with pytest.raises(InfiniteDimensionalError) as exc:
        build_algebra(AlgebraPresentation(quiver, (relation,), 2, 2, "k[x]/(x^2-x^3)"))
    assert exc.value.error_code == "NO_NILPOTENCY_CERTIFICATE"
    assert exc.value.context["surviving_paths"] == [["x", "x"]]


def test_certificate_combines_relations(p):
    quiver = Quiver(1, (Arrow(0, 0, "x"),))
    relations = (
        Relation(((1, ("x", "x")), (-1, ("x", "x", "x")))),
        Relation(((1, ("x", "x", "x")),)),
    )
    algebra = build_algebra(AlgebraPresentation(quiver, relations, 2, p, "k[x]/(x^2)"))
    assert algebra.dim() == 2


def test_hom_space_splits_over_direct_sums(a2):
    parts = [projective(a2, 0), simple(a2, 0), projective(a2, 1)]
    total = direct_sum(parts).module
    target = direct_sum([projective(a2, 0), simple(a2, 1)]).module
    assert hom_dim(total, target) == len(_hom_basis(total, target))
    assert hom_dim(total, target) == sum(hom_dim(m, target) for m in parts)
    for h in hom_space(total, target):
        # le constructeur valide les carrés commutatifs
        ModuleMap(h.source, h.target, h.blocks)
    assert dual_module(total).decomposition is not None
    assert hom_dim(dual_module(target), dual_module(total)) == hom_dim(total, target)


def test_ext_degree_above_bound_is_rejected(a2):
    s0, s1 = simple(a2, 0), simple(a2, 1)
    with pytest.raises(ResolutionBoundExceededError) as exc:
        ext_dim(s0, s1, 3, bound=2)
    assert exc.value.error_code == "EXT_DEGREE_ABOVE_BOUND"
    assert ext_dim(s0, s1, 1, bound=1) == 1
