import pytest

from relhom.algebra.homological import projective, simple
from relhom.algebra.modules import ModuleMap
from relhom.algebra.quiver import AlgebraPresentation, Arrow, Quiver, Relation, build_algebra
from relhom.compare.eta import (
    SELF_INJECTIVE_NOTE,
    build_dualizing,
    build_eta,
    check_tensor_ginj,
    eta_corpus_maps,
    identify_cone,
    verify_eta_iso,
)
from relhom.compare.tensor import check_commutative, tensor_complex, tensor_map, tensor_modules
from relhom.complexes.complex import ChainMap, is_acyclic, stalk
from relhom.core.exceptions import NonCommutativeAlgebraError
from relhom.equivalence.functor import FunctorSession
from relhom.gorenstein.profile import build_profile


def non_commutative_local(p=2):
    """Deux boucles x, y avec x², y², xy nuls mais yx non nul"""
    quiver = Quiver(1, (Arrow(0, 0, "x"), Arrow(0, 0, "y")))
    relations = tuple(Relation(((1, path),)) for path in (("x", "x"), ("y", "y"), ("x", "y")))
    return build_algebra(AlgebraPresentation(quiver, relations, 3, p, "xy=0"))


def test_tensor_dimensions_over_dual_numbers(dual):
    r, s = projective(dual, 0), simple(dual, 0)
    assert tensor_modules(r, r).module.dims == (2,)
    assert tensor_modules(r, s).module.dims == (1,)
    assert tensor_modules(s, s).module.dims == (1,)
    assert tensor_modules(s, r).is_balanced()


def test_tensor_over_square_zero(square_zero_gf2):
    s = simple(square_zero_gf2, 0)
    r = projective(square_zero_gf2, 0)
    assert tensor_modules(s, s).module.dims == (1,)
    assert tensor_modules(r, s).module.dims == (1,)
    assert tensor_modules(r, r).module.dims == (4,)


def test_tensor_map_of_identities(dual):
    r = projective(dual, 0)
    product = tensor_modules(r, r)
    ident = ModuleMap.identity(r)
    assert tensor_map(product, product, ident, ident).equals(ModuleMap.identity(product.module))


def test_tensor_requires_local_algebra(a2):
    with pytest.raises(NonCommutativeAlgebraError) as exc:
        check_commutative(a2)
    assert exc.value.error_code == "NOT_LOCAL"


def test_tensor_requires_commuting_loops():
    with pytest.raises(NonCommutativeAlgebraError) as exc:
        check_commutative(non_commutative_local())
    assert exc.value.error_code == "NOT_COMMUTATIVE"


def test_tensor_complex_differential(dual):
    r = projective(dual, 0)
    dd = build_dualizing(dual)
    tc = tensor_complex(stalk(r), dd.augmented())
    tc.complex.check()
    assert is_acyclic(tc.complex)


def test_dualizing_complex_of_self_injective_ring(dual):
    dd = build_dualizing(dual)
    assert dd.dimension == 0
    assert dd.epsilon.is_chain_map()
    assert is_acyclic(dd.augmented())


def test_eta_on_regular_stalk(dual_gf2):
    profile = build_profile(dual_gf2)
    session = FunctorSession(profile.gproj, profile.ginj)
    dd = build_dualizing(dual_gf2)
    c = stalk(projective(dual_gf2, 0))
    witness = build_eta(session, dd, c)
    assert witness.verify()
    phi, ty = identify_cone(witness, dd)
    assert phi.is_chain_map()


def test_verify_eta_iso(dual_gf2):
    profile = build_profile(dual_gf2)
    session = FunctorSession(profile.gproj, profile.ginj)
    dd = build_dualizing(dual_gf2)
    complexes = [stalk(projective(dual_gf2, 0))]
    maps = eta_corpus_maps(complexes, [ChainMap.identity(complexes[0])])
    report = verify_eta_iso(session, dd, complexes, maps)
    assert report.passed, report.failures()
    assert report.note == SELF_INJECTIVE_NOTE
    assert report.dualizing_dimension == 0


def test_eta_corpus_maps_filters_foreign_maps(dual):
    inside = stalk(projective(dual, 0))
    outside = stalk(projective(dual, 0))
    maps = [ChainMap.identity(inside), ChainMap.identity(outside)]
    assert eta_corpus_maps([inside], maps) == maps[:1]


@pytest.mark.parametrize("name", ["dual", "square_zero"])
def test_tensor_with_injective_is_gorenstein_injective(name, dual_gf2, square_zero_gf2):
    algebra = {"dual": dual_gf2, "square_zero": square_zero_gf2}[name]
    report = check_tensor_ginj(build_profile(algebra))
    assert report.passed, report.failures()
