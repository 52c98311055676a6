import pytest

from relhom.algebra.homological import projective, projective_cover, simple
from relhom.algebra.modules import ModuleMap, kernel
from relhom.complexes.complex import (
    ChainMap,
    Complex,
    Homotopy,
    cohomology_dims,
    dual_chain_map,
    dual_complex,
    is_acyclic,
    mapping_cone,
    shift,
    shift_map,
    stalk,
    zero_complex,
)
from relhom.complexes.homotopy import (
    are_homotopic,
    factor_after,
    homotopy_inverse,
    is_contractible,
    is_homotopy_equivalence,
    null_homotopy,
)
from relhom.core.exceptions import ComplexValidationError


def short_exact(algebra):
    """0 → ΩS0 → P0 → S0 → 0 en degrés −1..1"""
    s0 = simple(algebra, 0)
    cover = projective_cover(s0)
    omega, inclusion = kernel(cover)
    return Complex(algebra, -1, [omega, cover.source, s0], [inclusion, cover], name="ses")


def test_support_and_terms(a2):
    c = short_exact(a2)
    assert (c.lo, c.hi) == (-1, 1)
    assert c.term(5).is_zero()
    assert c.diff(1).is_zero()
    assert c.total_dim() == 4


def test_d_squared_must_vanish(dual):
    s = simple(dual, 0)
    ident = ModuleMap.identity(s)
    with pytest.raises(ComplexValidationError) as exc:
        Complex(dual, 0, [s, s, s], [ident, ident])
    assert exc.value.error_code == "DIFF_SQUARE_NONZERO"


def test_short_exact_sequence_is_acyclic(a2):
    assert is_acyclic(short_exact(a2))


def test_cohomology_of_stalk(a2):
    c = stalk(simple(a2, 0), 2)
    assert cohomology_dims(c) == [(2, (1, 0))]


def test_trimmed_drops_zero_ends(a2):
    s0 = simple(a2, 0)
    zero = zero_complex(a2).term(0)
    c = Complex(a2, 0, [zero, s0, zero])
    t = c.trimmed()
    assert (t.lo, t.hi) == (1, 1)


def test_shift_signs(a2):
    c = short_exact(a2)
    shifted = shift(c, 1)
    assert shifted.lo == c.lo - 1
    assert shifted.diff(-2).equals(c.diff(-1).scale(a2.p - 1))
    assert shift(c, 2).diff(-3).equals(c.diff(-1))


def test_chain_map_must_commute(a2):
    c = short_exact(a2)
    bad = {0: ModuleMap.identity(c.term(0))}
    with pytest.raises(ComplexValidationError) as exc:
        ChainMap(c, c, bad)
    assert exc.value.error_code == "CHAIN_MAP_NOT_COMMUTING"


def test_cone_of_identity_is_contractible(a2):
    c = short_exact(a2)
    triangle = mapping_cone(ChainMap.identity(c))
    assert triangle.into_cone.is_chain_map()
    assert triangle.to_shift.is_chain_map()
    assert is_contractible(triangle.cone)


def test_identity_of_stalk_is_not_null_homotopic(a2):
    c = stalk(simple(a2, 0), 0)
    assert null_homotopy(ChainMap.identity(c)) is None


def test_acyclic_complex_of_projectives_is_contractible(a2):
    p0 = projective(a2, 0)
    c = Complex(a2, 0, [p0, p0], [ModuleMap.identity(p0)])
    h = null_homotopy(ChainMap.identity(c))
    assert h is not None
    assert h.witnesses(ChainMap.identity(c))


def test_homotopy_boundary_is_null_homotopic(a2):
    c = short_exact(a2)
    s = Homotopy(c, c, {0: ModuleMap.zero(c.term(0), c.term(-1))})
    f = s.boundary()
    assert f.is_zero()
    assert are_homotopic(f, ChainMap.zero(c, c))


def test_homotopy_inverse_of_identity(a2):
    c = stalk(projective(a2, 0), 0)
    eq = homotopy_inverse(ChainMap.identity(c))
    assert eq is not None
    assert eq.verify()


def test_zero_map_into_nonzero_stalk_is_not_equivalence(a2):
    c = stalk(simple(a2, 0), 0)
    assert not is_homotopy_equivalence(ChainMap.zero(c, c))


def test_factor_after_identity(a2):
    c = short_exact(a2)
    ident = ChainMap.identity(c)
    found = factor_after(ident, ident)
    assert found is not None
    phi, s = found
    assert s.witnesses(phi @ ident - ident)


def test_duality_of_complexes(a2):
    c = short_exact(a2)
    d = dual_complex(c)
    assert dual_complex(d) is c
    assert (d.lo, d.hi) == (-1, 1)
    assert d.algebra is a2.opposite()
    f = dual_chain_map(ChainMap.identity(c))
    assert f.is_chain_map()


def test_shift_map_is_chain_map(a2):
    c = short_exact(a2)
    assert shift_map(ChainMap.identity(c), 1).is_chain_map()
