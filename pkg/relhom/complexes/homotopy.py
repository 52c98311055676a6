"""
Décisions dans la catégorie d'homotopie : homotopies nulles, inverses à
homotopie près et factorisations à homotopie près.

Chaque question est un seul système linéaire global (MapSystem) portant sur
tous les degrés à la fois.
"""
from dataclasses import dataclass
from typing import Optional, Tuple

from ..algebra.modules import ModuleMap
from ..algebra.solver import MapSystem, Term
from .complex import ChainMap, Complex, Homotopy, support_union


def _add_homotopy_unknowns(system: MapSystem, key: str, source: Complex, target: Complex, degrees) -> None:
    for n in degrees:
        system.add_unknown((key, n), source.term(n), target.term(n - 1))


def _homotopy_terms(key: str, source: Complex, target: Complex, n: int, coeff: int = 1):
    """Termes de d∘s + s∘d en degré n"""
    return [
        Term((key, n), left=target.diff(n - 1), coeff=coeff),
        Term((key, n + 1), right=source.diff(n), coeff=coeff),
    ]


def _collect(solution, key: str, source: Complex, target: Complex, degrees) -> Homotopy:
    return Homotopy(source, target, {n: solution[(key, n)] for n in degrees})


def null_homotopy(f: ChainMap) -> Optional[Homotopy]:
    """s avec d∘s + s∘d = f, ou None (l'absence est une preuve)"""
    x, y = f.source, f.target
    degrees = range(support_union(x, y).start, support_union(x, y).stop + 1)
    system = MapSystem(x.p, name="null_homotopy")
    _add_homotopy_unknowns(system, "s", x, y, degrees)
    for n in support_union(x, y):
        system.add_equation(_homotopy_terms("s", x, y, n), x.term(n), y.term(n), rhs=f.component(n))
    solution = system.solve()
    if solution is None:
        return None
    return _collect(solution, "s", x, y, degrees)


def is_null_homotopic(f: ChainMap) -> bool:
    return null_homotopy(f) is not None


def homotopy_between(f: ChainMap, g: ChainMap) -> Optional[Homotopy]:
    """Témoin de f ≃ g"""
    return null_homotopy(f - g)


def are_homotopic(f: ChainMap, g: ChainMap) -> bool:
    return homotopy_between(f, g) is not None


def is_contractible(c: Complex) -> bool:
    return is_null_homotopic(ChainMap.identity(c))


@dataclass
class HomotopyEquivalence:
    """f : X → Y, g : Y → X, g∘f − id = ds + sd, f∘g − id = dt + td"""
    forward: ChainMap
    backward: ChainMap
    source_homotopy: Homotopy
    target_homotopy: Homotopy

    def verify(self) -> bool:
        x, y = self.forward.source, self.forward.target
        left = self.backward @ self.forward - ChainMap.identity(x)
        right = self.forward @ self.backward - ChainMap.identity(y)
        return (
            self.forward.is_chain_map()
            and self.backward.is_chain_map()
            and self.source_homotopy.witnesses(left)
            and self.target_homotopy.witnesses(right)
        )


def _add_chain_map_unknowns(system: MapSystem, key: str, source: Complex, target: Complex) -> range:
    degrees = support_union(source, target)
    for n in degrees:
        system.add_unknown((key, n), source.term(n), target.term(n))
    for n in range(degrees.start - 1, degrees.stop):
        # φ^{n+1}∘d^n − d^n∘φ^n = 0
        system.add_equation(
            [Term((key, n + 1), right=source.diff(n)), Term((key, n), left=target.diff(n), coeff=-1)],
            source.term(n), target.term(n + 1),
        )
    return degrees


def _chain_map_from(solution, key: str, source: Complex, target: Complex, degrees) -> ChainMap:
    return ChainMap(source, target, {n: solution[(key, n)] for n in degrees if (key, n) in solution})


def homotopy_inverse(f: ChainMap) -> Optional[HomotopyEquivalence]:
    """
    Résout g et deux homotopies en un seul système ; None si f n'est pas une
    équivalence d'homotopie.
    """
    x, y = f.source, f.target
    system = MapSystem(x.p, name="homotopy_inverse")
    g_degrees = _add_chain_map_unknowns(system, "g", y, x)
    x_deg = support_union(x)
    y_deg = support_union(y)
    x_range = range(x_deg.start, x_deg.stop + 1)
    y_range = range(y_deg.start, y_deg.stop + 1)
    _add_homotopy_unknowns(system, "s", x, x, x_range)
    _add_homotopy_unknowns(system, "t", y, y, y_range)
    for n in x_deg:
        terms = [Term(("g", n), right=f.component(n))] + _homotopy_terms("s", x, x, n, coeff=-1)
        system.add_equation(terms, x.term(n), x.term(n), rhs=ModuleMap.identity(x.term(n)))
    for n in y_deg:
        terms = [Term(("g", n), left=f.component(n))] + _homotopy_terms("t", y, y, n, coeff=-1)
        system.add_equation(terms, y.term(n), y.term(n), rhs=ModuleMap.identity(y.term(n)))
    solution = system.solve()
    if solution is None:
        return None
    g = _chain_map_from(solution, "g", y, x, g_degrees)
    return HomotopyEquivalence(
        f, g,
        _collect(solution, "s", x, x, x_range),
        _collect(solution, "t", y, y, y_range),
    )


def is_homotopy_equivalence(f: ChainMap) -> bool:
    return homotopy_inverse(f) is not None


def factor_after(theta: ChainMap, h: ChainMap) -> Optional[Tuple[ChainMap, Homotopy]]:
    """
    φ : E → Z avec φ∘θ ≃ h pour θ : C → E et h : C → Z, avec le témoin
    φ∘θ − h = ds + sd ; None si aucune factorisation n'existe.
    """
    c, e, z = theta.source, theta.target, h.target
    system = MapSystem(c.p, name="factor_after")
    degrees = _add_chain_map_unknowns(system, "phi", e, z)
    c_deg = support_union(c, z)
    s_range = range(c_deg.start, c_deg.stop + 1)
    _add_homotopy_unknowns(system, "s", c, z, s_range)
    for n in c_deg:
        terms = [Term(("phi", n), right=theta.component(n))] + _homotopy_terms("s", c, z, n, coeff=-1)
        system.add_equation(terms, c.term(n), z.term(n), rhs=h.component(n))
    solution = system.solve()
    if solution is None:
        return None
    phi = _chain_map_from(solution, "phi", e, z, degrees)
    return phi, _collect(solution, "s", c, z, s_range)


def factor_before(theta: ChainMap, h: ChainMap) -> Optional[Tuple[ChainMap, Homotopy]]:
    """
    φ : Z → E avec θ∘φ ≃ h pour θ : E → C et h : Z → C (factorisation à
    travers θ par la gauche), avec le témoin θ∘φ − h = ds + sd.
    """
    e, c, z = theta.source, theta.target, h.source
    system = MapSystem(c.p, name="factor_before")
    degrees = _add_chain_map_unknowns(system, "phi", z, e)
    c_deg = support_union(z, c)
    s_range = range(c_deg.start, c_deg.stop + 1)
    _add_homotopy_unknowns(system, "s", z, c, s_range)
    for n in c_deg:
        terms = [Term(("phi", n), left=theta.component(n))] + _homotopy_terms("s", z, c, n, coeff=-1)
        system.add_equation(terms, z.term(n), c.term(n), rhs=h.component(n))
    solution = system.solve()
    if solution is None:
        return None
    phi = _chain_map_from(solution, "phi", z, e, degrees)
    return phi, _collect(solution, "s", z, c, s_range)


