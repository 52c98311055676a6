"""
Cohomologie des complexes Hom(G, Z•) et Hom(Z•, G) ; complexes acycliques à
droite (resp. à gauche) relativement à une sous-catégorie.
"""
from typing import Dict, List, Sequence

from ..algebra.homological import hom_space, span_rank
from ..algebra.modules import Module
from ..approximation.approx import SubcatSpec
from ..complexes.complex import Complex


def hom_cohomology_from(g: Module, z: Complex) -> Dict[int, int]:
    """dim H^n(Hom(G, Z•)) pour chaque degré du support de Z"""
    out: Dict[int, int] = {}
    for n in z.degrees:
        basis = hom_space(g, z.term(n))
        out_rank = span_rank([z.diff(n) @ h for h in basis])
        in_rank = span_rank([z.diff(n - 1) @ h for h in hom_space(g, z.term(n - 1))])
        out[n] = len(basis) - out_rank - in_rank
    return out


def hom_cohomology_into(z: Complex, g: Module) -> Dict[int, int]:
    """
    dim H^k(Hom(Z•, G)) avec Hom(Z•, G)^k = Hom(Z^{−k}, G) et
    δ(h) = h∘d ; indexé par k.
    """
    out: Dict[int, int] = {}
    for n in z.degrees:
        basis = hom_space(z.term(n), g)
        # vers Hom(Z^{n−1}, G)
        out_rank = span_rank([h @ z.diff(n - 1) for h in basis])
        in_rank = span_rank([h @ z.diff(n) for h in hom_space(z.term(n + 1), g)])
        out[-n] = len(basis) - out_rank - in_rank
    return out


def right_acyclicity_defects(x: SubcatSpec, z: Complex, ignore: Sequence[int] = ()) -> List[Dict[str, int]]:
    """
    (générateur, degré, dimension) pour chaque cohomologie non nulle ; les
    degrés de ignore (bord coupé d'une résolution tronquée) sont sautés.
    """
    defects = []
    for i, g in enumerate(x.generators):
        for n, d in hom_cohomology_from(g, z).items():
            if d and n not in ignore:
                defects.append({"generator": i, "degree": n, "dimension": d})
    return defects


def left_acyclicity_defects(y: SubcatSpec, z: Complex, ignore: Sequence[int] = ()) -> List[Dict[str, int]]:
    defects = []
    for i, g in enumerate(y.generators):
        for k, d in hom_cohomology_into(z, g).items():
            if d and -k not in ignore:
                defects.append({"generator": i, "degree": -k, "dimension": d})
    return defects


def is_right_acyclic(x: SubcatSpec, z: Complex) -> bool:
    """Hom(G, Z•) acyclique pour tout générateur G"""
    return not right_acyclicity_defects(x, z)


def is_left_acyclic(y: SubcatSpec, z: Complex) -> bool:
    """Hom(Z•, G) acyclique pour tout générateur G"""
    return not left_acyclicity_defects(y, z)
