"""
Algèbres d'exemple livrées avec le moteur.

Chaque fabrique renvoie une algèbre construite sur GF(p) ; le registre
EXAMPLES sert à la CLI et au corpus de démonstration.
"""
from typing import Callable, Dict, List

from ..core.exceptions import AlgebraPresentationError
from .quiver import Algebra, AlgebraPresentation, Arrow, Quiver, Relation, build_algebra


def _monomial(*names: str) -> Relation:
    return Relation(((1, tuple(names)),))


def dual_numbers(p: int = 2) -> Algebra:
    """k[x]/(x²) : auto-injective, dimension 2"""
    quiver = Quiver(1, (Arrow(0, 0, "x"),))
    return build_algebra(AlgebraPresentation(quiver, (_monomial("x", "x"),), 2, p, "k[x]/(x^2)"))


def a2_path(p: int = 2) -> Algebra:
    """Algèbre des chemins de 0 → 1 : dimension globale 1"""
    quiver = Quiver(2, (Arrow(0, 1, "a"),))
    return build_algebra(AlgebraPresentation(quiver, (), 2, p, "A2"))


def nakayama_cycle(p: int = 2) -> Algebra:
    """Carquois cyclique à deux sommets, relations ab et ba : auto-injective"""
    quiver = Quiver(2, (Arrow(0, 1, "a"), Arrow(1, 0, "b")))
    relations = (_monomial("a", "b"), _monomial("b", "a"))
    return build_algebra(AlgebraPresentation(quiver, relations, 2, p, "Nakayama(2,2)"))


def triangular_dual_numbers(p: int = 2) -> Algebra:
    """
    T₂(k[x]/(x²)) : boucles x en 0 et y en 1, flèche a : 0 → 1, relations
    x², y², xa − ay. Gorenstein de dimension 1 avec GProj ≠ Proj.
    """
    quiver = Quiver(2, (Arrow(0, 0, "x"), Arrow(0, 1, "a"), Arrow(1, 1, "y")))
    relations = (
        _monomial("x", "x"),
        _monomial("y", "y"),
        Relation(((1, ("x", "a")), (-1, ("a", "y")))),
    )
    return build_algebra(AlgebraPresentation(quiver, relations, 3, p, "T2(k[x]/(x^2))"))


def commutative_square_zero(p: int = 2) -> Algebra:
    """k[x, y]/(x², y²) : commutative, locale, auto-injective"""
    quiver = Quiver(1, (Arrow(0, 0, "x"), Arrow(0, 0, "y")))
    relations = (
        _monomial("x", "x"),
        _monomial("y", "y"),
        Relation(((1, ("x", "y")), (-1, ("y", "x")))),
    )
    return build_algebra(AlgebraPresentation(quiver, relations, 3, p, "k[x,y]/(x^2,y^2)"))


def semisimple(p: int = 2, vertices: int = 2) -> Algebra:
    quiver = Quiver(vertices, ())
    return build_algebra(AlgebraPresentation(quiver, (), 1, p, f"k^{vertices}"))


EXAMPLES: Dict[str, Callable[[int], Algebra]] = {
    "dual_numbers": dual_numbers,
    "a2": a2_path,
    "nakayama_cycle": nakayama_cycle,
    "triangular_dual_numbers": triangular_dual_numbers,
    "commutative_square_zero": commutative_square_zero,
    "semisimple": semisimple,
}

# Algèbres dont le profil de Gorenstein est exercé par la démonstration
GORENSTEIN_EXAMPLES: List[str] = ["dual_numbers", "a2", "nakayama_cycle", "triangular_dual_numbers"]
COMMUTATIVE_EXAMPLES: List[str] = ["dual_numbers", "commutative_square_zero"]


def get_example(name: str, p: int = 2) -> Algebra:
    try:
        factory = EXAMPLES[name]
    except KeyError:
        raise AlgebraPresentationError(
            f"Algèbre d'exemple inconnue : {name}",
            error_code="UNKNOWN_EXAMPLE",
            context={"name": name, "available": sorted(EXAMPLES)},
        )
    return factory(p)
