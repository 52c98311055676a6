"""
Algèbres de dimension finie présentées par carquois et relations.

Un chemin est un tuple de noms de flèches dans l'ordre de parcours ; le
chemin trivial en u est le tuple vide accompagné de son sommet. Le quotient
kQ/I est calculé en tronquant aux chemins de longueur < N (borne de
nilpotence) ; la finitude est certifiée en vérifiant que chaque chemin de
longueur N est combinaison d'éléments α·r·β de l'idéal, sans troncature.
"""
from dataclasses import dataclass
from datetime import datetime
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.exceptions import AlgebraPresentationError, InfiniteDimensionalError
from ..core.logger import get_logger
from ..linalg.exactlin import FieldSpec, Matrix, annihilator, rref, solve

logger = get_logger(__name__)

Path = Tuple[str, ...]


@dataclass(frozen=True)
class Arrow:
    source: int
    target: int
    name: str


@dataclass(frozen=True)
class Quiver:
    """Carquois fini : sommets 0..n-1 et flèches nommées"""
    vertex_count: int
    arrows: Tuple[Arrow, ...] = ()

    def __post_init__(self):
        if self.vertex_count < 1:
            raise AlgebraPresentationError(
                "Un carquois doit avoir au moins un sommet",
                error_code="EMPTY_QUIVER",
                context={"vertex_count": self.vertex_count},
            )
        names = set()
        for arrow in self.arrows:
            if not (0 <= arrow.source < self.vertex_count and 0 <= arrow.target < self.vertex_count):
                raise AlgebraPresentationError(
                    f"Flèche {arrow.name} hors des sommets",
                    error_code="ARROW_OUT_OF_RANGE",
                    context={"arrow": arrow.name, "source": arrow.source, "target": arrow.target},
                )
            if arrow.name in names:
                raise AlgebraPresentationError(
                    f"Nom de flèche dupliqué : {arrow.name}",
                    error_code="DUPLICATE_ARROW",
                    context={"arrow": arrow.name},
                )
            names.add(arrow.name)

    @cached_property
    def _by_name(self) -> Dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise AlgebraPresentationError(
                f"Flèche inconnue : {name}",
                error_code="UNKNOWN_ARROW",
                context={"arrow": name},
            )

    def arrows_from(self, v: int) -> List[Arrow]:
        return [a for a in self.arrows if a.source == v]

    def path_endpoints(self, path: Path) -> Tuple[int, int]:
        """Source et but d'un chemin non trivial, après contrôle de composabilité"""
        if not path:
            raise AlgebraPresentationError(
                "Chemin vide sans sommet",
                error_code="EMPTY_PATH",
            )
        arrows = [self.arrow(n) for n in path]
        for first, second in zip(arrows, arrows[1:]):
            if first.target != second.source:
                raise AlgebraPresentationError(
                    f"Chemin non composable : {first.name} puis {second.name}",
                    error_code="PATH_NOT_COMPOSABLE",
                    context={"path": list(path)},
                )
        return arrows[0].source, arrows[-1].target

    def opposite(self) -> "Quiver":
        return Quiver(
            self.vertex_count,
            tuple(Arrow(a.target, a.source, a.name) for a in self.arrows),
        )


@dataclass(frozen=True)
class Relation:
    """Combinaison GF(p)-linéaire de chemins parallèles"""
    terms: Tuple[Tuple[int, Path], ...]

    def reversed(self) -> "Relation":
        return Relation(tuple((c, tuple(reversed(path))) for c, path in self.terms))


@dataclass(frozen=True)
class AlgebraPresentation:
    quiver: Quiver
    relations: Tuple[Relation, ...]
    nilpotency_bound: int
    p: int = 2
    name: str = ""

    def opposite(self) -> "AlgebraPresentation":
        return AlgebraPresentation(
            self.quiver.opposite(),
            tuple(r.reversed() for r in self.relations),
            self.nilpotency_bound,
            self.p,
            f"{self.name}^op" if self.name else "",
        )


class Algebra:
    """
    Quotient kQ/I de dimension finie avec une base de chemins par paire de
    sommets (u, w) et la réduction de tout chemin dans cette base.
    """

    def __init__(self, presentation: AlgebraPresentation):
        self.presentation = presentation
        self.quiver = presentation.quiver
        self.field = FieldSpec(presentation.p)
        self.p = presentation.p
        self.name = presentation.name
        self.basis: Dict[Tuple[int, int], List[Path]] = {}
        self._columns: Dict[Tuple[int, int], Dict[Path, int]] = {}
        self._reduction: Dict[Tuple[int, int], Matrix] = {}
        self._opposite: Optional["Algebra"] = None
        # Caches mémoïsés (un seul écrivain : l'exécution est séquentielle)
        self.hom_cache: Dict[Tuple[int, int], tuple] = {}

    @property
    def vertex_count(self) -> int:
        return self.quiver.vertex_count

    @property
    def nilpotency_bound(self) -> int:
        return self.presentation.nilpotency_bound

    def dim(self, u: Optional[int] = None, w: Optional[int] = None) -> int:
        """Dimension de e_u A e_w (chemins de u vers w), ou totale"""
        if u is None:
            return sum(len(b) for b in self.basis.values())
        return len(self.basis.get((u, w), []))

    def reduce(self, u: int, path: Path) -> Tuple[int, np.ndarray]:
        """Coordonnées d'un chemin partant de u dans la base de e_u A e_w"""
        w = self.quiver.path_endpoints(path)[1] if path else u
        size = self.dim(u, w)
        if len(path) >= self.nilpotency_bound:
            return w, np.zeros(size, dtype=np.int64)
        column = self._columns[(u, w)].get(path)
        if column is None:
            # chemin de longueur < N absent : impossible si la présentation est cohérente
            raise AlgebraPresentationError(
                "Chemin non énuméré",
                error_code="PATH_NOT_ENUMERATED",
                context={"source": u, "path": list(path)},
            )
        return w, self._reduction[(u, w)].column(column).copy()

    def opposite(self) -> "Algebra":
        if self._opposite is None:
            op = build_algebra(self.presentation.opposite())
            op._opposite = self
            self._opposite = op
        return self._opposite

    def __repr__(self) -> str:
        return f"Algebra({self.name or 'kQ/I'}, GF({self.p}), dim={self.dim()})"


def _enumerate_paths(quiver: Quiver, max_len: int) -> Dict[int, List[Tuple[int, Path]]]:
    """Chemins partant de chaque sommet, par longueur croissante, jusqu'à max_len inclus"""
    paths: Dict[int, List[Tuple[int, Path]]] = {}
    for u in range(quiver.vertex_count):
        layer = [(u, ())]
        found = list(layer)
        for _ in range(max_len):
            nxt = []
            for end, path in layer:
                for arrow in quiver.arrows_from(end):
                    nxt.append((arrow.target, path + (arrow.name,)))
            found.extend(nxt)
            layer = nxt
        paths[u] = found
    return paths


def _truncated_ideal(
    pres: AlgebraPresentation,
    paths: Dict[int, List[Tuple[int, Path]]],
    level: int,
    strict: bool = False,
) -> Tuple[Dict[Tuple[int, int], List[Path]], Dict[Tuple[int, int], List[np.ndarray]]]:
    """
    Chemins de longueur < level groupés par (u, w) et générateurs α·r·β de
    l'idéal tronqué à cette longueur. Sans strict, les termes trop longs sont
    abandonnés (exact modulo J^level) ; avec strict, seuls les α·r·β dont tous
    les termes tiennent sous level sont gardés.
    """
    quiver = pres.quiver
    spaces: Dict[Tuple[int, int], List[Path]] = {}
    for u, found in paths.items():
        for w, path in found:
            if len(path) < level:
                spaces.setdefault((u, w), []).append(path)
    index = {key: {path: i for i, path in enumerate(ps)} for key, ps in spaces.items()}

    generators: Dict[Tuple[int, int], List[np.ndarray]] = {}
    for relation in pres.relations:
        s, t = quiver.path_endpoints(relation.terms[0][1])
        lengths = [len(path) for _, path in relation.terms]
        reach = max(lengths) if strict else min(lengths)
        for u, found in paths.items():
            for end, alpha in found:
                if end != s:
                    continue
                for w, beta in paths[t]:
                    if len(alpha) + reach + len(beta) >= level:
                        continue
                    key = (u, w)
                    vec = np.zeros(len(spaces[key]), dtype=np.int64)
                    for coeff, path in relation.terms:
                        full = alpha + path + beta
                        if len(full) < level:
                            vec[index[key][full]] += coeff
                    vec %= pres.p
                    if vec.any():
                        generators.setdefault(key, []).append(vec)
    return spaces, generators


def _nilpotency_defects(pres: AlgebraPresentation) -> List[Tuple[int, int, Path]]:
    """
    Chemins de longueur N hors de l'idéal : seuls servent les α·r·β dont tous
    les termes restent de longueur < N + (longueur maximale d'une relation).
    """
    n = pres.nilpotency_bound
    longest = max((len(path) for r in pres.relations for _, path in r.terms), default=1)
    level = n + longest
    spaces, generators = _truncated_ideal(pres, _enumerate_paths(pres.quiver, level - 1), level, strict=True)
    defects = []
    for (u, w), ps in spaces.items():
        gens = generators.get((u, w), [])
        base = rref(Matrix(pres.p, np.array(gens)))[2] if gens else 0
        for i, path in enumerate(ps):
            if len(path) != n:
                continue
            unit = np.zeros(len(ps), dtype=np.int64)
            unit[i] = 1
            if rref(Matrix(pres.p, np.array(gens + [unit])))[2] > base:
                defects.append((u, w, path))
    return defects


def _validate_relations(pres: AlgebraPresentation) -> None:
    for idx, relation in enumerate(pres.relations):
        if not relation.terms:
            raise AlgebraPresentationError(
                "Relation vide",
                error_code="EMPTY_RELATION",
                context={"relation": idx},
            )
        endpoints = set()
        for coeff, path in relation.terms:
            if len(path) < 2:
                raise AlgebraPresentationError(
                    "Les relations doivent être dans l'idéal des chemins de longueur ≥ 2",
                    error_code="NON_ADMISSIBLE_RELATION",
                    context={"relation": idx, "path": list(path)},
                )
            endpoints.add(pres.quiver.path_endpoints(path))
        if len(endpoints) != 1:
            raise AlgebraPresentationError(
                "Relation combinant des chemins non parallèles",
                error_code="RELATION_NOT_PARALLEL",
                context={"relation": idx, "endpoints": sorted(endpoints)},
            )


def build_algebra(pres: AlgebraPresentation) -> Algebra:
    """
    Calcule une base de chemins du quotient et vérifie la dimension finie.
    """
    start_time = datetime.now()
    FieldSpec(pres.p)
    if pres.nilpotency_bound < 1:
        raise AlgebraPresentationError(
            "Borne de nilpotence invalide",
            error_code="BAD_NILPOTENCY_BOUND",
            context={"nilpotency_bound": pres.nilpotency_bound},
        )
    _validate_relations(pres)

    n = pres.nilpotency_bound
    paths = _enumerate_paths(pres.quiver, n)
    surviving = _nilpotency_defects(pres)
    if surviving:
        raise InfiniteDimensionalError(
            "Des chemins de longueur N survivent dans le quotient",
            error_code="NO_NILPOTENCY_CERTIFICATE",
            context={"nilpotency_bound": n, "surviving_paths": [list(path) for _, _, path in surviving[:5]]},
        )
    spaces, generators = _truncated_ideal(pres, paths, n)

    algebra = Algebra(pres)
    for key, ps in spaces.items():
        gens = generators.get(key, [])
        if gens:
            q = annihilator(Matrix(pres.p, np.array(gens).T, shape=(len(ps), len(gens))))
        else:
            q = Matrix.identity(pres.p, len(ps))
        if q.rows == 0:
            algebra.basis[key] = []
            algebra._columns[key] = {path: i for i, path in enumerate(ps)}
            algebra._reduction[key] = Matrix.zeros(pres.p, 0, len(ps))
            continue
        _, pivots, _ = rref(q)
        coords = solve(q.sub(range(q.rows), pivots), q)
        algebra.basis[key] = [ps[c] for c in pivots]
        algebra._columns[key] = {path: i for i, path in enumerate(ps)}
        algebra._reduction[key] = coords

    logger.log_performance(
        "build_algebra",
        (datetime.now() - start_time).total_seconds(),
        algebra=pres.name,
        dimension=algebra.dim(),
    )
    return algebra
