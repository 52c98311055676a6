"""
Sous-catégories additives données par générateurs, approximations à droite
et à gauche, appartenance à add(générateurs) et admissibilité.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.homological import hom_space, indecomposable_injectives, indecomposable_projectives
from ..algebra.modules import (
    DirectSum,
    Module,
    ModuleMap,
    column_map,
    direct_sum,
    dual_module,
    row_map,
)
from ..algebra.quiver import Algebra
from ..algebra.solver import solve_from, solve_through
from ..core.exceptions import DimensionMismatchError, FactorizationError
from ..core.logger import get_logger
from ..linalg.exactlin import Matrix, rank, solve
from ..models.schemas import AdmissibilityReport

logger = get_logger(__name__)


class SubcatSpec:
    """
    Sous-catégorie add(générateurs), stable par facteurs directs.
    Le cache d'appartenance est local à l'instance (exécution séquentielle).
    """

    def __init__(self, generators: Sequence[Module], name: str = ""):
        generators = list(generators)
        if not generators:
            raise DimensionMismatchError(
                "Une sous-catégorie demande au moins un générateur",
                error_code="EMPTY_SUBCATEGORY",
                context={"name": name},
            )
        algebras = {id(g.algebra) for g in generators}
        if len(algebras) != 1:
            raise DimensionMismatchError(
                "Générateurs sur des algèbres différentes",
                error_code="ALGEBRA_MISMATCH",
                context={"name": name},
            )
        self.generators: Tuple[Module, ...] = tuple(generators)
        self.name = name or "X"
        self.algebra: Algebra = generators[0].algebra
        self._membership: Dict[int, Tuple[Module, bool]] = {}
        self._dual: Optional["SubcatSpec"] = None

    @property
    def p(self) -> int:
        return self.algebra.p

    def dual(self) -> "SubcatSpec":
        """D(add G) sur l'algèbre opposée ; dual(dual(x)) est x"""
        if self._dual is None:
            d = SubcatSpec([dual_module(g) for g in self.generators], name=f"D({self.name})")
            d._dual = self
            self._dual = d
        return self._dual

    def reordered(self, order: Sequence[int], name: str = "") -> "SubcatSpec":
        return SubcatSpec([self.generators[i] for i in order], name=name or f"{self.name}'")

    def contains_projectives(self) -> bool:
        return all(membership(self, p) for p in indecomposable_projectives(self.algebra))

    def contains_injectives(self) -> bool:
        return all(membership(self, i) for i in indecomposable_injectives(self.algebra))

    def __repr__(self) -> str:
        return f"SubcatSpec({self.name}, {len(self.generators)} générateurs)"


def projectives_subcat(algebra: Algebra) -> SubcatSpec:
    return SubcatSpec(indecomposable_projectives(algebra), name="Proj")


def injectives_subcat(algebra: Algebra) -> SubcatSpec:
    return SubcatSpec(indecomposable_injectives(algebra), name="Inj")


@dataclass
class Approximation:
    """
    θ : X₀ → M (à droite) ou θ : M → Y₀ (à gauche). certificates[i] exprime
    la base de Hom(gen_i, M) (resp. Hom(M, gen_i)) dans les images par θ.
    """
    theta: ModuleMap
    side: str
    sum: Optional[DirectSum] = None
    origins: List[int] = field(default_factory=list)
    certificates: Dict[int, Matrix] = field(default_factory=dict)

    @property
    def object(self) -> Module:
        """X₀ (à droite) ou Y₀ (à gauche)"""
        return self.theta.source if self.side == "right" else self.theta.target

    def is_epic(self) -> bool:
        return self.theta.is_surjective()

    def is_monic(self) -> bool:
        return self.theta.is_injective()


def _induced_matrix(images: List[ModuleMap], size: int, p: int) -> Matrix:
    if not images:
        return Matrix.zeros(p, size, 0)
    return Matrix(p, np.array([h.flatten() for h in images]).T, shape=(size, len(images)))


def approximation_certificates(x: SubcatSpec, theta: ModuleMap, side: str) -> Dict[int, Matrix]:
    """
    Pour chaque générateur g, résout (images de Hom(g, θ))·C = base de Hom(g, M) ;
    lève FactorizationError si la surjectivité échoue.
    """
    certificates: Dict[int, Matrix] = {}
    p = x.p
    for i, g in enumerate(x.generators):
        if side == "right":
            source_basis = hom_space(g, theta.source)
            target_basis = hom_space(g, theta.target)
            images = [theta @ h for h in source_basis]
            size = ModuleMap.flat_size(g, theta.target)
        else:
            source_basis = hom_space(theta.target, g)
            target_basis = hom_space(theta.source, g)
            images = [h @ theta for h in source_basis]
            size = ModuleMap.flat_size(theta.source, g)
        if not target_basis:
            certificates[i] = Matrix.zeros(p, len(images), 0)
            continue
        cert = solve(_induced_matrix(images, size, p), _induced_matrix(target_basis, size, p))
        if cert is None:
            raise FactorizationError(
                "Hom(générateur, θ) n'est pas surjectif",
                error_code="APPROXIMATION_NOT_SURJECTIVE",
                context={"generator": i, "side": side, "subcategory": x.name},
            )
        certificates[i] = cert
    return certificates


def _useful_summands(x: SubcatSpec, m: Module, summands: List[Module], maps: List[ModuleMap]) -> List[int]:
    """
    Indices des facteurs qui agrandissent l'image de Hom(g, θ) pour au moins
    un générateur g ; les facteurs retenus suffisent à une approximation.
    """
    needed = [len(hom_space(g, m)) for g in x.generators]
    spans: List[List[ModuleMap]] = [[] for _ in x.generators]
    ranks = [0] * len(x.generators)
    keep = []
    for k, (part, h) in enumerate(zip(summands, maps)):
        if ranks == needed:
            break
        grown = False
        for j, g in enumerate(x.generators):
            if ranks[j] == needed[j]:
                continue
            candidates = spans[j] + [h @ phi for phi in hom_space(g, part)]
            r = rank(_induced_matrix(candidates, ModuleMap.flat_size(g, m), x.p))
            if r > ranks[j]:
                spans[j], ranks[j], grown = candidates, r, True
        if grown:
            keep.append(k)
    return keep


def right_approximation(x: SubcatSpec, m: Module, certify: bool = True, prune: bool = False) -> Approximation:
    """
    θ : ⊕ g_i^{dim Hom(g_i, M)} → M assemblée à partir des bases de Hom ;
    avec prune, seuls les facteurs utiles à la surjectivité de Hom(g, θ) restent.
    """
    summands: List[Module] = []
    maps: List[ModuleMap] = []
    origins: List[int] = []
    for i, g in enumerate(x.generators):
        for h in hom_space(g, m):
            summands.append(g)
            maps.append(h)
            origins.append(i)
    if prune:
        keep = _useful_summands(x, m, summands, maps)
        summands = [summands[k] for k in keep]
        maps = [maps[k] for k in keep]
        origins = [origins[k] for k in keep]
    total = direct_sum(summands, algebra=m.algebra, name=f"{x.name}-approx")
    theta = row_map(total, m, maps)
    approximation = Approximation(theta, "right", total, origins)
    if certify:
        approximation.certificates = approximation_certificates(x, theta, "right")
    return approximation


def left_approximation(y: SubcatSpec, m: Module, certify: bool = True) -> Approximation:
    """θ : M → ⊕ g_i^{dim Hom(M, g_i)}"""
    summands: List[Module] = []
    maps: List[ModuleMap] = []
    origins: List[int] = []
    for i, g in enumerate(y.generators):
        for h in hom_space(m, g):
            summands.append(g)
            maps.append(h)
            origins.append(i)
    total = direct_sum(summands, algebra=m.algebra, name=f"{y.name}-approx")
    theta = column_map(m, total, maps)
    approximation = Approximation(theta, "left", total, origins)
    if certify:
        approximation.certificates = approximation_certificates(y, theta, "left")
    return approximation


def factor_through(approximation: Approximation, f: ModuleMap) -> Optional[ModuleMap]:
    """
    Relèvement de f : G → M (à droite, g avec θ∘g = f) ou prolongement de
    f : M → G (à gauche, g avec g∘θ = f) ; None si impossible.
    """
    if approximation.side == "right":
        return solve_through(approximation.theta, f)
    return solve_from(approximation.theta, f)


def membership(x: SubcatSpec, m: Module) -> bool:
    """M ∈ add(générateurs) ⇔ l'approximation à droite est un épi scindé"""
    cached = x._membership.get(id(m))
    if cached is not None and cached[0] is m:
        return cached[1]
    if m.is_zero():
        result = True
    else:
        approximation = right_approximation(x, m, certify=False, prune=True)
        result = approximation.is_epic() and factor_through(approximation, ModuleMap.identity(m)) is not None
    x._membership[id(m)] = (m, result)
    return result


def all_members(x: SubcatSpec, modules: Sequence[Module]) -> bool:
    return all(membership(x, m) for m in modules)


def is_admissible(x: SubcatSpec, probes: Sequence[Module]) -> AdmissibilityReport:
    """
    Admissible si toute approximation à droite est épique. Certificat
    structurel quand x contient les projectifs ; sinon sondage du corpus.
    """
    report = AdmissibilityReport(subcategory=x.name, side="right")
    structural = x.contains_projectives()
    report.add(
        "contains_projectives",
        "tout projectif indécomposable appartient à x",
        structural,
        hard=False,
    )
    failures = [i for i, m in enumerate(probes) if not right_approximation(x, m, certify=False).is_epic()]
    report.add(
        "probe_approximations_epic",
        "l'approximation à droite de chaque sonde est épique",
        not failures,
        hard=not structural,
        failing_probes=failures,
        evidence="corpus",
    )
    report.structural = structural
    report.admissible = structural or not failures
    return report


def is_coadmissible(y: SubcatSpec, probes: Sequence[Module]) -> AdmissibilityReport:
    """Dual : toute approximation à gauche est monique"""
    report = AdmissibilityReport(subcategory=y.name, side="left")
    structural = y.contains_injectives()
    report.add(
        "contains_injectives",
        "tout injectif indécomposable appartient à y",
        structural,
        hard=False,
    )
    failures = [i for i, m in enumerate(probes) if not left_approximation(y, m, certify=False).is_monic()]
    report.add(
        "probe_approximations_monic",
        "l'approximation à gauche de chaque sonde est monique",
        not failures,
        hard=not structural,
        failing_probes=failures,
        evidence="corpus",
    )
    report.structural = structural
    report.admissible = structural or not failures
    return report


def hom_rank(x: SubcatSpec, theta: ModuleMap) -> List[Tuple[int, int]]:
    """(rang de Hom(g, θ), dim Hom(g, M)) par générateur"""
    out = []
    for g in x.generators:
        images = [theta @ h for h in hom_space(g, theta.source)]
        size = ModuleMap.flat_size(g, theta.target)
        out.append((rank(_induced_matrix(images, size, x.p)), len(hom_space(g, theta.target))))
    return out
