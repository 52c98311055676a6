"""
𝒳-résolutions et 𝒴-corésolutions de modules, dimension de résolution.

Une résolution est construite en itérant l'approximation à droite sur les
noyaux ; elle s'arrête dès qu'un noyau est nul ou appartient à 𝒳 (le noyau
devient alors le dernier terme). La stratégie « classical_first » tente
d'abord la résolution projective minimale lorsque 𝒳 contient les projectifs.
Les corésolutions sont les duales des résolutions sur l'algèbre opposée.
"""
from dataclasses import dataclass, field
from datetime import datetime
from typing import List, Optional, Tuple

from ..algebra.homological import projective_cover
from ..algebra.modules import Module, ModuleMap, dual_map, dual_module, kernel
from ..complexes.complex import Complex
from ..core.config import settings
from ..core.exceptions import NotAdmissibleError, ResolutionBoundExceededError
from ..core.logger import get_logger
from .approx import Approximation, SubcatSpec, approximation_certificates, membership, right_approximation

logger = get_logger(__name__)


@dataclass
class ResolutionOfObject:
    """
    ⋯ → X^{−1} → X^0 → M → 0 : terms[k] = X^{−k}, diffs[k] : X^{−k} → X^{−k+1}
    pour k ≥ 1, augmentation ε : X^0 → M ; approximations[k] est
    l'application induite X^{−k} → Ker d^{−k+1}.
    """
    subcat: SubcatSpec
    module: Module
    terms: List[Module]
    diffs: List[ModuleMap]
    augmentation: ModuleMap
    approximations: List[Approximation] = field(default_factory=list)
    inclusions: List[ModuleMap] = field(default_factory=list)
    closed_by_membership: bool = False
    strategy: str = "approximation"
    truncated: bool = False  # coupée à la borne : le noyau de d^{−length} est non nul
    _complex: Optional[Complex] = None
    _augmented: Optional[Complex] = None

    @property
    def length(self) -> int:
        return max(len(self.terms) - 1, 0)

    @property
    def cut_degree(self) -> Optional[int]:
        """Degré du complexe augmenté exclu des tests d'acyclicité"""
        return -self.length if self.truncated else None

    def term(self, k: int) -> Module:
        return self.terms[k]

    def complex(self) -> Complex:
        """X• en degrés −length..0"""
        if self._complex is None:
            self._complex = Complex(
                self.module.algebra, -self.length,
                list(reversed(self.terms)),
                list(reversed(self.diffs[1:])),
                name=f"{self.subcat.name}-res({self.module.name})",
                validate=False,
            )
        return self._complex

    def augmented(self) -> Complex:
        """⋯ → X^{−1} → X^0 → M, M en degré 1"""
        if self._augmented is None:
            self._augmented = Complex(
                self.module.algebra, -self.length,
                list(reversed(self.terms)) + [self.module],
                list(reversed(self.diffs[1:])) + [self.augmentation],
                name=f"{self.subcat.name}-res({self.module.name})+",
                validate=False,
            )
        return self._augmented

    def kernel_inclusion(self, k: int) -> ModuleMap:
        """Ker d^{−k+1} ↪ X^{−k+1} (k ≥ 1) ou M (k = 0)"""
        return self.inclusions[k]


@dataclass
class Coresolution:
    """
    0 → M → Y^0 → Y^1 → ⋯ : terms[k] = Y^k, diffs[k] : Y^{k−1} → Y^k pour
    k ≥ 1, coaugmentation η : M → Y^0. Duale d'une résolution sur A^op.
    """
    subcat: SubcatSpec
    module: Module
    terms: List[Module]
    diffs: List[ModuleMap]
    coaugmentation: ModuleMap
    approximations: List[Approximation] = field(default_factory=list)
    projections: List[ModuleMap] = field(default_factory=list)
    closed_by_membership: bool = False
    strategy: str = "approximation"
    truncated: bool = False
    _complex: Optional[Complex] = None
    _augmented: Optional[Complex] = None

    @property
    def length(self) -> int:
        return max(len(self.terms) - 1, 0)

    @property
    def cut_degree(self) -> Optional[int]:
        return self.length if self.truncated else None

    def complex(self) -> Complex:
        """Y• en degrés 0..length"""
        if self._complex is None:
            self._complex = Complex(
                self.module.algebra, 0, list(self.terms), list(self.diffs[1:]),
                name=f"{self.subcat.name}-cores({self.module.name})", validate=False,
            )
        return self._complex

    def augmented(self) -> Complex:
        """0 → M → Y^0 → ⋯, M en degré −1"""
        if self._augmented is None:
            self._augmented = Complex(
                self.module.algebra, -1, [self.module] + list(self.terms),
                [self.coaugmentation] + list(self.diffs[1:]),
                name=f"{self.subcat.name}-cores({self.module.name})+", validate=False,
            )
        return self._augmented


def _strategy(strategy: Optional[str]) -> str:
    return strategy or settings.resolution.strategy


def _approximation_resolution(
    x: SubcatSpec, m: Module, max_len: int, require_epic: bool, truncate: bool = False
) -> ResolutionOfObject:
    terms: List[Module] = []
    diffs: List[ModuleMap] = []
    approximations: List[Approximation] = []
    inclusions: List[ModuleMap] = []
    current, inclusion = m, ModuleMap.identity(m)
    for k in range(max_len + 1):
        inclusions.append(inclusion)
        if membership(x, current):
            theta = ModuleMap.identity(current)
            approximations.append(Approximation(theta, "right"))
            terms.append(current)
            diffs.append(inclusion)
            return ResolutionOfObject(
                x, m, terms, diffs, diffs[0], approximations, inclusions, closed_by_membership=True
            )
        approximation = right_approximation(x, current, prune=True)
        if require_epic and not approximation.is_epic():
            raise NotAdmissibleError(
                "Approximation à droite non épique : la sous-catégorie n'est pas admissible",
                error_code="APPROXIMATION_NOT_EPIC",
                context={"subcategory": x.name, "step": k, "module": m.name},
            )
        approximations.append(approximation)
        terms.append(approximation.object)
        diffs.append(inclusion @ approximation.theta)
        current, inclusion = kernel(approximation.theta)
        if current.is_zero():
            return ResolutionOfObject(x, m, terms, diffs, diffs[0], approximations, inclusions)
    if truncate:
        logger.info("Résolution tronquée à la borne", subcategory=x.name, module=m.name, max_len=max_len)
        return ResolutionOfObject(x, m, terms, diffs, diffs[0], approximations, inclusions, truncated=True)
    raise ResolutionBoundExceededError(
        "Résolution plus longue que la borne",
        error_code="RESOLUTION_BOUND_EXCEEDED",
        context={"subcategory": x.name, "module": m.name, "max_len": max_len},
    )


def _classical_resolution(
    x: SubcatSpec, m: Module, max_len: int, truncate: bool = False
) -> Optional[ResolutionOfObject]:
    """
    Résolution projective minimale, retenue si elle est une 𝒳-résolution ;
    avec truncate, une résolution coupée à la borne est acceptée hors du degré coupé.
    """
    from ..balanced.acyclicity import right_acyclicity_defects

    terms: List[Module] = []
    diffs: List[ModuleMap] = []
    approximations: List[Approximation] = []
    inclusions: List[ModuleMap] = []
    current, inclusion = m, ModuleMap.identity(m)
    for _ in range(max_len + 1):
        inclusions.append(inclusion)
        cover = projective_cover(current)
        approximations.append(Approximation(cover, "right"))
        terms.append(cover.source)
        diffs.append(inclusion @ cover)
        current, inclusion = kernel(cover)
        if current.is_zero():
            truncated = False
            break
    else:
        if not truncate:
            return None
        truncated = True
    resolution = ResolutionOfObject(
        x, m, terms, diffs, diffs[0], approximations, inclusions,
        strategy="classical_first", truncated=truncated,
    )
    ignore = [resolution.cut_degree] if truncated else []
    if right_acyclicity_defects(x, resolution.augmented(), ignore):
        return None
    for approximation in approximations:
        approximation.certificates = approximation_certificates(x, approximation.theta, "right")
    return resolution


def resolution(
    x: SubcatSpec,
    m: Module,
    max_len: Optional[int] = None,
    require_epic: bool = True,
    strategy: Optional[str] = None,
    truncate: bool = False,
) -> ResolutionOfObject:
    """
    𝒳-résolution de M de longueur ≤ max_len. Au-delà de la borne, lève
    ResolutionBoundExceededError, ou rend la fenêtre X^{−max_len}..X^0 avec truncate.
    """
    start_time = datetime.now()
    max_len = settings.resolution.max_len if max_len is None else max_len
    result = None
    if _strategy(strategy) == "classical_first" and not m.is_zero() and not membership(x, m):
        if x.contains_projectives():
            result = _classical_resolution(x, m, max_len, truncate)
    if result is None:
        result = _approximation_resolution(x, m, max_len, require_epic, truncate)
    logger.log_performance(
        "resolution",
        (datetime.now() - start_time).total_seconds(),
        subcategory=x.name,
        length=result.length,
        strategy=result.strategy,
        truncated=result.truncated,
    )
    return result


def resolution_dim(x: SubcatSpec, m: Module, bound: int) -> Optional[int]:
    """
    Plus petit n₀ ≤ bound avec Ker d^{−n₀+1} ∈ 𝒳 ; None au-delà de la borne
    ou si une approximation à droite n'est pas épique.
    """
    try:
        return resolution(x, m, bound, strategy="approximation").length
    except (ResolutionBoundExceededError, NotAdmissibleError):
        return None


def _dual_approximation(y: SubcatSpec, approximation: Approximation) -> Approximation:
    theta = dual_map(approximation.theta)
    dual = Approximation(theta, "left")
    if approximation.certificates:
        dual.certificates = approximation_certificates(y, theta, "left")
    return dual


def coresolution(
    y: SubcatSpec,
    m: Module,
    max_len: Optional[int] = None,
    require_monic: bool = True,
    strategy: Optional[str] = None,
    truncate: bool = False,
) -> Coresolution:
    """𝒴-corésolution : duale de la D(𝒴)-résolution de D(M)"""
    try:
        res = resolution(
            y.dual(), dual_module(m), max_len, require_epic=require_monic, strategy=strategy, truncate=truncate
        )
    except NotAdmissibleError as exc:
        raise NotAdmissibleError(
            "Approximation à gauche non monique : la sous-catégorie n'est pas coadmissible",
            error_code="APPROXIMATION_NOT_MONIC",
            context={"subcategory": y.name, **exc.context},
        )
    terms = [dual_module(t) for t in res.terms]
    diffs = [dual_map(d) for d in res.diffs]
    return Coresolution(
        y, m, terms, diffs, diffs[0],
        [_dual_approximation(y, a) for a in res.approximations],
        [dual_map(i) for i in res.inclusions],
        closed_by_membership=res.closed_by_membership,
        strategy=res.strategy,
        truncated=res.truncated,
    )


def coresolution_dim(y: SubcatSpec, m: Module, bound: int) -> Optional[int]:
    try:
        return coresolution(y, m, bound, strategy="approximation").length
    except (ResolutionBoundExceededError, NotAdmissibleError):
        return None


def resolution_pair(x: SubcatSpec, m: Module, max_len: int) -> Tuple[ResolutionOfObject, ResolutionOfObject]:
    """Deux résolutions indépendantes (ordre des générateurs inversé)"""
    reverse = x.reordered(list(reversed(range(len(x.generators)))))
    return (
        resolution(x, m, max_len, strategy="approximation"),
        resolution(reverse, m, max_len, strategy="approximation"),
    )
