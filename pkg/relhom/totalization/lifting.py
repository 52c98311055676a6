"""
Propriétés de l'augmentation ε : T• → M• et construction de i^!.

ε est une 𝒳-quasi-isomorphisme à droite et une 𝒞(𝒳)-approximation à
droite : tout morphisme f d'un 𝒳-complexe vers M• se factorise exactement
par ε, composante f_l après composante f_l.
"""
from datetime import datetime
from typing import Dict, Optional, Tuple

from ..algebra.modules import ModuleMap, column_map
from ..algebra.solver import solve_through
from ..approximation.approx import SubcatSpec, all_members
from ..balanced.acyclicity import is_left_acyclic, is_right_acyclic, right_acyclicity_defects
from ..complexes.complex import ChainMap, Complex, Homotopy, mapping_cone
from ..complexes.homotopy import homotopy_between, homotopy_inverse
from ..core.exceptions import FactorizationError
from ..core.logger import get_logger
from ..models.schemas import TotalizationReport
from .quasi_bicomplex import AugmentedTotal, build_quasi_bicomplex, total_dims, totalize

logger = get_logger(__name__)


def is_right_quasi_iso(x: SubcatSpec, f: ChainMap) -> bool:
    """Cone(f) acyclique à droite"""
    return is_right_acyclic(x, mapping_cone(f).cone)


def is_left_quasi_iso(y: SubcatSpec, f: ChainMap) -> bool:
    """Cone(f) acyclique à gauche"""
    return is_left_acyclic(y, mapping_cone(f).cone)


def lift_through_epsilon(at: AugmentedTotal, f: ChainMap) -> ChainMap:
    """
    g : C• → T• avec ε∘g = f, g^n = Σ_l f_l^n où f_l^n : C^n → X^{n+l, −l} ;
    ε^n∘f_0^n = f^n puis d₀∘f_l^n = f_{l−1}^{n+1}∘d_C − Σ_{a=1}^{l} d_a∘f_{l−a}^n.
    """
    qb = at.quasi_bicomplex
    c = f.source
    pieces: Dict[Tuple[int, int], ModuleMap] = {}

    def piece(l: int, n: int) -> ModuleMap:
        found = pieces.get((l, n))
        if found is None:
            return ModuleMap.zero(c.term(n), qb.obj(n + l, -l))
        return found

    for n in c.degrees:
        if (n, 0) in at.indices.get(n, []):
            aug = qb.columns[n].augmentation
            g = solve_through(aug, f.component(n))
        else:
            g = ModuleMap.zero(c.term(n), qb.obj(n, 0)) if f.component(n).is_zero() else None
        if g is None:
            raise FactorizationError(
                "f⁰ ne se relève pas à travers ε",
                error_code="EPSILON_LIFT_FAILED",
                context={"degree": n, "level": 0},
            )
        pieces[(0, n)] = g

    for l in range(1, qb.width + 2):
        for n in c.degrees:
            rhs = piece(l - 1, n + 1) @ c.diff(n)
            for a in range(1, l + 1):
                rhs = rhs - qb.d(a, n + l - a, -(l - a)) @ piece(l - a, n)
            g = solve_through(qb.d(0, n + l, -l), rhs)
            if g is None:
                raise FactorizationError(
                    "Correction f_l introuvable",
                    error_code="EPSILON_LIFT_FAILED",
                    context={"degree": n, "level": l},
                )
            if not g.is_zero():
                pieces[(l, n)] = g

    components = {}
    for n in c.degrees:
        total = at.total.term(n)
        if n not in at.sums or total.is_zero():
            components[n] = ModuleMap.zero(c.term(n), total)
            continue
        maps = [piece(i - n, n) for i, _ in at.indices[n]]
        components[n] = column_map(c.term(n), at.sums[n], maps)
    return ChainMap(c, at.total, components)


class RelativeResolver:
    """
    i^! : choix fixé, une fois pour toutes, d'une totalisation par complexe ;
    les morphismes sont relevés par lift_through_epsilon.
    """

    def __init__(self, x: SubcatSpec, width: Optional[int] = None):
        self.subcat = x
        self.width = width
        self._memo: Dict[int, Tuple[Complex, AugmentedTotal]] = {}

    def i_shriek(self, m: Complex) -> AugmentedTotal:
        cached = self._memo.get(id(m))
        if cached is not None and cached[0] is m:
            return cached[1]
        start_time = datetime.now()
        at = totalize(build_quasi_bicomplex(self.subcat, m, self.width))
        self._memo[id(m)] = (m, at)
        logger.log_performance(
            "i_shriek",
            (datetime.now() - start_time).total_seconds(),
            subcategory=self.subcat.name,
            width=at.quasi_bicomplex.width,
        )
        return at

    def i_shriek_map(self, f: ChainMap) -> Tuple[ChainMap, Homotopy]:
        """g avec ε'∘g = f∘ε exactement (témoin d'homotopie nul)"""
        source = self.i_shriek(f.source)
        target = self.i_shriek(f.target)
        g = lift_through_epsilon(target, f @ source.epsilon)
        return g, Homotopy(source.total, f.target)

    def same_up_to_homotopy(self, g1: ChainMap, g2: ChainMap) -> Optional[Homotopy]:
        return homotopy_between(g1, g2)


def verify_totalization(
    x: SubcatSpec,
    m: Complex,
    width: Optional[int] = None,
    y: Optional[SubcatSpec] = None,
    maps: Tuple[ChainMap, ...] = (),
    at: Optional[AugmentedTotal] = None,
) -> TotalizationReport:
    """Identités du quasi-bicomplexe, d_T² = 0, ε morphisme et ses deux propriétés"""
    if at is None:
        at = totalize(build_quasi_bicomplex(x, m, width))
    qb = at.quasi_bicomplex
    report = TotalizationReport(width=qb.width, total_dims=total_dims(at))
    defects = qb.identity_defects()
    report.add(
        "quasi_bicomplex_identities",
        "Σ_{l=0}^{n} d_l∘d_{n−l} = 0 dans chaque bidegré",
        not defects,
        defects=defects[:10],
    )
    d_squared = [n for n in at.total.degrees if not (at.total.diff(n + 1) @ at.total.diff(n)).is_zero()]
    report.add("total_differential", "d_T^{n+1}∘d_T^n = 0", not d_squared, degrees=d_squared)
    report.add("epsilon_chain_map", "ε : T• → M• commute aux différentielles", at.epsilon.is_chain_map())
    cone = mapping_cone(at.epsilon).cone
    cone_defects = right_acyclicity_defects(x, cone)
    report.add(
        "epsilon_right_quasi_iso",
        "Cone(ε) est 𝒳-acyclique à droite",
        not cone_defects,
        defects=cone_defects[:10],
    )
    if y is not None:
        report.add(
            "epsilon_left_quasi_iso",
            "Cone(ε) est 𝒴-acyclique à gauche (partenaire équilibré)",
            is_left_acyclic(y, cone),
        )
    for k, f in enumerate(maps):
        if not all_members(x, [f.source.term(n) for n in f.source.degrees]):
            continue
        try:
            g = lift_through_epsilon(at, f)
            ok = (at.epsilon @ g).equals(f) and g.is_chain_map()
        except FactorizationError as exc:
            logger.warning("Relèvement par ε impossible", error_code=exc.error_code, context=exc.context)
            ok = False
        report.add("epsilon_factorization", "ε∘g = f exactement pour f issu d'un 𝒳-complexe", ok, map=k)
    logger.log_check("totalization", report.passed, width=qb.width)
    return report


def counit_equivalence(x: SubcatSpec, c: Complex, width: Optional[int] = None):
    """i^!(C) ≃ C pour un 𝒳-complexe C : ε est une équivalence d'homotopie"""
    at = totalize(build_quasi_bicomplex(x, c, width))
    return homotopy_inverse(at.epsilon)
