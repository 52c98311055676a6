"""
Foncteur F : K(x) → K(y) d'une paire équilibrée et son quasi-inverse G.

F(C) est la duale de la totalisation de D(C) relativement à D(y) : on
obtient ainsi une y-corésolution θ_C : C → F(C), fixée une fois pour toutes
par session. G(D) = i^!(D) est la x-résolution ε_D : G(D) → D.
"""
from dataclasses import dataclass
from datetime import datetime
from typing import Dict, List, Optional, Sequence, Tuple

from ..algebra.modules import ModuleMap, block_map
from ..approximation.approx import SubcatSpec, all_members
from ..complexes.complex import (
    ChainMap,
    Complex,
    Homotopy,
    dual_chain_map,
    dual_complex,
    mapping_cone,
    shift,
    shift_map,
)
from ..complexes.homotopy import HomotopyEquivalence, factor_after, homotopy_between, homotopy_inverse
from ..core.exceptions import ComplexValidationError, FactorizationError, RelHomException
from ..core.logger import get_logger
from ..models.schemas import EquivalenceReport
from ..totalization.lifting import RelativeResolver, is_left_quasi_iso, lift_through_epsilon

logger = get_logger(__name__)


@dataclass
class _Coresolved:
    complex: Complex
    theta: ChainMap
    # le choix identité n'a pas de totalisation sous-jacente
    identity: bool = False
    seeded: bool = False


class FunctorSession:
    """Mémo des choix θ_C (F) et ε_D (G) pour une paire (x, y)"""

    def __init__(self, x: SubcatSpec, y: SubcatSpec, width: Optional[int] = None):
        self.x = x
        self.y = y
        self.width = width
        self.x_resolver = RelativeResolver(x, width)
        self.dual_resolver = RelativeResolver(y.dual(), width)
        self._memo: Dict[int, Tuple[Complex, _Coresolved]] = {}

    def _require_members(self, subcat: SubcatSpec, c: Complex, code: str) -> None:
        if not all_members(subcat, c.terms):
            raise ComplexValidationError(
                f"Le complexe a un terme hors de {subcat.name}",
                error_code=code,
                context={"complex": c.name, "subcategory": subcat.name},
            )

    def seed(self, c: Complex, fc: Complex, theta: ChainMap) -> None:
        """Impose un choix θ_C (contrôle négatif ou choix identité)"""
        self._memo[id(c)] = (c, _Coresolved(fc, theta, identity=fc is c, seeded=fc is not c))

    def _coresolved(self, c: Complex) -> _Coresolved:
        cached = self._memo.get(id(c))
        if cached is not None and cached[0] is c:
            return cached[1]
        self._require_members(self.x, c, "NOT_X_COMPLEX")
        start_time = datetime.now()
        if all_members(self.y, c.terms):
            entry = _Coresolved(c, ChainMap.identity(c), identity=True)
        else:
            at = self.dual_resolver.i_shriek(dual_complex(c))
            entry = _Coresolved(dual_complex(at.total), dual_chain_map(at.epsilon))
        self._memo[id(c)] = (c, entry)
        logger.log_performance(
            "F_object",
            (datetime.now() - start_time).total_seconds(),
            complex=c.name,
            identity=entry.identity,
        )
        return entry

    def f_object(self, c: Complex) -> Tuple[Complex, ChainMap]:
        """(F(C), θ_C) ; θ_C est une y-quasi-isomorphisme à gauche"""
        entry = self._coresolved(c)
        return entry.complex, entry.theta

    def compare_from_theta(self, c: Complex, h: ChainMap) -> Tuple[ChainMap, Homotopy]:
        """
        φ : F(C) → E avec φ∘θ_C ≃ h pour h : C → E, E un y-complexe. Pour un
        θ_C issu de la totalisation duale, φ = D(g) où g relève D(h) à travers
        l'augmentation et l'égalité est exacte.
        """
        entry = self._coresolved(c)
        if entry.identity:
            return h, Homotopy(c, h.target)
        if entry.seeded:
            found = factor_after(entry.theta, h)
            if found is None:
                raise FactorizationError(
                    "h ne se factorise pas par θ_C à homotopie près",
                    error_code="THETA_FACTORIZATION_FAILED",
                    context={"complex": c.name},
                )
            return found
        at = self.dual_resolver.i_shriek(dual_complex(c))
        g = lift_through_epsilon(at, dual_chain_map(h))
        return dual_chain_map(g), Homotopy(c, h.target)

    def f_map(self, f: ChainMap) -> Tuple[ChainMap, Homotopy]:
        """F(f) avec F(f)∘θ_C = θ_{C'}∘f (témoin d'homotopie nul)"""
        _, theta_target = self.f_object(f.target)
        return self.compare_from_theta(f.source, theta_target @ f)

    def g_object(self, d: Complex) -> Tuple[Complex, ChainMap]:
        """(G(D), ε_D) par totalisation relative à x"""
        self._require_members(self.y, d, "NOT_Y_COMPLEX")
        at = self.x_resolver.i_shriek(d)
        return at.total, at.epsilon

    def g_map(self, f: ChainMap) -> Tuple[ChainMap, Homotopy]:
        return self.x_resolver.i_shriek_map(f)

    def unit(self, c: Complex) -> ChainMap:
        """C → G(F(C)) relevant θ_C à travers ε_{F(C)}"""
        fc, theta = self.f_object(c)
        at = self.x_resolver.i_shriek(fc)
        return lift_through_epsilon(at, theta)

    def counit(self, d: Complex) -> ChainMap:
        """F(G(D)) → D, comparaison de ε_D à travers θ_{G(D)}"""
        gd, eps = self.g_object(d)
        phi, _ = self.compare_from_theta(gd, eps)
        return phi

    def shift_comparison(self, c: Complex, k: int = 1) -> ChainMap:
        """F(C[k]) → F(C)[k]"""
        _, theta = self.f_object(c)
        phi, _ = self.compare_from_theta(shift(c, k), shift_map(theta, k))
        return phi

    def cone_comparison(self, f: ChainMap) -> ChainMap:
        """F(Cone f) → Cone(F f) à partir de diag(θ_C[1], θ_{C'})"""
        _, theta_source = self.f_object(f.source)
        _, theta_target = self.f_object(f.target)
        ff, _ = self.f_map(f)
        source = mapping_cone(f)
        target = mapping_cone(ff)
        components = {}
        for n in source.cone.degrees:
            if n not in target.sums:
                components[n] = ModuleMap.zero(source.cone.term(n), target.cone.term(n))
                continue
            components[n] = block_map(source.sums[n], target.sums[n], {
                (0, 0): theta_source.component(n + 1),
                (1, 1): theta_target.component(n),
            })
        h = ChainMap(source.cone, target.cone, components)
        phi, _ = self.compare_from_theta(source.cone, h)
        return phi


def _equivalence_details(eq: Optional[HomotopyEquivalence]) -> dict:
    if eq is None:
        return {"inverse_found": False}
    return {"inverse_found": True, "verified": eq.verify()}


def verify_equivalence(
    session: FunctorSession,
    x_complexes: Sequence[Complex] = (),
    y_complexes: Sequence[Complex] = (),
    maps: Sequence[ChainMap] = (),
) -> EquivalenceReport:
    """Unité, counité, décalage, cônes et lois fonctorielles à homotopie près"""
    report = EquivalenceReport()
    if not x_complexes and not y_complexes:
        report.add("corpus", "corpus vide", True, vacuous=True)

    for k, c in enumerate(x_complexes):
        try:
            fc, theta = session.f_object(c)
        except RelHomException as exc:
            report.add("f_object", "F(C) est construit", False, complex=k, error=exc.error_code)
            continue
        report.add(
            "theta_left_quasi_iso",
            "Cone(θ_C) est y-acyclique à gauche",
            is_left_quasi_iso(session.y, theta),
            complex=k,
        )
        report.add("f_terms_in_y", "tous les termes de F(C) sont dans y", all_members(session.y, fc.terms), complex=k)
        try:
            unit = homotopy_inverse(session.unit(c))
            report.add(
                "unit",
                "C → G(F(C)) est une équivalence d'homotopie",
                unit is not None and unit.verify(),
                complex=k,
                **_equivalence_details(unit),
            )
            shifted = homotopy_inverse(session.shift_comparison(c))
            report.add(
                "shift",
                "F(C[1]) ≃ F(C)[1]",
                shifted is not None and shifted.verify(),
                complex=k,
                **_equivalence_details(shifted),
            )
            identity, _ = session.f_map(ChainMap.identity(c))
            report.add(
                "f_identity",
                "F(id) ≃ id",
                homotopy_between(identity, ChainMap.identity(fc)) is not None,
                complex=k,
            )
        except RelHomException as exc:
            report.add("unit", "C → G(F(C)) est une équivalence d'homotopie", False, complex=k, error=exc.error_code)

    for k, d in enumerate(y_complexes):
        try:
            counit = homotopy_inverse(session.counit(d))
        except RelHomException as exc:
            report.add("counit", "F(G(D)) → D est une équivalence d'homotopie", False, complex=k, error=exc.error_code)
            continue
        report.add(
            "counit",
            "F(G(D)) → D est une équivalence d'homotopie",
            counit is not None and counit.verify(),
            complex=k,
            **_equivalence_details(counit),
        )

    for k, f in enumerate(maps):
        try:
            ff, witness = session.f_map(f)
            _, theta_source = session.f_object(f.source)
            _, theta_target = session.f_object(f.target)
            square = ff @ theta_source - theta_target @ f
            report.add(
                "f_map_square",
                "F(f)∘θ_C ≃ θ_{C'}∘f",
                ff.is_chain_map() and witness.witnesses(square),
                map=k,
            )
            cone = homotopy_inverse(session.cone_comparison(f))
            report.add(
                "cone",
                "F(Cone f) ≃ Cone(F f)",
                cone is not None and cone.verify(),
                map=k,
                **_equivalence_details(cone),
            )
        except RelHomException as exc:
            report.add("f_map_square", "F(f)∘θ_C ≃ θ_{C'}∘f", False, map=k, error=exc.error_code)

    for k, (f, g) in enumerate(_composable_pairs(maps)):
        try:
            ff, _ = session.f_map(f)
            fg, _ = session.f_map(g)
            fgf, _ = session.f_map(g @ f)
            composed = homotopy_between(fgf, fg @ ff) is not None
        except RelHomException as exc:
            report.add("f_composition", "F(g∘f) ≃ F(g)∘F(f)", False, pair=k, error=exc.error_code)
            continue
        report.add("f_composition", "F(g∘f) ≃ F(g)∘F(f)", composed, pair=k)

    logger.log_check("equivalence", report.passed, x=session.x.name, y=session.y.name)
    return report


def _composable_pairs(maps: Sequence[ChainMap]) -> List[Tuple[ChainMap, ChainMap]]:
    return [(f, g) for f in maps for g in maps if g.source is f.target]
