"""
Profil de Gorenstein d'une algèbre de dimension finie : dimension de
Gorenstein, générateurs des modules Gorenstein projectifs et injectifs,
sous-catégorie des modules de dimension projective finie, puis la
restriction de F aux complexes de projectifs.
"""
from dataclasses import dataclass
from datetime import datetime
from typing import List, Optional, Sequence, Tuple

from ..algebra.homological import (
    cosyzygy,
    ext_dim,
    indecomposable_injectives,
    indecomposable_projectives,
    injective_coresolution_maps,
    injective_dimension,
    projective_dimension,
    projective_resolution_maps,
    regular_module,
    simples,
    syzygy,
)
from ..algebra.modules import Module, ModuleMap, cokernel, dual_module
from ..algebra.quiver import Algebra
from ..approximation.approx import (
    SubcatSpec,
    all_members,
    injectives_subcat,
    left_approximation,
    membership,
    projectives_subcat,
)
from ..approximation.resolution import coresolution_dim, resolution_dim
from ..balanced.acyclicity import hom_cohomology_into, is_right_acyclic
from ..balanced.cotorsion import check_cotorsion_triple
from ..complexes.complex import Complex, cohomology_dims
from ..core.config import settings
from ..core.exceptions import GorensteinError, RelHomException
from ..core.logger import get_logger
from ..equivalence.functor import FunctorSession
from ..models.schemas import GorensteinProfileReport, ProjInjRestrictionReport

logger = get_logger(__name__)


def gorenstein_dimension(algebra: Algebra, bound: Optional[int] = None) -> Optional[int]:
    """max(id ₐA, id A_A), None au-delà de la borne"""
    bound = settings.gorenstein.bound if bound is None else bound
    left = injective_dimension(regular_module(algebra), bound)
    right = injective_dimension(regular_module(algebra.opposite()), bound)
    if left is None or right is None:
        return None
    return max(left, right)


def _complete_window(m: Module, window: int) -> Tuple[Complex, bool, bool]:
    """
    ⋯ → P_1 → P_0 → P^0 → P^1 → ⋯ avec Z⁰ = M : couvertures projectives à
    gauche, approximations à gauche par les projectifs à droite. Renvoie le
    complexe et, pour chaque bord, s'il est atteint (noyau ou conoyau nul).
    """
    algebra = m.algebra
    proj = projectives_subcat(algebra)
    res_terms, res_diffs = projective_resolution_maps(m, window)
    left_complete = len(res_terms) <= window

    co_terms: List[Module] = []
    co_diffs: List[ModuleMap] = []
    current: Module = m
    projection: Optional[ModuleMap] = None
    right_complete = False
    for _ in range(window):
        if current.is_zero():
            right_complete = True
            break
        theta = left_approximation(proj, current, certify=False).theta
        if not theta.is_injective():
            return Complex(algebra, 0, [], validate=False), False, False
        co_terms.append(theta.target)
        co_diffs.append(theta if projection is None else theta @ projection)
        current, projection = cokernel(theta)
    else:
        right_complete = current.is_zero()

    # P^{−1−k} = P_k, d^{−1} = (M → P^0)∘(P_0 → M)
    terms = list(reversed(res_terms)) + co_terms
    diffs = list(reversed(res_diffs[1:]))
    if res_terms and co_terms:
        diffs.append(co_diffs[0] @ res_diffs[0])
    elif res_terms or co_terms:
        # M = 0 d'un côté seulement : pas de raccord
        return Complex(algebra, 0, [], validate=False), False, False
    diffs += co_diffs[1:]
    lo = -len(res_terms)
    return Complex(algebra, lo, terms, diffs, name=f"tot({m.name})", validate=False), left_complete, right_complete


def is_gorenstein_projective(m: Module, window: Optional[int] = None) -> bool:
    """
    Fenêtre de résolution complète : exacte et Hom(−, P)-exacte pour tout
    projectif indécomposable P, bords tronqués exclus.
    """
    if m.is_zero():
        return True
    if window is None:
        window = settings.gorenstein.window_extra + 2 * settings.gorenstein.bound
    c, left_complete, right_complete = _complete_window(m, window)
    if not c.terms:
        return False
    first = c.lo if left_complete else c.lo + 1
    last = c.hi if right_complete else c.hi - 1
    interior = range(first, last + 1)
    for n, dims in cohomology_dims(c):
        if n in interior and any(dims):
            return False
    for p in indecomposable_projectives(m.algebra):
        dims = hom_cohomology_into(c, p)
        if any(dims.get(-n, 0) for n in interior):
            return False
    return True


def is_gorenstein_injective(m: Module, window: Optional[int] = None) -> bool:
    """D(M) Gorenstein projectif sur l'algèbre opposée"""
    return is_gorenstein_projective(dual_module(m), window)


def _distinct(modules: Sequence[Module]) -> List[Module]:
    """Retire les modules nuls et les répétitions à isomorphisme près"""
    out: List[Module] = []
    for m in modules:
        if m.is_zero():
            continue
        if any(m.dims == n.dims and membership(SubcatSpec([n]), m) and membership(SubcatSpec([m]), n) for n in out):
            continue
        out.append(m)
    return out


def gproj_generators(algebra: Algebra, d: int, window: Optional[int] = None) -> SubcatSpec:
    """Projectifs indécomposables ∪ Ω^d(simples), chacun validé"""
    candidates = _distinct(indecomposable_projectives(algebra) + [syzygy(s, d) for s in simples(algebra)])
    for k, g in enumerate(candidates):
        if not is_gorenstein_projective(g, window):
            raise GorensteinError(
                "Un générateur candidat n'est pas Gorenstein projectif : dimension sous-estimée",
                error_code="GENERATOR_NOT_GP",
                context={"candidate": k, "dims": list(g.dims), "dimension": d},
            )
    return SubcatSpec(candidates, name="GProj")


def ginj_generators(algebra: Algebra, d: int, window: Optional[int] = None) -> SubcatSpec:
    """Duaux des générateurs Gorenstein projectifs de l'algèbre opposée"""
    dual = gproj_generators(algebra.opposite(), d, window)
    return SubcatSpec([dual_module(g) for g in dual.generators], name="GInj")


def finite_dimension_generators(algebra: Algebra, d: int) -> SubcatSpec:
    """Projectifs, injectifs, puis syzygies et cosyzygies de simples de dimension projective ≤ d"""
    candidates: List[Module] = []
    for s in simples(algebra):
        for k in range(d + 1):
            candidates.append(syzygy(s, k))
            candidates.append(cosyzygy(s, k))
    finite = [m for m in candidates if projective_dimension(m, d) is not None]
    generators = _distinct(indecomposable_projectives(algebra) + indecomposable_injectives(algebra) + finite)
    return SubcatSpec(generators, name="L")


@dataclass
class GorensteinProfile:
    algebra: Algebra
    dimension: int
    gproj: SubcatSpec
    ginj: SubcatSpec
    finite: SubcatSpec
    window: int


def build_profile(algebra: Algebra, bound: Optional[int] = None, window: Optional[int] = None) -> GorensteinProfile:
    start_time = datetime.now()
    bound = settings.gorenstein.bound if bound is None else bound
    d = gorenstein_dimension(algebra, bound)
    if d is None:
        raise GorensteinError(
            "Dimension injective du module régulier au-delà de la borne",
            error_code="DIMENSION_EXCEEDS_BOUND",
            context={"algebra": algebra.name, "bound": bound},
        )
    if window is None:
        window = 2 * d + settings.gorenstein.window_extra
    profile = GorensteinProfile(
        algebra,
        d,
        gproj_generators(algebra, d, window),
        ginj_generators(algebra, d, window),
        finite_dimension_generators(algebra, d),
        window,
    )
    logger.log_performance(
        "build_profile",
        (datetime.now() - start_time).total_seconds(),
        algebra=algebra.name,
        dimension=d,
        gproj=len(profile.gproj.generators),
    )
    return profile


def profile_report(profile: GorensteinProfile, probes: Sequence[Module] = ()) -> GorensteinProfileReport:
    """Validation des générateurs, annulations d'Ext, triplet de cotorsion et dimensions"""
    algebra = profile.algebra
    d = profile.dimension
    report = GorensteinProfileReport(
        algebra=algebra.name,
        dimension=d,
        gproj=[list(g.dims) for g in profile.gproj.generators],
        ginj=[list(g.dims) for g in profile.ginj.generators],
        finite_dimension_generators=[list(g.dims) for g in profile.finite.generators],
    )
    if d == 0:
        report.notes.append("algèbre auto-injective : tout module est Gorenstein projectif")

    for k, g in enumerate(profile.gproj.generators):
        report.add(
            "gproj_generator",
            "le générateur admet une fenêtre de résolution complète",
            is_gorenstein_projective(g, profile.window),
            generator=k,
        )
    for k, g in enumerate(profile.ginj.generators):
        report.add(
            "ginj_generator",
            "le dual du générateur admet une fenêtre de résolution complète",
            is_gorenstein_injective(g, profile.window),
            generator=k,
        )

    bound = settings.gorenstein.bound
    defects = [
        [i, j, k]
        for i, g in enumerate(profile.gproj.generators)
        for j, p in enumerate(indecomposable_projectives(algebra))
        for k in range(1, bound + 1)
        if ext_dim(g, p, k, bound)
    ]
    report.add(
        "gproj_ext_projective",
        "Ext^i(G, P) = 0 pour 1 ≤ i ≤ borne, G Gorenstein projectif, P projectif",
        not defects,
        defects=defects[:10],
    )

    proj_res = [
        is_right_acyclic(profile.gproj, _augmented_injective_coresolution(p))
        for p in indecomposable_projectives(algebra)
    ]
    report.add(
        "injective_coresolution_gproj_acyclic",
        "la corésolution injective augmentée de chaque projectif est GProj-acyclique à droite",
        all(proj_res),
        per_projective=proj_res,
    )

    probes = list(probes) or _default_probes(algebra, d)
    report.extend(
        check_cotorsion_triple(profile.gproj, profile.finite, profile.ginj, probes),
        prefix="cotorsion.",
    )
    bound_len = max(d + 1, settings.resolution.max_len)
    res_dims = [resolution_dim(profile.gproj, m, bound_len) for m in probes]
    cores_dims = [coresolution_dim(profile.ginj, m, bound_len) for m in probes]
    res_max = None if None in res_dims else max(res_dims, default=0)
    cores_max = None if None in cores_dims else max(cores_dims, default=0)
    report.add(
        "resolution_dimensions",
        "GProj-res.dim du corpus = dimension de Gorenstein = GInj-cores.dim du corpus",
        res_max == d == cores_max,
        gproj_resolution_dim=res_max,
        ginj_coresolution_dim=cores_max,
        dimension=d,
    )
    logger.log_check("gorenstein_profile", report.passed, algebra=algebra.name, dimension=d)
    return report


def _augmented_injective_coresolution(m: Module) -> Complex:
    """0 → M → I^0 → ⋯, M en degré −1"""
    terms, diffs = injective_coresolution_maps(m, settings.gorenstein.bound + 1)
    return Complex(m.algebra, -1, [m] + terms, diffs, name=f"inj({m.name})", validate=False)


def _default_probes(algebra: Algebra, d: int) -> List[Module]:
    modules = simples(algebra) + indecomposable_projectives(algebra) + indecomposable_injectives(algebra)
    modules += [syzygy(s, k) for s in simples(algebra) for k in range(1, d + 1)]
    return _distinct(modules)


def check_proj_inj_restriction(
    profile: GorensteinProfile,
    proj_complexes: Sequence[Complex] = (),
    inj_complexes: Sequence[Complex] = (),
    session: Optional[FunctorSession] = None,
) -> ProjInjRestrictionReport:
    """F envoie les complexes de projectifs sur des complexes d'injectifs, G inversement"""
    algebra = profile.algebra
    session = session or FunctorSession(profile.gproj, profile.ginj)
    proj = projectives_subcat(algebra)
    inj = injectives_subcat(algebra)
    report = ProjInjRestrictionReport()
    if not proj_complexes and not inj_complexes:
        report.add("corpus", "corpus vide", True, vacuous=True)
    for k, c in enumerate(proj_complexes):
        if not all_members(proj, c.terms):
            report.add("input_projective", "le complexe d'entrée est formé de projectifs", False, complex=k)
            continue
        try:
            fc, _ = session.f_object(c)
            ok = all_members(inj, fc.terms)
            dims = {n: list(fc.term(n).dims) for n in fc.degrees}
        except RelHomException as exc:
            ok, dims = False, {"error": exc.error_code}
        report.add(
            "f_terms_injective",
            "tous les termes de F(P•) sont injectifs",
            ok,
            complex=k,
            terms=dims,
        )
    for k, c in enumerate(inj_complexes):
        if not all_members(inj, c.terms):
            report.add("input_injective", "le complexe d'entrée est formé d'injectifs", False, complex=k)
            continue
        try:
            gc, _ = session.g_object(c)
            ok = all_members(proj, gc.terms)
        except RelHomException as exc:
            ok = False
            logger.warning("G(I•) impossible", error_code=exc.error_code, context=exc.context)
        report.add("g_terms_projective", "tous les termes de G(I•) sont projectifs", ok, complex=k)
    logger.log_check("proj_inj_restriction", report.passed, algebra=algebra.name)
    return report
