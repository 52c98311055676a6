"""
Orchestration des vérifications appelées par la CLI : contrôles de base
(algèbre, complexes, approximations, résolutions), appartenance de
Gorenstein et démonstration de bout en bout sur la bibliothèque d'exemples.
"""
from dataclasses import dataclass, field
from datetime import datetime
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..algebra.homological import indecomposable_injectives, indecomposable_projectives, simple
from ..algebra.library import COMMUTATIVE_EXAMPLES, GORENSTEIN_EXAMPLES, get_example
from ..algebra.modules import Module, ModuleMap, dual_module
from ..algebra.quiver import Algebra
from ..approximation.approx import (
    SubcatSpec,
    all_members,
    injectives_subcat,
    left_approximation,
    projectives_subcat,
    right_approximation,
)
from ..approximation.resolution import coresolution, resolution
from ..balanced.acyclicity import is_left_acyclic, is_right_acyclic
from ..balanced.balanced import check_balanced
from ..compare.eta import build_dualizing, check_tensor_ginj, verify_eta_iso
from ..complexes.complex import ChainMap, Complex, cohomology_dims, is_acyclic, stalk
from ..complexes.homotopy import null_homotopy
from ..core.exceptions import (
    ComplexValidationError,
    ModuleValidationError,
    RelHomException,
    ResolutionBoundExceededError,
)
from ..core.logger import get_logger
from ..equivalence.functor import FunctorSession, verify_equivalence
from ..gorenstein.profile import (
    build_profile,
    check_proj_inj_restriction,
    is_gorenstein_injective,
    is_gorenstein_projective,
    profile_report,
)
from ..linalg.exactlin import Matrix, image_basis
from ..models.schemas import (
    AlgebraReport,
    ApproximationReport,
    CheckReport,
    ComplexReport,
    MembershipReport,
    ResolutionReport,
)
from ..totalization.lifting import verify_totalization
from ..totalization.quasi_bicomplex import required_width
from .corpus import CorpusBuilder, broken_pair, build_corpus
from .serialization import complex_to_schema

logger = get_logger(__name__)


def _total_action(m: Module, arrow: str) -> Matrix:
    """Action d'une flèche sur ⊕_v M_v"""
    a = m.algebra.quiver.arrow(arrow)
    return Matrix.block(m.p, m.dims, m.dims, [(a.target, a.source, m.action[arrow])])


def radical_layers(m: Module) -> List[int]:
    """Dimensions de rad^k M pour k = 0, 1, … jusqu'à la première nulle"""
    current = Matrix.identity(m.p, m.total_dim)
    layers = [current.cols]
    actions = [_total_action(m, a.name) for a in m.algebra.quiver.arrows]
    while current.cols and len(layers) <= m.total_dim + 1:
        current = image_basis(Matrix.hstack(m.p, [j @ current for j in actions], rows=m.total_dim))
        layers.append(current.cols)
    return layers


def algebra_check(algebra: Algebra) -> AlgebraReport:
    projectives = indecomposable_projectives(algebra)
    injectives = indecomposable_injectives(algebra)
    report = AlgebraReport(
        algebra=algebra.name,
        dimension=algebra.dim(),
        vertex_count=algebra.vertex_count,
        projective_dims=[list(p.dims) for p in projectives],
        injective_dims=[list(i.dims) for i in injectives],
    )
    report.add(
        "projective_dimension_sum",
        "Σ dim P(v) = dim A",
        sum(p.total_dim for p in projectives) == algebra.dim(),
    )
    report.add(
        "injective_dimension_sum",
        "Σ dim I(v) = dim A",
        sum(i.total_dim for i in injectives) == algebra.dim(),
    )
    regular_layers = [radical_layers(p) for p in projectives]
    nilpotent = all(len(layers) - 1 <= algebra.nilpotency_bound and layers[-1] == 0 for layers in regular_layers)
    report.add(
        "radical_nilpotent",
        "rad^N A = 0 pour la borne de nilpotence N",
        nilpotent,
        layers=regular_layers,
    )
    report.add(
        "opposite_involution",
        "(A^op)^op = A",
        algebra.opposite().opposite() is algebra,
    )
    report.add(
        "duality_involution",
        "D(D(P(v))) = P(v)",
        all(dual_module(dual_module(p)) is p for p in projectives),
    )
    logger.log_check("algebra", report.passed, algebra=algebra.name)
    return report


def complex_check(complexes: Sequence[Complex]) -> ComplexReport:
    report = ComplexReport()
    if not complexes:
        report.add("corpus", "aucun complexe", True, vacuous=True)
    for k, c in enumerate(complexes):
        linear = True
        for n, d in enumerate(c.diffs):
            try:
                ModuleMap(d.source, d.target, d.blocks)
            except ModuleValidationError:
                linear = False
                report.add("differential_linear", "d^n est un morphisme de modules", False, complex=k, degree=c.lo + n)
        if linear:
            report.add("differential_linear", "d^n est un morphisme de modules", True, complex=k)
        try:
            c.check()
            report.add("d_squared_zero", "d^{n+1}∘d^n = 0", True, complex=k)
        except ComplexValidationError as exc:
            report.add("d_squared_zero", "d^{n+1}∘d^n = 0", False, **{**exc.context, "complex": k})
            continue
        report.cohomology[c.name or str(k)] = {n: list(d) for n, d in cohomology_dims(c)}
    logger.log_check("complex", report.passed, complexes=len(complexes))
    return report


def approximation_check(x: SubcatSpec, modules: Sequence[Module], side: str = "right") -> ApproximationReport:
    report = ApproximationReport(subcategory=x.name, side=side)
    for k, m in enumerate(modules):
        try:
            if side == "right":
                approximation = right_approximation(x, m)
                exact = approximation.is_epic()
            else:
                approximation = left_approximation(x, m)
                exact = approximation.is_monic()
        except RelHomException as exc:
            report.add("approximation", "Hom(x, θ) est surjectif", False, module=k, error=exc.error_code)
            continue
        report.add(
            "approximation",
            "Hom(x, θ) est surjectif",
            True,
            module=k,
            object_dims=list(approximation.object.dims),
        )
        report.add(
            "epic" if side == "right" else "monic",
            "θ est un épimorphisme" if side == "right" else "θ est un monomorphisme",
            exact,
            hard=False,
            module=k,
        )
    return report


def resolution_check(
    x: SubcatSpec,
    modules: Sequence[Module],
    max_len: Optional[int] = None,
    co: bool = False,
) -> ResolutionReport:
    report = ResolutionReport(subcategory=x.name, coresolution=co)
    for k, m in enumerate(modules):
        label = m.name or str(k)
        try:
            res = coresolution(x, m, max_len) if co else resolution(x, m, max_len)
        except RelHomException as exc:
            report.add("resolution", "la (co)résolution existe sous la borne", False, module=k, error=exc.error_code)
            continue
        report.terms[label] = [list(t.dims) for t in res.terms]
        augmented = res.augmented()
        report.complexes[label] = complex_to_schema(augmented)
        report.add(
            "terms_in_subcategory",
            "tous les termes sont dans la sous-catégorie",
            all_members(x, res.terms),
            module=k,
        )
        report.add("augmented_exact", "le complexe augmenté est exact", is_acyclic(augmented), module=k)
        if co:
            acyclic = is_left_acyclic(x, augmented)
            report.add("left_acyclic", "Hom(augmenté, y) est acyclique", acyclic, module=k, length=res.length)
        else:
            acyclic = is_right_acyclic(x, augmented)
            report.add("right_acyclic", "Hom(x, augmenté) est acyclique", acyclic, module=k, length=res.length)
    return report


def membership_check(modules: Sequence[Module], injective: bool = False, window: Optional[int] = None) -> MembershipReport:
    report = MembershipReport()
    test = is_gorenstein_injective if injective else is_gorenstein_projective
    name = "gorenstein_injective" if injective else "gorenstein_projective"
    for k, m in enumerate(modules):
        report.add(name, f"{m.name or k} passe le test de fenêtre complète", test(m, window), module=k)
    return report


def negative_controls(p: int = 2) -> CheckReport:
    """Trois contrôles qui doivent échouer ; le rapport réussit s'ils échouent"""
    algebra = get_example("a2", p)
    report = CheckReport(kind="negative_controls")
    x, y = broken_pair(algebra)
    broken = check_balanced(x, y, CorpusBuilder(algebra).probes(count=0))
    report.add("broken_pair_fails", "(Proj, Proj) sur A2 n'est pas une paire équilibrée", not broken.passed)
    s0 = simple(algebra, 0)
    report.add("non_gp_module_fails", "S0 sur A2 n'est pas Gorenstein projectif", not is_gorenstein_projective(s0))
    c = stalk(s0, 0)
    report.add(
        "identity_not_null_homotopic",
        "l'identité d'un complexe de cohomologie non nulle n'est pas nulle à homotopie près",
        null_homotopy(ChainMap.identity(c)) is None,
    )
    return report


@dataclass
class DemoRunner:
    """
    Démonstration complète : chaque algèbre de Gorenstein de la bibliothèque
    (paires (Proj, Inj) et (GProj, GInj)), la comparaison η sur les
    algèbres commutatives et les contrôles négatifs.
    """
    p: int
    seed: int
    count: int = 3
    width: Optional[int] = None
    max_len: Optional[int] = None
    reports: List[Tuple[str, CheckReport]] = field(default_factory=list)
    timing: Dict[str, float] = field(default_factory=dict)

    def _stage(self, label: str, build: Callable[[], CheckReport]) -> CheckReport:
        start_time = datetime.now()
        try:
            report = build()
        except RelHomException as exc:
            report = CheckReport(kind="error")
            report.add("stage", "l'étape se termine sans erreur", False, error=exc.error_code, message=exc.message)
        report.notes.append(label)
        self.timing[label] = round((datetime.now() - start_time).total_seconds(), 3)
        self.reports.append((label, report))
        logger.log_check(label, report.passed)
        return report

    def _pair(self, algebra: Algebra, pair: str, x: SubcatSpec, y: SubcatSpec) -> None:
        corpus = build_corpus(algebra, x, self.seed, self.count)
        y_complexes = CorpusBuilder(algebra, self.seed + 1).subcat_complexes(y, self.count)
        label = f"{algebra.name}/{pair}"
        self._stage(
            f"{label}/balanced",
            lambda: check_balanced(x, y, corpus.probes, corpus.complexes, max_len=self.max_len),
        )
        self._stage(f"{label}/totalization", lambda: self._totalization(algebra, x, y, corpus.complexes))
        session = FunctorSession(x, y, self.width)
        self._stage(
            f"{label}/equivalence",
            lambda: verify_equivalence(session, corpus.complexes, y_complexes, corpus.maps),
        )

    def _totalization(self, algebra: Algebra, x: SubcatSpec, y: SubcatSpec, complexes: Sequence[Complex]) -> CheckReport:
        """x-complexes du corpus, suites exactes courtes et complexes de sondes"""
        builder = CorpusBuilder(algebra, self.seed)
        probes = builder.probes(count=0)
        pairs = list(zip(probes, probes[1:]))[:2]
        extra = builder.acyclic_complexes()
        extra += [builder.two_term(a, b) for a, b in pairs] + [builder.three_term(a, b) for a, b in pairs]
        report = CheckReport(kind="totalization_corpus")
        for k, c in enumerate(list(complexes) + extra):
            try:
                required_width(x, c, self.max_len)
            except ResolutionBoundExceededError as exc:
                report.add("width_within_bound", "les termes ont une x-résolution finie", True,
                           hard=False, complex=k, skipped=True, **exc.context)
                continue
            maps = tuple(builder.cocycle_maps(x, c))
            sub = verify_totalization(x, c, self.width, y, maps)
            report.extend(sub, prefix=f"{k}.")
            report.add("width_within_bound", "les termes ont une x-résolution finie", True,
                       hard=False, complex=k, width=sub.width)
        return report

    def _gorenstein(self, name: str) -> None:
        algebra = get_example(name, self.p)
        self._stage(f"{algebra.name}/algebra", lambda: algebra_check(algebra))
        profile = build_profile(algebra)
        builder = CorpusBuilder(algebra, self.seed)
        self._stage(f"{algebra.name}/profile", lambda: profile_report(profile, builder.probes()))
        self._pair(algebra, "proj_inj", projectives_subcat(algebra), injectives_subcat(algebra))
        self._pair(algebra, "gproj_ginj", profile.gproj, profile.ginj)
        proj = build_corpus(algebra, projectives_subcat(algebra), self.seed, self.count).complexes
        inj = builder.subcat_complexes(injectives_subcat(algebra), self.count)
        self._stage(
            f"{algebra.name}/proj_inj_restriction",
            lambda: check_proj_inj_restriction(profile, proj, inj),
        )

    def _commutative(self, name: str) -> None:
        algebra = get_example(name, self.p)
        profile = build_profile(algebra)
        self._stage(f"{algebra.name}/tensor_ginj", lambda: check_tensor_ginj(profile))
        session = FunctorSession(profile.gproj, profile.ginj, self.width)
        dualizing = build_dualizing(algebra)
        corpus = build_corpus(algebra, projectives_subcat(algebra), self.seed, self.count)
        self._stage(
            f"{algebra.name}/eta",
            lambda: verify_eta_iso(session, dualizing, corpus.complexes, corpus.maps),
        )

    def run(self) -> List[Tuple[str, CheckReport]]:
        for name in GORENSTEIN_EXAMPLES:
            self._gorenstein(name)
        for name in COMMUTATIVE_EXAMPLES:
            self._commutative(name)
        self._stage("negative_controls", lambda: negative_controls(self.p))
        return self.reports
