"""
Paires équilibrées : vérification (BP1)/(BP2) sur un corpus de sondes,
coïncidence des complexes acycliques à droite et à gauche, isomorphisme
équilibré H^n(Hom(X•, N)) ≅ H^n(Hom(M, Y•)) et lemme du fer à cheval.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..algebra.homological import hom_space, span_rank
from ..algebra.modules import Module, ModuleMap, block_map, direct_sum, row_map
from ..algebra.solver import solve_from, solve_through
from ..approximation.approx import SubcatSpec, is_admissible, is_coadmissible
from ..approximation.resolution import (
    Coresolution,
    ResolutionOfObject,
    coresolution,
    coresolution_dim,
    resolution,
    resolution_dim,
)
from ..complexes.complex import ChainMap, Complex, is_acyclic
from ..core.config import settings
from ..core.exceptions import (
    FactorizationError,
    HorseshoeError,
    NotAdmissibleError,
    RelHomException,
)
from ..core.logger import get_logger
from ..linalg.exactlin import Matrix, kernel_basis
from ..models.schemas import BalancedReport
from ..totalization.quasi_bicomplex import lift_to_chain_map
from .acyclicity import is_left_acyclic, is_right_acyclic, left_acyclicity_defects, right_acyclicity_defects

logger = get_logger(__name__)


def _cut(r: Union[ResolutionOfObject, Coresolution]) -> List[int]:
    return [r.cut_degree] if r.truncated else []


def _window(report: BalancedReport, name: str, probe: int, degree: int, max_len: int) -> None:
    """Résolution coupée à la borne : entrée informative, jamais bloquante"""
    report.add(
        name,
        "vérification limitée à la fenêtre des degrés calculés",
        True,
        hard=False,
        probe=probe,
        cut_degree=degree,
        max_len=max_len,
    )


def check_balanced(
    x: SubcatSpec,
    y: SubcatSpec,
    probes: Sequence[Module],
    complexes: Sequence[Complex] = (),
    max_len: Optional[int] = None,
) -> BalancedReport:
    """(BP1), (BP2), admissibilité des deux côtés, acyclicité croisée et dimensions"""
    max_len = settings.resolution.max_len if max_len is None else max_len
    report = BalancedReport(x=x.name, y=y.name)

    left = is_admissible(x, probes)
    right = is_coadmissible(y, probes)
    report.extend(left, prefix="x.")
    report.extend(right, prefix="y.")
    report.x_admissible = left.admissible
    report.y_coadmissible = right.admissible
    report.add(
        "admissibility_agreement",
        "x admissible ⇔ y coadmissible",
        left.admissible == right.admissible,
        x=left.admissible,
        y=right.admissible,
    )

    bp1_ok = True
    resolutions: List[Optional[ResolutionOfObject]] = []
    for k, m in enumerate(probes):
        res = None
        try:
            res = resolution(x, m, max_len, truncate=True)
            defects = left_acyclicity_defects(y, res.augmented(), _cut(res))
        except NotAdmissibleError as exc:
            defects = [{"error": exc.error_code}]
        resolutions.append(res)
        bp1_ok &= report.add(
            "bp1",
            "Hom(X•→M, Y) acyclique pour toute x-résolution augmentée et tout Y de y",
            not defects,
            probe=k,
            defects=defects[:5],
        )
        if res is not None and res.truncated:
            _window(report, "bp1_window", k, res.cut_degree, max_len)

    bp2_ok = True
    coresolutions: List[Optional[Coresolution]] = []
    for k, m in enumerate(probes):
        cores = None
        try:
            cores = coresolution(y, m, max_len, truncate=True)
            defects = right_acyclicity_defects(x, cores.augmented(), _cut(cores))
        except NotAdmissibleError as exc:
            defects = [{"error": exc.error_code}]
        coresolutions.append(cores)
        bp2_ok &= report.add(
            "bp2",
            "Hom(X, M→Y•) acyclique pour toute y-corésolution augmentée et tout X de x",
            not defects,
            probe=k,
            defects=defects[:5],
        )
        if cores is not None and cores.truncated:
            _window(report, "bp2_window", k, cores.cut_degree, max_len)

    if not complexes:
        report.add("acyclicity_coincidence", "aucun complexe fourni", True, vacuous=True)
    for k, z in enumerate(complexes):
        r, l = is_right_acyclic(x, z), is_left_acyclic(y, z)
        report.add(
            "acyclicity_coincidence",
            "Z• x-acyclique à droite ⇔ Z• y-acyclique à gauche",
            r == l,
            complex=k,
            right=r,
            left=l,
        )

    x_dims = [resolution_dim(x, m, max_len) for m in probes]
    y_dims = [coresolution_dim(y, m, max_len) for m in probes]
    report.x_resolution_dim = None if None in x_dims else max(x_dims, default=0)
    report.y_coresolution_dim = None if None in y_dims else max(y_dims, default=0)
    balanced = left.admissible and right.admissible and bp1_ok and bp2_ok
    iso_count = settings.resolution.iso_probes
    for i, (m, res) in enumerate(zip(probes[:iso_count], resolutions)):
        for j, (n, cores) in enumerate(zip(probes[:iso_count], coresolutions)):
            if res is None or cores is None:
                continue
            rows = _iso_rows(res, cores, m, n)
            report.add(
                "balanced_hom_iso",
                "dim H^k(Hom(X•, N)) = dim H^k(Hom(M, Y•))",
                all(a == b for _, a, b in rows),
                hard=balanced,
                probes=[i, j],
                dims=[list(r) for r in rows],
            )
    if balanced:
        for i, m in enumerate(probes[:iso_count]):
            source = probes[(i + 1) % len(probes)]
            basis = hom_space(source, m)
            if not basis:
                continue
            try:
                rows = naturality_ranks(x, y, m, m, first=basis[0], max_len=max_len, truncate=True)
                passed, details = all(a == b for _, a, b in rows), {"ranks": [list(r) for r in rows]}
            except RelHomException as exc:
                passed, details = False, {"error": exc.error_code}
            report.add(
                "naturality",
                "Hom(f, Y•) et Hom(X•(f), N) induisent des rangs égaux en cohomologie",
                passed,
                probes=[(i + 1) % len(probes), i],
                **details,
            )
    report.add(
        "dimension_agreement",
        "max x-res.dim des sondes = max y-cores.dim des sondes",
        report.x_resolution_dim == report.y_coresolution_dim,
        hard=balanced,
        x=report.x_resolution_dim,
        y=report.y_coresolution_dim,
    )
    logger.log_check("balanced", report.passed, x=x.name, y=y.name, probes=len(probes))
    return report


def _flat_matrix(maps: List[ModuleMap], size: int, p: int) -> Matrix:
    if not maps:
        return Matrix.zeros(p, size, 0)
    return Matrix(p, np.array([f.flatten() for f in maps]).T, shape=(size, len(maps)))


def _cocycles(basis: List[ModuleMap], delta: Callable[[ModuleMap], ModuleMap], p: int) -> List[ModuleMap]:
    """Combinaisons de la base annulées par δ"""
    if not basis:
        return []
    images = [delta(h) for h in basis]
    size = len(images[0].flatten())
    if size == 0:
        return list(basis)
    k = kernel_basis(_flat_matrix(images, size, p))
    out = []
    for j in range(k.cols):
        total = basis[0].scale(0)
        for i, c in enumerate(k.column(j)):
            if int(c) % p:
                total = total + basis[i].scale(int(c) % p)
        out.append(total)
    return out


@dataclass
class _HomCochains:
    """Hom(X•, N) en degré k (= Hom(X^{−k}, N)) ou Hom(M, Y•) en degré k"""
    basis: Callable[[int], List[ModuleMap]]
    delta: Callable[[int, ModuleMap], ModuleMap]
    boundaries: Callable[[int], List[ModuleMap]]


def _hom_into(z: Complex, n: Module) -> _HomCochains:
    return _HomCochains(
        basis=lambda k: hom_space(z.term(-k), n),
        delta=lambda k, h: h @ z.diff(-k - 1),
        boundaries=lambda k: [h @ z.diff(-k) for h in hom_space(z.term(-k + 1), n)],
    )


def _hom_from(m: Module, z: Complex) -> _HomCochains:
    return _HomCochains(
        basis=lambda k: hom_space(m, z.term(k)),
        delta=lambda k, h: z.diff(k) @ h,
        boundaries=lambda k: [z.diff(k - 1) @ h for h in hom_space(m, z.term(k - 1))],
    )


def _cohomology_dim(c: _HomCochains, k: int, p: int) -> int:
    cocycles = _cocycles(c.basis(k), lambda h: c.delta(k, h), p)
    return span_rank(cocycles + c.boundaries(k)) - span_rank(c.boundaries(k))


def _induced_rank(
    source: _HomCochains, target: _HomCochains, apply: Callable[[ModuleMap], ModuleMap], k: int, p: int
) -> int:
    """Rang de l'application induite en cohomologie de degré k"""
    cocycles = _cocycles(source.basis(k), lambda h: source.delta(k, h), p)
    boundaries = target.boundaries(k)
    images = [apply(z) for z in cocycles]
    return span_rank(images + boundaries) - span_rank(boundaries)


def _iso_rows(
    res: ResolutionOfObject, cores: Coresolution, m: Module, n: Module, max_degree: Optional[int] = None
) -> List[Tuple[int, int, int]]:
    if max_degree is None:
        max_degree = max(res.length, cores.length) + 1
    # au bord coupé d'une fenêtre, la cohomologie n'est plus celle de la résolution entière
    cuts = [r.length - 1 for r in (res, cores) if r.truncated]
    max_degree = min([max_degree] + cuts)
    left = _hom_into(res.complex(), n)
    right = _hom_from(m, cores.complex())
    p = m.p
    return [(k, _cohomology_dim(left, k, p), _cohomology_dim(right, k, p)) for k in range(max_degree + 1)]


def balanced_hom_iso(
    x: SubcatSpec,
    y: SubcatSpec,
    m: Module,
    n: Module,
    max_degree: Optional[int] = None,
    max_len: Optional[int] = None,
    truncate: bool = False,
) -> List[Tuple[int, int, int]]:
    """
    (k, dim H^k(Hom(X•, N)), dim H^k(Hom(M, Y•))) pour 0 ≤ k ≤ max_degree ;
    avec truncate, les degrés s'arrêtent avant le bord coupé des fenêtres.
    """
    max_len = settings.resolution.max_len if max_len is None else max_len
    res = resolution(x, m, max_len, truncate=truncate)
    cores = coresolution(y, n, max_len, truncate=truncate)
    return _iso_rows(res, cores, m, n, max_degree)


def extend_to_cochain_map(cores_src: Coresolution, cores_tgt: Coresolution, f: ModuleMap) -> ChainMap:
    """Prolongement Y• → Y'• de f : N → N' : g⁰∘η = η'∘f puis g^k∘d^k = d'^k∘g^{k−1}"""
    src, tgt = cores_src.complex(), cores_tgt.complex()
    components: Dict[int, ModuleMap] = {}
    g = solve_from(cores_src.coaugmentation, cores_tgt.coaugmentation @ f)
    for k in range(cores_src.length + 1):
        if k > 0:
            g = solve_from(src.diff(k - 1), tgt.diff(k - 1) @ components[k - 1])
        if g is None:
            raise FactorizationError(
                "Prolongement impossible le long de la corésolution",
                error_code="EXTENSION_FAILED",
                context={"degree": k},
            )
        components[k] = g
    return ChainMap(src, tgt, components)


def naturality_ranks(
    x: SubcatSpec,
    y: SubcatSpec,
    m: Module,
    n: Module,
    first: Optional[ModuleMap] = None,
    second: Optional[ModuleMap] = None,
    max_degree: Optional[int] = None,
    max_len: Optional[int] = None,
    truncate: bool = False,
) -> List[Tuple[int, int, int]]:
    """
    Rangs des applications induites en cohomologie par f : M' → M (first) ou
    g : N → N' (second), mesurés des deux côtés de l'isomorphisme équilibré.
    """
    max_len = settings.resolution.max_len if max_len is None else max_len
    p = m.p
    res = resolution(x, m, max_len, truncate=truncate)
    cores = coresolution(y, n, max_len, truncate=truncate)
    used: List[Union[ResolutionOfObject, Coresolution]] = [res, cores]
    if first is not None:
        res_src = resolution(x, first.source, max_len, truncate=truncate)
        used.append(res_src)
        lift = lift_to_chain_map(res_src, res, first)
        left_src, left_tgt = _hom_into(res.complex(), n), _hom_into(res_src.complex(), n)
        right_src, right_tgt = _hom_from(m, cores.complex()), _hom_from(first.source, cores.complex())

        def left_apply(k: int, h: ModuleMap) -> ModuleMap:
            return h @ lift.component(-k)

        def right_apply(k: int, h: ModuleMap) -> ModuleMap:
            return h @ first

        top = max(res.length, res_src.length, cores.length) + 1
    elif second is not None:
        cores_tgt = coresolution(y, second.target, max_len, truncate=truncate)
        used.append(cores_tgt)
        ext = extend_to_cochain_map(cores, cores_tgt, second)
        left_src, left_tgt = _hom_into(res.complex(), n), _hom_into(res.complex(), second.target)
        right_src, right_tgt = _hom_from(m, cores.complex()), _hom_from(m, cores_tgt.complex())

        def left_apply(k: int, h: ModuleMap) -> ModuleMap:
            return second @ h

        def right_apply(k: int, h: ModuleMap) -> ModuleMap:
            return ext.component(k) @ h

        top = max(res.length, cores.length, cores_tgt.length) + 1
    else:
        raise ValueError("first ou second est requis")
    max_degree = top if max_degree is None else max_degree
    max_degree = min([max_degree] + [r.length - 1 for r in used if r.truncated])
    out = []
    for k in range(max_degree + 1):
        out.append((
            k,
            _induced_rank(left_src, left_tgt, lambda h: left_apply(k, h), k, p),
            _induced_rank(right_src, right_tgt, lambda h: right_apply(k, h), k, p),
        ))
    return out


@dataclass
class HorseshoeResult:
    """Résolutions de M', M, M'' et les morphismes ι : X'• → X•, π : X• → X''•"""
    left: ResolutionOfObject
    middle: ResolutionOfObject
    right: ResolutionOfObject
    inclusion: ChainMap
    projection: ChainMap

    def defects(self, mono: ModuleMap, epi: ModuleMap) -> List[str]:
        """Égalités matricielles du diagramme qui échouent"""
        out = []
        if not self.inclusion.is_chain_map():
            out.append("inclusion_chain_map")
        if not self.projection.is_chain_map():
            out.append("projection_chain_map")
        if not (self.middle.augmentation @ self.inclusion.component(0)).equals(mono @ self.left.augmentation):
            out.append("left_augmentation_square")
        if not (epi @ self.middle.augmentation).equals(self.right.augmentation @ self.projection.component(0)):
            out.append("right_augmentation_square")
        if not is_acyclic(self.middle.augmented()):
            out.append("middle_not_exact")
        if not is_right_acyclic(self.middle.subcat, self.middle.augmented()):
            out.append("middle_not_right_acyclic")
        for n in self.middle.complex().degrees:
            composite = self.projection.component(n) @ self.inclusion.component(n)
            if not composite.is_zero():
                out.append(f"row_{n}")
        return out


def _down(res: ResolutionOfObject, k: int) -> ModuleMap:
    """X^{−k} → X^{−k+1}, ou l'augmentation pour k = 0"""
    return res.augmentation if k == 0 else res.complex().diff(-k)


def horseshoe(
    x: SubcatSpec, mono: ModuleMap, epi: ModuleMap, max_len: Optional[int] = None
) -> HorseshoeResult:
    """
    Résolution du terme médian avec X^n = X'^n ⊕ X''^n et différentielle
    [[d', τ], [0, d'']], les τ étant obtenus par relèvements successifs.
    """
    max_len = settings.resolution.max_len if max_len is None else max_len
    exact = (
        mono.target.dims == epi.source.dims
        and mono.is_injective()
        and epi.is_surjective()
        and (epi @ mono).is_zero()
        and mono.source.total_dim + epi.target.total_dim == mono.target.total_dim
    )
    if not exact:
        raise HorseshoeError(
            "La suite donnée n'est pas exacte courte",
            error_code="NOT_SHORT_EXACT",
            context={"dims": [list(mono.source.dims), list(mono.target.dims), list(epi.target.dims)]},
        )
    left = resolution(x, mono.source, max_len, strategy="approximation")
    right = resolution(x, epi.target, max_len, strategy="approximation")
    length = max(left.length, right.length)
    algebra = mono.source.algebra
    sums = [
        direct_sum([left.complex().term(-k), right.complex().term(-k)], algebra=algebra, name=f"H{-k}")
        for k in range(length + 1)
    ]

    sigma = solve_through(epi, right.augmentation)
    if sigma is None:
        raise HorseshoeError(
            "L'augmentation de droite ne se relève pas : la suite n'est pas Hom(x, −)-exacte",
            error_code="HOM_EXACTNESS_FAILED",
            context={"step": 0},
        )
    augmentation = row_map(sums[0], mono.target, [mono @ left.augmentation, sigma])
    diffs = [augmentation]
    # τ_k : X''^{−k} → X'^{−k+1}
    previous_tau: Optional[ModuleMap] = None
    for k in range(1, length + 1):
        d_right = _down(right, k)
        if k == 1:
            tau = solve_through(mono @ left.augmentation, -(sigma @ d_right))
        else:
            tau = solve_through(_down(left, k - 1), -(previous_tau @ d_right))
        if tau is None:
            raise HorseshoeError(
                "Relèvement impossible : la suite n'est pas Hom(x, −)-exacte",
                error_code="HOM_EXACTNESS_FAILED",
                context={"step": k},
            )
        diffs.append(block_map(sums[k], sums[k - 1], {
            (0, 0): _down(left, k),
            (0, 1): tau,
            (1, 1): d_right,
        }))
        previous_tau = tau

    middle = ResolutionOfObject(
        x, mono.target, [s.module for s in sums], diffs, augmentation, strategy="horseshoe"
    )
    inclusion = ChainMap(
        left.complex(), middle.complex(),
        {-k: sums[k].injections[0] for k in range(length + 1)},
        validate=False,
    )
    projection = ChainMap(
        middle.complex(), right.complex(),
        {-k: sums[k].projections[1] for k in range(length + 1)},
        validate=False,
    )
    return HorseshoeResult(left, middle, right, inclusion, projection)
