"""
Triplets de cotorsion (x, z, y) vérifiés sur les générateurs et un corpus :
orthogonalité Ext¹, caractère héréditaire, suites spéciales, puis paire
équilibrée (x, y).
"""
from typing import List, Optional, Sequence, Tuple

from ..algebra.homological import ext_dim
from ..algebra.modules import Module, ModuleMap, cokernel, dual_map, dual_module, kernel
from ..approximation.approx import Approximation, SubcatSpec, right_approximation
from ..core.config import settings
from ..core.logger import get_logger
from ..models.schemas import CotorsionReport
from .balanced import check_balanced

logger = get_logger(__name__)


def _ext_defects(
    sources: Sequence[Module], targets: Sequence[Module], degrees: range
) -> List[Tuple[int, int, int, int]]:
    """(i, j, degré, dimension) pour chaque Ext^degré(sources[i], targets[j]) ≠ 0"""
    out = []
    for i, a in enumerate(sources):
        for j, b in enumerate(targets):
            for k in degrees:
                d = ext_dim(a, b, k, degrees[-1])
                if d:
                    out.append((i, j, k, d))
    return out


def pruned_approximation(x: SubcatSpec, m: Module) -> Approximation:
    """Approximation à droite réduite aux facteurs utiles, certifiée"""
    return right_approximation(x, m, prune=True)


def special_precover(x: SubcatSpec, m: Module) -> Tuple[Approximation, Module]:
    """0 → K → X → M → 0 à partir de l'approximation élaguée"""
    approximation = pruned_approximation(x, m)
    return approximation, kernel(approximation.theta)[0]


def special_preenvelope(y: SubcatSpec, m: Module) -> Tuple[ModuleMap, Module]:
    """0 → M → Y → C → 0, dual d'une approximation élaguée sur l'algèbre opposée"""
    approximation = pruned_approximation(y.dual(), dual_module(m))
    theta = dual_map(approximation.theta)
    return theta, cokernel(theta)[0]


def check_cotorsion_triple(
    x: SubcatSpec,
    z: SubcatSpec,
    y: SubcatSpec,
    probes: Sequence[Module],
    ext_bound: Optional[int] = None,
    max_len: Optional[int] = None,
) -> CotorsionReport:
    algebra = x.algebra
    if ext_bound is None:
        ext_bound = settings.ext_bound_for(algebra.nilpotency_bound, algebra.vertex_count)
    report = CotorsionReport()

    defects = _ext_defects(x.generators, z.generators, range(1, 2))
    report.add("ext1_x_z", "Ext¹(x, z) = 0 sur les générateurs", not defects, defects=[list(d) for d in defects])
    defects = _ext_defects(z.generators, y.generators, range(1, 2))
    report.add("ext1_z_y", "Ext¹(z, y) = 0 sur les générateurs", not defects, defects=[list(d) for d in defects])
    degrees = range(1, ext_bound + 1)
    defects = _ext_defects(x.generators, z.generators, degrees) + _ext_defects(z.generators, y.generators, degrees)
    report.add(
        "hereditary",
        "Ext^i(x, z) = Ext^i(z, y) = 0 pour 1 ≤ i ≤ borne",
        not defects,
        bound=ext_bound,
        defects=[list(d) for d in defects[:10]],
    )

    report.add(
        "x_contains_projectives",
        "x contient tout projectif indécomposable",
        x.contains_projectives(),
    )
    report.add(
        "y_contains_injectives",
        "y contient tout injectif indécomposable",
        y.contains_injectives(),
    )

    for k, m in enumerate(probes):
        _, kernel_module = special_precover(x, m)
        found = not _ext_defects(x.generators, [kernel_module], range(1, 2))
        report.add(
            "special_precover",
            "0 → K → X → M → 0 avec X ∈ x et Ext¹(x, K) = 0",
            found,
            hard=False,
            probe=k,
            evidence="corpus",
        )
        _, cokernel_module = special_preenvelope(y, m)
        found = not _ext_defects([cokernel_module], y.generators, range(1, 2))
        report.add(
            "special_preenvelope",
            "0 → M → Y → C → 0 avec Y ∈ y et Ext¹(C, y) = 0",
            found,
            hard=False,
            probe=k,
            evidence="corpus",
        )

    report.extend(check_balanced(x, y, probes, max_len=max_len), prefix="balanced.")
    logger.log_check("cotorsion_triple", report.passed, x=x.name, z=z.name, y=y.name)
    return report
