"""
Espaces Hom, projectifs et injectifs indécomposables, couvertures et
enveloppes, syzygies et calcul de Ext.
"""
from datetime import datetime
from typing import List, Optional, Tuple

import numpy as np

from ..core.config import settings
from ..core.exceptions import ResolutionBoundExceededError
from ..core.logger import get_logger
from ..linalg.exactlin import Matrix, annihilator, kernel_basis, rank, right_inverse
from .modules import (
    Module,
    ModuleMap,
    cokernel,
    direct_sum,
    dual_map,
    dual_module,
    kernel,
)
from .quiver import Algebra

logger = get_logger(__name__)


def hom_space(m: Module, n: Module) -> List[ModuleMap]:
    """
    Base de Hom(m, n) : noyau du système des carrés commutatifs
    X_w·M(a) − N(a)·X_u = 0, inconnues X_v vectorisées ligne par ligne.
    """
    algebra = m.algebra
    key = (id(m), id(n))
    cached = algebra.hom_cache.get(key)
    if cached is not None:
        return cached[2]

    # Hom(⊕ M_i, N) = ⊕ Hom(M_i, N), idem pour le second argument
    if m.decomposition is not None:
        parts = m.decomposition
        basis = [h @ q for s, q in zip(parts.summands, parts.projections) for h in hom_space(s, n)]
    elif n.decomposition is not None:
        parts = n.decomposition
        basis = [i @ h for s, i in zip(parts.summands, parts.injections) for h in hom_space(m, s)]
    else:
        basis = _hom_basis(m, n)
    algebra.hom_cache[key] = (m, n, basis)
    return basis


def _hom_basis(m: Module, n: Module) -> List[ModuleMap]:
    """Noyau du système des carrés commutatifs, rempli flèche par flèche"""
    algebra = m.algebra
    nv = algebra.vertex_count
    sizes = [n.dims[v] * m.dims[v] for v in range(nv)]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = int(offsets[-1])
    heights = [n.dims[a.target] * m.dims[a.source] for a in algebra.quiver.arrows]
    constraints = np.zeros((sum(heights), total), dtype=np.int64)

    top = 0
    for arrow, height in zip(algebra.quiver.arrows, heights):
        u, w = arrow.source, arrow.target
        n_w, m_u, m_w, n_u = n.dims[w], m.dims[u], m.dims[w], n.dims[u]
        # ligne (r, c) de X_w·M(a) − N(a)·X_u, X_v[r, c] en offsets[v] + r·m_v + c
        m_t = m.action[arrow.name].array.T
        for r in range(n_w):
            left = offsets[w] + r * m_w
            constraints[top + r * m_u:top + (r + 1) * m_u, left:left + m_w] += m_t
        n_a = n.action[arrow.name].array
        for c in range(m_u):
            rows = top + np.arange(n_w) * m_u + c
            cols = offsets[u] + np.arange(n_u) * m_u + c
            constraints[np.ix_(rows, cols)] -= n_a
        top += height

    basis_vectors = kernel_basis(Matrix(m.p, constraints, shape=constraints.shape))
    return [
        ModuleMap.from_flat(m, n, basis_vectors.column(j))
        for j in range(basis_vectors.cols)
    ]


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_space(m, n))


def projective(algebra: Algebra, v: int) -> Module:
    """P(v) = e_v·A : chemins partant de v, les flèches agissent à droite"""
    cache = _module_cache(algebra)
    key = ("P", v)
    if key in cache:
        return cache[key]
    p = algebra.p
    nv = algebra.vertex_count
    dims = [algebra.dim(v, w) for w in range(nv)]
    action = {}
    for arrow in algebra.quiver.arrows:
        w, w2 = arrow.source, arrow.target
        mat = np.zeros((dims[w2], dims[w]), dtype=np.int64)
        for j, path in enumerate(algebra.basis.get((v, w), [])):
            _, coords = algebra.reduce(v, path + (arrow.name,))
            mat[:, j] = coords
        action[arrow.name] = Matrix(p, mat, shape=(dims[w2], dims[w]))
    module = Module(algebra, dims, action, name=f"P{v}")
    cache[key] = module
    return module


def simple(algebra: Algebra, v: int) -> Module:
    cache = _module_cache(algebra)
    key = ("S", v)
    if key not in cache:
        dims = [1 if w == v else 0 for w in range(algebra.vertex_count)]
        cache[key] = Module(algebra, dims, name=f"S{v}")
    return cache[key]


def injective(algebra: Algebra, v: int) -> Module:
    """I(v) = D(P^op(v))"""
    cache = _module_cache(algebra)
    key = ("I", v)
    if key not in cache:
        module = dual_module(projective(algebra.opposite(), v))
        module.name = f"I{v}"
        cache[key] = module
    return cache[key]


def _module_cache(algebra: Algebra) -> dict:
    if not hasattr(algebra, "_standard_modules"):
        algebra._standard_modules = {}
    return algebra._standard_modules


def indecomposable_projectives(algebra: Algebra) -> List[Module]:
    return [projective(algebra, v) for v in range(algebra.vertex_count)]


def indecomposable_injectives(algebra: Algebra) -> List[Module]:
    return [injective(algebra, v) for v in range(algebra.vertex_count)]


def simples(algebra: Algebra) -> List[Module]:
    return [simple(algebra, v) for v in range(algebra.vertex_count)]


def regular_module(algebra: Algebra) -> Module:
    """Module régulier à gauche ⊕ P(v)"""
    return direct_sum(indecomposable_projectives(algebra), name="A").module


def radical_matrix(m: Module, v: int) -> Matrix:
    """Colonnes engendrant rad(M)_v = Σ im M(a), a arrivant en v"""
    blocks = [m.action[a.name] for a in m.algebra.quiver.arrows if a.target == v]
    return Matrix.hstack(m.p, blocks, rows=m.dims[v])


def top_dims(m: Module) -> List[int]:
    return [m.dims[v] - rank(radical_matrix(m, v)) for v in range(m.algebra.vertex_count)]


def socle_dims(m: Module) -> List[int]:
    return top_dims(dual_module(m))


def projective_cover(m: Module) -> ModuleMap:
    """
    Épi minimal P → m, P = ⊕ P(v)^{dim top(m)_v} ; chaque copie de P(v)
    envoie e_v sur un relèvement d'un vecteur de base de top(m)_v.
    """
    algebra = m.algebra
    p = m.p
    summands: List[Module] = []
    generators: List[Tuple[int, np.ndarray]] = []
    for v in range(algebra.vertex_count):
        q = annihilator(radical_matrix(m, v))
        if q.rows == 0:
            continue
        lifts = right_inverse(q)
        for j in range(lifts.cols):
            summands.append(projective(algebra, v))
            generators.append((v, lifts.column(j)))
    cover = direct_sum(summands, algebra=algebra)
    maps = []
    for (v, vec), pv in zip(generators, summands):
        blocks = []
        for w in range(algebra.vertex_count):
            cols = [m.path_matrix(path, vertex=v).array @ vec for path in algebra.basis.get((v, w), [])]
            if cols:
                blocks.append(Matrix(p, np.array(cols).T, shape=(m.dims[w], len(cols))))
            else:
                blocks.append(Matrix.zeros(p, m.dims[w], 0))
        maps.append(ModuleMap(pv, m, blocks, validate=False))
    blocks = []
    for w in range(algebra.vertex_count):
        blocks.append(Matrix.hstack(p, [f.blocks[w] for f in maps], rows=m.dims[w]))
    return ModuleMap(cover.module, m, blocks)


def injective_envelope(m: Module) -> ModuleMap:
    """Mono minimal m → I, dual de la couverture projective de D(m)"""
    return dual_map(projective_cover(dual_module(m)))


def syzygy(m: Module, k: int = 1) -> Module:
    """Ω^k m"""
    for _ in range(k):
        m = kernel(projective_cover(m))[0]
    return m


def cosyzygy(m: Module, k: int = 1) -> Module:
    """Σ^k m"""
    for _ in range(k):
        m = cokernel(injective_envelope(m))[0]
    return m


def projective_resolution_maps(m: Module, length: int) -> Tuple[List[Module], List[ModuleMap]]:
    """
    Termes P_0..P_length et différentielles d_k: P_k → P_{k−1} (k ≥ 1) ;
    d_0 est l'augmentation P_0 → m. S'arrête dès qu'un noyau est nul.
    """
    terms, diffs = [], []
    current = m
    inclusion: Optional[ModuleMap] = None
    for _ in range(length + 1):
        if current.is_zero():
            break
        cover = projective_cover(current)
        terms.append(cover.source)
        diffs.append(cover if inclusion is None else inclusion @ cover)
        current, inclusion = kernel(cover)
    return terms, diffs


def injective_coresolution_maps(m: Module, length: int) -> Tuple[List[Module], List[ModuleMap]]:
    """Termes I^0..I^length et d^k: I^{k−1} → I^k ; d^0 est m → I^0"""
    terms, diffs = [], []
    current = m
    projection: Optional[ModuleMap] = None
    for _ in range(length + 1):
        if current.is_zero():
            break
        envelope = injective_envelope(current)
        terms.append(envelope.target)
        diffs.append(envelope if projection is None else envelope @ projection)
        current, projection = cokernel(envelope)
    return terms, diffs


def span_rank(maps: List[ModuleMap]) -> int:
    if not maps:
        return 0
    return rank(Matrix(maps[0].p, np.vstack([f.flatten() for f in maps])))


def ext_dim(m: Module, n: Module, i: int, bound: Optional[int] = None) -> int:
    """
    dim Ext^i(m, n) par une résolution projective de m et le complexe Hom(P•, n).
    La résolution est bornée par bound (défaut : borne Ext de l'algèbre), i ≤ bound.
    """
    start_time = datetime.now()
    algebra = m.algebra
    if bound is None:
        bound = settings.ext_bound_for(algebra.nilpotency_bound, algebra.vertex_count)
    if i > bound:
        raise ResolutionBoundExceededError(
            "Degré Ext au-delà de la borne de résolution",
            error_code="EXT_DEGREE_ABOVE_BOUND",
            context={"degree": i, "bound": bound},
        )
    if i == 0:
        return hom_dim(m, n)
    terms, diffs = projective_resolution_maps(m, i + 1)
    if len(terms) <= i:
        return 0
    # δ^k : Hom(P_k, n) → Hom(P_{k+1}, n), h ↦ h ∘ d_{k+1}
    hom_i = hom_space(terms[i], n)
    out_rank = 0
    if len(terms) > i + 1:
        out_rank = span_rank([h @ diffs[i + 1] for h in hom_i])
    in_rank = span_rank([h @ diffs[i] for h in hom_space(terms[i - 1], n)])
    result = len(hom_i) - out_rank - in_rank
    logger.log_performance(
        "ext_dim",
        (datetime.now() - start_time).total_seconds(),
        degree=i,
        dimension=result,
    )
    return result


def ext_dim_injective(m: Module, n: Module, i: int) -> int:
    """dim Ext^i(m, n) par une corésolution injective de n et Hom(m, I•)"""
    if i == 0:
        return hom_dim(m, n)
    terms, diffs = injective_coresolution_maps(n, i + 1)
    if len(terms) <= i:
        return 0
    hom_i = hom_space(m, terms[i])
    out_rank = 0
    if len(terms) > i + 1:
        out_rank = span_rank([diffs[i + 1] @ h for h in hom_i])
    in_rank = span_rank([diffs[i] @ h for h in hom_space(m, terms[i - 1])])
    return len(hom_i) - out_rank - in_rank


def injective_dimension(m: Module, bound: int) -> Optional[int]:
    """Longueur de la corésolution injective minimale, None au-delà de bound"""
    terms, _ = injective_coresolution_maps(m, bound + 1)
    if len(terms) > bound + 1:
        return None
    return max(len(terms) - 1, 0)


def projective_dimension(m: Module, bound: int) -> Optional[int]:
    terms, _ = projective_resolution_maps(m, bound + 1)
    if len(terms) > bound + 1:
        return None
    return max(len(terms) - 1, 0)
