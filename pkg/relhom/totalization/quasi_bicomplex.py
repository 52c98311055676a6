"""
Quasi-bicomplexes associés à un complexe borné et leur complexe total.

Chaque colonne X^{i,•} est une 𝒳-résolution de M^i ; d₀ est la
différentielle des colonnes, d₁^{i,j} = (−1)^j d_v^{i,j} où d_v relève d_M,
et chaque d_l (l ≥ 2) est obtenu en résolvant, colonne par colonne,
d₀∘d_l + d_l∘d₀ = −Σ_{0<a<l} d_a∘d_{l−a}.
"""
from dataclasses import dataclass, field
from datetime import datetime
from typing import Dict, List, Optional, Tuple

from ..algebra.modules import DirectSum, Module, ModuleMap, block_map, direct_sum, row_map, zero_module
from ..algebra.solver import MapSystem, Term, solve_through
from ..approximation.approx import SubcatSpec
from ..approximation.resolution import ResolutionOfObject, resolution, resolution_dim
from ..complexes.complex import ChainMap, Complex
from ..core.config import settings
from ..core.exceptions import FactorizationError, ResolutionBoundExceededError
from ..core.logger import get_logger

logger = get_logger(__name__)

Bidegree = Tuple[int, int]


def lift_to_chain_map(res_src: ResolutionOfObject, res_tgt: ResolutionOfObject, f: ModuleMap) -> ChainMap:
    """
    Relèvement X• → X'• de f : M → M' : en degré 0, ε'∘g⁰ = f∘ε ; puis
    d'∘g^{−k} = g^{−k+1}∘d, un système linéaire par degré.
    """
    src, tgt = res_src.complex(), res_tgt.complex()
    components: Dict[int, ModuleMap] = {}
    previous = f @ res_src.augmentation
    target_map = res_tgt.augmentation
    for k in range(res_src.length + 1):
        if k > 0:
            previous = components[-k + 1] @ src.diff(-k)
            target_map = tgt.diff(-k)
        g = solve_through(target_map, previous)
        if g is None:
            raise FactorizationError(
                "Relèvement impossible à travers la résolution cible",
                error_code="LIFT_FAILED",
                context={"degree": -k, "target": res_tgt.module.name},
            )
        components[-k] = g
    return ChainMap(src, tgt, components)


@dataclass
class QuasiBicomplex:
    """
    X^{i,j} non nul seulement pour lo ≤ i ≤ hi et −width ≤ j ≤ 0 ; maps[l]
    contient d_l^{i,j} : X^{i,j} → X^{i+l, j−l+1}.
    """
    subcat: SubcatSpec
    source: Complex
    width: int
    columns: Dict[int, ResolutionOfObject]
    lifts: Dict[int, ChainMap] = field(default_factory=dict)
    maps: Dict[int, Dict[Bidegree, ModuleMap]] = field(default_factory=dict)

    def __post_init__(self):
        self._zero = zero_module(self.source.algebra)

    @property
    def lo(self) -> int:
        return self.source.lo

    @property
    def hi(self) -> int:
        return self.source.hi

    def obj(self, i: int, j: int) -> Module:
        column = self.columns.get(i)
        if column is None or not (-column.length <= j <= 0):
            return self._zero
        return column.complex().term(j)

    def d(self, l: int, i: int, j: int) -> ModuleMap:
        found = self.maps.get(l, {}).get((i, j))
        if found is not None:
            return found
        return ModuleMap.zero(self.obj(i, j), self.obj(i + l, j - l + 1))

    def bidegrees(self) -> List[Bidegree]:
        return [(i, j) for i in range(self.lo, self.hi + 1) for j in range(-self.width, 1)]

    def identity_defects(self) -> List[Dict[str, int]]:
        """Bidegrés et niveaux n où Σ_{l=0}^n d_l∘d_{n−l} ≠ 0"""
        defects = []
        for n in range(0, 2 * self.width + 5):
            for i, j in self.bidegrees():
                total = None
                for l in range(0, n + 1):
                    first = self.d(n - l, i, j)
                    second = self.d(l, i + n - l, j - (n - l) + 1)
                    term = second @ first
                    total = term if total is None else total + term
                if total is not None and not total.is_zero():
                    defects.append({"level": n, "i": i, "j": j})
        return defects

    def verify(self) -> bool:
        return not self.identity_defects()


def _column_resolutions(x: SubcatSpec, m: Complex, width: int) -> Dict[int, ResolutionOfObject]:
    columns = {}
    for i in m.degrees:
        columns[i] = resolution(x, m.term(i), max_len=width)
    return columns


def required_width(x: SubcatSpec, m: Complex, bound: Optional[int] = None) -> int:
    """max des 𝒳-dimensions de résolution des termes"""
    bound = settings.resolution.max_len if bound is None else bound
    width = 0
    for i in m.degrees:
        dim = resolution_dim(x, m.term(i), bound)
        if dim is None:
            raise ResolutionBoundExceededError(
                "Un terme du complexe a une dimension de résolution au-delà de la borne",
                error_code="WIDTH_EXCEEDS_BOUND",
                context={"degree": i, "bound": bound},
            )
        width = max(width, dim)
    return width


def _correction(qb: QuasiBicomplex, level: int, i: int) -> Dict[Bidegree, ModuleMap]:
    """d_level sur la colonne i : un système d'homotopie global"""
    target_column = i + level
    p = qb.source.p
    system = MapSystem(p, name=f"d{level}")
    js = range(-qb.width, 1)
    for j in range(-qb.width, 2):
        system.add_unknown(("s", j), qb.obj(i, j), qb.obj(target_column, j - level + 1))
    for j in js:
        source, target = qb.obj(i, j), qb.obj(target_column, j - level + 2)
        psi = _psi(qb, level, i, j)
        # d₀ doit commuter avec Ψ
        upper = qb.d(0, target_column, j - level + 2) @ psi
        lower = _psi(qb, level, i, j + 1) @ qb.d(0, i, j)
        if not upper.equals(lower):
            raise FactorizationError(
                "d₀ ne commute pas avec la somme des corrections : le relèvement d_v n'est pas un morphisme",
                error_code="QUASI_BICOMPLEX_OBSTRUCTION",
                context={"level": level, "i": i, "j": j},
            )
        terms = [
            Term(("s", j), left=qb.d(0, target_column, j - level + 1)),
            Term(("s", j + 1), right=qb.d(0, i, j)),
        ]
        system.add_equation(terms, source, target, rhs=-psi)
    solution = system.solve()
    if solution is None:
        raise FactorizationError(
            "Système d'homotopie sans solution pour une correction d_l",
            error_code="CORRECTION_UNSOLVABLE",
            context={"level": level, "column": i},
        )
    return {(i, j): solution[("s", j)] for j in js if not solution[("s", j)].is_zero()}


def _psi(qb: QuasiBicomplex, level: int, i: int, j: int) -> ModuleMap:
    source, target = qb.obj(i, j), qb.obj(i + level, j - level + 2)
    psi = ModuleMap.zero(source, target)
    for a in range(1, level):
        psi = psi + qb.d(a, i + level - a, j - (level - a) + 1) @ qb.d(level - a, i, j)
    return psi


def build_quasi_bicomplex(x: SubcatSpec, m: Complex, width: Optional[int] = None) -> QuasiBicomplex:
    """Colonnes résolues, relèvements signés d₁ puis corrections d_l, l ≥ 2"""
    start_time = datetime.now()
    if width is None:
        width = required_width(x, m)
    columns = _column_resolutions(x, m, width)
    qb = QuasiBicomplex(x, m, width, columns)

    qb.maps[0] = {}
    for i, column in columns.items():
        c = column.complex()
        for j in range(-column.length, 0):
            qb.maps[0][(i, j)] = c.diff(j)

    p = m.p
    qb.maps[1] = {}
    for i in range(m.lo, m.hi):
        lift = lift_to_chain_map(columns[i], columns[i + 1], m.diff(i))
        qb.lifts[i] = lift
        for j in range(-columns[i].length, 1):
            sign = 1 if j % 2 == 0 else p - 1
            qb.maps[1][(i, j)] = lift.component(j).scale(sign)

    for level in range(2, width + 3):
        qb.maps[level] = {}
        for i in range(m.lo, m.hi - level + 1):
            qb.maps[level].update(_correction(qb, level, i))

    logger.log_performance(
        "build_quasi_bicomplex",
        (datetime.now() - start_time).total_seconds(),
        width=width,
        columns=len(columns),
    )
    return qb


@dataclass
class AugmentedTotal:
    """T• = tot(X•,•) et ε : T• → M• ; sums[n] liste les bidegrés de T^n"""
    quasi_bicomplex: QuasiBicomplex
    total: Complex
    epsilon: ChainMap
    sums: Dict[int, DirectSum]
    indices: Dict[int, List[Bidegree]]

    @property
    def source(self) -> Complex:
        return self.quasi_bicomplex.source

    def injection(self, n: int, i: int) -> ModuleMap:
        """X^{i, n−i} ↪ T^n"""
        return self.sums[n].injections[self.indices[n].index((i, n - i))]

    def projection(self, n: int, i: int) -> ModuleMap:
        return self.sums[n].projections[self.indices[n].index((i, n - i))]


def totalize(qb: QuasiBicomplex, m: Optional[Complex] = None) -> AugmentedTotal:
    """T^n = ⊕_{i+j=n} X^{i,j}, d_T = Σ_l d_l, ε restreint à X^{n,0} = ε^n"""
    m = qb.source if m is None else m
    algebra = m.algebra
    if not m.terms:
        empty = Complex(algebra, 0, [], name="T", validate=False)
        return AugmentedTotal(qb, empty, ChainMap.zero(empty, m), {}, {})
    lo, hi = m.lo - qb.width, m.hi
    indices: Dict[int, List[Bidegree]] = {}
    sums: Dict[int, DirectSum] = {}
    for n in range(lo, hi + 2):
        pairs = [(i, n - i) for i in range(m.lo, m.hi + 1) if -qb.width <= n - i <= 0]
        indices[n] = pairs
        sums[n] = direct_sum([qb.obj(i, j) for i, j in pairs], algebra=algebra, name=f"T{n}")

    diffs = []
    for n in range(lo, hi):
        entries = {}
        for col, (i, j) in enumerate(indices[n]):
            for row, (i2, j2) in enumerate(indices[n + 1]):
                level = i2 - i
                if level >= 0 and j2 == j - level + 1:
                    entries[(row, col)] = qb.d(level, i, j)
        diffs.append(block_map(sums[n], sums[n + 1], entries))
    total = Complex(algebra, lo, [sums[n].module for n in range(lo, hi + 1)], diffs, name=f"tot({m.name})", validate=False)

    eps = {}
    for n in range(lo, hi + 1):
        maps = []
        for i, j in indices[n]:
            if (i, j) == (n, 0):
                maps.append(qb.columns[n].augmentation)
            else:
                maps.append(ModuleMap.zero(qb.obj(i, j), m.term(n)))
        eps[n] = row_map(sums[n], m.term(n), maps)
    epsilon = ChainMap(total, m, eps, validate=False)
    return AugmentedTotal(qb, total, epsilon, sums, indices)


def total_dims(at: AugmentedTotal) -> Dict[int, List[int]]:
    return {n: list(at.total.term(n).dims) for n in at.total.degrees}
