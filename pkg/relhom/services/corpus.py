"""
Corpus de sondes et de complexes pour les vérifications.

Tout l'aléa provient d'un unique générateur numpy initialisé par la graine
de la session : deux constructions de même graine sont identiques.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..algebra.homological import (
    cosyzygy,
    hom_space,
    indecomposable_injectives,
    indecomposable_projectives,
    projective,
    projective_cover,
    simples,
    syzygy,
)
from ..algebra.modules import Module, ModuleMap, cokernel, kernel
from ..algebra.quiver import Algebra
from ..approximation.approx import SubcatSpec, injectives_subcat, projectives_subcat
from ..complexes.complex import ChainMap, Complex, stalk
from ..core.config import settings
from ..core.logger import get_logger
from ..linalg.exactlin import Matrix, kernel_basis

logger = get_logger(__name__)


def distinct_modules(modules: Sequence[Module]) -> List[Module]:
    """Retire les modules nuls et les répétitions structurelles"""
    out: List[Module] = []
    for m in modules:
        if m.is_zero() or any(m.same_as(n) for n in out):
            continue
        out.append(m)
    return out


def standard_probes(algebra: Algebra, depth: int = 1) -> List[Module]:
    """Simples, projectifs, injectifs, syzygies et cosyzygies jusqu'à depth"""
    modules = simples(algebra) + indecomposable_projectives(algebra) + indecomposable_injectives(algebra)
    for s in simples(algebra):
        for k in range(1, depth + 1):
            modules += [syzygy(s, k), cosyzygy(s, k)]
    return distinct_modules(modules)


@dataclass
class Corpus:
    algebra: Algebra
    probes: List[Module] = field(default_factory=list)
    complexes: List[Complex] = field(default_factory=list)
    maps: List[ChainMap] = field(default_factory=list)

    def add_complex(self, c: Complex) -> Complex:
        self.complexes.append(c)
        return c

    def summary(self) -> Dict[str, int]:
        return {"probes": len(self.probes), "complexes": len(self.complexes), "maps": len(self.maps)}


class CorpusBuilder:
    """Modules, morphismes et complexes aléatoires reproductibles"""

    def __init__(self, algebra: Algebra, seed: Optional[int] = None):
        self.algebra = algebra
        self.p = algebra.p
        self.seed = settings.corpus.seed if seed is None else seed
        self.rng = np.random.default_rng(self.seed)

    # Morphismes

    def _combination(self, basis: List[ModuleMap], source: Module, target: Module) -> ModuleMap:
        if not basis:
            return ModuleMap.zero(source, target)
        coeffs = self.rng.integers(0, self.p, size=len(basis))
        vec = sum(int(c) * b.flatten() for c, b in zip(coeffs, basis)) % self.p
        return ModuleMap.from_flat(source, target, vec)

    def random_map(self, m: Module, n: Module) -> ModuleMap:
        return self._combination(hom_space(m, n), m, n)

    def random_map_killing(self, f: ModuleMap, target: Module) -> ModuleMap:
        """g : f.target → target aléatoire avec g∘f = 0"""
        basis = hom_space(f.target, target)
        if not basis:
            return ModuleMap.zero(f.target, target)
        composites = [(h @ f).flatten() for h in basis]
        if not composites[0].size:
            return self._combination(basis, f.target, target)
        columns = Matrix(self.p, np.column_stack(composites))
        solutions = kernel_basis(columns)
        admissible = [
            ModuleMap.from_flat(
                f.target, target,
                sum(int(c) * b.flatten() for c, b in zip(solutions.column(j), basis)) % self.p,
            )
            for j in range(solutions.cols)
        ]
        return self._combination(admissible, f.target, target)

    # Modules

    def random_module(self) -> Module:
        """Quotient d'un projectif P(v) par un sous-module cyclique aléatoire"""
        nv = self.algebra.vertex_count
        v, w = (int(k) for k in self.rng.integers(0, nv, size=2))
        f = self.random_map(projective(self.algebra, w), projective(self.algebra, v))
        module = cokernel(f)[0]
        module.name = f"P{v}/r{w}"
        return module

    def probes(self, count: Optional[int] = None, depth: int = 1) -> List[Module]:
        count = settings.corpus.random_modules if count is None else count
        return distinct_modules(standard_probes(self.algebra, depth) + [self.random_module() for _ in range(count)])

    # Complexes

    def two_term(self, m: Module, n: Module, lo: int = 0) -> Complex:
        return Complex(self.algebra, lo, [m, n], [self.random_map(m, n)], name=f"{m.name}→{n.name}")

    def three_term(self, m: Module, n: Module, lo: int = 0) -> Complex:
        """M → N → Coker, exact au milieu"""
        f = self.random_map(m, n)
        quotient, projection = cokernel(f)
        quotient.name = f"coker({m.name}→{n.name})"
        return Complex(self.algebra, lo, [m, n, quotient], [f, projection], name=f"{m.name}→{n.name}→coker")

    def subcat_complexes(self, x: SubcatSpec, count: int = 4) -> List[Complex]:
        """Complexes à termes dans x : concentrés, à deux et à trois termes"""
        gens = list(x.generators)
        out = [stalk(g, 0) for g in gens]
        for k in range(count):
            a, b, c = (gens[int(i)] for i in self.rng.integers(0, len(gens), size=3))
            lo = int(self.rng.integers(-1, 2))
            if k % 2 == 0:
                out.append(self.two_term(a, b, lo))
            else:
                f = self.random_map(a, b)
                g = self.random_map_killing(f, c)
                out.append(Complex(
                    self.algebra, lo, [a, b, c], [f, g], name=f"{a.name}→{b.name}→{c.name}",
                ))
        return out

    def acyclic_complexes(self) -> List[Complex]:
        """Suites exactes courtes 0 → Ω S → P → S → 0 (sans cohomologie)"""
        out = []
        for s in simples(self.algebra):
            cover = projective_cover(s)
            omega, inclusion = kernel(cover)
            out.append(Complex(
                self.algebra, -1, [omega, cover.source, s], [inclusion, cover],
                name=f"Ω{s.name}→P→{s.name}",
            ))
        return out

    # Morphismes de complexes

    def truncation_maps(self, c: Complex) -> List[Tuple[Complex, ChainMap]]:
        """Inclusions σ≥k C → C et projections C → σ≤k C"""
        out = []
        for k in range(c.lo + 1, c.hi + 1):
            upper = Complex(
                self.algebra, k, [c.term(n) for n in range(k, c.hi + 1)],
                [c.diff(n) for n in range(k, c.hi)], name=f"σ≥{k}{c.name}", validate=False,
            )
            out.append((upper, ChainMap(upper, c, {n: ModuleMap.identity(c.term(n)) for n in upper.degrees})))
        for k in range(c.lo, c.hi):
            lower = Complex(
                self.algebra, c.lo, [c.term(n) for n in range(c.lo, k + 1)],
                [c.diff(n) for n in range(c.lo, k)], name=f"σ≤{k}{c.name}", validate=False,
            )
            out.append((lower, ChainMap(c, lower, {n: ModuleMap.identity(c.term(n)) for n in lower.degrees})))
        return out

    def cocycle_maps(self, x: SubcatSpec, m: Complex, count: Optional[int] = None) -> List[ChainMap]:
        """Morphismes aléatoires stalk(G, n) → M avec d^n∘f = 0, G générateur de x"""
        count = settings.corpus.random_maps if count is None else count
        gens = list(x.generators)
        out = []
        for _ in range(count):
            if not m.terms:
                break
            g = gens[int(self.rng.integers(0, len(gens)))]
            n = int(self.rng.integers(m.lo, m.hi + 1))
            dn = m.diff(n)
            basis = hom_space(g, m.term(n))
            if basis and dn.target.total_dim:
                composites = [(dn @ h).flatten() for h in basis]
                if composites[0].size:
                    solutions = kernel_basis(Matrix(self.p, np.column_stack(composites)))
                    basis = [
                        ModuleMap.from_flat(
                            g, m.term(n),
                            sum(int(c) * b.flatten() for c, b in zip(solutions.column(j), basis)) % self.p,
                        )
                        for j in range(solutions.cols)
                    ]
            f = self._combination(basis, g, m.term(n))
            out.append(ChainMap(stalk(g, n), m, {n: f}))
        return out


def standard_pairs(algebra: Algebra) -> Dict[str, Tuple[SubcatSpec, SubcatSpec]]:
    """La paire (Proj, Inj), équilibrée sur toute algèbre"""
    return {"proj_inj": (projectives_subcat(algebra), injectives_subcat(algebra))}


def broken_pair(algebra: Algebra) -> Tuple[SubcatSpec, SubcatSpec]:
    """(Proj, Proj) : contrôle négatif, Proj n'est pas coadmissible en général"""
    return projectives_subcat(algebra), SubcatSpec(indecomposable_projectives(algebra), name="Proj*")


def build_corpus(
    algebra: Algebra,
    x: SubcatSpec,
    seed: Optional[int] = None,
    count: int = 4,
) -> Corpus:
    """
    Sondes, complexes à termes dans x (et leurs troncatures) et morphismes
    de troncature ; les morphismes relient toujours deux complexes du corpus.
    """
    builder = CorpusBuilder(algebra, seed)
    corpus = Corpus(algebra, probes=builder.probes())
    for c in builder.subcat_complexes(x, count):
        corpus.add_complex(c)
        for truncated, f in builder.truncation_maps(c):
            corpus.add_complex(truncated)
            corpus.maps.append(f)
    logger.info("Corpus construit", algebra=algebra.name, subcategory=x.name, **corpus.summary())
    return corpus
