"""
Systèmes linéaires dont les inconnues sont des morphismes de modules.

Chaque inconnue est paramétrée par une base de son espace Hom ; chaque
équation est de la forme Σ c·(gauche ∘ X ∘ droite) = second membre, entre
deux modules fixés. Toutes les équations sont aplaties et résolues en un seul
système (variables libres nulles), ce qui rend les solutions reproductibles.
"""
from dataclasses import dataclass
from datetime import datetime
from typing import Dict, Hashable, List, Optional, Tuple

import numpy as np

from ..core.logger import get_logger
from ..linalg.exactlin import Matrix, solve
from .homological import hom_space
from .modules import Module, ModuleMap

logger = get_logger(__name__)


@dataclass
class Term:
    """c · (left ∘ X ∘ right) ; left/right absents valent l'identité"""
    unknown: Hashable
    left: Optional[ModuleMap] = None
    right: Optional[ModuleMap] = None
    coeff: int = 1


class MapSystem:
    """Système linéaire global en des morphismes inconnus"""

    def __init__(self, p: int, name: str = "system"):
        self.p = p
        self.name = name
        self._unknowns: Dict[Hashable, Tuple[Module, Module, List[ModuleMap]]] = {}
        self._order: List[Hashable] = []
        self._equations: List[Tuple[List[Term], np.ndarray, int]] = []

    def add_unknown(self, key: Hashable, source: Module, target: Module) -> None:
        if key in self._unknowns:
            return
        self._unknowns[key] = (source, target, hom_space(source, target))
        self._order.append(key)

    def has_unknown(self, key: Hashable) -> bool:
        return key in self._unknowns

    def add_equation(
        self,
        terms: List[Term],
        source: Module,
        target: Module,
        rhs: Optional[ModuleMap] = None,
    ) -> None:
        """Σ termes = rhs, égalité de morphismes source → but"""
        size = ModuleMap.flat_size(source, target)
        if size == 0:
            return
        vec = rhs.flatten() if rhs is not None else np.zeros(size, dtype=np.int64)
        live = [t for t in terms if t.unknown in self._unknowns]
        self._equations.append((live, vec, size))

    @property
    def unknown_count(self) -> int:
        return sum(len(b) for _, _, b in self._unknowns.values())

    def _term_columns(self, term: Term, size: int) -> np.ndarray:
        _, _, basis = self._unknowns[term.unknown]
        cols = np.zeros((size, len(basis)), dtype=np.int64)
        for j, h in enumerate(basis):
            value = h
            if term.right is not None:
                value = value @ term.right
            if term.left is not None:
                value = term.left @ value
            cols[:, j] = value.flatten() * term.coeff
        return cols

    def solve(self) -> Optional[Dict[Hashable, ModuleMap]]:
        """Solution (variables libres nulles) ou None si le système est incompatible"""
        start_time = datetime.now()
        offsets: Dict[Hashable, int] = {}
        total = 0
        for key in self._order:
            offsets[key] = total
            total += len(self._unknowns[key][2])

        row_count = sum(size for _, _, size in self._equations)
        a = np.zeros((row_count, total), dtype=np.int64)
        b = np.zeros((row_count, 1), dtype=np.int64)
        row = 0
        for terms, vec, size in self._equations:
            for term in terms:
                start = offsets[term.unknown]
                width = len(self._unknowns[term.unknown][2])
                if width:
                    a[row:row + size, start:start + width] += self._term_columns(term, size)
            b[row:row + size, 0] = vec
            row += size

        solution = solve(Matrix(self.p, a, shape=(row_count, total)), Matrix(self.p, b, shape=(row_count, 1)))
        duration = (datetime.now() - start_time).total_seconds()
        if row_count * max(total, 1) > 250000:
            logger.log_performance(self.name, duration, rows=row_count, unknowns=total)
        if solution is None:
            logger.debug("Système incompatible", system=self.name, rows=row_count, unknowns=total)
            return None

        coeffs = solution.array[:, 0]
        result: Dict[Hashable, ModuleMap] = {}
        for key in self._order:
            source, target, basis = self._unknowns[key]
            start = offsets[key]
            flat = np.zeros(ModuleMap.flat_size(source, target), dtype=np.int64)
            for j, h in enumerate(basis):
                c = int(coeffs[start + j])
                if c:
                    flat = flat + c * h.flatten()
            result[key] = ModuleMap.from_flat(source, target, flat % self.p)
        return result


def solve_through(left: ModuleMap, rhs: ModuleMap) -> Optional[ModuleMap]:
    """g avec left∘g = rhs (relèvement), ou None"""
    system = MapSystem(left.p, name="solve_through")
    system.add_unknown("g", rhs.source, left.source)
    system.add_equation([Term("g", left=left)], rhs.source, rhs.target, rhs=rhs)
    solution = system.solve()
    return None if solution is None else solution["g"]


def solve_from(right: ModuleMap, rhs: ModuleMap) -> Optional[ModuleMap]:
    """g avec g∘right = rhs (prolongement), ou None"""
    system = MapSystem(right.p, name="solve_from")
    system.add_unknown("g", right.target, rhs.target)
    system.add_equation([Term("g", right=right)], rhs.source, rhs.target, rhs=rhs)
    solution = system.solve()
    return None if solution is None else solution["g"]
