"""
Modules de type fini (représentations du carquois liées par les relations)
et morphismes de modules.

Un module est une valeur immuable : vecteur de dimensions et une matrice par
flèche (dimension du but × dimension de la source). Un morphisme est une
matrice par sommet commutant avec toutes les flèches.
"""
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DimensionMismatchError, ModuleValidationError
from ..linalg.exactlin import (
    Matrix,
    annihilator,
    image_basis,
    kernel_basis,
    rank,
    right_inverse,
    solve,
)
from .quiver import Algebra, Path


class Module:
    """Représentation de dimension finie d'une algèbre kQ/I"""

    def __init__(
        self,
        algebra: Algebra,
        dims: Sequence[int],
        action: Optional[Mapping[str, Matrix]] = None,
        name: str = "",
        validate: bool = True,
    ):
        self.algebra = algebra
        self.dims: Tuple[int, ...] = tuple(int(d) for d in dims)
        self.name = name
        self._dual: Optional["Module"] = None
        # renseignée par direct_sum : Hom se calcule facteur par facteur
        self.decomposition: Optional["DirectSum"] = None
        p = algebra.p
        if len(self.dims) != algebra.vertex_count or any(d < 0 for d in self.dims):
            raise ModuleValidationError(
                "Vecteur de dimensions invalide",
                error_code="BAD_DIMS",
                context={"dims": list(self.dims), "vertex_count": algebra.vertex_count},
            )
        action = dict(action or {})
        unknown = set(action) - {a.name for a in algebra.quiver.arrows}
        if unknown:
            raise ModuleValidationError(
                "Action donnée pour des flèches inconnues",
                error_code="UNKNOWN_ARROW_ACTION",
                context={"arrows": sorted(unknown)},
            )
        self.action: Dict[str, Matrix] = {}
        for arrow in algebra.quiver.arrows:
            shape = (self.dims[arrow.target], self.dims[arrow.source])
            mat = action.get(arrow.name)
            if mat is None:
                mat = Matrix.zeros(p, *shape)
            elif not isinstance(mat, Matrix):
                mat = Matrix(p, mat, shape=shape)
            if mat.shape != shape or mat.p != p:
                raise ModuleValidationError(
                    f"Matrice de la flèche {arrow.name} de taille incorrecte",
                    error_code="ACTION_SHAPE",
                    context={"arrow": arrow.name, "shape": mat.shape, "expected": shape},
                )
            self.action[arrow.name] = mat
        if validate:
            self._check_relations()

    def _check_relations(self):
        for idx, relation in enumerate(self.algebra.presentation.relations):
            total = None
            for coeff, path in relation.terms:
                term = self.path_matrix(path).scale(coeff)
                total = term if total is None else total + term
            if total is not None and not total.is_zero():
                raise ModuleValidationError(
                    "Une relation ne s'annule pas sur le module",
                    error_code="RELATION_VIOLATED",
                    context={"relation": idx, "module": self.name},
                )

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_matrix(self, path: Path, vertex: Optional[int] = None) -> Matrix:
        """Action d'un chemin a1…ak : M(ak)…M(a1)"""
        if not path:
            return Matrix.identity(self.p, self.dims[vertex])
        mat = self.action[path[0]]
        for name in path[1:]:
            mat = self.action[name] @ mat
        return mat

    def same_as(self, other: "Module") -> bool:
        """Égalité structurelle (mêmes dimensions et mêmes matrices)"""
        return (
            self.algebra is other.algebra
            and self.dims == other.dims
            and all(self.action[n] == other.action[n] for n in self.action)
        )

    def __repr__(self) -> str:
        label = f"{self.name} " if self.name else ""
        return f"Module({label}dims={list(self.dims)})"


def _check_same_algebra(*modules: Module):
    algebras = {id(m.algebra) for m in modules}
    if len(algebras) > 1:
        raise DimensionMismatchError(
            "Modules sur des algèbres différentes",
            error_code="ALGEBRA_MISMATCH",
        )


class ModuleMap:
    """Morphisme de modules : une matrice par sommet"""

    def __init__(
        self,
        source: Module,
        target: Module,
        blocks: Sequence[Matrix],
        validate: bool = True,
    ):
        _check_same_algebra(source, target)
        self.source = source
        self.target = target
        p = source.p
        fixed = []
        for v, block in enumerate(blocks):
            shape = (target.dims[v], source.dims[v])
            if not isinstance(block, Matrix):
                block = Matrix(p, block, shape=shape)
            if block.shape != shape:
                raise DimensionMismatchError(
                    "Bloc de morphisme de taille incorrecte",
                    error_code="MAP_BLOCK_SHAPE",
                    context={"vertex": v, "shape": block.shape, "expected": shape},
                )
            fixed.append(block)
        if len(fixed) != source.algebra.vertex_count:
            raise DimensionMismatchError(
                "Nombre de blocs différent du nombre de sommets",
                error_code="MAP_BLOCK_COUNT",
                context={"blocks": len(fixed)},
            )
        self.blocks: Tuple[Matrix, ...] = tuple(fixed)
        if validate:
            self._check_commutes()

    def _check_commutes(self):
        for arrow in self.source.algebra.quiver.arrows:
            left = self.blocks[arrow.target] @ self.source.action[arrow.name]
            right = self.target.action[arrow.name] @ self.blocks[arrow.source]
            if left != right:
                raise ModuleValidationError(
                    f"Le morphisme ne commute pas avec la flèche {arrow.name}",
                    error_code="MAP_NOT_LINEAR",
                    context={"arrow": arrow.name},
                )

    # Constructeurs
    @classmethod
    def zero(cls, source: Module, target: Module) -> "ModuleMap":
        p = source.p
        return cls(source, target, [Matrix.zeros(p, t, s) for s, t in zip(source.dims, target.dims)], validate=False)

    @classmethod
    def identity(cls, module: Module) -> "ModuleMap":
        return cls(module, module, [Matrix.identity(module.p, d) for d in module.dims], validate=False)

    @classmethod
    def from_flat(cls, source: Module, target: Module, vec: np.ndarray, validate: bool = False) -> "ModuleMap":
        blocks = []
        offset = 0
        for s, t in zip(source.dims, target.dims):
            size = s * t
            blocks.append(Matrix(source.p, vec[offset:offset + size], shape=(t, s)))
            offset += size
        return cls(source, target, blocks, validate=validate)

    @staticmethod
    def flat_size(source: Module, target: Module) -> int:
        return sum(s * t for s, t in zip(source.dims, target.dims))

    # Accès
    @property
    def p(self) -> int:
        return self.source.p

    def flatten(self) -> np.ndarray:
        if not self.blocks:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([b.array.ravel() for b in self.blocks]).astype(np.int64)

    def is_zero(self) -> bool:
        return all(b.is_zero() for b in self.blocks)

    def is_injective(self) -> bool:
        return all(rank(b) == b.cols for b in self.blocks)

    def is_surjective(self) -> bool:
        return all(rank(b) == b.rows for b in self.blocks)

    # Arithmétique
    def _check_parallel(self, other: "ModuleMap"):
        if self.source.dims != other.source.dims or self.target.dims != other.target.dims:
            raise DimensionMismatchError(
                "Morphismes non parallèles",
                error_code="MAP_NOT_PARALLEL",
                context={"left": (self.source.dims, self.target.dims),
                         "right": (other.source.dims, other.target.dims)},
            )

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """self ∘ other"""
        if other.target.dims != self.source.dims:
            raise DimensionMismatchError(
                "Composition impossible",
                error_code="MAP_COMPOSITION",
                context={"inner_target": other.target.dims, "outer_source": self.source.dims},
            )
        return ModuleMap(
            other.source, self.target,
            [a @ b for a, b in zip(self.blocks, other.blocks)],
            validate=False,
        )

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        self._check_parallel(other)
        return ModuleMap(self.source, self.target, [a + b for a, b in zip(self.blocks, other.blocks)], validate=False)

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        self._check_parallel(other)
        return ModuleMap(self.source, self.target, [a - b for a, b in zip(self.blocks, other.blocks)], validate=False)

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [-b for b in self.blocks], validate=False)

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [b.scale(c) for b in self.blocks], validate=False)

    def equals(self, other: "ModuleMap") -> bool:
        return (
            self.source.dims == other.source.dims
            and self.target.dims == other.target.dims
            and all(a == b for a, b in zip(self.blocks, other.blocks))
        )

    def retarget(self, source: Module, target: Module) -> "ModuleMap":
        """Même matrices, source/but remplacés par des modules structurellement égaux"""
        if not (source.same_as(self.source) and target.same_as(self.target)):
            raise DimensionMismatchError(
                "retarget: modules non identiques",
                error_code="RETARGET_MISMATCH",
            )
        return ModuleMap(source, target, self.blocks, validate=False)

    def __repr__(self) -> str:
        return f"ModuleMap({list(self.source.dims)} -> {list(self.target.dims)})"


@dataclass
class DirectSum:
    """Somme directe avec injections et projections canoniques"""
    module: Module
    summands: List[Module]
    injections: List[ModuleMap]
    projections: List[ModuleMap]


def direct_sum(summands: Sequence[Module], algebra: Optional[Algebra] = None, name: str = "") -> DirectSum:
    """Somme directe ; l'ordre des facteurs fixe l'ordre des coordonnées"""
    summands = list(summands)
    if algebra is None:
        if not summands:
            raise DimensionMismatchError(
                "Somme vide sans algèbre",
                error_code="EMPTY_SUM",
            )
        algebra = summands[0].algebra
    if summands:
        _check_same_algebra(*summands)
    p = algebra.p
    nv = algebra.vertex_count
    dims = [sum(m.dims[v] for m in summands) for v in range(nv)]
    action = {}
    for arrow in algebra.quiver.arrows:
        rows = [m.dims[arrow.target] for m in summands]
        cols = [m.dims[arrow.source] for m in summands]
        action[arrow.name] = Matrix.block(
            p, rows, cols, [(i, i, m.action[arrow.name]) for i, m in enumerate(summands)]
        )
    total = Module(algebra, dims, action, name=name, validate=False)

    injections, projections = [], []
    for i, m in enumerate(summands):
        inj, proj = [], []
        for v in range(nv):
            sizes = [s.dims[v] for s in summands]
            inj.append(Matrix.block(p, sizes, [m.dims[v]], [(i, 0, Matrix.identity(p, m.dims[v]))]))
            proj.append(Matrix.block(p, [m.dims[v]], sizes, [(0, i, Matrix.identity(p, m.dims[v]))]))
        injections.append(ModuleMap(m, total, inj, validate=False))
        projections.append(ModuleMap(total, m, proj, validate=False))
    result = DirectSum(total, summands, injections, projections)
    if len(summands) > 1:
        total.decomposition = result
    return result


def block_map(
    source: DirectSum,
    target: DirectSum,
    entries: Mapping[Tuple[int, int], ModuleMap],
) -> ModuleMap:
    """
    Morphisme entre sommes directes : entries[(i, j)] va du facteur j de la
    source vers le facteur i du but ; les entrées absentes sont nulles.
    """
    p = source.module.p
    blocks = []
    for v in range(source.module.algebra.vertex_count):
        rows = [m.dims[v] for m in target.summands]
        cols = [m.dims[v] for m in source.summands]
        blocks.append(Matrix.block(p, rows, cols, [(i, j, f.blocks[v]) for (i, j), f in entries.items()]))
    return ModuleMap(source.module, target.module, blocks, validate=False)


def column_map(source: Module, target: DirectSum, maps: Sequence[ModuleMap]) -> ModuleMap:
    """(f_1, …, f_n)ᵀ : M → ⊕ N_i"""
    single = DirectSum(source, [source], [ModuleMap.identity(source)], [ModuleMap.identity(source)])
    return block_map(single, target, {(i, 0): f for i, f in enumerate(maps)})


def row_map(source: DirectSum, target: Module, maps: Sequence[ModuleMap]) -> ModuleMap:
    """(f_1, …, f_n) : ⊕ M_i → N"""
    single = DirectSum(target, [target], [ModuleMap.identity(target)], [ModuleMap.identity(target)])
    return block_map(source, single, {(0, j): f for j, f in enumerate(maps)})


def zero_module(algebra: Algebra) -> Module:
    return Module(algebra, [0] * algebra.vertex_count, name="0", validate=False)


def kernel(f: ModuleMap) -> Tuple[Module, ModuleMap]:
    """Noyau et inclusion"""
    source = f.source
    p = f.p
    bases = [kernel_basis(b) for b in f.blocks]
    action = {}
    for arrow in source.algebra.quiver.arrows:
        b_u, b_w = bases[arrow.source], bases[arrow.target]
        induced = solve(b_w, source.action[arrow.name] @ b_u)
        if induced is None:
            raise ModuleValidationError(
                "Le noyau n'est pas stable par une flèche",
                error_code="KERNEL_NOT_SUBMODULE",
                context={"arrow": arrow.name},
            )
        action[arrow.name] = induced
    k = Module(source.algebra, [b.cols for b in bases], action, name="ker", validate=False)
    return k, ModuleMap(k, source, bases, validate=False)


def image(f: ModuleMap) -> Tuple[Module, ModuleMap]:
    """Image et inclusion dans le but"""
    target = f.target
    bases = [image_basis(b) for b in f.blocks]
    action = {}
    for arrow in target.algebra.quiver.arrows:
        induced = solve(bases[arrow.target], target.action[arrow.name] @ bases[arrow.source])
        if induced is None:
            raise ModuleValidationError(
                "L'image n'est pas stable par une flèche",
                error_code="IMAGE_NOT_SUBMODULE",
                context={"arrow": arrow.name},
            )
        action[arrow.name] = induced
    im = Module(target.algebra, [b.cols for b in bases], action, name="im", validate=False)
    return im, ModuleMap(im, target, bases, validate=False)


def cokernel(f: ModuleMap) -> Tuple[Module, ModuleMap]:
    """Conoyau et projection"""
    target = f.target
    quotients = [annihilator(b) for b in f.blocks]
    sections = [right_inverse(q) for q in quotients]
    action = {}
    for arrow in target.algebra.quiver.arrows:
        action[arrow.name] = quotients[arrow.target] @ target.action[arrow.name] @ sections[arrow.source]
    c = Module(target.algebra, [q.rows for q in quotients], action, name="coker", validate=False)
    return c, ModuleMap(target, c, quotients, validate=False)


def dual_module(m: Module) -> Module:
    """D(M) = Hom_k(M, k) sur l'algèbre opposée ; D(D(M)) est M lui-même"""
    if m._dual is None:
        op = m.algebra.opposite()
        action = {name: mat.T for name, mat in m.action.items()}
        d = Module(op, m.dims, action, name=f"D({m.name})" if m.name else "", validate=False)
        d._dual = m
        m._dual = d
        if m.decomposition is not None:
            parts = m.decomposition
            d.decomposition = DirectSum(
                d,
                [dual_module(s) for s in parts.summands],
                [dual_map(q) for q in parts.projections],
                [dual_map(i) for i in parts.injections],
            )
    return m._dual


def dual_map(f: ModuleMap) -> ModuleMap:
    """D(f): D(N) → D(M) par transposition"""
    return ModuleMap(dual_module(f.target), dual_module(f.source), [b.T for b in f.blocks], validate=False)
