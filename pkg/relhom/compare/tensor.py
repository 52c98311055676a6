"""
Produit tensoriel sur une algèbre commutative locale (un sommet, boucles
qui commutent) : modules, morphismes et complexes.

M ⊗_R N est le quotient de M ⊗_k N (coordonnées de Kronecker, indice
i·dim N + j) par l'image des x·m ⊗ n − m ⊗ x·n.
"""
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from ..algebra.homological import regular_module
from ..algebra.modules import DirectSum, Module, ModuleMap, block_map, direct_sum
from ..algebra.quiver import Algebra
from ..complexes.complex import ChainMap, Complex, _sign, support_union
from ..core.exceptions import NonCommutativeAlgebraError
from ..linalg.exactlin import Matrix, annihilator, right_inverse


def _kron(p: int, a: Matrix, b: Matrix) -> Matrix:
    return Matrix(p, np.kron(a.array, b.array), shape=(a.rows * b.rows, a.cols * b.cols))


def check_commutative(algebra: Algebra) -> None:
    """Un seul sommet et des boucles qui commutent sur le module régulier"""
    if algebra.vertex_count != 1:
        raise NonCommutativeAlgebraError(
            "Le produit tensoriel demande une algèbre à un sommet",
            error_code="NOT_LOCAL",
            context={"vertex_count": algebra.vertex_count},
        )
    r = regular_module(algebra)
    names = [a.name for a in algebra.quiver.arrows]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            if not (r.action[a] @ r.action[b]) == (r.action[b] @ r.action[a]):
                raise NonCommutativeAlgebraError(
                    "Les boucles ne commutent pas",
                    error_code="NOT_COMMUTATIVE",
                    context={"arrows": [a, b]},
                )


@dataclass
class TensorProduct:
    """M ⊗_R N avec la projection q : M ⊗_k N → M ⊗_R N et une section s"""
    module: Module
    left: Module
    right: Module
    quotient: Matrix
    section: Matrix

    def is_balanced(self) -> bool:
        """q(x·m ⊗ n) = q(m ⊗ x·n) pour toute boucle x"""
        p = self.module.p
        a, b = self.left.dims[0], self.right.dims[0]
        return all(
            (self.quotient @ (
                _kron(p, self.left.action[x], Matrix.identity(p, b))
                - _kron(p, Matrix.identity(p, a), self.right.action[x])
            )).is_zero()
            for x in self.left.action
        )


def tensor_modules(m: Module, n: Module) -> TensorProduct:
    algebra = m.algebra
    check_commutative(algebra)
    p = algebra.p
    a, b = m.dims[0], n.dims[0]
    relations = [
        _kron(p, m.action[x], Matrix.identity(p, b)) - _kron(p, Matrix.identity(p, a), n.action[x])
        for x in m.action
    ]
    span = Matrix.hstack(p, relations, rows=a * b)
    q = annihilator(span) if span.cols else Matrix.identity(p, a * b)
    s = right_inverse(q)
    action = {x: q @ _kron(p, m.action[x], Matrix.identity(p, b)) @ s for x in m.action}
    name = f"{m.name}⊗{n.name}" if m.name and n.name else ""
    module = Module(algebra, [q.rows], action, name=name)
    return TensorProduct(module, m, n, q, s)


def tensor_map(source: TensorProduct, target: TensorProduct, f: ModuleMap, g: ModuleMap) -> ModuleMap:
    """f ⊗ g induit sur les quotients"""
    p = f.p
    block = target.quotient @ _kron(p, f.blocks[0], g.blocks[0]) @ source.section
    return ModuleMap(source.module, target.module, [block])


def unit_element(algebra: Algebra) -> np.ndarray:
    """Coordonnées de 1 dans R = P(0)"""
    r = regular_module(algebra)
    vec = np.zeros(r.dims[0], dtype=np.int64)
    vec[algebra.basis[(0, 0)].index(())] = 1
    return vec


def tensor_with_element(product: TensorProduct, vec: np.ndarray) -> ModuleMap:
    """M → M ⊗_R N, m ↦ m ⊗ v ; R-linéaire car R est commutative"""
    p = product.module.p
    a = product.left.dims[0]
    column = Matrix(p, vec.reshape(-1, 1), shape=(len(vec), 1))
    block = product.quotient @ _kron(p, Matrix.identity(p, a), column)
    return ModuleMap(product.left, product.module, [block])


@dataclass
class TensorComplex:
    """P•⊗Y• : sums[n] liste les facteurs P^i ⊗ Y^{n−i} par i croissant"""
    complex: Complex
    left: Complex
    right: Complex
    products: Dict[Tuple[int, int], TensorProduct]
    sums: Dict[int, DirectSum]
    indices: Dict[int, List[Tuple[int, int]]]

    def injection(self, n: int, pair: Tuple[int, int]) -> ModuleMap:
        return self.sums[n].injections[self.indices[n].index(pair)]

    def projection(self, n: int, pair: Tuple[int, int]) -> ModuleMap:
        return self.sums[n].projections[self.indices[n].index(pair)]


def tensor_complex(left: Complex, right: Complex) -> TensorComplex:
    """Totalisation du bicomplexe P^i ⊗ Y^j, d = d_P ⊗ 1 + (−1)^i 1 ⊗ d_Y"""
    algebra = left.algebra
    check_commutative(algebra)
    p = algebra.p
    if not left.terms or not right.terms:
        empty = Complex(algebra, 0, [], name="0", validate=False)
        return TensorComplex(empty, left, right, {}, {}, {})
    products = {
        (i, j): tensor_modules(left.term(i), right.term(j))
        for i in left.degrees
        for j in right.degrees
    }
    lo, hi = left.lo + right.lo, left.hi + right.hi
    indices: Dict[int, List[Tuple[int, int]]] = {}
    sums: Dict[int, DirectSum] = {}
    for n in range(lo, hi + 2):
        pairs = [(i, n - i) for i in left.degrees if (i, n - i) in products]
        indices[n] = pairs
        sums[n] = direct_sum([products[pair].module for pair in pairs], algebra=algebra)
    diffs = []
    for n in range(lo, hi):
        entries = {}
        for col, (i, j) in enumerate(indices[n]):
            source = products[(i, j)]
            for row, pair in enumerate(indices[n + 1]):
                target = products[pair]
                if pair == (i + 1, j):
                    entries[(row, col)] = tensor_map(
                        source, target, left.diff(i), ModuleMap.identity(right.term(j))
                    )
                elif pair == (i, j + 1):
                    entries[(row, col)] = tensor_map(
                        source, target, ModuleMap.identity(left.term(i)), right.diff(j)
                    ).scale(_sign(p, i))
        diffs.append(block_map(sums[n], sums[n + 1], entries))
    total = Complex(
        algebra, lo, [sums[n].module for n in range(lo, hi + 1)], diffs,
        name=f"{left.name}⊗{right.name}",
    )
    return TensorComplex(total, left, right, products, sums, indices)


def tensor_chain_map(source: TensorComplex, target: TensorComplex, f: ChainMap, g: ChainMap) -> ChainMap:
    """f ⊗ g : P•⊗Y• → P'•⊗Y'•, bloc diagonal sur les facteurs P^i ⊗ Y^j"""
    components = {}
    for n in support_union(source.complex, target.complex):
        if n not in source.sums or n not in target.sums:
            continue
        entries = {}
        for col, (i, j) in enumerate(source.indices[n]):
            if (i, j) in target.indices[n]:
                row = target.indices[n].index((i, j))
                entries[(row, col)] = tensor_map(
                    source.products[(i, j)], target.products[(i, j)], f.component(i), g.component(j)
                )
        components[n] = block_map(source.sums[n], target.sums[n], entries)
    return ChainMap(source.complex, target.complex, components)
