"""
Complexes de cochaînes bornés, morphismes de complexes et homotopies.

Conventions : d^n : C^n → C^{n+1} ; (C[1])^n = C^{n+1} avec
d_{C[1]} = −d_C ; Cone(f)^n = X^{n+1} ⊕ Y^n de différentielle
[[−d_X, 0], [f, d_Y]].
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..algebra.modules import (
    DirectSum,
    Module,
    ModuleMap,
    block_map,
    direct_sum,
    dual_map,
    dual_module,
    zero_module,
)
from ..algebra.quiver import Algebra
from ..core.exceptions import ComplexValidationError, DimensionMismatchError
from ..linalg.exactlin import rank


class Complex:
    """Complexe borné de support [lo, hi]"""

    def __init__(
        self,
        algebra: Algebra,
        lo: int,
        terms: Sequence[Module],
        diffs: Optional[Sequence[ModuleMap]] = None,
        name: str = "",
        validate: bool = True,
    ):
        self.algebra = algebra
        self.lo = lo
        self.terms: Tuple[Module, ...] = tuple(terms)
        self.name = name
        self._dual: Optional["Complex"] = None
        self._zero = zero_module(algebra)
        if diffs is None:
            diffs = [ModuleMap.zero(a, b) for a, b in zip(self.terms, self.terms[1:])]
        self.diffs: Tuple[ModuleMap, ...] = tuple(diffs)
        if len(self.diffs) != max(len(self.terms) - 1, 0):
            raise ComplexValidationError(
                "Nombre de différentielles incorrect",
                error_code="DIFF_COUNT",
                context={"terms": len(self.terms), "diffs": len(self.diffs)},
            )
        for k, d in enumerate(self.diffs):
            if d.source.dims != self.terms[k].dims or d.target.dims != self.terms[k + 1].dims:
                raise ComplexValidationError(
                    "Différentielle de source ou but incorrect",
                    error_code="DIFF_SHAPE",
                    context={"degree": lo + k},
                )
        if validate:
            self.check()

    def check(self) -> None:
        for k in range(len(self.diffs) - 1):
            if not (self.diffs[k + 1] @ self.diffs[k]).is_zero():
                raise ComplexValidationError(
                    "d∘d ≠ 0",
                    error_code="DIFF_SQUARE_NONZERO",
                    context={"degree": self.lo + k, "complex": self.name},
                )

    @property
    def hi(self) -> int:
        return self.lo + len(self.terms) - 1

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    @property
    def p(self) -> int:
        return self.algebra.p

    def term(self, n: int) -> Module:
        if self.lo <= n <= self.hi:
            return self.terms[n - self.lo]
        return self._zero

    def diff(self, n: int) -> ModuleMap:
        """d^n : C^n → C^{n+1} (nulle hors support)"""
        if self.lo <= n < self.hi:
            return self.diffs[n - self.lo]
        return ModuleMap.zero(self.term(n), self.term(n + 1))

    def is_zero(self) -> bool:
        return all(t.is_zero() for t in self.terms)

    def trimmed(self) -> "Complex":
        """Retire les termes nuls aux extrémités"""
        nonzero = [n for n in self.degrees if not self.term(n).is_zero()]
        if not nonzero:
            return Complex(self.algebra, 0, [], name=self.name, validate=False)
        a, b = nonzero[0], nonzero[-1]
        if (a, b) == (self.lo, self.hi):
            return self
        return Complex(
            self.algebra, a,
            [self.term(n) for n in range(a, b + 1)],
            [self.diff(n) for n in range(a, b)],
            name=self.name, validate=False,
        )

    def total_dim(self) -> int:
        return sum(t.total_dim for t in self.terms)

    def __repr__(self) -> str:
        dims = {n: list(self.term(n).dims) for n in self.degrees}
        return f"Complex({self.name or '?'}, {dims})"


def zero_complex(algebra: Algebra) -> Complex:
    return Complex(algebra, 0, [], name="0", validate=False)


def stalk(module: Module, degree: int = 0, name: str = "") -> Complex:
    """Complexe concentré en un degré"""
    return Complex(module.algebra, degree, [module], [], name=name or f"{module.name}[{-degree}]", validate=False)


def support_union(*complexes: Complex) -> range:
    nonempty = [c for c in complexes if c.terms]
    if not nonempty:
        return range(0)
    return range(min(c.lo for c in nonempty), max(c.hi for c in nonempty) + 1)


class ChainMap:
    """Morphisme de complexes f^n : X^n → Y^n"""

    def __init__(
        self,
        source: Complex,
        target: Complex,
        components: Optional[Dict[int, ModuleMap]] = None,
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        components = dict(components or {})
        self.components: Dict[int, ModuleMap] = {}
        for n in support_union(source, target):
            f = components.get(n)
            if f is None:
                f = ModuleMap.zero(source.term(n), target.term(n))
            elif f.source.dims != source.term(n).dims or f.target.dims != target.term(n).dims:
                raise ComplexValidationError(
                    "Composante de morphisme de complexes de taille incorrecte",
                    error_code="CHAIN_MAP_SHAPE",
                    context={"degree": n},
                )
            self.components[n] = f
        if validate:
            self.check()

    def check(self) -> None:
        for n in support_union(self.source, self.target):
            left = self.component(n + 1) @ self.source.diff(n)
            right = self.target.diff(n) @ self.component(n)
            if not left.equals(right):
                raise ComplexValidationError(
                    "Le morphisme ne commute pas aux différentielles",
                    error_code="CHAIN_MAP_NOT_COMMUTING",
                    context={"degree": n},
                )

    def is_chain_map(self) -> bool:
        try:
            self.check()
        except ComplexValidationError:
            return False
        return True

    def component(self, n: int) -> ModuleMap:
        f = self.components.get(n)
        if f is None:
            return ModuleMap.zero(self.source.term(n), self.target.term(n))
        return f

    @classmethod
    def identity(cls, c: Complex) -> "ChainMap":
        return cls(c, c, {n: ModuleMap.identity(c.term(n)) for n in c.degrees}, validate=False)

    @classmethod
    def zero(cls, source: Complex, target: Complex) -> "ChainMap":
        return cls(source, target, {}, validate=False)

    def _check_parallel(self, other: "ChainMap"):
        for n in support_union(self.source, self.target, other.source, other.target):
            if (self.source.term(n).dims != other.source.term(n).dims
                    or self.target.term(n).dims != other.target.term(n).dims):
                raise DimensionMismatchError(
                    "Morphismes de complexes non parallèles",
                    error_code="CHAIN_MAP_NOT_PARALLEL",
                    context={"degree": n},
                )

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """self ∘ other"""
        degrees = support_union(other.source, self.target)
        return ChainMap(
            other.source, self.target,
            {n: self.component(n) @ other.component(n) for n in degrees},
            validate=False,
        )

    def __add__(self, other: "ChainMap") -> "ChainMap":
        self._check_parallel(other)
        return ChainMap(self.source, self.target,
                        {n: self.component(n) + other.component(n) for n in self.components},
                        validate=False)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        self._check_parallel(other)
        return ChainMap(self.source, self.target,
                        {n: self.component(n) - other.component(n) for n in self.components},
                        validate=False)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {n: -f for n, f in self.components.items()}, validate=False)

    def equals(self, other: "ChainMap") -> bool:
        degrees = support_union(self.source, self.target, other.source, other.target)
        return all(self.component(n).equals(other.component(n)) for n in degrees)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.components.values())

    def __repr__(self) -> str:
        return f"ChainMap({self.source.name or '?'} -> {self.target.name or '?'})"


@dataclass
class Homotopy:
    """s^n : X^n → Y^{n−1} témoignant f = d∘s + s∘d"""
    source: Complex
    target: Complex
    maps: Dict[int, ModuleMap] = field(default_factory=dict)

    def component(self, n: int) -> ModuleMap:
        s = self.maps.get(n)
        if s is None:
            return ModuleMap.zero(self.source.term(n), self.target.term(n - 1))
        return s

    def boundary(self) -> ChainMap:
        """d∘s + s∘d"""
        degrees = support_union(self.source, self.target)
        comps = {}
        for n in degrees:
            comps[n] = (self.target.diff(n - 1) @ self.component(n)
                        + self.component(n + 1) @ self.source.diff(n))
        return ChainMap(self.source, self.target, comps, validate=False)

    def witnesses(self, f: ChainMap) -> bool:
        return self.boundary().equals(f)


def _sign(p: int, k: int) -> int:
    return 1 if k % 2 == 0 else p - 1


def shift(c: Complex, k: int = 1) -> Complex:
    """C[k] : (C[k])^n = C^{n+k}, différentielle (−1)^k d^{n+k}"""
    if k == 0:
        return c
    s = _sign(c.p, k)
    return Complex(
        c.algebra, c.lo - k, c.terms,
        [d.scale(s) for d in c.diffs],
        name=f"{c.name}[{k}]", validate=False,
    )


def degree_shift(c: Complex, r: int = 1) -> Complex:
    """C(r) : même décalage, sans signe"""
    if r == 0:
        return c
    return Complex(c.algebra, c.lo - r, c.terms, c.diffs, name=f"{c.name}({r})", validate=False)


def shift_map(f: ChainMap, k: int = 1) -> ChainMap:
    """f[k] : composantes f^{n+k}"""
    return ChainMap(
        shift(f.source, k), shift(f.target, k),
        {n - k: g for n, g in f.components.items()},
        validate=False,
    )


@dataclass
class ConeTriangle:
    """Y → Cone(f) → X[1] et les sommes directes degré par degré"""
    cone: Complex
    into_cone: ChainMap
    to_shift: ChainMap
    sums: Dict[int, DirectSum]


def mapping_cone(f: ChainMap) -> ConeTriangle:
    """Cône de f : X → Y avec la différentielle [[−d_X, 0], [f, d_Y]]"""
    x, y = f.source, f.target
    algebra = x.algebra
    degrees = support_union(shift(x, 1), y)
    if len(degrees) == 0:
        zero = zero_complex(algebra)
        return ConeTriangle(zero, ChainMap.zero(y, zero), ChainMap.zero(zero, shift(x, 1)), {})
    sums = {n: direct_sum([x.term(n + 1), y.term(n)], algebra=algebra) for n in degrees}
    sums[degrees.stop] = direct_sum([x.term(degrees.stop + 1), y.term(degrees.stop)], algebra=algebra)
    diffs = []
    for n in list(degrees)[:-1]:
        diffs.append(block_map(sums[n], sums[n + 1], {
            (0, 0): -x.diff(n + 1),
            (1, 0): f.component(n + 1),
            (1, 1): y.diff(n),
        }))
    name = f"Cone({x.name},{y.name})"
    cone = Complex(algebra, degrees.start, [sums[n].module for n in degrees], diffs, name=name, validate=False)
    xs = shift(x, 1)
    into = ChainMap(y, cone, {n: sums[n].injections[1] for n in degrees}, validate=False)
    out = ChainMap(cone, xs, {n: sums[n].projections[0] for n in degrees}, validate=False)
    return ConeTriangle(cone, into, out, sums)


def cohomology_dims(c: Complex) -> List[Tuple[int, Tuple[int, ...]]]:
    """dim Ker d^n / Im d^{n−1} par sommet et par degré"""
    out = []
    for n in c.degrees:
        dims = []
        for v in range(c.algebra.vertex_count):
            dn = c.diff(n).blocks[v]
            dprev = c.diff(n - 1).blocks[v]
            dims.append(c.term(n).dims[v] - rank(dn) - rank(dprev))
        out.append((n, tuple(dims)))
    return out


def is_acyclic(c: Complex) -> bool:
    return all(not any(d) for _, d in cohomology_dims(c))


def dual_complex(c: Complex) -> Complex:
    """D(C) : (DC)^n = D(C^{−n}), différentielle D(d^{−n−1}) ; D(D(C)) est C"""
    if c._dual is None:
        op = c.algebra.opposite()
        if not c.terms:
            d = Complex(op, 0, [], name=f"D({c.name})", validate=False)
        else:
            terms = [dual_module(c.term(-n)) for n in range(-c.hi, -c.lo + 1)]
            diffs = [dual_map(c.diff(-n - 1)) for n in range(-c.hi, -c.lo)]
            d = Complex(op, -c.hi, terms, diffs, name=f"D({c.name})", validate=False)
        d._dual = c
        c._dual = d
    return c._dual


def dual_chain_map(f: ChainMap) -> ChainMap:
    """D(f) : D(Y) → D(X), composantes D(f^{−n})"""
    src, tgt = dual_complex(f.target), dual_complex(f.source)
    return ChainMap(
        src, tgt,
        {-n: dual_map(g) for n, g in f.components.items()},
        validate=False,
    )


def dual_homotopy(h: Homotopy) -> Homotopy:
    """D(s) : (D s)^n = D(s^{−n+1})"""
    return Homotopy(
        dual_complex(h.target), dual_complex(h.source),
        {-n + 1: dual_map(s) for n, s in h.maps.items()},
    )
