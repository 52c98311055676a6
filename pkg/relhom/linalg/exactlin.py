"""
Algèbre linéaire exacte dense sur un corps premier GF(p).

Toutes les constructions de plus haut niveau (Hom, relèvements, homotopies)
se ramènent à `rref`, `solve` et `kernel_basis`. Les matrices sont des
valeurs immuables : le tableau numpy interne est en lecture seule.
"""
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.exceptions import DimensionMismatchError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, int(n ** 0.5) + 1))


@dataclass(frozen=True)
class FieldSpec:
    """Corps premier GF(p)"""
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise DimensionMismatchError(
                f"GF({self.p}) n'est pas un corps premier",
                error_code="FIELD_NOT_PRIME",
                context={"p": self.p},
            )

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 n'est pas inversible")
        return pow(a, self.p - 2, self.p)

    def sign(self, k: int) -> int:
        """(−1)^k réduit mod p"""
        return 1 if k % 2 == 0 else self.p - 1


class Matrix:
    """Matrice dense à coefficients dans GF(p), entièrement réduite"""

    __slots__ = ("p", "_a")

    def __init__(self, p: int, data, shape: Optional[Tuple[int, int]] = None):
        arr = np.array(data, dtype=np.int64)
        if shape is not None:
            arr = arr.reshape(shape)
        if arr.ndim != 2:
            raise DimensionMismatchError(
                "Une matrice doit être bidimensionnelle",
                error_code="MATRIX_NOT_2D",
                context={"ndim": int(arr.ndim)},
            )
        arr %= p
        arr.setflags(write=False)
        self.p = p
        self._a = arr

    # Constructeurs
    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "Matrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "Matrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def hstack(cls, p: int, blocks: Sequence["Matrix"], rows: int = 0) -> "Matrix":
        if not blocks:
            return cls.zeros(p, rows, 0)
        return cls(p, np.hstack([b.array for b in blocks]))

    @classmethod
    def vstack(cls, p: int, blocks: Sequence["Matrix"], cols: int = 0) -> "Matrix":
        if not blocks:
            return cls.zeros(p, 0, cols)
        return cls(p, np.vstack([b.array for b in blocks]))

    @classmethod
    def block(
        cls,
        p: int,
        row_sizes: Sequence[int],
        col_sizes: Sequence[int],
        entries: Iterable[Tuple[int, int, "Matrix"]],
    ) -> "Matrix":
        """Assemble une matrice par blocs ; les blocs absents sont nuls"""
        row_off = np.concatenate([[0], np.cumsum(row_sizes)]).astype(int)
        col_off = np.concatenate([[0], np.cumsum(col_sizes)]).astype(int)
        out = np.zeros((int(row_off[-1]), int(col_off[-1])), dtype=np.int64)
        for i, j, m in entries:
            if m.shape != (row_sizes[i], col_sizes[j]):
                raise DimensionMismatchError(
                    "Bloc de taille incorrecte",
                    error_code="BLOCK_SHAPE",
                    context={"block": (i, j), "shape": m.shape,
                             "expected": (row_sizes[i], col_sizes[j])},
                )
            out[row_off[i]:row_off[i + 1], col_off[j]:col_off[j + 1]] += m.array
        return cls(p, out)

    # Accès
    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return int(self._a.shape[0])

    @property
    def cols(self) -> int:
        return int(self._a.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.p, self._a.T)

    def is_zero(self) -> bool:
        return not self._a.any()

    def tolist(self) -> List[List[int]]:
        return self._a.tolist()

    def column(self, j: int) -> np.ndarray:
        return self._a[:, j]

    def sub(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        r = np.asarray(list(rows), dtype=np.int64)
        c = np.asarray(list(cols), dtype=np.int64)
        return Matrix(self.p, self._a[np.ix_(r, c)], shape=(r.size, c.size))

    # Arithmétique
    def _check_same(self, other: "Matrix", op: str):
        if self.p != other.p or self.shape != other.shape:
            raise DimensionMismatchError(
                f"Opérandes incompatibles pour {op}",
                error_code="MATRIX_SHAPE",
                context={"left": self.shape, "right": other.shape, "p": (self.p, other.p)},
            )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.p != other.p or self.cols != other.rows:
            raise DimensionMismatchError(
                "Produit matriciel impossible",
                error_code="MATRIX_PRODUCT",
                context={"left": self.shape, "right": other.shape},
            )
        return Matrix(self.p, self._a @ other._a)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other, "+")
        return Matrix(self.p, self._a + other._a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other, "-")
        return Matrix(self.p, self._a - other._a)

    def __neg__(self) -> "Matrix":
        return Matrix(self.p, -self._a)

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.p, self._a * (c % self.p))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    __hash__ = None

    def __repr__(self) -> str:
        return f"Matrix(GF({self.p}), {self.rows}x{self.cols}, {self.tolist()})"


def rref(m: Matrix) -> Tuple[Matrix, List[int], int]:
    """
    Forme échelonnée réduite : pivot le plus à gauche, ligne la plus haute.
    Retourne (R, colonnes pivots croissantes, rang).
    """
    p = m.p
    a = m.array.copy()
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r, c:] = (a[r, c:] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        targets = np.nonzero(col)[0]
        if targets.size:
            a[np.ix_(targets, np.arange(c, cols))] = (
                a[np.ix_(targets, np.arange(c, cols))] - np.outer(col[targets], a[r, c:])
            ) % p
        pivots.append(c)
        r += 1
    return Matrix(p, a), pivots, r


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return rref(m)[2]


def solve(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """
    Une solution x de a·x = b, variables libres nulles ; None si incompatible.
    """
    if a.rows != b.rows or a.p != b.p:
        raise DimensionMismatchError(
            "solve: nombres de lignes différents",
            error_code="SOLVE_SHAPE",
            context={"a": a.shape, "b": b.shape},
        )
    n = a.cols
    if a.rows == 0:
        return Matrix.zeros(a.p, n, b.cols)
    aug = Matrix(a.p, np.hstack([a.array, b.array]))
    r, pivots, rk = rref(aug)
    if any(c >= n for c in pivots):
        return None
    x = np.zeros((n, b.cols), dtype=np.int64)
    if rk:
        x[pivots, :] = r.array[:rk, n:]
    return Matrix(a.p, x)


def kernel_basis(a: Matrix) -> Matrix:
    """Base du noyau en colonnes ; une colonne par variable libre"""
    n = a.cols
    if a.rows == 0:
        return Matrix.identity(a.p, n)
    r, pivots, rk = rref(a)
    free = [c for c in range(n) if c not in set(pivots)]
    k = np.zeros((n, len(free)), dtype=np.int64)
    for idx, f in enumerate(free):
        k[f, idx] = 1
    if rk and free:
        k[pivots, :] = -r.array[:rk][:, free]
    return Matrix(a.p, k, shape=(n, len(free)))


def image_basis(a: Matrix) -> Matrix:
    """Colonnes pivots de a : une base de l'image"""
    if a.rows == 0 or a.cols == 0:
        return Matrix.zeros(a.p, a.rows, 0)
    _, pivots, _ = rref(a)
    return a.sub(range(a.rows), pivots)


def annihilator(u: Matrix) -> Matrix:
    """
    Lignes q de rang maximal avec q·u = 0 : projection sur le quotient
    ambiant / im(u).
    """
    return kernel_basis(u.T).T


def right_inverse(q: Matrix) -> Matrix:
    """Section s avec q·s = id (q de rang plein en lignes)"""
    s = solve(q, Matrix.identity(q.p, q.rows))
    if s is None:
        raise DimensionMismatchError(
            "Matrice sans inverse à droite",
            error_code="NO_RIGHT_INVERSE",
            context={"shape": q.shape},
        )
    return s
