"""Truncated tensor algebra over {1, ..., d} and signatures of piecewise-linear paths.

An element of the algebra truncated at level m is stored as m+1 dense
coefficient blocks, one per word length; the length-n block lists the d**n
coefficients in lexicographic word order, so the word i1..in sits at flat
index sum_k (i_k - 1) * d**(n-k).  That indexing makes the concatenation
product a sum of outer products of level blocks.

Two storage modes share every operation: float elements keep numpy arrays,
exact elements keep plain lists whose entries may be Fraction or any other
scalar with ring arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .words import Word

LOG_EPSILON_TOLERANCE = 1e-9


def word_index(w: Word, d: int) -> int:
    """Flat index of w inside its level block."""
    idx = 0
    for a in w:
        if not 1 <= a <= d:
            raise ValueError(f"letter {a} outside alphabet of size {d}")
        idx = idx * d + (a - 1)
    return idx


def index_word(idx: int, n: int, d: int) -> Word:
    """Inverse of word_index for length-n words."""
    if not 0 <= idx < d**n:
        raise ValueError(f"index {idx} out of range for length {n}")
    letters = []
    for _ in range(n):
        idx, r = divmod(idx, d)
        letters.append(r + 1)
    return tuple(reversed(letters))


class TensorElement:
    """Element of the tensor algebra on d letters truncated at level m.

    levels[n] is the coefficient block for words of length n; level 0 is the
    single empty-word coefficient.  Blocks are numpy float arrays or plain
    lists of exact scalars; the two kinds must not be mixed in one element.
    """

    __slots__ = ("d", "m", "levels")

    def __init__(self, d: int, m: int, levels: list):
        if d < 1:
            raise ValueError(f"alphabet size must be at least 1, got {d}")
        if m < 0:
            raise ValueError(f"truncation level must be nonnegative, got {m}")
        if len(levels) != m + 1:
            raise ValueError(f"expected {m + 1} level blocks, got {len(levels)}")
        for n, block in enumerate(levels):
            if len(block) != d**n:
                raise ValueError(f"level {n} block has {len(block)} entries, expected {d**n}")
        self.d = d
        self.m = m
        self.levels = levels

    @property
    def is_float(self) -> bool:
        return isinstance(self.levels[0], np.ndarray)

    @classmethod
    def zero(cls, d: int, m: int, exact: bool = False) -> "TensorElement":
        if exact:
            levels = [[Fraction(0)] * d**n for n in range(m + 1)]
        else:
            levels = [np.zeros(d**n) for n in range(m + 1)]
        return cls(d, m, levels)

    @classmethod
    def unit(cls, d: int, m: int, exact: bool = False) -> "TensorElement":
        out = cls.zero(d, m, exact)
        out.levels[0][0] = Fraction(1) if exact else 1.0
        return out

    @classmethod
    def from_terms(cls, d: int, m: int, terms: dict, exact: bool = False) -> "TensorElement":
        """Build an element from {word: coefficient}; absent words are zero."""
        out = cls.zero(d, m, exact)
        for w, c in terms.items():
            n = len(w)
            if n > m:
                raise ValueError(f"word of length {n} exceeds truncation level {m}")
            out.levels[n][word_index(w, d)] = c
        return out

    def coefficient(self, w: Word):
        n = len(w)
        if n > self.m:
            raise ValueError(f"word of length {n} exceeds truncation level {self.m}")
        return self.levels[n][word_index(w, self.d)]

    def epsilon(self):
        return self.levels[0][0]

    def copy(self) -> "TensorElement":
        if self.is_float:
            return TensorElement(self.d, self.m, [b.copy() for b in self.levels])
        return TensorElement(self.d, self.m, [list(b) for b in self.levels])

    def _binary(self, other: "TensorElement", op) -> "TensorElement":
        _check_compatible(self, other)
        if self.is_float and other.is_float:
            levels = [op(a, b) for a, b in zip(self.levels, other.levels)]
        else:
            levels = [[op(x, y) for x, y in zip(a, b)] for a, b in zip(self.levels, other.levels)]
        return TensorElement(self.d, self.m, levels)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self) -> "TensorElement":
        if self.is_float:
            return TensorElement(self.d, self.m, [-b for b in self.levels])
        return TensorElement(self.d, self.m, [[-x for x in b] for b in self.levels])

    def __mul__(self, scalar) -> "TensorElement":
        if isinstance(scalar, TensorElement):
            raise TypeError("use concat_product for the algebra product")
        if self.is_float:
            return TensorElement(self.d, self.m, [b * scalar for b in self.levels])
        return TensorElement(self.d, self.m, [[x * scalar for x in b] for b in self.levels])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        if (self.d, self.m) != (other.d, other.m):
            return False
        return all(
            all(x == y for x, y in zip(a, b)) for a, b in zip(self.levels, other.levels)
        )

    __hash__ = None

    def max_abs(self) -> float:
        out = 0.0
        for block in self.levels:
            if len(block) == 0:
                continue
            if isinstance(block, np.ndarray):
                out = max(out, float(np.max(np.abs(block))))
            else:
                out = max(out, max(abs(float(x)) for x in block))
        return out

    def __repr__(self) -> str:
        kind = "float" if self.is_float else "exact"
        return f"TensorElement(d={self.d}, m={self.m}, {kind})"


def _check_compatible(a: TensorElement, b: TensorElement) -> None:
    if (a.d, a.m) != (b.d, b.m):
        raise ValueError(f"mismatched elements: (d={a.d}, m={a.m}) vs (d={b.d}, m={b.m})")


def concat_product(a: TensorElement, b: TensorElement) -> TensorElement:
    """Concatenation product: the coefficient of w in a*b is the sum over all
    splits w = uv of a(u) * b(v)."""
    _check_compatible(a, b)
    d, m = a.d, a.m
    if a.is_float and b.is_float:
        levels = []
        for n in range(m + 1):
            block = np.zeros(d**n)
            for j in range(n + 1):
                block += np.multiply.outer(a.levels[j], b.levels[n - j]).reshape(-1)
            levels.append(block)
        return TensorElement(d, m, levels)
    out = TensorElement.zero(d, m, exact=True)
    for n in range(m + 1):
        block = out.levels[n]
        for j in range(n + 1):
            left = a.levels[j]
            right = b.levels[n - j]
            width = d ** (n - j)
            for ia, ca in enumerate(left):
                if ca == 0:
                    continue
                base = ia * width
                for ib, cb in enumerate(right):
                    if cb == 0:
                        continue
                    block[base + ib] = block[base + ib] + ca * cb
    return out


def _inverse_int(i: int, like_float: bool):
    return 1.0 / i if like_float else Fraction(1, i)


def tensor_exp(x: TensorElement) -> TensorElement:
    """exp(x) of an element with zero empty-word coefficient, truncated at m.

    Horner form of the series: exp(x) = 1 + x(1 + (x/2)(1 + ... (1 + x/m))).
    """
    if x.epsilon() != 0:
        raise ValueError("tensor_exp requires a zero empty-word coefficient")
    use_float = x.is_float
    unit = TensorElement.unit(x.d, x.m, exact=not use_float)
    acc = unit
    for i in range(x.m, 0, -1):
        acc = unit + concat_product(x, acc) * _inverse_int(i, use_float)
    return acc


def tensor_log(x: TensorElement) -> TensorElement:
    """log(x) of an element with unit empty-word coefficient, truncated at m.

    Float elements tolerate an empty-word coefficient within 1e-9 of 1 and
    are renormalized by it first; exact elements must have epsilon exactly 1.
    """
    eps = x.epsilon()
    if x.is_float:
        if abs(eps - 1.0) > LOG_EPSILON_TOLERANCE:
            raise ValueError(f"tensor_log requires an empty-word coefficient near 1, got {eps!r}")
        if eps != 1.0:
            x = x * (1.0 / eps)
    elif eps != 1:
        raise ValueError(f"tensor_log requires an empty-word coefficient of 1, got {eps!r}")
    use_float = x.is_float
    unit = TensorElement.unit(x.d, x.m, exact=not use_float)
    u = x - unit
    acc = unit * _inverse_int(x.m, use_float) if x.m >= 1 else TensorElement.zero(x.d, x.m, exact=not use_float)
    for i in range(x.m - 1, 0, -1):
        acc = unit * _inverse_int(i, use_float) - concat_product(u, acc)
    return concat_product(u, acc)


@dataclass(frozen=True, eq=False)
class PathPoints:
    """Vertices of a piecewise-linear path in R^d, one row per point."""

    d: int
    points: np.ndarray

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[float]]) -> "PathPoints":
        pts = np.asarray(list(rows), dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValueError("a path needs at least one point")
        if pts.shape[1] < 1:
            raise ValueError("points need at least one coordinate")
        return cls(int(pts.shape[1]), pts)

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def displacements(self) -> np.ndarray:
        return np.diff(self.points, axis=0)


def line_signature(displacement: Sequence[float], m: int) -> TensorElement:
    """Signature of a straight segment with the given displacement: the
    level-n block is the n-fold outer power of the displacement over n!."""
    v = np.asarray(displacement, dtype=float)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError("displacement must be a nonempty vector")
    if m < 1:
        raise ValueError(f"level must be at least 1, got {m}")
    d = int(v.shape[0])
    levels = [np.ones(1)]
    cur = np.ones(1)
    for n in range(1, m + 1):
        cur = np.multiply.outer(cur, v).reshape(-1) / n
        levels.append(cur)
    return TensorElement(d, m, levels)


def _as_path(path) -> PathPoints:
    if isinstance(path, PathPoints):
        return path
    return PathPoints.from_rows(path)


def path_signature(path, m: int) -> TensorElement:
    """Signature of the piecewise-linear path through the given points:
    the product of its segments' straight-line signatures."""
    pts = _as_path(path)
    if m < 1:
        raise ValueError(f"level must be at least 1, got {m}")
    sig = TensorElement.unit(pts.d, m)
    for v in pts.displacements():
        sig = concat_product(sig, line_signature(v, m))
    return sig
