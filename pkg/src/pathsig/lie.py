"""Free Lie algebra on {1, ..., d} truncated at level m, in Lyndon coordinates.

A bracket tree is an integer letter or a pair of bracket trees.  Every
Lyndon word w has a canonical tree sigma(w): a letter stands for itself,
and a longer word splits at its longest proper Lyndon suffix.  The map rho
expands a tree into the tensor algebra by sending [a, b] to rho(a)rho(b) -
rho(b)rho(a); on the basis it is triangular, in the sense that rho(sigma(w))
is supported on permutations of w that are not lexicographically below w,
with coefficient 1 on w itself.  That triangularity drives the projection
from tensor elements back to Lyndon coordinates.

Brackets of two basis elements are rewritten into the basis with Jacobi
identities: for Lyndon u < v with standard factorization u = xy, the
product [u, v] equals the basis word uv when v <= y, and otherwise expands
as [y, [v, x]] + [x, [y, v]] on strictly closer pairs.

Per-(d, m) lookup tables live on a LyndonBasis object.  Tables grow lazily
behind a lock and are read-only afterwards, so concurrent readers (the HTTP
service) are safe.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .tensor import TensorElement, word_index
from .words import Word, generate_lyndon_words, is_lyndon, standard_factorization, word_str

BracketTree = "int | tuple[BracketTree, BracketTree]"


class TruncationOverflowError(ValueError):
    """A bracket landed beyond the truncation level."""


class NotALieElementError(ValueError):
    """A tensor element is not the expansion of any Lie element.

    Carries the uncancelled residual's max-norm in `residual_norm`.
    """

    def __init__(self, message: str, residual_norm: float):
        super().__init__(message)
        self.residual_norm = residual_norm


def foliage(tree) -> Word:
    """Leaves of a bracket tree, left to right."""
    if isinstance(tree, int):
        return (tree,)
    left, right = tree
    return foliage(left) + foliage(right)


def render_bracket(tree) -> str:
    """Canonical text form of a bracket tree, e.g. [1,[1,2]]."""
    if isinstance(tree, int):
        return str(tree)
    left, right = tree
    return f"[{render_bracket(left)},{render_bracket(right)}]"


@lru_cache(maxsize=None)
def sigma_tree(w: Word):
    """Canonical bracketing of a Lyndon word: a letter is a leaf, and a longer
    word brackets its standard factorization."""
    if not is_lyndon(w):
        raise ValueError(f"not a Lyndon word: {word_str(w) or w!r}")
    if len(w) == 1:
        return w[0]
    u, v = standard_factorization(w)
    return (sigma_tree(u), sigma_tree(v))


@lru_cache(maxsize=None)
def rho_tree(tree) -> dict:
    """Expansion of a bracket tree into {word: integer coefficient}."""
    if isinstance(tree, int):
        if tree < 1:
            raise ValueError(f"letter {tree} is not positive")
        return {(tree,): 1}
    left, right = tree
    a = rho_tree(left)
    b = rho_tree(right)
    out: dict[Word, int] = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            cw = w1 + w2
            out[cw] = out.get(cw, 0) + c1 * c2
            wc = w2 + w1
            out[wc] = out.get(wc, 0) - c1 * c2
    return {w: c for w, c in out.items() if c}


def _is_float_scalar(c) -> bool:
    return isinstance(c, (float, np.floating))


class LieElement:
    """Lie element as {Lyndon word: coefficient}; zero coefficients dropped.

    Coefficients are floats or exact scalars (Fraction, or polynomial-valued
    for specialization); one element never mixes the two.
    """

    __slots__ = ("d", "m", "coeffs")

    def __init__(self, d: int, m: int, coeffs: dict | None = None):
        if d < 1:
            raise ValueError(f"alphabet size must be at least 1, got {d}")
        if m < 1:
            raise ValueError(f"truncation level must be at least 1, got {m}")
        self.d = d
        self.m = m
        self.coeffs: dict[Word, object] = {}
        if coeffs:
            for w, c in coeffs.items():
                if not is_lyndon(w):
                    raise ValueError(f"not a Lyndon word: {word_str(w) or w!r}")
                if len(w) > m or any(a < 1 or a > d for a in w):
                    raise ValueError(f"word {word_str(w)} outside the (d={d}, m={m}) basis")
                if c == 0:
                    continue
                self.coeffs[w] = c

    @classmethod
    def zero(cls, d: int, m: int) -> "LieElement":
        return cls(d, m)

    @classmethod
    def generator(cls, d: int, m: int, letter: int, coefficient=1) -> "LieElement":
        return cls(d, m, {(letter,): coefficient})

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_float(self) -> bool:
        return all(_is_float_scalar(c) for c in self.coeffs.values())

    def min_level(self) -> int | None:
        if not self.coeffs:
            return None
        return min(len(w) for w in self.coeffs)

    def __add__(self, other: "LieElement") -> "LieElement":
        _check_same_space(self, other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return LieElement(self.d, self.m, out)

    def __sub__(self, other: "LieElement") -> "LieElement":
        _check_same_space(self, other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) - c
        return LieElement(self.d, self.m, out)

    def __neg__(self) -> "LieElement":
        return LieElement(self.d, self.m, {w: -c for w, c in self.coeffs.items()})

    def __mul__(self, scalar) -> "LieElement":
        if isinstance(scalar, LieElement):
            raise TypeError("use lie_bracket for the bracket")
        return LieElement(self.d, self.m, {w: c * scalar for w, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return (self.d, self.m) == (other.d, other.m) and self.coeffs == other.coeffs

    __hash__ = None

    def to_vector(self):
        """Coefficients in canonical order (by level, then lexicographic).

        Float elements give a numpy array, exact elements a list.
        """
        basis = lyndon_basis(self.d, self.m)
        if self.is_float():
            out = np.zeros(len(basis.words))
            for w, c in self.coeffs.items():
                out[basis.index[w]] = c
            return out
        out = [Fraction(0)] * len(basis.words)
        for w, c in self.coeffs.items():
            out[basis.index[w]] = c
        return out

    @classmethod
    def from_vector(cls, d: int, m: int, values) -> "LieElement":
        basis = lyndon_basis(d, m)
        if len(values) != len(basis.words):
            raise ValueError(f"expected {len(basis.words)} coordinates, got {len(values)}")
        return cls(d, m, {w: v for w, v in zip(basis.words, values)})

    def __repr__(self) -> str:
        inside = ", ".join(f"{word_str(w)}: {c}" for w, c in sorted(self.coeffs.items(), key=lambda t: (len(t[0]), t[0])))
        return f"LieElement(d={self.d}, m={self.m}, {{{inside}}})"


def _check_same_space(a: LieElement, b: LieElement) -> None:
    if (a.d, a.m) != (b.d, b.m):
        raise ValueError(f"mismatched elements: (d={a.d}, m={a.m}) vs (d={b.d}, m={b.m})")


class LyndonBasis:
    """Lookup tables for the Lyndon basis at fixed (d, m).

    Holds the basis words in canonical order, bracket rewrites of word pairs,
    rho expansions, anagram classes per level, and flattened per-level-pair
    bracket tables for vectorized float arithmetic.  All memo tables grow
    lazily behind a reentrant lock.
    """

    def __init__(self, d: int, m: int):
        self.d = d
        self.m = m
        self.levels = generate_lyndon_words(d, m)
        self.words: list[Word] = [w for level in self.levels for w in level]
        self.index = {w: i for i, w in enumerate(self.words)}
        self.level_pos = {w: i for level in self.levels for i, w in enumerate(level)}
        self.anagram_classes: list[list[list[Word]]] = []
        for level in self.levels:
            grouped: dict[Word, list[Word]] = {}
            for w in level:
                grouped.setdefault(tuple(sorted(w)), []).append(w)
            self.anagram_classes.append(list(grouped.values()))
        self._bracket_memo: dict[tuple[Word, Word], tuple] = {}
        self._rho_memo: dict[Word, dict] = {}
        self._rho_arrays: dict[Word, tuple] = {}
        self._pair_tables: dict[tuple[int, int], tuple] = {}
        self._lock = threading.RLock()

    def bracket_entries(self, u: Word, v: Word) -> tuple:
        """Lyndon coordinates of the bracket of two basis words, as a tuple of
        (word, integer coefficient) pairs.  Not truncated: |u| + |v| may
        exceed m; callers decide what to do with long results."""
        with self._lock:
            return self._bracket(u, v)

    def _bracket(self, u: Word, v: Word) -> tuple:
        key = (u, v)
        cached = self._bracket_memo.get(key)
        if cached is not None:
            return cached
        if u == v:
            entries: tuple = ()
        elif v < u:
            entries = tuple((w, -c) for w, c in self._bracket(v, u))
        elif len(u) == 1:
            entries = ((u + v, 1),)
        else:
            x, y = standard_factorization(u)
            if not y < v:
                entries = ((u + v, 1),)
            else:
                acc: dict[Word, int] = {}
                for w, c in self._bracket(v, x):
                    for w2, c2 in self._bracket(y, w):
                        acc[w2] = acc.get(w2, 0) + c * c2
                for w, c in self._bracket(y, v):
                    for w2, c2 in self._bracket(x, w):
                        acc[w2] = acc.get(w2, 0) + c * c2
                entries = tuple(sorted((w, c) for w, c in acc.items() if c))
        self._bracket_memo[key] = entries
        return entries

    def rho_word(self, w: Word) -> dict:
        """rho(sigma(w)) as {word: integer coefficient}, all words level |w|."""
        with self._lock:
            return self._rho(w)

    def _rho(self, w: Word) -> dict:
        cached = self._rho_memo.get(w)
        if cached is not None:
            return cached
        if len(w) == 1:
            out = {w: 1}
        else:
            u, v = standard_factorization(w)
            a = self._rho(u)
            b = self._rho(v)
            acc: dict[Word, int] = {}
            for w1, c1 in a.items():
                for w2, c2 in b.items():
                    cw = w1 + w2
                    acc[cw] = acc.get(cw, 0) + c1 * c2
                    wc = w2 + w1
                    acc[wc] = acc.get(wc, 0) - c1 * c2
            out = {word: c for word, c in acc.items() if c}
        self._rho_memo[w] = out
        return out

    def rho_arrays(self, w: Word) -> tuple:
        """rho(sigma(w)) as (flat level indices, float coefficients)."""
        with self._lock:
            cached = self._rho_arrays.get(w)
            if cached is not None:
                return cached
            expansion = self._rho(w)
            idx = np.array([word_index(word, self.d) for word in expansion], dtype=np.int64)
            coeffs = np.array(list(expansion.values()), dtype=float)
            self._rho_arrays[w] = (idx, coeffs)
            return (idx, coeffs)

    def pair_table(self, p: int, q: int) -> tuple:
        """Flattened bracket table for level pair (p, q) with p + q <= m:
        arrays (I, J, K, C) meaning [level-p word i, level-q word j] includes
        C * (level-(p+q) word k)."""
        with self._lock:
            cached = self._pair_tables.get((p, q))
            if cached is not None:
                return cached
            rows_i: list[int] = []
            rows_j: list[int] = []
            rows_k: list[int] = []
            vals: list[int] = []
            for i, u in enumerate(self.levels[p - 1]):
                for j, v in enumerate(self.levels[q - 1]):
                    for w, c in self._bracket(u, v):
                        rows_i.append(i)
                        rows_j.append(j)
                        rows_k.append(self.level_pos[w])
                        vals.append(c)
            table = (
                np.array(rows_i, dtype=np.int64),
                np.array(rows_j, dtype=np.int64),
                np.array(rows_k, dtype=np.int64),
                np.array(vals, dtype=float),
            )
            self._pair_tables[(p, q)] = table
            return table


@lru_cache(maxsize=None)
def lyndon_basis(d: int, m: int) -> LyndonBasis:
    """The shared LyndonBasis instance for (d, m)."""
    return LyndonBasis(d, m)


def lyndon_bracket_basis(u: Word, v: Word, d: int, m: int) -> LieElement:
    """Bracket of two basis words as a Lie element in the (d, m) basis.

    Raises TruncationOverflowError when |u| + |v| > m; use lie_bracket for
    silent truncation.
    """
    u = tuple(u)
    v = tuple(v)
    for w in (u, v):
        if not is_lyndon(w):
            raise ValueError(f"not a Lyndon word: {word_str(w) or w!r}")
        if any(a > d for a in w):
            raise ValueError(f"word {word_str(w)} uses letters outside 1..{d}")
    if len(u) + len(v) > m:
        raise TruncationOverflowError(
            f"bracket of levels {len(u)} and {len(v)} exceeds truncation level {m}"
        )
    basis = lyndon_basis(d, m)
    return LieElement(d, m, dict(basis.bracket_entries(u, v)))


def _vectors_from_coeffs(basis: LyndonBasis, coeffs: dict) -> list:
    out = [np.zeros(len(level)) for level in basis.levels]
    for w, c in coeffs.items():
        out[len(w) - 1][basis.level_pos[w]] = c
    return out


def _coeffs_from_vectors(basis: LyndonBasis, vectors: list) -> dict:
    out: dict[Word, float] = {}
    for level_words, block in zip(basis.levels, vectors):
        for w, c in zip(level_words, block):
            if c != 0.0:
                out[w] = float(c)
    return out


def _vector_bracket(basis: LyndonBasis, a: list, b: list) -> list:
    out = [np.zeros(len(level)) for level in basis.levels]
    m = basis.m
    nonzero_a = [p for p in range(1, m + 1) if np.any(a[p - 1])]
    nonzero_b = [q for q in range(1, m + 1) if np.any(b[q - 1])]
    for p in nonzero_a:
        for q in nonzero_b:
            if p + q > m:
                continue
            rows_i, rows_j, rows_k, vals = basis.pair_table(p, q)
            if len(rows_i) == 0:
                continue
            np.add.at(out[p + q - 1], rows_k, vals * a[p - 1][rows_i] * b[q - 1][rows_j])
    return out


def lie_bracket(x: LieElement, y: LieElement) -> LieElement:
    """Bilinear bracket, silently dropping terms beyond the truncation level."""
    _check_same_space(x, y)
    basis = lyndon_basis(x.d, x.m)
    if x.is_float() and y.is_float():
        a = _vectors_from_coeffs(basis, x.coeffs)
        b = _vectors_from_coeffs(basis, y.coeffs)
        return LieElement(x.d, x.m, _coeffs_from_vectors(basis, _vector_bracket(basis, a, b)))
    acc: dict[Word, object] = {}
    for u, cu in x.coeffs.items():
        for v, cv in y.coeffs.items():
            if len(u) + len(v) > x.m:
                continue
            scale = cu * cv
            for w, k in basis.bracket_entries(u, v):
                acc[w] = acc.get(w, 0) + scale * k
    return LieElement(x.d, x.m, acc)


def expand_rho(x: LieElement) -> TensorElement:
    """Tensor expansion of a Lie element; level n of the result only sees
    basis words of length n."""
    basis = lyndon_basis(x.d, x.m)
    if x.is_float():
        out = TensorElement.zero(x.d, x.m)
        for w, c in x.coeffs.items():
            idx, vals = basis.rho_arrays(w)
            out.levels[len(w)][idx] += c * vals
        return out
    out = TensorElement.zero(x.d, x.m, exact=True)
    for w, c in x.coeffs.items():
        block = out.levels[len(w)]
        for word, k in basis.rho_word(w).items():
            i = word_index(word, x.d)
            block[i] = block[i] + c * k
    return out


PROJECTION_TOLERANCE = 1e-8


def project_from_tensor(t: TensorElement) -> LieElement:
    """Invert expand_rho on its image.

    Peels one anagram class at a time in ascending lexicographic order: the
    smallest unprocessed Lyndon word's tensor coefficient is its Lyndon
    coordinate, and subtracting its rho expansion never disturbs smaller
    words, by triangularity.  The leftover residual must vanish (exactly, or
    within 1e-8 max-norm for floats); otherwise NotALieElementError reports
    its size.
    """
    if t.epsilon() != 0:
        raise ValueError("a Lie element has no empty-word component")
    basis = lyndon_basis(t.d, t.m)
    use_float = t.is_float
    coeffs: dict[Word, object] = {}
    residual_norm = 0.0
    for n in range(1, t.m + 1):
        if use_float:
            residual = t.levels[n].copy()
            for anagram_class in basis.anagram_classes[n - 1]:
                for w in anagram_class:
                    c = residual[word_index(w, t.d)]
                    if c != 0.0:
                        coeffs[w] = c
                        idx, vals = basis.rho_arrays(w)
                        residual[idx] -= c * vals
            if len(residual):
                residual_norm = max(residual_norm, float(np.max(np.abs(residual))))
        else:
            residual = list(t.levels[n])
            for anagram_class in basis.anagram_classes[n - 1]:
                for w in anagram_class:
                    c = residual[word_index(w, t.d)]
                    if c != 0:
                        coeffs[w] = c
                        for word, k in basis.rho_word(w).items():
                            i = word_index(word, t.d)
                            residual[i] = residual[i] - c * k
            for r in residual:
                if r != 0:
                    residual_norm = max(residual_norm, abs(float(r)))
    tolerance = PROJECTION_TOLERANCE if use_float else 0.0
    if residual_norm > tolerance:
        raise NotALieElementError(
            f"tensor element is not a Lie expansion (residual max-norm {residual_norm:.3e})",
            residual_norm,
        )
    return LieElement(t.d, t.m, coeffs)
