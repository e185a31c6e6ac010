"""Generalized Hall bases of the free Lie algebra, and coordinates in them.

A Hall set is built from a total order on bracket trees: a tree [u, v] is
admitted when u and v are already in the set, u < v, and v is either a
letter or a bracket [x, y] with x <= u.  Three orders are supported:

* "lyndon-foliage": trees compare by their foliage words, lexicographically.
  The admitted trees are exactly the canonical bracketings of the Lyndon
  words.
* "coropa": deeper trees are greater; trees of equal depth compare
  recursively, left subtree first.
* "classical-hall": the coropa trees with every bracket mirrored, which
  realizes the convention that puts the greater element on the left.

Coordinates of a tensor element in any of these bases come from a dense
per-level linear solve against the basis expansions.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key

import numpy as np

from .lie import NotALieElementError, render_bracket, rho_tree
from .tensor import TensorElement, word_index
from .words import lyndon_count

ORDERS = ("lyndon-foliage", "coropa", "classical-hall")

EXPRESS_TOLERANCE = 1e-8


def _foliage(tree) -> tuple:
    if isinstance(tree, int):
        return (tree,)
    return _foliage(tree[0]) + _foliage(tree[1])


def _depth(tree) -> int:
    if isinstance(tree, int):
        return 1
    return _depth(tree[0]) + _depth(tree[1])


def _less_foliage(a, b) -> bool:
    return _foliage(a) < _foliage(b)


def _less_coropa(a, b) -> bool:
    da, db = _depth(a), _depth(b)
    if da != db:
        return da < db
    if isinstance(a, int):
        return a < b
    if a[0] != b[0]:
        return _less_coropa(a[0], b[0])
    return _less_coropa(a[1], b[1])


def _mirror(tree):
    if isinstance(tree, int):
        return tree
    return (_mirror(tree[1]), _mirror(tree[0]))


class HallBasis:
    """A Hall set up to level m, grouped by level in ascending order."""

    __slots__ = ("d", "m", "order", "levels")

    def __init__(self, d: int, m: int, order: str, levels: list):
        self.d = d
        self.m = m
        self.order = order
        self.levels = levels

    def elements(self) -> list:
        return [tree for level in self.levels for tree in level]

    def render(self) -> list[list[str]]:
        return [[render_bracket(tree) for tree in level] for level in self.levels]

    def __repr__(self) -> str:
        total = sum(len(level) for level in self.levels)
        return f"HallBasis(d={self.d}, m={self.m}, order={self.order!r}, {total} elements)"


def _build_hall_set(d: int, m: int, less) -> list:
    levels: list[list] = [list(range(1, d + 1))]
    for n in range(2, m + 1):
        found = []
        for p in range(1, n):
            for u in levels[p - 1]:
                for v in levels[n - p - 1]:
                    if not less(u, v):
                        continue
                    if isinstance(v, tuple) and less(u, v[0]):
                        continue
                    found.append((u, v))
        found.sort(key=cmp_to_key(lambda a, b: -1 if less(a, b) else (1 if less(b, a) else 0)))
        levels.append(found)
    return levels


def build_hall_basis(d: int, m: int, order: str = "lyndon-foliage") -> HallBasis:
    """Hall set for the chosen order, with each level sorted ascending."""
    if d < 1:
        raise ValueError(f"alphabet size must be at least 1, got {d}")
    if m < 1:
        raise ValueError(f"level must be at least 1, got {m}")
    if order == "lyndon-foliage":
        levels = _build_hall_set(d, m, _less_foliage)
    elif order == "coropa":
        levels = _build_hall_set(d, m, _less_coropa)
    elif order == "classical-hall":
        levels = [[_mirror(tree) for tree in level] for level in _build_hall_set(d, m, _less_coropa)]
    else:
        raise ValueError(f"unknown order {order!r}, expected one of {ORDERS}")
    for n, level in enumerate(levels, start=1):
        expected = lyndon_count(d, n)
        if len(level) != expected:
            raise AssertionError(
                f"hall set has {len(level)} elements at level {n}, expected {expected}"
            )
    return HallBasis(d, m, order, levels)


def express_in_hall_basis(t: TensorElement, basis: HallBasis) -> list[list]:
    """Coordinates of a tensor element in a Hall basis, grouped by level.

    Solves one dense least-squares system per level against the basis
    expansions, then checks the residual of the full expansion: at most 1e-8
    in max-norm for floats, exactly zero for exact coefficients.  A
    noticeable residual means the element is not Lie, and raises
    NotALieElementError.
    """
    if t.epsilon() != 0:
        raise ValueError("a Lie element has no empty-word component")
    if t.m > basis.m:
        raise ValueError(f"element level {t.m} exceeds basis level {basis.m}")
    d = t.d
    if d != basis.d:
        raise ValueError(f"element dimension {t.d} does not match basis dimension {basis.d}")
    out: list[list] = []
    worst = 0.0
    for n in range(1, t.m + 1):
        trees = basis.levels[n - 1]
        block = t.levels[n]
        if t.is_float:
            matrix = np.zeros((d**n, len(trees)))
            for j, tree in enumerate(trees):
                for w, c in rho_tree(tree).items():
                    matrix[word_index(w, d), j] = c
            coords, _, rank, _ = np.linalg.lstsq(matrix, block, rcond=None)
            if rank < len(trees):
                raise RuntimeError(f"hall basis expansion is rank-deficient at level {n}")
            residual = matrix @ coords - block
            if residual.size:
                worst = max(worst, float(np.max(np.abs(residual))))
            out.append([float(c) for c in coords])
        else:
            coords, residual_norm = _solve_exact(trees, block, d, n)
            worst = max(worst, residual_norm)
            out.append(coords)
    tolerance = EXPRESS_TOLERANCE if t.is_float else 0.0
    if worst > tolerance:
        raise NotALieElementError(
            f"tensor element is not a Lie expansion (residual max-norm {worst:.3e})", worst
        )
    return out


def _solve_exact(trees: list, block: list, d: int, n: int) -> tuple[list, float]:
    """Exact Gaussian elimination with the first nonzero entry as pivot."""
    k = len(trees)
    rows = d**n
    matrix = [[Fraction(0)] * k for _ in range(rows)]
    for j, tree in enumerate(trees):
        for w, c in rho_tree(tree).items():
            matrix[word_index(w, d)][j] = Fraction(c)
    rhs = [Fraction(x) for x in block]
    aug = [matrix[i] + [rhs[i]] for i in range(rows)]
    pivot_rows: list[int] = []
    row = 0
    for col in range(k):
        pivot = next((r for r in range(row, rows) if aug[r][col] != 0), None)
        if pivot is None:
            raise RuntimeError(f"hall basis expansion is rank-deficient at level {n}")
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for r in range(rows):
            if r != row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row])]
        pivot_rows.append(row)
        row += 1
    coords = [aug[pivot_rows[j]][k] for j in range(k)]
    residual = 0.0
    for r in range(row, rows):
        if aug[r][k] != 0:
            residual = max(residual, abs(float(aug[r][k])))
    return coords, residual
