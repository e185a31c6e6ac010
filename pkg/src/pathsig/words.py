"""Words over the alphabet {1, ..., d} and Lyndon words.

Words are plain tuples of integer letters, compared lexicographically by
Python's tuple order.  A word is Lyndon when it is nonempty and strictly
smaller than every one of its proper suffixes; these words index the basis
used everywhere else in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

Word = tuple[int, ...]

EMPTY_WORD: Word = ()


@dataclass(frozen=True)
class Alphabet:
    """The ordered alphabet {1, ..., d}."""

    d: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"alphabet size must be at least 1, got {self.d}")

    @property
    def letters(self) -> range:
        return range(1, self.d + 1)


def _dim(alphabet: Alphabet | int) -> int:
    d = alphabet.d if isinstance(alphabet, Alphabet) else int(alphabet)
    if d < 1:
        raise ValueError(f"alphabet size must be at least 1, got {d}")
    return d


def word_str(w: Word) -> str:
    """Render a word as digits, dot-separated when any letter exceeds 9."""
    if all(a <= 9 for a in w):
        return "".join(str(a) for a in w)
    return ".".join(str(a) for a in w)


def is_lyndon(w: Word) -> bool:
    """True iff w is nonempty and strictly smaller than all its proper suffixes."""
    w = tuple(w)
    if not w:
        return False
    return all(w < w[i:] for i in range(1, len(w)))


def generate_lyndon_words(alphabet: Alphabet | int, m: int) -> list[list[Word]]:
    """All Lyndon words of length at most m, grouped by length.

    Returns a list of m groups; group n-1 holds the length-n words in
    ascending lexicographic order.  Uses Duval's generation: repeat the
    current word periodically to length m, strip trailing maximal letters,
    increment the last remaining letter.  The walk emits words in global
    lexicographic order, so each group needs no further sorting.
    """
    d = _dim(alphabet)
    if m < 1:
        raise ValueError(f"level must be at least 1, got {m}")
    levels: list[list[Word]] = [[] for _ in range(m)]
    w = [1]
    while w:
        levels[len(w) - 1].append(tuple(w))
        w = [w[i % len(w)] for i in range(m)]
        while w and w[-1] == d:
            w.pop()
        if w:
            w[-1] += 1
    return levels


@lru_cache(maxsize=None)
def standard_factorization(w: Word) -> tuple[Word, Word]:
    """Split a Lyndon word of length >= 2 as u·v with v the longest proper
    Lyndon suffix.  Both factors are Lyndon and u < v."""
    if len(w) < 2:
        raise ValueError(f"cannot factor a word of length {len(w)}")
    if not is_lyndon(w):
        raise ValueError(f"not a Lyndon word: {word_str(w)}")
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise AssertionError("unreachable: a single letter is always Lyndon")


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def lyndon_count(alphabet: Alphabet | int, n: int) -> int:
    """Number of Lyndon words of length exactly n over d letters.

    Necklace-counting formula: (1/n) * sum over divisors k of n of
    mobius(n/k) * d**k.  Exact integer arithmetic throughout.
    """
    d = _dim(alphabet)
    if n < 1:
        raise ValueError(f"length must be at least 1, got {n}")
    total = sum(_mobius(n // k) * d**k for k in range(1, n + 1) if n % k == 0)
    return total // n
