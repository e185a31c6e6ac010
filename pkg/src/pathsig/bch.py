"""Baker-Campbell-Hausdorff tables in the Lyndon basis, and the log-product.

A table holds the exact rational coefficients of log(exp(X)exp(Y)) on the
Lyndon words over two letters up to a level.  Tables are derived internally
through the tensor algebra (exp, multiply, log, project), or loaded from a
bracket-structure data file and cross-validated against the derivation.

bch_concat substitutes arbitrary Lie elements for the two letters, which is
how log signatures absorb one path segment at a time without leaving the
Lie algebra.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .lie import LieElement, foliage, lie_bracket, project_from_tensor, rho_tree, sigma_tree
from .tensor import TensorElement, concat_product, tensor_exp, tensor_log
from .words import Word, generate_lyndon_words, is_lyndon, word_str

MAX_DERIVED_LEVEL = 10
MAX_FILE_LEVEL = 20
DEFAULT_VALIDATION_LEVEL = 6


class BchFormatError(ValueError):
    """A BCH data file does not have the expected layout.

    `line` is the 1-based offending line number (0 for an empty stream).
    """

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class BchIntegrityError(ValueError):
    """A BCH data file parsed cleanly but disagrees with the internal
    derivation.  `word` names the first differing basis element."""

    def __init__(self, message: str, word: Word):
        super().__init__(message)
        self.word = word


def bch_basis_words(level: int) -> list[Word]:
    """The two-letter Lyndon words up to the level, by level then order."""
    return [w for group in generate_lyndon_words(2, level) for w in group]


class BchTable:
    """Coefficients of log(exp(X)exp(Y)) on two-letter Lyndon words.

    Exact rationals; zero coefficients are not stored.
    """

    __slots__ = ("level", "terms")

    def __init__(self, level: int, terms: dict[Word, Fraction]):
        if level < 1:
            raise ValueError(f"level must be at least 1, got {level}")
        self.level = level
        self.terms: dict[Word, Fraction] = {}
        for w, c in terms.items():
            if len(w) > level or any(a not in (1, 2) for a in w):
                raise ValueError(f"word {word_str(w)} outside the two-letter basis at level {level}")
            if c != 0:
                self.terms[w] = Fraction(c)

    def coefficient(self, w: Word) -> Fraction:
        return self.terms.get(tuple(w), Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BchTable):
            return NotImplemented
        return self.level == other.level and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"BchTable(level={self.level}, {len(self.terms)} nonzero terms)"


@lru_cache(maxsize=None)
def compute_bch_table(m: int) -> BchTable:
    """Derive the table up to level m by the tensor route: exponentiate the
    two generators exactly, multiply, take log, project onto the basis."""
    if not 1 <= m <= MAX_DERIVED_LEVEL:
        raise ValueError(f"table derivation supports levels 1..{MAX_DERIVED_LEVEL}, got {m}")
    e1 = TensorElement.from_terms(2, m, {(1,): Fraction(1)}, exact=True)
    e2 = TensorElement.from_terms(2, m, {(2,): Fraction(1)}, exact=True)
    z = tensor_log(concat_product(tensor_exp(e1), tensor_exp(e2)))
    return BchTable(m, dict(project_from_tensor(z).coeffs))


def format_bch_data(table: BchTable) -> str:
    """Serialize a table in the bracket-structure layout load_bch_table reads.

    One line per basis element, in order: index, left subterm index, right
    subterm index (both 0 for the generators), coefficient numerator,
    denominator.  Every basis word up to the table level is written, zeros
    included.
    """
    words = bch_basis_words(table.level)
    position = {w: i + 1 for i, w in enumerate(words)}
    lines = []
    for w in words:
        if len(w) == 1:
            left = right = 0
        else:
            tree = sigma_tree(w)
            left = position[foliage(tree[0])]
            right = position[foliage(tree[1])]
        c = table.coefficient(w)
        lines.append(f"{position[w]} {left} {right} {c.numerator} {c.denominator}")
    return "\n".join(lines) + "\n"


def _rho_equal(tree_a, tree_b) -> bool:
    return rho_tree(tree_a) == rho_tree(tree_b)


def load_bch_table(stream, m: int, *, validation_level: int = DEFAULT_VALIDATION_LEVEL) -> BchTable:
    """Parse a bracket-structure data file up to level m.

    Accepts bytes, text, or a file-like object.  Each data line is five
    whitespace-separated integers: term index, left and right subterm
    indices (0 for the two generators, which must come first), and the
    coefficient's numerator and denominator.  Terms beyond level m are
    parsed but not kept.

    The assumed layout is verified, never trusted: up to
    min(m, validation_level), each term's bracketing must expand to the same
    tensor element as the basis bracketing, and every coefficient must match
    the internally derived table.  The first disagreement raises
    BchIntegrityError naming the basis word; structural problems raise
    BchFormatError with the line number.
    """
    if isinstance(stream, bytes):
        text = stream.decode("utf-8")
    elif isinstance(stream, str):
        text = stream
    else:
        raw = stream.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    if not 1 <= m <= MAX_FILE_LEVEL:
        raise ValueError(f"file loading supports levels 1..{MAX_FILE_LEVEL}, got {m}")

    trees: dict[int, object] = {}
    coefficients: dict[Word, Fraction] = {}
    seen_words: set[Word] = set()
    data_lines = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        data_lines += 1
        parts = stripped.split()
        if len(parts) != 5:
            raise BchFormatError(f"expected 5 fields, got {len(parts)}", lineno)
        try:
            index, left, right, num, den = (int(p) for p in parts)
        except ValueError:
            raise BchFormatError(f"non-integer field in {stripped!r}", lineno) from None
        if den == 0:
            raise BchFormatError("zero denominator", lineno)
        if index != data_lines:
            raise BchFormatError(f"term index {index} out of sequence (expected {data_lines})", lineno)
        if index <= 2:
            if (left, right) != (0, 0):
                raise BchFormatError(f"generator term {index} must have subterm indices 0 0", lineno)
            tree: object = index
        else:
            if not (1 <= left < index and 1 <= right < index):
                raise BchFormatError(f"subterm indices {left} {right} must reference earlier terms", lineno)
            tree = (trees[left], trees[right])
        trees[index] = tree
        w = foliage(tree)
        if not is_lyndon(w):
            raise BchFormatError(f"term foliage {word_str(w)} is not a Lyndon word", lineno)
        if w in seen_words:
            raise BchFormatError(f"duplicate term for word {word_str(w)}", lineno)
        seen_words.add(w)
        if len(w) <= m:
            if len(w) <= min(m, validation_level) and not _rho_equal(tree, sigma_tree(w)):
                raise BchIntegrityError(
                    f"bracketing for word {word_str(w)} does not match the basis element", w
                )
            coefficients[w] = Fraction(num, den)
    if data_lines == 0:
        raise BchFormatError("no data lines in stream", 0)

    check_level = min(m, validation_level)
    reference = compute_bch_table(check_level)
    for w in bch_basis_words(check_level):
        if w not in seen_words:
            loaded = Fraction(0)
        else:
            loaded = coefficients.get(w, Fraction(0))
        if loaded != reference.coefficient(w):
            raise BchIntegrityError(
                f"coefficient mismatch at word {word_str(w)}: "
                f"file has {loaded}, derivation gives {reference.coefficient(w)}",
                w,
            )
    return BchTable(m, coefficients)


def _substitute(tree, x: LieElement, y: LieElement, cache: dict) -> LieElement:
    cached = cache.get(tree)
    if cached is not None:
        return cached
    if tree == 1:
        value = x
    elif tree == 2:
        value = y
    else:
        value = lie_bracket(
            _substitute(tree[0], x, y, cache),
            _substitute(tree[1], x, y, cache),
        )
    cache[tree] = value
    return value


def bch_concat(x: LieElement, y: LieElement, table: BchTable | None = None) -> LieElement:
    """log(exp(x) exp(y)) computed entirely inside the Lie algebra.

    Substitutes x and y for the table's two letters, term by term.  A term
    whose cheapest realization already exceeds the truncation level is
    skipped before any bracket work: a word with a ones and b twos can only
    produce levels >= a * minlevel(x) + b * minlevel(y).
    """
    if (x.d, x.m) != (y.d, y.m):
        raise ValueError(f"mismatched elements: (d={x.d}, m={x.m}) vs (d={y.d}, m={y.m})")
    m = x.m
    if table is None:
        table = compute_bch_table(m)
    if table.level < m:
        raise ValueError(f"table level {table.level} below truncation level {m}")
    min_x = x.min_level()
    min_y = y.min_level()
    acc = LieElement.zero(x.d, m)
    cache: dict = {}
    for w, c in sorted(table.terms.items(), key=lambda t: (len(t[0]), t[0])):
        if len(w) > m:
            continue
        ones = sum(1 for a in w if a == 1)
        twos = len(w) - ones
        if ones and min_x is None:
            continue
        if twos and min_y is None:
            continue
        floor = ones * (min_x or 0) + twos * (min_y or 0)
        if floor > m:
            continue
        term = _substitute(sigma_tree(w), x, y, cache)
        if term.is_zero():
            continue
        scale = float(c) if term.is_float() else c
        acc = acc + term * scale
    return acc
