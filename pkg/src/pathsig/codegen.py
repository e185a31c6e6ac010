"""Specialization of the one-segment log-signature join into straight-line code.

Running bch_concat once with polynomial coefficients, on symbolic log
signature coordinates and symbolic segment displacements, yields every
output coordinate as an exact polynomial.  Those polynomials compile into a
deterministic assignment program: hoisted products for monomials used more
than once, then one infix expression per output coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bch import BchTable, bch_concat, compute_bch_table
from .lie import LieElement, lyndon_basis
from .words import Word, word_str

Monomial = tuple[str, ...]

CSE_MIN_USES = 2


class Polynomial:
    """Polynomial with Fraction coefficients in named commuting variables.

    Terms map a sorted tuple of variable names (with multiplicity) to a
    nonzero coefficient; the empty tuple is the constant term.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                if c != 0:
                    self.terms[mono] = c

    @classmethod
    def variable(cls, name: str) -> "Polynomial":
        return cls({(name,): Fraction(1)})

    @classmethod
    def constant(cls, value) -> "Polynomial":
        return cls({(): Fraction(value)})

    @staticmethod
    def _coerce(other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "Polynomial":
        return Polynomial({mono: -c for mono, c in self.terms.items()})

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(sorted(m1 + m2))
                out[mono] = out.get(mono, Fraction(0)) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        return self.terms == coerced.terms

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def evaluate(self, env: dict[str, float]) -> float:
        total = 0.0
        for mono, c in self.terms.items():
            value = float(c)
            for name in mono:
                value *= env[name]
            total += value
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "Polynomial(0)"
        bits = [f"{c}*{'*'.join(mono) if mono else '1'}" for mono, c in sorted(self.terms.items())]
        return f"Polynomial({' + '.join(bits)})"


def coordinate_name(w: Word) -> str:
    """Identifier for the log signature coordinate of a word."""
    if all(a <= 9 for a in w):
        return "a_" + "".join(str(a) for a in w)
    return "a_" + "_".join(str(a) for a in w)


def segment_name(letter: int) -> str:
    """Identifier for one segment displacement component."""
    return f"s_{letter}"


def output_name(w: Word) -> str:
    if all(a <= 9 for a in w):
        return "out_" + "".join(str(a) for a in w)
    return "out_" + "_".join(str(a) for a in w)


@dataclass(frozen=True)
class ExpressionProgram:
    """Straight-line program for one segment join at fixed (d, m).

    coordinates: basis words, level-ascending then lexicographic; the inputs
    a_<word> and the outputs follow this order.  pool lists hoisted products
    as (name, factor names); compiled lists, per output, (coefficient,
    factor names) terms where factor names reference inputs or pool entries.
    polynomials keeps the raw uncompiled outputs.
    """

    d: int
    m: int
    coordinates: tuple[Word, ...]
    pool: tuple[tuple[str, tuple[str, ...]], ...]
    compiled: tuple[tuple[tuple[Fraction, tuple[str, ...]], ...], ...]
    polynomials: tuple[Polynomial, ...]


def specialize_segment_join(d: int, m: int, table: BchTable | None = None) -> ExpressionProgram:
    """Run the BCH fold once with symbolic inputs and compile the result."""
    basis = lyndon_basis(d, m)
    if table is None:
        table = compute_bch_table(m)
    x = LieElement(d, m, {w: Polynomial.variable(coordinate_name(w)) for w in basis.words})
    y = LieElement(d, m, {(i,): Polynomial.variable(segment_name(i)) for i in range(1, d + 1)})
    joined = bch_concat(x, y, table)
    zero = Polynomial()
    outputs = []
    for w in basis.words:
        value = joined.coeffs.get(w, zero)
        if not isinstance(value, Polynomial):
            value = Polynomial.constant(value)
        outputs.append(value)

    counts: dict[Monomial, int] = {}
    for poly in outputs:
        for mono in poly.terms:
            if len(mono) >= 2:
                counts[mono] = counts.get(mono, 0) + 1
    hoisted = sorted((mono for mono, c in counts.items() if c >= CSE_MIN_USES), key=lambda t: (len(t), t))
    pool: list[tuple[str, tuple[str, ...]]] = []
    name_of: dict[Monomial, str] = {}
    for i, mono in enumerate(hoisted):
        name = f"t{i + 1}"
        best: Monomial | None = None
        for prev in hoisted[:i]:
            if len(prev) < len(mono) and _is_submultiset(prev, mono) and (best is None or len(prev) > len(best)):
                best = prev
        if best is None:
            factors: tuple[str, ...] = mono
        else:
            factors = (name_of[best],) + _multiset_difference(mono, best)
        pool.append((name, factors))
        name_of[mono] = name

    compiled = []
    for poly in outputs:
        terms = []
        for mono, c in sorted(poly.terms.items(), key=lambda t: (len(t[0]), t[0])):
            refs = (name_of[mono],) if mono in name_of else mono
            terms.append((c, refs))
        compiled.append(tuple(terms))

    return ExpressionProgram(
        d=d,
        m=m,
        coordinates=tuple(basis.words),
        pool=tuple(pool),
        compiled=tuple(compiled),
        polynomials=tuple(outputs),
    )


def _is_submultiset(small: Monomial, large: Monomial) -> bool:
    remaining = list(large)
    for name in small:
        if name in remaining:
            remaining.remove(name)
        else:
            return False
    return True


def _multiset_difference(large: Monomial, small: Monomial) -> tuple[str, ...]:
    remaining = list(large)
    for name in small:
        remaining.remove(name)
    return tuple(remaining)


def evaluate_program(program: ExpressionProgram, coordinates, segment) -> list[float]:
    """Run the compiled program on float inputs: current log signature
    coordinates in basis order, then one segment displacement."""
    if len(coordinates) != len(program.coordinates):
        raise ValueError(f"expected {len(program.coordinates)} coordinates, got {len(coordinates)}")
    if len(segment) != program.d:
        raise ValueError(f"expected {program.d} segment components, got {len(segment)}")
    env: dict[str, float] = {}
    for w, value in zip(program.coordinates, coordinates):
        env[coordinate_name(w)] = float(value)
    for i, value in enumerate(segment, start=1):
        env[segment_name(i)] = float(value)
    for name, factors in program.pool:
        value = 1.0
        for f in factors:
            value *= env[f]
        env[name] = value
    outputs = []
    for terms in program.compiled:
        total = 0.0
        for c, refs in terms:
            value = float(c)
            for r in refs:
                value *= env[r]
            total += value
        outputs.append(total)
    return outputs


def _fraction_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"({q.numerator}/{q.denominator})"


def _render_terms(terms) -> str:
    if not terms:
        return "0"
    groups: dict[Fraction, list[tuple[bool, str]]] = {}
    order: list[Fraction] = []
    for c, refs in terms:
        magnitude = abs(c)
        if magnitude not in groups:
            groups[magnitude] = []
            order.append(magnitude)
        groups[magnitude].append((c > 0, "*".join(refs) if refs else "1"))
    parts: list[tuple[bool, str]] = []
    for magnitude in order:
        items = groups[magnitude]
        if magnitude == 1:
            parts.extend(items)
        elif len(items) == 1:
            positive, text = items[0]
            parts.append((positive, f"{_fraction_text(magnitude)}*{text}"))
        else:
            lead_positive = items[0][0]
            inner = items[0][1]
            for positive, text in items[1:]:
                inner += f" + {text}" if positive == lead_positive else f" - {text}"
            parts.append((lead_positive, f"{_fraction_text(magnitude)}*({inner})"))
    first_positive, first_text = parts[0]
    rendered = first_text if first_positive else f"-{first_text}"
    for positive, text in parts[1:]:
        rendered += f" + {text}" if positive else f" - {text}"
    return rendered


def emit_source(program: ExpressionProgram, dialect: str = "infix-assignments") -> str:
    """Deterministic text form of the program.

    The only dialect, "infix-assignments", writes one semicolon-terminated
    assignment per pool entry and per output, after a header recording the
    generation parameters.  Identical inputs yield byte-identical text.
    """
    if dialect != "infix-assignments":
        raise ValueError(f"unknown dialect {dialect!r}")
    n = len(program.coordinates)
    lines = [
        f"// segment join for log signatures: dimension {program.d}, level {program.m}",
        f"// {n} coordinates (Lyndon words by level, then order); inputs a_<word> and s_<letter>",
        f"// exact rational coefficients; products used {CSE_MIN_USES}+ times are hoisted",
    ]
    for name, factors in program.pool:
        lines.append(f"{name} = {'*'.join(factors)};")
    for w, terms in zip(program.coordinates, program.compiled):
        lines.append(f"{output_name(w)} = {_render_terms(terms)};")
    return "\n".join(lines) + "\n"
