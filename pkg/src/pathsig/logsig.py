"""Log signatures of piecewise-linear paths, and size bookkeeping.

The log signature is the tensor-algebra logarithm of the signature, pulled
back to Lyndon coordinates.  Two routes compute it: through the tensor
algebra directly, or by folding segments with the BCH formula without ever
leaving the Lie algebra.  They agree to rounding; the second stays small.
"""

from __future__ import annotations

from .bch import BchTable, bch_concat, compute_bch_table, MAX_DERIVED_LEVEL
from .lie import LieElement, project_from_tensor
from .tensor import _as_path, path_signature, tensor_log
from .words import Alphabet, lyndon_count, _dim

METHODS = ("bch", "tensor")


def path_logsig(path, m: int, method: str = "bch", table: BchTable | None = None) -> LieElement:
    """Log signature of the path through the given points, in Lyndon
    coordinates.

    method "bch" folds one segment at a time with the BCH substitution;
    method "tensor" takes log of the full signature and projects.  A
    single-point path gives the zero element.
    """
    pts = _as_path(path)
    if m < 1:
        raise ValueError(f"level must be at least 1, got {m}")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    d = pts.d
    if method == "tensor":
        return project_from_tensor(tensor_log(path_signature(pts, m)))
    if table is None:
        if m > MAX_DERIVED_LEVEL:
            raise ValueError(
                f"the BCH route needs a table for level {m} (derivation stops at "
                f"{MAX_DERIVED_LEVEL}); pass one, or use method='tensor'"
            )
        table = compute_bch_table(m)
    acc = LieElement.zero(d, m)
    first = True
    for v in pts.displacements():
        segment = LieElement(d, m, {(i + 1,): float(c) for i, c in enumerate(v)})
        acc = segment if first else bch_concat(acc, segment, table)
        first = False
    return acc


def sizes(alphabet: Alphabet | int, m: int) -> tuple[int, int]:
    """(signature size, log signature size) for levels 1..m: the number of
    words d(d^m - 1)/(d - 1), and the total count of Lyndon words."""
    d = _dim(alphabet)
    if m < 1:
        raise ValueError(f"level must be at least 1, got {m}")
    signature = m if d == 1 else d * (d**m - 1) // (d - 1)
    logsig = sum(lyndon_count(d, n) for n in range(1, m + 1))
    return signature, logsig
