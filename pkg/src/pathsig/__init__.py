"""Signatures and log signatures of piecewise-linear paths.

The tensor side (signatures, concatenation, exp/log) lives in `tensor`;
the Lyndon-basis free Lie algebra in `lie`; BCH tables and the log-product
in `bch`; the path-level entry points in `logsig`; generalized Hall bases
in `bases`; polynomial specialization of the segment join in `codegen`.
`cli` and `service` expose the command line and the local HTTP explorer.
"""

from .words import Alphabet, Word, generate_lyndon_words, is_lyndon, lyndon_count, standard_factorization, word_str
from .tensor import PathPoints, TensorElement, concat_product, line_signature, path_signature, tensor_exp, tensor_log
from .lie import (
    LieElement,
    NotALieElementError,
    TruncationOverflowError,
    expand_rho,
    foliage,
    lie_bracket,
    lyndon_basis,
    lyndon_bracket_basis,
    project_from_tensor,
    render_bracket,
    sigma_tree,
)
from .bch import BchFormatError, BchIntegrityError, BchTable, bch_concat, compute_bch_table, format_bch_data, load_bch_table
from .logsig import path_logsig, sizes
from .bases import HallBasis, build_hall_basis, express_in_hall_basis
from .codegen import ExpressionProgram, Polynomial, emit_source, evaluate_program, specialize_segment_join

__all__ = [
    "Alphabet",
    "BchFormatError",
    "BchIntegrityError",
    "BchTable",
    "ExpressionProgram",
    "HallBasis",
    "LieElement",
    "NotALieElementError",
    "PathPoints",
    "Polynomial",
    "TensorElement",
    "TruncationOverflowError",
    "Word",
    "bch_concat",
    "build_hall_basis",
    "compute_bch_table",
    "concat_product",
    "emit_source",
    "evaluate_program",
    "expand_rho",
    "express_in_hall_basis",
    "foliage",
    "format_bch_data",
    "generate_lyndon_words",
    "is_lyndon",
    "lie_bracket",
    "line_signature",
    "load_bch_table",
    "lyndon_basis",
    "lyndon_bracket_basis",
    "lyndon_count",
    "path_logsig",
    "path_signature",
    "project_from_tensor",
    "render_bracket",
    "sigma_tree",
    "sizes",
    "standard_factorization",
    "tensor_exp",
    "tensor_log",
    "word_str",
]
