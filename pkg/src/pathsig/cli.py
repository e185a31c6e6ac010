"""Command line interface.

Subcommands: sig, logsig, basis, sizes, bch, codegen, serve.  Paths come in
as comma-separated rows on a file or stdin; results go out as JSON (or bare
whitespace-separated numbers with --flat).  Every error exits nonzero with
a one-line diagnostic.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .bases import build_hall_basis, express_in_hall_basis
from .bch import bch_basis_words, compute_bch_table, load_bch_table
from .codegen import emit_source, specialize_segment_join
from .lie import expand_rho, lyndon_basis
from .logsig import path_logsig, sizes
from .tensor import PathPoints, index_word, path_signature
from .words import word_str

ORDER_NAMES = {
    "lyndon": "lyndon-foliage",
    "coropa": "coropa",
    "hall": "classical-hall",
}


class PathFormatError(ValueError):
    """A path input row failed to parse; `row` is the 1-based row number."""

    def __init__(self, message: str, row: int):
        super().__init__(message)
        self.row = row


def parse_path_csv(text: str) -> PathPoints:
    """Parse comma-separated rows of decimal numbers into path points.

    Blank lines are skipped.  Every row must have the same number of
    columns; no rows at all is an error.
    """
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        cells = [cell.strip() for cell in stripped.split(",")]
        try:
            values = [float(cell) for cell in cells]
        except ValueError:
            raise PathFormatError(f"row {lineno}: non-numeric value in {stripped!r}", lineno) from None
        if width is None:
            width = len(values)
        elif len(values) != width:
            raise PathFormatError(
                f"row {lineno}: expected {width} columns, got {len(values)}", lineno
            )
        rows.append(values)
    if not rows:
        raise PathFormatError("empty path input", 0)
    return PathPoints.from_rows(rows)


def _json_payload(d: int, m: int, labels: list[str], values: list[float]) -> str:
    return json.dumps({"dim": d, "level": m, "basis": labels, "values": values})


def format_logsig_json(x, labels: list[str] | None = None) -> str:
    """JSON payload for a Lie element: dim, level, basis labels, and the
    coordinates in basis order."""
    if labels is None:
        labels = [word_str(w) for w in lyndon_basis(x.d, x.m).words]
    values = [float(v) for v in x.to_vector()]
    if len(labels) != len(values):
        raise ValueError(f"{len(labels)} labels for {len(values)} coordinates")
    return _json_payload(x.d, x.m, labels, values)


def _read_input(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    with open(source, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_path(args) -> PathPoints:
    pts = parse_path_csv(_read_input(args.input))
    if args.dim is not None:
        if args.dim < pts.d:
            raise ValueError(f"--dim {args.dim} is below the path dimension {pts.d}")
        if args.dim > pts.d:
            padded = np.zeros((len(pts), args.dim))
            padded[:, : pts.d] = pts.points
            pts = PathPoints(args.dim, padded)
    return pts


def _cmd_sig(args) -> int:
    pts = _load_path(args)
    sig = path_signature(pts, args.level)
    values: list[float] = []
    labels: list[str] = []
    for n in range(1, args.level + 1):
        block = sig.levels[n]
        values.extend(float(v) for v in block)
        labels.extend(word_str(index_word(i, n, pts.d)) for i in range(len(block)))
    if args.flat:
        print(" ".join(repr(v) for v in values))
    else:
        print(_json_payload(pts.d, args.level, labels, values))
    return 0


def _cmd_logsig(args) -> int:
    pts = _load_path(args)
    x = path_logsig(pts, args.level, method=args.method)
    if args.basis == "lyndon":
        values = [float(v) for v in x.to_vector()]
        labels = [word_str(w) for w in lyndon_basis(x.d, x.m).words]
    else:
        hall = build_hall_basis(pts.d, args.level, ORDER_NAMES[args.basis])
        per_level = express_in_hall_basis(expand_rho(x), hall)
        values = [float(v) for level in per_level for v in level]
        labels = [text for level in hall.render() for text in level]
    if args.flat:
        print(" ".join(repr(v) for v in values))
    else:
        print(_json_payload(pts.d, args.level, labels, values))
    return 0


def _cmd_basis(args) -> int:
    hall = build_hall_basis(args.dim, args.level, ORDER_NAMES[args.order])
    for level in hall.render():
        for text in level:
            print(text)
    return 0


def _cmd_sizes(args) -> int:
    signature, logsig = sizes(args.dim, args.level)
    if args.flat:
        print(f"{signature} {logsig}")
    else:
        print(json.dumps({"dim": args.dim, "level": args.level, "signature_size": signature, "logsig_size": logsig}))
    return 0


def _cmd_bch(args) -> int:
    if args.file is not None:
        with open(args.file, "rb") as handle:
            table = load_bch_table(handle, args.level)
    else:
        table = compute_bch_table(args.level)
    for w in bch_basis_words(args.level):
        c = table.coefficient(w)
        print(f"{word_str(w)} {c.numerator}/{c.denominator}")
    return 0


def _cmd_codegen(args) -> int:
    program = specialize_segment_join(args.dim, args.level)
    text = emit_source(program)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    return 0


def _cmd_serve(args) -> int:
    from .service import run_server

    run_server(host=args.host, port=args.port, static_dir=args.static)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pathsig", description="Signatures and log signatures of piecewise-linear paths.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_path_args(p) -> None:
        p.add_argument("--dim", type=int, default=None, help="embed the path in this many dimensions (pads with zeros)")
        p.add_argument("--level", type=int, required=True, help="truncation level")
        p.add_argument("--input", default="-", help="CSV file of path points, or - for stdin")
        p.add_argument("--flat", action="store_true", help="print bare numbers instead of JSON")

    p_sig = sub.add_parser("sig", help="signature of a path")
    add_path_args(p_sig)
    p_sig.set_defaults(func=_cmd_sig)

    p_logsig = sub.add_parser("logsig", help="log signature of a path")
    add_path_args(p_logsig)
    p_logsig.add_argument("--method", choices=("bch", "tensor"), default="bch", help="computation route")
    p_logsig.add_argument("--basis", choices=("lyndon", "coropa", "hall"), default="lyndon", help="output basis")
    p_logsig.set_defaults(func=_cmd_logsig)

    p_basis = sub.add_parser("basis", help="print a Hall basis, one element per line")
    p_basis.add_argument("--dim", type=int, required=True)
    p_basis.add_argument("--level", type=int, required=True)
    p_basis.add_argument("--order", choices=tuple(ORDER_NAMES), default="lyndon")
    p_basis.set_defaults(func=_cmd_basis)

    p_sizes = sub.add_parser("sizes", help="signature and log signature sizes")
    p_sizes.add_argument("--dim", type=int, required=True)
    p_sizes.add_argument("--level", type=int, required=True)
    p_sizes.add_argument("--flat", action="store_true")
    p_sizes.set_defaults(func=_cmd_sizes)

    p_bch = sub.add_parser("bch", help="print BCH coefficients on the two-letter basis")
    p_bch.add_argument("--level", type=int, required=True)
    p_bch.add_argument("--file", default=None, help="bracket-structure data file to load instead of deriving")
    p_bch.set_defaults(func=_cmd_bch)

    p_codegen = sub.add_parser("codegen", help="emit specialized segment-join source")
    p_codegen.add_argument("--dim", type=int, required=True)
    p_codegen.add_argument("--level", type=int, required=True)
    p_codegen.add_argument("--out", required=True, help="output file, or - for stdout")
    p_codegen.set_defaults(func=_cmd_codegen)

    p_serve = sub.add_parser("serve", help="run the local explorer service")
    p_serve.add_argument("--port", type=int, default=8787)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--static", default=None, help="directory of explorer assets to serve at /")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except KeyboardInterrupt:
        return 130
    except Exception as exc:
        print(f"pathsig: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
