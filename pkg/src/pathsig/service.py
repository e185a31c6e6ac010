"""Local HTTP service behind the explorer.

Three JSON endpoints: POST /api/logsig, POST /api/solve, GET /api/basis.
GET anywhere else serves the explorer's static assets when a directory was
given.  The request handlers are plain functions over dicts, so they can be
exercised without a socket; the HTTP layer adds nothing but transport.
The service keeps no state between requests.

The solver recovers a five-point planar path from eight target log
signature coordinates (d=2, level 4).  The first point stays pinned; the
other eight coordinates move under Levenberg-damped Gauss-Newton steps with
a central finite-difference Jacobian.
"""

from __future__ import annotations

import json
from functools import lru_cache
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

import numpy as np

from .bases import ORDERS, build_hall_basis
from .bch import compute_bch_table
from .cli import ORDER_NAMES, format_logsig_json
from .logsig import path_logsig
from .tensor import PathPoints

DEFAULT_PORT = 8787
MAX_DIM = 5
MAX_LEVEL = 8

SOLVE_DIM = 2
SOLVE_LEVEL = 4
SOLVE_SIZE = 8
SOLVE_POINTS = 5

DEFAULT_MAX_ITERATIONS = 100
DEFAULT_TOLERANCE = 1e-8
DEFAULT_DAMPING = 1e-3
JACOBIAN_STEP = 1e-6


class RequestError(ValueError):
    """Maps straight to an HTTP error response."""

    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


def _require(condition: bool, status: int, message: str) -> None:
    if not condition:
        raise RequestError(status, message)


def _parse_points(raw, expected_dim: int | None = None) -> PathPoints:
    _require(isinstance(raw, list), 400, "points must be a list of coordinate rows")
    _require(len(raw) >= 1, 422, "a path needs at least one point")
    rows = []
    width = None
    for row in raw:
        _require(isinstance(row, list) and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in row), 400, "each point must be a list of numbers")
        if width is None:
            width = len(row)
            _require(width >= 1, 400, "points need at least one coordinate")
        else:
            _require(len(row) == width, 400, "all points must have the same number of coordinates")
        rows.append([float(v) for v in row])
    if expected_dim is not None:
        _require(width == expected_dim, 400, f"expected {expected_dim}-dimensional points, got {width}")
    return PathPoints.from_rows(rows)


def handle_logsig(payload: dict) -> str:
    """Log signature of a submitted path; the reply is byte-identical to the
    command line's JSON for the same input."""
    _require(isinstance(payload, dict), 400, "request body must be a JSON object")
    dim = payload.get("dim")
    level = payload.get("level")
    _require(isinstance(dim, int) and not isinstance(dim, bool) and 1 <= dim, 400, "dim must be a positive integer")
    _require(dim <= MAX_DIM, 400, f"dim must be at most {MAX_DIM}")
    _require(isinstance(level, int) and not isinstance(level, bool) and 1 <= level, 400, "level must be a positive integer")
    _require(level <= MAX_LEVEL, 400, f"level must be at most {MAX_LEVEL}")
    pts = _parse_points(payload.get("points"), expected_dim=dim)
    x = path_logsig(pts, level, method="bch")
    return format_logsig_json(x)


@lru_cache(maxsize=1)
def _solve_table():
    return compute_bch_table(SOLVE_LEVEL)


def _solve_forward(free: np.ndarray, anchor: np.ndarray) -> np.ndarray:
    pts = np.vstack([anchor[None, :], free.reshape(SOLVE_POINTS - 1, SOLVE_DIM)])
    x = path_logsig(PathPoints(SOLVE_DIM, pts), SOLVE_LEVEL, method="bch", table=_solve_table())
    return x.to_vector()


def solve_path(
    target,
    initial_points,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    tolerance: float = DEFAULT_TOLERANCE,
    damping: float = DEFAULT_DAMPING,
) -> dict:
    """Find a five-point planar path whose (2, 4) log signature matches the
    eight target coordinates.

    The first input point never moves.  Returns the best points found, the
    Euclidean residual norm there, the iterations spent, and whether the
    residual came under the tolerance.
    """
    target = np.asarray(target, dtype=float)
    pts = np.asarray(initial_points, dtype=float)
    if target.shape != (SOLVE_SIZE,):
        raise ValueError(f"target must have {SOLVE_SIZE} coordinates")
    if pts.shape != (SOLVE_POINTS, SOLVE_DIM):
        raise ValueError(f"initial points must be {SOLVE_POINTS} rows of {SOLVE_DIM} numbers")
    anchor = pts[0].copy()
    free = pts[1:].reshape(-1).copy()

    def residual_of(x: np.ndarray) -> np.ndarray:
        return _solve_forward(x, anchor) - target

    r = residual_of(free)
    best_free = free.copy()
    best_norm = float(np.linalg.norm(r))
    lam = damping
    iterations = 0
    while iterations < max_iterations and best_norm > tolerance:
        iterations += 1
        jac = np.zeros((SOLVE_SIZE, free.size))
        for k in range(free.size):
            bumped = free.copy()
            bumped[k] += JACOBIAN_STEP
            upper = residual_of(bumped)
            bumped[k] -= 2 * JACOBIAN_STEP
            lower = residual_of(bumped)
            jac[:, k] = (upper - lower) / (2 * JACOBIAN_STEP)
        gram = jac.T @ jac
        gradient = jac.T @ r
        stepped = False
        while not stepped and lam < 1e12:
            try:
                delta = np.linalg.solve(gram + lam * np.eye(free.size), -gradient)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            candidate = free + delta
            candidate_r = residual_of(candidate)
            candidate_norm = float(np.linalg.norm(candidate_r))
            if candidate_norm < best_norm:
                free = candidate
                r = candidate_r
                best_free = candidate.copy()
                best_norm = candidate_norm
                lam = max(lam / 10, 1e-12)
                stepped = True
            else:
                lam *= 10
        if not stepped:
            break
    points = np.vstack([anchor[None, :], best_free.reshape(SOLVE_POINTS - 1, SOLVE_DIM)])
    return {
        "points": [[float(a), float(b)] for a, b in points],
        "residual_norm": best_norm,
        "iterations": iterations,
        "converged": best_norm <= tolerance,
    }


def handle_solve(payload: dict) -> dict:
    _require(isinstance(payload, dict), 400, "request body must be a JSON object")
    dim = payload.get("dim", SOLVE_DIM)
    level = payload.get("level", SOLVE_LEVEL)
    _require(dim == SOLVE_DIM and level == SOLVE_LEVEL, 400, f"the solver only supports dim {SOLVE_DIM}, level {SOLVE_LEVEL}")
    target = payload.get("target")
    _require(
        isinstance(target, list) and len(target) == SOLVE_SIZE and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in target),
        400,
        f"target must be a list of {SOLVE_SIZE} numbers",
    )
    pts = _parse_points(payload.get("initial_points"), expected_dim=SOLVE_DIM)
    _require(len(pts) == SOLVE_POINTS, 400, f"initial_points must have {SOLVE_POINTS} points")
    options = payload.get("options") or {}
    _require(isinstance(options, dict), 400, "options must be an object")
    max_iterations = options.get("max_iterations", DEFAULT_MAX_ITERATIONS)
    tolerance = options.get("tolerance", DEFAULT_TOLERANCE)
    damping = options.get("damping", DEFAULT_DAMPING)
    _require(isinstance(max_iterations, int) and not isinstance(max_iterations, bool) and max_iterations >= 1, 400, "max_iterations must be a positive integer")
    _require(isinstance(tolerance, (int, float)) and tolerance > 0, 400, "tolerance must be positive")
    _require(isinstance(damping, (int, float)) and damping > 0, 400, "damping must be positive")
    return solve_path(target, pts.points, max_iterations=max_iterations, tolerance=tolerance, damping=damping)


def handle_basis(params: dict) -> dict:
    dim = params.get("dim")
    level = params.get("level")
    order = params.get("order", "lyndon")
    _require(isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1, 400, "dim must be a positive integer")
    _require(dim <= MAX_DIM, 400, f"dim must be at most {MAX_DIM}")
    _require(isinstance(level, int) and not isinstance(level, bool) and level >= 1, 400, "level must be a positive integer")
    _require(level <= MAX_LEVEL, 400, f"level must be at most {MAX_LEVEL}")
    long_order = ORDER_NAMES.get(order, order)
    _require(long_order in ORDERS, 400, f"unknown order {order!r}")
    hall = build_hall_basis(dim, level, long_order)
    return {
        "dim": dim,
        "level": level,
        "order": order,
        "elements": [text for level_group in hall.render() for text in level_group],
    }


_CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json",
    ".json": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}

_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>pathsig service</title></head>
<body><h1>pathsig service</h1>
<p>The JSON API is up: POST /api/logsig, POST /api/solve, GET /api/basis.</p>
<p>No explorer assets were configured; start with --static DIR to serve them here.</p>
</body></html>
"""


class _Handler(BaseHTTPRequestHandler):
    server_version = "pathsig"

    def log_message(self, format, *args):
        pass

    def _send_json(self, status: int, body: str) -> None:
        data = body.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def _send_error_json(self, status: int, message: str) -> None:
        self._send_json(status, json.dumps({"error": message}))

    def _read_json(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            raise RequestError(400, "empty request body")
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise RequestError(400, "request body is not valid JSON") from None

    def do_POST(self) -> None:
        path = urlparse(self.path).path
        try:
            if path == "/api/logsig":
                self._send_json(200, handle_logsig(self._read_json()))
            elif path == "/api/solve":
                self._send_json(200, json.dumps(handle_solve(self._read_json())))
            else:
                self._send_error_json(404, f"no such endpoint: {path}")
        except RequestError as exc:
            self._send_error_json(exc.status, str(exc))
        except Exception as exc:
            self._send_error_json(500, f"internal error: {exc}")

    def do_GET(self) -> None:
        parsed = urlparse(self.path)
        path = parsed.path
        try:
            if path == "/api/basis":
                raw = parse_qs(parsed.query)
                params: dict = {}
                for key in ("dim", "level"):
                    if key in raw:
                        try:
                            params[key] = int(raw[key][0])
                        except ValueError:
                            raise RequestError(400, f"{key} must be an integer") from None
                if "order" in raw:
                    params["order"] = raw["order"][0]
                self._send_json(200, json.dumps(handle_basis(params)))
            elif path.startswith("/api/"):
                self._send_error_json(404, f"no such endpoint: {path}")
            else:
                self._serve_static(path)
        except RequestError as exc:
            self._send_error_json(exc.status, str(exc))
        except Exception as exc:
            self._send_error_json(500, f"internal error: {exc}")

    def _serve_static(self, path: str) -> None:
        static_dir = getattr(self.server, "static_dir", None)
        if path in ("", "/"):
            path = "/index.html"
        if static_dir is None:
            if path == "/index.html":
                data = _PLACEHOLDER_PAGE.encode("utf-8")
                self.send_response(200)
                self.send_header("Content-Type", "text/html; charset=utf-8")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)
                return
            self._send_error_json(404, "no static assets configured")
            return
        root = Path(static_dir).resolve()
        target = (root / path.lstrip("/")).resolve()
        if root not in target.parents and target != root:
            self._send_error_json(404, "not found")
            return
        if not target.is_file():
            self._send_error_json(404, "not found")
            return
        data = target.read_bytes()
        content_type = _CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)


def create_server(host: str = "127.0.0.1", port: int = DEFAULT_PORT, static_dir: str | None = None) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), _Handler)
    server.static_dir = static_dir
    return server


def run_server(host: str = "127.0.0.1", port: int = DEFAULT_PORT, static_dir: str | None = None) -> None:
    server = create_server(host, port, static_dir)
    location = f"http://{host}:{server.server_address[1]}/"
    print(f"serving on {location}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
