import io
import json
import threading
import urllib.error
import urllib.request

import numpy as np
import pytest

from pathsig.cli import format_logsig_json, main
from pathsig.logsig import path_logsig
from pathsig.service import (
    RequestError,
    create_server,
    handle_basis,
    handle_logsig,
    handle_solve,
    solve_path,
)

SQUARE = [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]]


def logsig_payload(points, dim=2, level=4):
    return {"dim": dim, "level": level, "points": points}


def test_logsig_reply_matches_cli_json(tmp_path, capsys):
    body = handle_logsig(logsig_payload(SQUARE, level=3))
    assert body == format_logsig_json(path_logsig(np.array(SQUARE, dtype=float), 3))
    src = tmp_path / "square.csv"
    src.write_text("\n".join(f"{a},{b}" for a, b in SQUARE) + "\n")
    assert main(["logsig", "--level", "3", "--input", str(src)]) == 0
    assert capsys.readouterr().out == body + "\n"


def test_logsig_rejects_out_of_range_parameters():
    with pytest.raises(RequestError) as info:
        handle_logsig(logsig_payload(SQUARE, dim=6, level=2))
    assert info.value.status == 400
    with pytest.raises(RequestError) as info:
        handle_logsig(logsig_payload(SQUARE, level=9))
    assert info.value.status == 400
    with pytest.raises(RequestError) as info:
        handle_logsig(logsig_payload(SQUARE, dim=True, level=2))
    assert info.value.status == 400
    with pytest.raises(RequestError) as info:
        handle_logsig({"dim": 2, "level": "4", "points": SQUARE})
    assert info.value.status == 400


def test_logsig_rejects_bad_points():
    with pytest.raises(RequestError) as info:
        handle_logsig(logsig_payload([], level=2))
    assert info.value.status == 422
    with pytest.raises(RequestError) as info:
        handle_logsig(logsig_payload([[0, 0], [1]], level=2))
    assert info.value.status == 400
    with pytest.raises(RequestError) as info:
        handle_logsig(logsig_payload([[0, 0], [1, "x"]], level=2))
    assert info.value.status == 400
    with pytest.raises(RequestError) as info:
        handle_logsig(logsig_payload([[0, 0, 0]], dim=2, level=2))
    assert info.value.status == 400


def test_solve_fixed_point_converges_immediately():
    target = path_logsig(np.array(SQUARE, dtype=float), 4).to_vector()
    out = solve_path(target, SQUARE)
    assert out["converged"] is True
    assert out["iterations"] == 0
    assert out["residual_norm"] == 0.0
    assert out["points"] == [[float(a), float(b)] for a, b in SQUARE]


def test_solve_recovers_perturbed_path():
    rng = np.random.default_rng(7)
    pts = rng.uniform(-1, 1, size=(5, 2))
    target = path_logsig(pts, 4).to_vector()
    start = pts + np.vstack([[0, 0], rng.normal(0, 0.02, size=(4, 2))])
    out = solve_path(target, start)
    assert out["converged"] is True
    assert out["residual_norm"] <= 1e-8
    # the anchor never moves
    assert out["points"][0] == [float(pts[0, 0]), float(pts[0, 1])]
    got = path_logsig(np.array(out["points"]), 4).to_vector()
    assert np.allclose(got, target, atol=1e-7)


def test_solve_steers_enclosed_area():
    # from a path with slack in every direction, a +0.1 push on the area
    # component while the other seven stay pinned is exactly attainable
    start = 1.5 * np.array(SQUARE, dtype=float)
    target = path_logsig(start, 4).to_vector()
    target[2] += 0.1
    out = solve_path(target, start)
    assert out["converged"] is True
    assert out["residual_norm"] <= 1e-6
    got = path_logsig(np.array(out["points"]), 4).to_vector()
    assert abs(got[2] - target[2]) <= 1e-6


def test_solve_iteration_budget_is_respected():
    out = solve_path([5, -3, 2, 1, -1, 0.5, 0.25, -0.75], SQUARE, max_iterations=1)
    assert out["iterations"] <= 1
    assert out["converged"] is False


def test_handle_solve_validates_request():
    good = {
        "dim": 2,
        "level": 4,
        "target": [0.0] * 8,
        "initial_points": SQUARE,
    }
    out = handle_solve(dict(good))
    assert set(out) == {"points", "residual_norm", "iterations", "converged"}

    for mutation, status in [
        ({"dim": 3}, 400),
        ({"level": 3}, 400),
        ({"target": [0.0] * 7}, 400),
        ({"target": "nope"}, 400),
        ({"initial_points": SQUARE[:4]}, 400),
        ({"initial_points": [[0, 0, 0]] * 5}, 400),
        ({"options": {"max_iterations": 0}}, 400),
        ({"options": {"tolerance": -1}}, 400),
        ({"options": {"damping": 0}}, 400),
        ({"options": "fast"}, 400),
    ]:
        bad = dict(good)
        bad.update(mutation)
        with pytest.raises(RequestError) as info:
            handle_solve(bad)
        assert info.value.status == status


def test_handle_basis_orders_and_errors():
    out = handle_basis({"dim": 2, "level": 3, "order": "coropa"})
    assert out["elements"] == ["1", "2", "[1,2]", "[1,[1,2]]", "[2,[1,2]]"]
    # long order names work too
    long_form = handle_basis({"dim": 2, "level": 3, "order": "classical-hall"})
    assert long_form["elements"] == ["1", "2", "[2,1]", "[[2,1],1]", "[[2,1],2]"]
    default = handle_basis({"dim": 2, "level": 2})
    assert default["order"] == "lyndon"
    assert default["elements"] == ["1", "2", "[1,2]"]
    for params in [
        {"level": 2},
        {"dim": 2},
        {"dim": 0, "level": 2},
        {"dim": 6, "level": 2},
        {"dim": 2, "level": 9},
        {"dim": 2, "level": 2, "order": "mystery"},
    ]:
        with pytest.raises(RequestError) as info:
            handle_basis(params)
        assert info.value.status == 400


@pytest.fixture(scope="module")
def server_url():
    server = create_server(port=0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()
    thread.join(timeout=5)


def post_json(url, payload):
    request = urllib.request.Request(
        url,
        data=json.dumps(payload).encode("utf-8"),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(request) as response:
            return response.status, json.loads(response.read().decode("utf-8"))
    except urllib.error.HTTPError as error:
        return error.code, json.loads(error.read().decode("utf-8"))


def get(url):
    try:
        with urllib.request.urlopen(url) as response:
            return response.status, response.headers.get("Content-Type", ""), response.read()
    except urllib.error.HTTPError as error:
        return error.code, error.headers.get("Content-Type", ""), error.read()


def test_http_logsig_roundtrip(server_url):
    status, payload = post_json(f"{server_url}/api/logsig", logsig_payload(SQUARE, level=2))
    assert status == 200
    assert payload["basis"] == ["1", "2", "12"]
    assert payload["values"] == pytest.approx([0.0, 0.0, 1.0], abs=1e-12)


def test_http_logsig_error_body(server_url):
    status, payload = post_json(f"{server_url}/api/logsig", logsig_payload(SQUARE, level=99))
    assert status == 400
    assert "level" in payload["error"]
    status, payload = post_json(f"{server_url}/api/logsig", logsig_payload([], level=2))
    assert status == 422
    assert "error" in payload


def test_http_malformed_json_is_a_client_error(server_url):
    request = urllib.request.Request(
        f"{server_url}/api/logsig",
        data=b"{not json",
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    with pytest.raises(urllib.error.HTTPError) as info:
        urllib.request.urlopen(request)
    assert info.value.code == 400
    assert "error" in json.loads(info.value.read().decode("utf-8"))


def test_http_solve_roundtrip(server_url):
    target = [float(v) for v in path_logsig(np.array(SQUARE, dtype=float), 4).to_vector()]
    status, payload = post_json(
        f"{server_url}/api/solve",
        {"dim": 2, "level": 4, "target": target, "initial_points": SQUARE},
    )
    assert status == 200
    assert payload["converged"] is True
    assert payload["residual_norm"] == 0.0


def test_http_basis_roundtrip(server_url):
    status, _, body = get(f"{server_url}/api/basis?dim=2&level=3&order=hall")
    assert status == 200
    payload = json.loads(body)
    assert payload["elements"] == ["1", "2", "[2,1]", "[[2,1],1]", "[[2,1],2]"]
    status, _, body = get(f"{server_url}/api/basis?dim=2&level=3&order=nope")
    assert status == 400
    status, _, body = get(f"{server_url}/api/basis?dim=x&level=3")
    assert status == 400
    assert "integer" in json.loads(body)["error"]


def test_http_unknown_api_endpoint_404(server_url):
    status, _, body = get(f"{server_url}/api/missing")
    assert status == 404
    assert "error" in json.loads(body)
    status, payload = post_json(f"{server_url}/api/missing", {})
    assert status == 404


def test_http_placeholder_page_without_static_dir(server_url):
    status, content_type, body = get(f"{server_url}/")
    assert status == 200
    assert content_type.startswith("text/html")
    assert b"/api/logsig" in body
    status, _, _ = get(f"{server_url}/anything.js")
    assert status == 404


def test_http_static_directory_serving(tmp_path):
    (tmp_path / "index.html").write_text("<p>explorer</p>")
    (tmp_path / "app.js").write_text("console.log(1)")
    server = create_server(port=0, static_dir=str(tmp_path))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    base = f"http://{host}:{port}"
    try:
        status, content_type, body = get(f"{base}/")
        assert (status, body) == (200, b"<p>explorer</p>")
        assert content_type.startswith("text/html")
        status, content_type, _ = get(f"{base}/app.js")
        assert status == 200
        assert content_type.startswith("text/javascript")
        status, _, _ = get(f"{base}/../etc/passwd")
        assert status == 404
        status, _, _ = get(f"{base}/missing.css")
        assert status == 404
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


def test_http_requests_are_stateless(server_url):
    first = post_json(f"{server_url}/api/logsig", logsig_payload(SQUARE, level=3))
    for _ in range(3):
        assert post_json(f"{server_url}/api/logsig", logsig_payload(SQUARE, level=3)) == first
