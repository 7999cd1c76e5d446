import io
import json
import re
import subprocess
import sys

import pytest

from uncsimp import cli
from uncsimp.cli import (EXIT_INTERNAL, EXIT_INVALID, EXIT_OK, EXIT_USAGE, InputError,
                         curve_to_doc, parse_input, render_svg, resolve_tolerance, run)
from uncsimp.geometry import DEFAULT_TOLERANCE, get_tolerance
from uncsimp.model import Disk, Indecisive
from corpus import instance

FLAT = {"model": "disk", "epsilon": 1.0, "metric": "frechet",
        "points": [{"c": [0, 0], "r": 0.1}, {"c": [1, 0.2], "r": 0.1}, {"c": [2, 0], "r": 0.1}]}
ZIGZAG = {"model": "disk", "epsilon": 0.45, "metric": "hausdorff",
          "points": [{"c": [k, k % 2], "r": 0} for k in range(6)]}


def _call(argv, doc=None, tmp_path=None):
    if doc is not None:
        path = tmp_path / "in.json"
        path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
        argv = [argv[0], "--input", str(path)] + argv[1:]
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def _lines(text):
    return [json.loads(line) for line in text.splitlines()]


# --- parsing ------------------------------------------------------------------

def test_parse_disk_document():
    c, eps, metric, tau = parse_input(json.dumps(FLAT).encode())
    assert c.model == "disk" and len(c) == 3 and isinstance(c[0], Disk)
    assert (eps, metric, tau) == (1.0, "frechet", None)


def test_parse_indecisive_document():
    doc = {"model": "indecisive", "epsilon": 1, "metric": "hausdorff",
           "points": [{"options": [[0, 0], [0, 1]]}, {"options": [[3, 0]]}]}
    c, *_ = parse_input(json.dumps(doc).encode())
    assert isinstance(c[0], Indecisive) and c[0].options == ((0.0, 0.0), (0.0, 1.0))


@pytest.mark.parametrize("mutate, pointer, code", [
    (lambda d: d.pop("metric"), "/metric", EXIT_USAGE),
    (lambda d: d.update(metric="manhattan"), "/metric", EXIT_USAGE),
    (lambda d: d.update(epsilon=0), "/epsilon", EXIT_USAGE),
    (lambda d: d["points"][1].pop("r"), "/points/1/r", EXIT_USAGE),
    (lambda d: d["points"][0].update(c=[0, "x"]), "/points/0/c/1", EXIT_USAGE),
    (lambda d: d["points"][2].update(r=-1), "/points/2", EXIT_INVALID),
])
def test_parse_errors_carry_a_pointer(mutate, pointer, code):
    doc = json.loads(json.dumps(FLAT))
    mutate(doc)
    with pytest.raises(InputError) as exc:
        parse_input(json.dumps(doc).encode())
    assert exc.value.pointer == pointer and exc.value.code == code


def test_parse_rejects_bad_bytes():
    with pytest.raises(InputError):
        parse_input(b"\xff\xfe{")
    with pytest.raises(InputError):
        parse_input(b"{not json")


def test_non_convex_polygon_is_a_validation_error():
    doc = {"model": "polygon", "epsilon": 1, "metric": "hausdorff",
           "points": [{"vertices": [[0, 0], [2, 0], [1, 0.2], [2, 2], [0, 2]]}]}
    with pytest.raises(InputError) as exc:
        parse_input(json.dumps(doc).encode())
    assert exc.value.code == EXIT_INVALID and "not convex" in str(exc.value)


@pytest.mark.parametrize("model", ["indecisive", "disk", "segment", "polygon"])
def test_round_trip_is_bit_identical(model):
    for seed in range(20):
        c, eps = instance(model, seed)
        text = json.dumps(curve_to_doc(c, eps, "frechet", 1e-10))
        c2, eps2, metric, tau = parse_input(text.encode())
        assert c2 == c and eps2 == eps and tau == 1e-10
        for u, v in zip(c.points, c2.points):
            for p, q in zip(u.vertices(), v.vertices()):
                assert p[0].hex() == q[0].hex() and p[1].hex() == q[1].hex()
        assert json.dumps(curve_to_doc(c2, eps2, metric, tau)) == text


def test_round_trip_awkward_floats():
    doc = {"model": "disk", "epsilon": 0.1, "metric": "hausdorff",
           "points": [{"c": [0.1 + 0.2, 1e-300], "r": 5e-324}, {"c": [-0.0, 1.7976931348623157e308], "r": 0.0}]}
    c, *_ = parse_input(json.dumps(doc).encode())
    assert json.loads(json.dumps(curve_to_doc(c, 0.1, "hausdorff"))) == doc


# --- tolerance precedence -----------------------------------------------------

def test_tolerance_precedence(monkeypatch):
    monkeypatch.delenv(cli.TOLERANCE_ENV, raising=False)
    assert resolve_tolerance(None, None) == DEFAULT_TOLERANCE
    assert resolve_tolerance(None, 1e-7) == 1e-7
    monkeypatch.setenv(cli.TOLERANCE_ENV, "1e-6")
    assert resolve_tolerance(None, 1e-7) == 1e-6
    assert resolve_tolerance(1e-5, 1e-7) == 1e-5


def test_bad_env_tolerance_is_a_usage_error(monkeypatch, tmp_path):
    monkeypatch.setenv(cli.TOLERANCE_ENV, "lots")
    code, _, err = _call(["simplify"], FLAT, tmp_path)
    assert code == EXIT_USAGE and cli.TOLERANCE_ENV in err


def test_tolerance_flag_reaches_the_checks(monkeypatch, tmp_path):
    # the middle point is 1e-7 beyond epsilon: only a coarse tolerance accepts it
    doc = {"model": "disk", "epsilon": 1.0, "metric": "hausdorff",
           "points": [{"c": [0, 0], "r": 0}, {"c": [1, 1 + 1e-7], "r": 0}, {"c": [2, 0], "r": 0}]}
    monkeypatch.delenv(cli.TOLERANCE_ENV, raising=False)
    seen = []
    real = cli.cmd_simplify
    monkeypatch.setitem(cli.COMMANDS, "simplify",
                        lambda *a: seen.append(get_tolerance()) or real(*a))
    assert _lines(_call(["simplify"], doc, tmp_path)[1])[0]["indices"] == [1, 2, 3]
    assert _lines(_call(["simplify", "--tolerance", "1e-6"], doc, tmp_path)[1])[0]["indices"] == [1, 3]
    monkeypatch.setenv(cli.TOLERANCE_ENV, "1e-6")
    assert _lines(_call(["simplify"], doc, tmp_path)[1])[0]["indices"] == [1, 3]
    assert _lines(_call(["simplify", "--tolerance", "1e-9"], doc, tmp_path)[1])[0]["indices"] == [1, 2, 3]
    assert seen == [1e-9, 1e-6, 1e-6, 1e-9]
    assert get_tolerance() == DEFAULT_TOLERANCE


# --- subcommands --------------------------------------------------------------

def test_simplify_flat_curve(tmp_path):
    code, out, _ = _call(["simplify"], FLAT, tmp_path)
    assert code == EXIT_OK
    assert _lines(out) == [{"indices": [1, 3], "links": 1, "edges_tested": 1, "valid_edges": 3}]


def test_simplify_overrides(tmp_path):
    code, out, _ = _call(["simplify", "--epsilon", "0.05", "--metric", "hausdorff"], FLAT, tmp_path)
    assert code == EXIT_OK and _lines(out)[0]["indices"] == [1, 2, 3]


def test_simplify_to_file_and_stdin(tmp_path, monkeypatch):
    dest = tmp_path / "out.json"
    code, out, _ = _call(["simplify", "--output", str(dest)], FLAT, tmp_path)
    assert code == EXIT_OK and out == "" and _lines(dest.read_text())[0]["links"] == 1
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(json.dumps(FLAT).encode())))
    code, out, _ = _call(["simplify", "--input", "-"])
    assert code == EXIT_OK and _lines(out)[0]["indices"] == [1, 3]


def test_jobs_do_not_change_output(tmp_path):
    doc = {"model": "disk", "epsilon": 0.7, "metric": "frechet",
           "points": [{"c": [k * 0.6, (k * 7 % 5) / 5], "r": 0.05} for k in range(10)]}
    one = _call(["graph"], doc, tmp_path)
    two = _call(["graph", "--jobs", "2"], doc, tmp_path)
    assert one[0] == two[0] == EXIT_OK and one[1] == two[1]


def test_graph_zigzag_is_adjacent_only(tmp_path):
    code, out, _ = _call(["graph"], ZIGZAG, tmp_path)
    assert code == EXIT_OK
    assert _lines(out) == [{"n": 6, "adjacency": [[2], [3], [4], [5], [6], []], "edges": 5}]


def test_single_point_curve(tmp_path):
    doc = dict(FLAT, points=FLAT["points"][:1])
    assert _lines(_call(["simplify"], doc, tmp_path)[1]) == [
        {"indices": [1], "links": 0, "edges_tested": 0, "valid_edges": 0}]


def test_oracle_lines(tmp_path):
    code, out, _ = _call(["oracle", "--samples", "200", "--seed", "3"], ZIGZAG, tmp_path)
    recs = _lines(out)
    assert code == EXIT_OK and len(recs) == 10
    assert all(r["agree"] and r["mode"] == "exact" and not r["fast"] and not r["oracle"] for r in recs)
    assert all(r["distance"] > 0.45 and len(r["violation"]) == r["j"] - r["i"] + 1
               for r in recs)


def test_oracle_single_pair(tmp_path):
    code, out, _ = _call(["oracle", "--pair", "1", "3"], FLAT, tmp_path)
    (rec,) = _lines(out)
    assert code == EXIT_OK and (rec["i"], rec["j"]) == (1, 3)
    assert rec["fast"] and rec["oracle"] and rec["mode"] == "sampled" and rec["agree"]
    assert _call(["oracle", "--pair", "3", "1"], FLAT, tmp_path)[0] == EXIT_USAGE


def test_oracle_disagreement_exits_3(tmp_path, monkeypatch):
    import uncsimp.shortcut
    monkeypatch.setattr(uncsimp.shortcut, "shortcut_valid", lambda *a: True)
    code, out, err = _call(["oracle"], ZIGZAG, tmp_path)
    assert code == EXIT_INTERNAL and "disagrees" in err
    assert not any(r["agree"] for r in _lines(out))


def test_render_svg(tmp_path):
    doc = {"model": "polygon", "epsilon": 1.0, "metric": "hausdorff",
           "points": [{"vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]},
                      {"vertices": [[1.4, 0.4], [1.6, 0.4], [1.6, 0.6]]},
                      {"vertices": [[2, 0], [3, 0], [3, 1], [2, 1]]}]}
    svg = tmp_path / "c.svg"
    code, out, _ = _call(["render", "--out", str(svg)], doc, tmp_path)
    assert code == EXIT_OK and _lines(out)[0]["svg"] == str(svg)
    text = svg.read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert len(re.findall(r'<path class="region"', text)) == 3
    assert len(re.findall(r'<polyline class="simplification"', text)) == 1
    assert len(re.findall(r'<line class="tangent"', text)) == 2


def test_render_every_model_one_path_per_region():
    for model in ("indecisive", "disk", "segment", "polygon"):
        c, eps = instance(model, 1)
        text = render_svg(c, [1, len(c)], eps)
        assert text.count('class="region"') == len(c)


def test_render_needs_out(tmp_path):
    assert _call(["render"], FLAT, tmp_path)[0] == EXIT_USAGE
    dest = str(tmp_path / "x.svg")
    assert _call(["render", "--out", dest, "--output", dest], FLAT, tmp_path)[0] == EXIT_USAGE


# --- exit codes ---------------------------------------------------------------

def test_exit_codes(tmp_path):
    assert _call(["simplify"], FLAT, tmp_path)[0] == EXIT_OK
    assert _call(["simplify"], "{broken", tmp_path)[0] == EXIT_USAGE
    assert _call(["bogus"])[0] == EXIT_USAGE
    assert _call(["simplify", "--input", str(tmp_path / "missing.json")])[0] == EXIT_USAGE
    assert _call(["simplify", "--jobs", "0"], FLAT, tmp_path)[0] == EXIT_USAGE
    bad = json.loads(json.dumps(FLAT))
    bad["points"][0]["r"] = -1
    code, out, err = _call(["simplify"], bad, tmp_path)
    assert code == EXIT_INVALID and out == "" and "/points/0" in err
    code, _, err = _call(["simplify"], dict(FLAT, metric=None), tmp_path)
    assert code == EXIT_USAGE and "/metric" in err


def test_internal_error_exits_3(tmp_path, monkeypatch):
    def boom(*a):
        raise RuntimeError("boom")
    monkeypatch.setitem(cli.COMMANDS, "simplify", boom)
    code, _, err = _call(["simplify"], FLAT, tmp_path)
    assert code == EXIT_INTERNAL and "boom" in err


def test_help_exits_0():
    assert _call(["--help"])[0] == EXIT_OK


def test_module_entry_point(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(FLAT))
    p = subprocess.run([sys.executable, "-m", "uncsimp", "simplify", "--input", str(path)],
                       capture_output=True, text=True, timeout=60)
    assert p.returncode == 0 and json.loads(p.stdout)["indices"] == [1, 3]
    p = subprocess.run([sys.executable, "-m", "uncsimp", "simplify", "--input", str(path),
                        "--metric", "chebyshev"], capture_output=True, text=True, timeout=60)
    assert p.returncode == 1 and p.stdout == ""
