"""End-to-end drives of the batch front end through run(argv)."""

from __future__ import annotations

import json

import pytest

from nccwkit import jsonio
from nccwkit.cli import run
from nccwkit.cu_tilde import CuTildeElement
from nccwkit.cuntz import CuElement, StepFn
from nccwkit.gallery import dimension_drop, interval, pointed_interval, razak
from nccwkit.nccw import NccwComplex, unitize


def invoke(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(jsonio.canonical_dumps(obj))
    return str(p)


@pytest.fixture
def razak2(tmp_path):
    return write(tmp_path, "razak2.json", jsonio.complex_to_dict(razak(2)))


def test_k_on_razak_2(capsys, razak2):
    code, out, _ = invoke(capsys, ["k", razak2])
    assert code == 0
    assert out.strip() == '{"K0":"0","K1":"0"}'


def test_crossed_1_2_report(capsys):
    code, out, _ = invoke(capsys, ["crossed", "1", "2"])
    assert code == 0
    rep = json.loads(out)
    assert rep["charpoly"] == "t^2 - t - 1"
    assert rep["det_I_minus_A"] == -1
    assert rep["k1_trivial"] is True


def test_tree_cert_circle_is_a_negative_verdict(capsys, tmp_path):
    circle = write(
        tmp_path, "circle.json", {"e": [1], "f": [1], "z0": [[1]], "z1": [[1]]}
    )
    code, out, _ = invoke(capsys, ["tree-cert", circle])
    assert code == 1
    assert out.strip() == '{"k1":"Z"}'


def test_tree_cert_positive_emits_forest(capsys, razak2):
    code, out, _ = invoke(capsys, ["tree-cert", razak2])
    assert code == 0
    payload = json.loads(out)
    assert payload["forest"]["num_vertices"] >= 1
    assert isinstance(payload["forest"]["edges"], list)


def test_validate_verdicts_and_errors(capsys, tmp_path, razak2):
    code, out, _ = invoke(capsys, ["validate", razak2])
    assert (code, json.loads(out)) == (0, {"valid": True})

    invalid = write(
        tmp_path, "invalid.json", {"e": [2], "f": [1], "z0": [[1]], "z1": [[1]]}
    )
    code, out, _ = invoke(capsys, ["validate", invalid])
    assert code == 1
    assert json.loads(out)["valid"] is False

    code, _, err = invoke(capsys, ["validate", str(tmp_path / "absent.json")])
    assert code == 2 and "error:" in err

    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    code, _, err = invoke(capsys, ["validate", str(garbage)])
    assert code == 2

    code, _, _ = invoke(capsys, ["k"])  # missing positional
    assert code == 2


def test_reduce_writes_replayable_trace(capsys, tmp_path):
    a = NccwComplex.make([1, 1], [2], [[0, 0]], [[1, 1]])
    src = write(tmp_path, "qc.json", jsonio.complex_to_dict(a))
    trace_path = str(tmp_path / "trace.json")
    code, out, _ = invoke(capsys, ["reduce", src, "--trace", trace_path])
    assert code == 0
    payload = json.loads(out)
    assert payload["steps"] > 0
    reduced = jsonio.complex_from_dict(payload["reduced"])
    assert all(ej == 1 for ej in reduced.e)

    code, out, _ = invoke(capsys, ["verify-trace", trace_path])
    assert code == 0
    assert json.loads(out)["ok"] is True

    # tamper with a recorded state: replay must flag the exact step
    blob = json.loads(open(trace_path).read())
    blob["steps"][0]["state"]["f"][0] += 1
    bad = write(tmp_path, "tampered.json", blob)
    code, out, _ = invoke(capsys, ["verify-trace", bad])
    assert code == 1
    verdict = json.loads(out)
    assert verdict["ok"] is False and verdict["step"] == 0


def test_reduce_reports_stuck_row(capsys, tmp_path):
    stuck = NccwComplex.make(
        [1, 1], [2, 1], [[1, 0], [0, 0]], [[0, 2], [1, 0]]
    )
    src = write(tmp_path, "stuck.json", jsonio.complex_to_dict(stuck))
    trace_path = str(tmp_path / "partial.json")
    code, out, _ = invoke(capsys, ["reduce", src, "--trace", trace_path])
    assert code == 1
    payload = json.loads(out)
    assert payload["reduced"] is None and isinstance(payload["stuck_row"], int)
    # the partial trace still replays
    code, out, _ = invoke(capsys, ["verify-trace", trace_path])
    assert code == 0


def test_gallery_pipes_into_k(capsys, tmp_path):
    code, out, _ = invoke(capsys, ["gallery", "dimension_drop", "2", "4"])
    assert code == 0
    assert jsonio.complex_from_dict(json.loads(out)) == dimension_drop(2, 4)
    dd = write(tmp_path, "dd.json", json.loads(out))
    code, out, _ = invoke(capsys, ["k", dd])
    assert json.loads(out) == {"K0": "Z", "K1": "Z/2"}


def test_gallery_list_and_errors(capsys):
    code, out, _ = invoke(capsys, ["gallery", "list"])
    assert code == 0
    names = json.loads(out)["items"]
    assert "razak_2" in names and "crossed_2_3" in names
    assert invoke(capsys, ["gallery", "unknown_thing"])[0] == 2
    assert invoke(capsys, ["gallery", "razak"])[0] == 2
    assert invoke(capsys, ["gallery", "interval", "3"])[0] == 2


def test_gallery_tree_edges(capsys):
    code, out, _ = invoke(capsys, ["gallery", "tree", "1-2", "1-3"])
    assert code == 0
    a = jsonio.complex_from_dict(json.loads(out))
    assert (a.k, a.l) == (3, 2)


def test_chain_pairs_follow_subtractive_euclid(capsys):
    code, out, _ = invoke(capsys, ["chain", "2", "3"])
    assert code == 0
    payload = json.loads(out)
    assert payload["pairs"] == [[2, 3], [1, 2]]
    code, _, _ = invoke(capsys, ["chain", "2", "4"])
    assert code == 2  # not coprime


@pytest.fixture
def cu_files(tmp_path):
    iv = interval()
    u = CuElement.make(iv, [1, 1], [1])
    two = CuElement.make(iv, [2, 2], [2])
    ramp = CuElement.make(iv, [1, 2], [StepFn.make(("1/2",), (1, 2), (1,))])
    return {
        "u": write(tmp_path, "u.json", jsonio.cu_element_to_dict(u)),
        "two": write(tmp_path, "two.json", jsonio.cu_element_to_dict(two)),
        "ramp": write(tmp_path, "ramp.json", jsonio.cu_element_to_dict(ramp)),
    }


def test_cu_leq_exit_codes(capsys, cu_files):
    code, out, _ = invoke(
        capsys, ["cu", "leq", cu_files["u"], cu_files["two"], "--ambient", "interval"]
    )
    assert (code, json.loads(out)) == (0, {"leq": True})
    code, out, _ = invoke(
        capsys, ["cu", "leq", cu_files["two"], cu_files["u"], "--ambient", "interval"]
    )
    assert (code, json.loads(out)) == (1, {"leq": False})


def test_cu_add_sup_floordiv_emit_elements(capsys, cu_files):
    code, out, _ = invoke(
        capsys, ["cu", "add", cu_files["u"], cu_files["ramp"], "--ambient", "interval"]
    )
    assert code == 0 and json.loads(out)["n"] == [2, 3]
    code, out, _ = invoke(
        capsys,
        ["cu", "sup", cu_files["u"], cu_files["two"], "--ambient", "interval"],
    )
    assert code == 0 and json.loads(out)["n"] == [2, 2]
    code, _, err = invoke(
        capsys,
        ["cu", "sup", cu_files["two"], cu_files["u"], "--ambient", "interval"],
    )
    assert code == 2 and "increasing" in err
    code, out, _ = invoke(
        capsys, ["cu", "floordiv", cu_files["two"], "2", "--ambient", "interval"]
    )
    assert code == 0 and json.loads(out)["n"] == [1, 1]


def test_cu_ll_candidate_and_oracle_routes(capsys, cu_files):
    base = ["cu", "ll", cu_files["u"], cu_files["two"], "--ambient", "interval"]
    code, out, _ = invoke(capsys, base)
    assert (code, json.loads(out)) == (0, {"ll": True, "route": "candidate"})
    code, out, _ = invoke(capsys, base + ["--oracle", "4", "4"])
    assert (code, json.loads(out)) == (0, {"ll": True, "route": "oracle"})


def test_cu_compact_and_ambient_hash_guard(capsys, cu_files):
    code, out, _ = invoke(
        capsys, ["cu", "compact", cu_files["u"], "--ambient", "interval"]
    )
    assert (code, json.loads(out)) == (0, {"compact": True})
    code, _, err = invoke(
        capsys, ["cu", "compact", cu_files["u"], "--ambient", "pointed_interval"]
    )
    assert code == 2 and "hash" in err


def test_cutilde_over_unitized_ambient(capsys, tmp_path):
    carrier = unitize(pointed_interval())
    x = CuElement.make(carrier, [0, 1], [1])
    w = write(
        tmp_path, "w.json", jsonio.cu_tilde_to_dict(CuTildeElement(x, 1), "unitized")
    )
    code, out, _ = invoke(
        capsys, ["cutilde", "leq", w, w, "--ambient", "pointed_interval"]
    )
    assert (code, json.loads(out)) == (0, {"leq": True})
    code, out, _ = invoke(
        capsys, ["cutilde", "add", w, w, "--ambient", "pointed_interval"]
    )
    assert code == 0 and json.loads(out)["units"] == 2
    code, out, _ = invoke(
        capsys, ["cutilde", "pos", w, "--ambient", "pointed_interval"]
    )
    assert (code, json.loads(out)) == (1, {"positive": False})


def test_suite_only_flag_runs_single_criterion(capsys):
    code, out, err = invoke(capsys, ["suite", "--only", "1"])
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == 1 and reports[0]["criterion"] == 1 and reports[0]["pass"]
    assert "criterion 1: PASS" in err
    assert invoke(capsys, ["suite", "--only", "12"])[0] == 2


def test_output_is_deterministic_and_canonical(capsys):
    code, first, _ = invoke(capsys, ["crossed", "2", "5"])
    _, second, _ = invoke(capsys, ["crossed", "2", "5"])
    assert code == 0 and first == second
    assert first == jsonio.canonical_dumps(json.loads(first)) + "\n"
