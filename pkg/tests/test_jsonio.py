"""Round trips and rejection paths for the canonical JSON layer."""

from __future__ import annotations

import json

import pytest

from nccwkit import jsonio
from nccwkit.cu_tilde import CuTildeElement
from nccwkit.cuntz import CuElement, StepFn
from nccwkit.gallery import gallery_items, interval, pointed_interval, razak
from nccwkit.nccw import NccwComplex, unitize
from nccwkit.reduction import (
    HereditaryCut,
    PermuteSummands,
    RemoveUnit,
    StableIsoReplace,
    Unitize,
    reduce_to_pure_multiplicities,
    verify_trace,
)
from nccwkit.suite import random_complexes


def test_canonical_dumps_is_sorted_and_compact():
    s = jsonio.canonical_dumps({"b": 1, "a": [1, 2], "c": {"z": 0, "y": 1}})
    assert s == '{"a":[1,2],"b":1,"c":{"y":1,"z":0}}'
    assert jsonio.canonical_dumps(json.loads(s)) == s


def test_complex_round_trip_on_gallery_and_random_family():
    sample = [a for _, a in gallery_items()] + random_complexes(count=30)
    for a in sample:
        d = jsonio.complex_to_dict(a)
        assert jsonio.complex_from_dict(d) == a
        assert set(d) == {"e", "f", "z0", "z1"}


def test_complex_dict_rejects_bad_shapes():
    good = jsonio.complex_to_dict(razak(3))
    for mutant in (
        {**good, "extra": 1},
        {k: v for k, v in good.items() if k != "f"},
        {**good, "e": "nope"},
        {**good, "z0": [[1, 2]]},  # wrong width for e of length 1
        {**good, "e": [1.5]},
    ):
        with pytest.raises(ValueError):
            jsonio.complex_from_dict(mutant)


def test_complex_sha256_is_stable_and_content_addressed():
    a = razak(4)
    h1 = jsonio.complex_sha256(a)
    h2 = jsonio.complex_sha256(jsonio.complex_from_dict(jsonio.complex_to_dict(a)))
    assert h1 == h2 and len(h1) == 64
    assert jsonio.complex_sha256(razak(5)) != h1


def test_every_move_kind_round_trips():
    moves = [
        Unitize(),
        RemoveUnit(j=2),
        HereditaryCut(i=1, fi=3),
        StableIsoReplace(e=(1, 2), f=(3,)),
        PermuteSummands(order=(2, 0, 1)),
    ]
    for m in moves:
        d = jsonio.move_to_dict(m)
        assert jsonio.move_from_dict(d) == m
    with pytest.raises(ValueError):
        jsonio.move_from_dict({"kind": "teleport"})


def test_trace_round_trip_replays():
    _, t = reduce_to_pure_multiplicities(razak(5))
    d = jsonio.trace_to_dict(t)
    t2 = jsonio.trace_from_dict(d)
    assert t2 == t
    assert verify_trace(t2) is None
    # a canonical encoding of the decoded trace is byte-identical
    assert jsonio.canonical_dumps(jsonio.trace_to_dict(t2)) == jsonio.canonical_dumps(d)


def test_stepfn_round_trip_with_infinite_values():
    f = StepFn.make(("1/3", "2/3"), (1, "inf", 2), (1, 1))
    d = jsonio.stepfn_to_dict(f)
    assert d["breakpoints"] == ["1/3", "2/3"]
    assert d["interval_values"] == [1, "inf", 2]
    assert jsonio.stepfn_from_dict(d) == f
    with pytest.raises(ValueError):
        jsonio.stepfn_from_dict({**d, "breakpoints": ["2/3", "1/3"]})
    with pytest.raises(ValueError):
        jsonio.stepfn_from_dict({**d, "interval_values": [1, "lots", 2]})


def test_cu_element_round_trip_checks_ambient_hash():
    iv = interval()
    x = CuElement.make(iv, [1, 1], [StepFn.make(("1/2",), (1, 2), (1,))])
    d = jsonio.cu_element_to_dict(x)
    assert set(d) == {"ambient_sha256", "n", "F"}
    assert jsonio.cu_element_from_dict(d, iv) == x
    with pytest.raises(ValueError, match="hash"):
        jsonio.cu_element_from_dict(d, pointed_interval())
    with pytest.raises(ValueError):
        jsonio.cu_element_from_dict({**d, "n": [1]}, iv)


def test_cu_tilde_round_trip_on_unitized_carrier():
    carrier = unitize(pointed_interval())
    x = CuElement.make(carrier, [1, 1], [1])
    u = CuTildeElement(x, 2)
    d = jsonio.cu_tilde_to_dict(u, "unitized")
    assert jsonio.cu_tilde_from_dict(d, carrier) == u
    with pytest.raises(ValueError):
        jsonio.cu_tilde_to_dict(u, "weird")
    with pytest.raises(ValueError):
        jsonio.cu_tilde_from_dict({**d, "units": "two"}, carrier)


def test_emitted_json_reparses_equal():
    # the round-trip invariant, stated on raw bytes
    a = NccwComplex.make([2, 1], [4, 2], [[1, 1], [0, 1]], [[0, 2], [1, 0]])
    blob = jsonio.canonical_dumps(jsonio.complex_to_dict(a))
    again = jsonio.canonical_dumps(jsonio.complex_to_dict(jsonio.complex_from_dict(json.loads(blob))))
    assert blob == again
