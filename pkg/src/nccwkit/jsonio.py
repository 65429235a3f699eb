"""Canonical JSON encodings for every value the command line moves around.

One rule everywhere: objects serialize to plain dicts of ints, strings, and
lists, and ``canonical_dumps`` renders them with sorted keys and no
whitespace, so identical values always produce identical bytes.  Extended
naturals appear as ints or the string "inf"; rational breakpoints appear as
fraction strings like "1/3"; complexes referenced from inside an element are
carried by content hash rather than inline, and decoding re-checks the hash
against the ambient the caller supplies.

Decoders validate shape and reject anything malformed with ValueError — the
command line maps that to its input-error exit code.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any, Mapping

from .cuntz import CuElement, ExtNat, StepFn, ext
from .cu_tilde import CuTildeElement
from .gallery import CrossedBlockReport
from .intlinalg import char_poly_str
from .nccw import NccwComplex
from .reduction import (
    HereditaryCut,
    Move,
    MoveTrace,
    PermuteSummands,
    RemoveUnit,
    StableIsoReplace,
    Unitize,
)

__all__ = [
    "canonical_dumps",
    "complex_from_dict",
    "complex_sha256",
    "complex_to_dict",
    "crossed_report_to_dict",
    "cu_element_from_dict",
    "cu_element_to_dict",
    "cu_tilde_from_dict",
    "cu_tilde_to_dict",
    "move_from_dict",
    "move_to_dict",
    "sha256_hex",
    "stepfn_from_dict",
    "stepfn_to_dict",
    "trace_from_dict",
    "trace_to_dict",
]


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


def _int_list(v: Any, what: str) -> list[int]:
    _require(isinstance(v, list) and all(isinstance(x, int) for x in v), f"{what} must be a list of ints")
    return v


# ---------------------------------------------------------------- complexes


def complex_to_dict(a: NccwComplex) -> dict:
    return {"e": list(a.e), "f": list(a.f), "z0": a.z0.to_rows(), "z1": a.z1.to_rows()}


def complex_from_dict(d: Mapping) -> NccwComplex:
    _require(isinstance(d, Mapping), "complex must be an object")
    _require(set(d) == {"e", "f", "z0", "z1"}, "complex needs exactly the keys e, f, z0, z1")
    e = _int_list(d["e"], "e")
    f = _int_list(d["f"], "f")
    for key in ("z0", "z1"):
        _require(isinstance(d[key], list) and len(d[key]) == len(f), f"{key} needs one row per f entry")
        for row in d[key]:
            _int_list(row, f"{key} row")
            _require(len(row) == len(e), f"{key} rows need one entry per e entry")
    return NccwComplex.make(e, f, d["z0"], d["z1"])


def complex_sha256(a: NccwComplex) -> str:
    return sha256_hex(canonical_dumps(complex_to_dict(a)))


# -------------------------------------------------------------------- moves

_MOVE_NAMES = {
    Unitize: "unitize",
    RemoveUnit: "remove_unit",
    HereditaryCut: "hereditary_cut",
    StableIsoReplace: "stable_iso_replace",
    PermuteSummands: "permute_summands",
}


def move_to_dict(m: Move) -> dict:
    d: dict[str, Any] = {"move": _MOVE_NAMES[type(m)]}
    if isinstance(m, RemoveUnit):
        d["j"] = m.j
    elif isinstance(m, HereditaryCut):
        d["i"], d["fi"] = m.i, m.fi
    elif isinstance(m, StableIsoReplace):
        d["e"], d["f"] = list(m.e), list(m.f)
    elif isinstance(m, PermuteSummands):
        d["order"] = list(m.order)
    return d


def move_from_dict(d: Mapping) -> Move:
    _require(isinstance(d, Mapping) and "move" in d, "move must be an object with a 'move' key")
    kind = d["move"]
    if kind == "unitize":
        _require(set(d) == {"move"}, "unitize takes no fields")
        return Unitize()
    if kind == "remove_unit":
        _require(set(d) == {"move", "j"} and isinstance(d["j"], int), "remove_unit needs an int j")
        return RemoveUnit(j=d["j"])
    if kind == "hereditary_cut":
        _require(
            set(d) == {"move", "i", "fi"} and isinstance(d["i"], int) and isinstance(d["fi"], int),
            "hereditary_cut needs ints i and fi",
        )
        return HereditaryCut(i=d["i"], fi=d["fi"])
    if kind == "stable_iso_replace":
        _require(set(d) == {"move", "e", "f"}, "stable_iso_replace needs e and f")
        return StableIsoReplace(e=tuple(_int_list(d["e"], "e")), f=tuple(_int_list(d["f"], "f")))
    if kind == "permute_summands":
        _require(set(d) == {"move", "order"}, "permute_summands needs an order")
        return PermuteSummands(order=tuple(_int_list(d["order"], "order")))
    raise ValueError(f"unknown move kind: {kind!r}")


def trace_to_dict(t: MoveTrace) -> dict:
    return {
        "initial": complex_to_dict(t.initial),
        "steps": [
            {"move": move_to_dict(m), "state": complex_to_dict(s)} for m, s in t.steps
        ],
    }


def trace_from_dict(d: Mapping) -> MoveTrace:
    _require(isinstance(d, Mapping) and set(d) == {"initial", "steps"}, "trace needs initial and steps")
    _require(isinstance(d["steps"], list), "steps must be a list")
    steps = []
    for entry in d["steps"]:
        _require(isinstance(entry, Mapping) and set(entry) == {"move", "state"}, "each step needs move and state")
        steps.append((move_from_dict(entry["move"]), complex_from_dict(entry["state"])))
    return MoveTrace(complex_from_dict(d["initial"]), tuple(steps))


# ----------------------------------------------------------------- elements


def _extnat_out(v: ExtNat) -> int | str:
    return v.value if v.is_finite else "inf"


def _extnat_in(v: Any) -> ExtNat:
    _require(isinstance(v, int) or v == "inf", f"bad extended natural: {v!r}")
    return ext(v)


def stepfn_to_dict(f: StepFn) -> dict:
    return {
        "breakpoints": [str(t) for t in f.breakpoints],
        "interval_values": [_extnat_out(v) for v in f.interval_values],
        "point_values": [_extnat_out(v) for v in f.point_values],
    }


def stepfn_from_dict(d: Mapping) -> StepFn:
    _require(
        isinstance(d, Mapping) and set(d) == {"breakpoints", "interval_values", "point_values"},
        "step function needs breakpoints, interval_values, point_values",
    )
    try:
        bps = [Fraction(t) for t in d["breakpoints"]]
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValueError(f"bad breakpoint list: {exc}") from None
    return StepFn.make(bps, [_extnat_in(v) for v in d["interval_values"]], [_extnat_in(v) for v in d["point_values"]])


def cu_element_to_dict(x: CuElement) -> dict:
    return {
        "ambient_sha256": complex_sha256(x.ambient),
        "n": [_extnat_out(v) for v in x.n],
        "F": [stepfn_to_dict(f) for f in x.fns],
    }


def cu_element_from_dict(d: Mapping, ambient: NccwComplex) -> CuElement:
    _require(
        isinstance(d, Mapping) and set(d) == {"ambient_sha256", "n", "F"},
        "element needs ambient_sha256, n, F",
    )
    _require(
        d["ambient_sha256"] == complex_sha256(ambient),
        "ambient hash does not match the supplied complex",
    )
    _require(isinstance(d["n"], list) and isinstance(d["F"], list), "n and F must be lists")
    return CuElement(
        ambient,
        tuple(_extnat_in(v) for v in d["n"]),
        tuple(stepfn_from_dict(f) for f in d["F"]),
    )


def cu_tilde_to_dict(u: CuTildeElement, ambient_kind: str = "unital") -> dict:
    _require(ambient_kind in ("unital", "unitized"), "ambient_kind must be unital or unitized")
    return {"x": cu_element_to_dict(u.x), "units": u.units, "ambient_kind": ambient_kind}


def cu_tilde_from_dict(d: Mapping, carrier: NccwComplex) -> CuTildeElement:
    _require(
        isinstance(d, Mapping) and set(d) == {"x", "units", "ambient_kind"},
        "element needs x, units, ambient_kind",
    )
    _require(d["ambient_kind"] in ("unital", "unitized"), "bad ambient_kind")
    _require(isinstance(d["units"], int), "units must be an int")
    return CuTildeElement(cu_element_from_dict(d["x"], carrier), d["units"])


# ------------------------------------------------------------------ reports


def crossed_report_to_dict(rep: CrossedBlockReport) -> dict:
    return {
        "p": rep.p,
        "q": rep.q,
        "a": rep.a.to_rows(),
        "charpoly": char_poly_str(rep.charpoly),
        "charpoly_coefficients": list(rep.charpoly),
        "det_I_minus_A": rep.det_i_minus_a,
        "det_minus_A": rep.det_minus_a,
        "z0": rep.z0.to_rows(),
        "z1": rep.z1.to_rows(),
        "k1_trivial": rep.k1_trivial,
    }
