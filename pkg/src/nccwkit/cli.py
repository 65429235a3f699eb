"""Batch front end: JSON in, canonical JSON out.

Exit codes: 0 = success / affirmative verdict, 1 = negative verdict
(invalid complex, false order relation, missing certificate, failed
trace, failing suite criterion), 2 = malformed input or flags.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from . import jsonio
from .cu_tilde import CuTildeElement, is_positive
from .cuntz import (
    CuElement,
    add,
    compactly_contained,
    compactly_contained_oracle,
    floor_div,
    is_compact,
    leq,
    sup_increasing,
)
from .cu_tilde import add as tilde_add
from .cu_tilde import leq as tilde_leq
from .gallery import (
    a_pq,
    circle,
    crossed_block,
    crossed_nccw,
    dimension_drop,
    gallery_items,
    interval,
    pointed_interval,
    q_c,
    razak,
    tree,
)
from .nccw import NccwComplex, is_unital, k_theory, unitize, validate
from .reduction import (
    NotK1Trivial,
    RowPurityError,
    euclidean_chain,
    euclidean_pairs,
    tree_certificate,
    verify_trace,
)
from .suite import DEFAULT_SEED, format_line, run_all


def _emit(obj) -> None:
    sys.stdout.write(jsonio.canonical_dumps(obj) + "\n")


def _load_json(path: str):
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not JSON ({exc})") from exc


_NAMED_AMBIENTS: dict[str, Callable[[], NccwComplex]] = {
    "interval": interval,
    "circle": circle,
    "pointed_interval": pointed_interval,
    "q_c": q_c,
}


def _load_complex(ref: str) -> NccwComplex:
    """A complex from a gallery name or a JSON file path."""
    if ref in _NAMED_AMBIENTS:
        return _NAMED_AMBIENTS[ref]()
    return jsonio.complex_from_dict(_load_json(ref))


def _load_element(path: str, ambient: NccwComplex) -> CuElement:
    return jsonio.cu_element_from_dict(_load_json(path), ambient)


# ------------------------------------------------------------- subcommands


def _cmd_validate(ns) -> int:
    # Structurally broken files raise and become exit 2; a well-formed
    # complex that fails the dimension inequalities is a negative verdict.
    a = jsonio.complex_from_dict(_load_json(ns.file))
    reason = validate(a)
    if reason is None:
        _emit({"valid": True})
        return 0
    _emit({"valid": False, "reason": reason})
    return 1


def _cmd_k(ns) -> int:
    kt = k_theory(_load_complex(ns.file))
    _emit({"K0": str(kt.k0), "K1": str(kt.k1)})
    return 0


def _cmd_reduce(ns) -> int:
    from .reduction import reduce_to_pure_multiplicities

    a = _load_complex(ns.file)
    try:
        out, trace = reduce_to_pure_multiplicities(a)
    except RowPurityError as exc:
        if ns.trace:
            with open(ns.trace, "w", encoding="utf-8") as fh:
                fh.write(jsonio.canonical_dumps(jsonio.trace_to_dict(exc.trace)) + "\n")
        _emit({"reduced": None, "stuck_row": exc.row, "steps": len(exc.trace.steps)})
        return 1
    if ns.trace:
        with open(ns.trace, "w", encoding="utf-8") as fh:
            fh.write(jsonio.canonical_dumps(jsonio.trace_to_dict(trace)) + "\n")
    _emit({"reduced": jsonio.complex_to_dict(out), "steps": len(trace.steps)})
    return 0


def _cmd_tree_cert(ns) -> int:
    a = _load_complex(ns.file)
    try:
        cert = tree_certificate(a)
    except RowPurityError as exc:
        _emit({"certified": False, "stuck_row": exc.row})
        return 1
    if isinstance(cert, NotK1Trivial):
        _emit({"k1": str(cert.k1)})
        return 1
    _emit(
        {
            "forest": {
                "num_vertices": cert.graph.num_vertices,
                "edges": [list(e) for e in cert.graph.edges],
            },
            "steps": len(cert.trace.steps),
        }
    )
    return 0


def _cmd_verify_trace(ns) -> int:
    t = jsonio.trace_from_dict(_load_json(ns.file))
    failure = verify_trace(t)
    if failure is None:
        _emit({"ok": True, "steps": len(t.steps)})
        return 0
    _emit({"ok": False, "step": failure.step, "reason": failure.reason})
    return 1


def _cmd_cu(ns) -> int:
    ambient = _load_complex(ns.ambient)
    if ns.cu_op == "leq":
        x, y = (_load_element(p, ambient) for p in (ns.x, ns.y))
        verdict = leq(x, y)
        _emit({"leq": verdict})
        return 0 if verdict else 1
    if ns.cu_op == "add":
        x, y = (_load_element(p, ambient) for p in (ns.x, ns.y))
        _emit(jsonio.cu_element_to_dict(add(x, y)))
        return 0
    if ns.cu_op == "sup":
        xs = [_load_element(p, ambient) for p in ns.files]
        _emit(jsonio.cu_element_to_dict(sup_increasing(xs)))
        return 0
    if ns.cu_op == "ll":
        x, y = (_load_element(p, ambient) for p in (ns.x, ns.y))
        if ns.oracle is not None:
            d, cap = ns.oracle
            verdict = compactly_contained_oracle(x, y, d, cap)
            _emit({"ll": verdict, "route": "oracle"})
        else:
            verdict = compactly_contained(x, y)
            _emit({"ll": verdict, "route": "candidate"})
        return 0 if verdict else 1
    if ns.cu_op == "compact":
        verdict = is_compact(_load_element(ns.x, ambient))
        _emit({"compact": verdict})
        return 0 if verdict else 1
    assert ns.cu_op == "floordiv"
    x = _load_element(ns.x, ambient)
    _emit(jsonio.cu_element_to_dict(floor_div(x, ns.d)))
    return 0


def _tilde_carrier(ambient: NccwComplex) -> tuple[NccwComplex, str]:
    if is_unital(ambient):
        return ambient, "unital"
    return unitize(ambient), "unitized"


def _cmd_cutilde(ns) -> int:
    ambient = _load_complex(ns.ambient)
    carrier, kind = _tilde_carrier(ambient)

    def load(path: str) -> CuTildeElement:
        return jsonio.cu_tilde_from_dict(_load_json(path), carrier)

    if ns.tilde_op == "leq":
        verdict = tilde_leq(load(ns.x), load(ns.y))
        _emit({"leq": verdict})
        return 0 if verdict else 1
    if ns.tilde_op == "add":
        _emit(jsonio.cu_tilde_to_dict(tilde_add(load(ns.x), load(ns.y)), kind))
        return 0
    assert ns.tilde_op == "pos"
    verdict = is_positive(load(ns.x))
    _emit({"positive": verdict})
    return 0 if verdict else 1


def _parse_edge(text: str) -> tuple[int, int]:
    parts = text.replace("-", ",").split(",")
    if len(parts) != 2:
        raise ValueError(f"edge must look like 1-2, got {text!r}")
    return int(parts[0]), int(parts[1])


def _cmd_gallery(ns) -> int:
    name, params = ns.name, ns.params
    if name == "list":
        _emit(
            {
                "items": [n for n, _ in gallery_items()],
                "parametrized": [
                    "razak N",
                    "dimension_drop P Q",
                    "a_pq P Q",
                    "crossed P Q",
                    "tree U-V [U-V ...]",
                ],
            }
        )
        return 0
    if name in _NAMED_AMBIENTS:
        if params:
            raise ValueError(f"gallery {name} takes no parameters")
        _emit(jsonio.complex_to_dict(_NAMED_AMBIENTS[name]()))
        return 0
    if name == "tree":
        if not params:
            raise ValueError("gallery tree needs at least one edge")
        _emit(jsonio.complex_to_dict(tree([_parse_edge(p) for p in params])))
        return 0
    arities: dict[str, tuple[int, Callable[..., NccwComplex]]] = {
        "razak": (1, razak),
        "dimension_drop": (2, dimension_drop),
        "a_pq": (2, a_pq),
        "crossed": (2, crossed_nccw),
    }
    if name not in arities:
        known = [n for n, _ in gallery_items()]
        raise ValueError(f"unknown gallery name {name!r}; try one of {known}")
    arity, fn = arities[name]
    if len(params) != arity:
        raise ValueError(f"gallery {name} needs {arity} integer parameter(s)")
    _emit(jsonio.complex_to_dict(fn(*(int(p) for p in params))))
    return 0


def _cmd_chain(ns) -> int:
    t = euclidean_chain(ns.p, ns.q)
    _emit(
        {
            "pairs": [list(pq) for pq in euclidean_pairs(t)],
            "trace": jsonio.trace_to_dict(t),
        }
    )
    return 0


def _cmd_crossed(ns) -> int:
    _emit(jsonio.crossed_report_to_dict(crossed_block(ns.p, ns.q)))
    return 0


def _cmd_suite(ns) -> int:
    only = None
    if ns.only:
        only = [int(part) for part in ns.only.split(",")]
    reports = run_all(seed=ns.seed, only=only)
    for r in reports:
        print(format_line(r), file=sys.stderr)
    _emit(reports)
    return 0 if all(r["pass"] for r in reports) else 1


# ------------------------------------------------------------------ parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nccw",
        description="Exact computations on 1-dimensional NCCW complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a complex JSON file")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("k", help="K0/K1 of a complex")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_k)

    p = sub.add_parser("reduce", help="reduce to pure multiplicities")
    p.add_argument("file")
    p.add_argument("--trace", metavar="OUT", help="write the move trace here")
    p.set_defaults(handler=_cmd_reduce)

    p = sub.add_parser("tree-cert", help="forest certificate for K1 = 0")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_tree_cert)

    p = sub.add_parser("verify-trace", help="replay a recorded move trace")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_verify_trace)

    p = sub.add_parser("cu", help="Cuntz-semigroup element operations")
    cu = p.add_subparsers(dest="cu_op", required=True)
    for op in ("leq", "ll", "add"):
        q = cu.add_parser(op)
        q.add_argument("x")
        q.add_argument("y")
        q.add_argument("--ambient", required=True, help="complex file or gallery name")
        if op == "ll":
            q.add_argument(
                "--oracle",
                nargs=2,
                type=int,
                metavar=("D", "N"),
                help="decide via the grid oracle at denominator D, cap N",
            )
        q.set_defaults(handler=_cmd_cu)
    q = cu.add_parser("sup")
    q.add_argument("files", nargs="+")
    q.add_argument("--ambient", required=True)
    q.set_defaults(handler=_cmd_cu)
    q = cu.add_parser("compact")
    q.add_argument("x")
    q.add_argument("--ambient", required=True)
    q.set_defaults(handler=_cmd_cu)
    q = cu.add_parser("floordiv")
    q.add_argument("x")
    q.add_argument("d", type=int)
    q.add_argument("--ambient", required=True)
    q.set_defaults(handler=_cmd_cu)

    p = sub.add_parser("cutilde", help="formal-difference element operations")
    ct = p.add_subparsers(dest="tilde_op", required=True)
    for op in ("leq", "add"):
        q = ct.add_parser(op)
        q.add_argument("x")
        q.add_argument("y")
        q.add_argument("--ambient", required=True)
        q.set_defaults(handler=_cmd_cutilde)
    q = ct.add_parser("pos")
    q.add_argument("x")
    q.add_argument("--ambient", required=True)
    q.set_defaults(handler=_cmd_cutilde)

    p = sub.add_parser("gallery", help="emit a named example complex")
    p.add_argument("name")
    p.add_argument("params", nargs="*")
    p.set_defaults(handler=_cmd_gallery)

    p = sub.add_parser("chain", help="Euclid move chain for coprime p < q")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(handler=_cmd_chain)

    p = sub.add_parser("crossed", help="crossed-product matrix block report")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(handler=_cmd_crossed)

    p = sub.add_parser("suite", help="run the numbered acceptance checks")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(handler=_cmd_suite)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv and dispatch; never raises for bad input."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return ns.handler(ns)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run())
