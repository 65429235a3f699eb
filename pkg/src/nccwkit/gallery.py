"""Named example complexes and the flow-crossed-product block machinery.

Commutative spaces (interval, circle, trees), the small projectionless
algebras (the half-open interval, qC, the Razak blocks), the dimension-drop
family and its one-parameter presentation, and the integer-matrix side of
the mapping-torus construction for a flow: a q×q companion-type block A
whose powers A^{q+1} and A^q serve as the two multiplicity matrices.

The displayed position of the ones in A's last row is reconstructed from the
characteristic-polynomial contract t^q − t^{q−p} − 1: the constructor builds
the matrix, recomputes the polynomial exactly, and refuses to hand back a
block that does not match.  The determinant identities det(I−A) = −1 and
det(−A) = −1 then come out both by direct elimination and by evaluating the
verified polynomial, and triviality of K1 for the packaged complex reduces
to surjectivity of A^{q+1} − A^q over the integers.

``gallery_items`` fixes the deterministic list of named complexes the batch
suites sweep.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .intlinalg import (
    IntMatrix,
    char_poly,
    determinant,
    eval_poly,
    is_surjective,
)
from .nccw import NccwComplex, has_pure_multiplicities, is_valid, minimal_attainable_f, to_graph

__all__ = [
    "CrossedBlockReport",
    "a_pq",
    "circle",
    "crossed_block",
    "crossed_nccw",
    "dimension_drop",
    "gallery_items",
    "interval",
    "pointed_interval",
    "q_c",
    "razak",
    "tree",
]


def interval() -> NccwComplex:
    """C[0,1]: both endpoint evaluations onto separate rank-1 blocks."""
    return NccwComplex.make([1, 1], [1], [[1, 0]], [[0, 1]])


def circle() -> NccwComplex:
    """C(S¹): the two endpoint evaluations glued through one block."""
    return NccwComplex.make([1], [1], [[1]], [[1]])


def pointed_interval() -> NccwComplex:
    """C0(0,1]: functions killed at the left endpoint."""
    return NccwComplex.make([1], [1], [[0]], [[1]])


def tree(edges: list[tuple[int, int]]) -> NccwComplex:
    """C(T) for a finite tree on vertices 1..k: one interval per edge.

    Each edge contributes an F-block whose endpoint maps hit the incident
    vertex blocks, so the result has pure multiplicities by construction.
    """
    if not edges:
        raise ValueError("a tree needs at least one edge")
    k = max(max(u, v) for u, v in edges)
    for u, v in edges:
        if not (1 <= u <= k and 1 <= v <= k):
            raise ValueError(f"edge ({u}, {v}) leaves the vertex range")
        if u == v:
            raise ValueError(f"edge ({u}, {v}) is a loop")
    z0 = [[1 if j + 1 == u else 0 for j in range(k)] for u, _ in edges]
    z1 = [[1 if j + 1 == v else 0 for j in range(k)] for _, v in edges]
    a = NccwComplex.make([1] * k, [1] * len(edges), z0, z1)
    if not to_graph(a).is_forest:
        raise ValueError("edge list contains a cycle")
    assert has_pure_multiplicities(a)
    return a


def q_c() -> NccwComplex:
    """qC: 2×2 matrix functions on (0,1] diagonal at the surviving endpoint."""
    return NccwComplex.make([1, 1], [2], [[0, 0]], [[1, 1]])


def razak(n: int) -> NccwComplex:
    """The Razak block: scalars repeated n−1 times at one end, n at the other."""
    if n < 2:
        raise ValueError("razak needs n >= 2")
    return NccwComplex.make([1], [n], [[n - 1]], [[n]])


def dimension_drop(p: int, q: int) -> NccwComplex:
    """I(p, q): M_p ⊕ M_q boundary values inside M_{pq}."""
    if not 0 < p < q:
        raise ValueError("dimension_drop needs 0 < p < q")
    return NccwComplex.make([p, q], [p * q], [[q, 0]], [[0, p]])


def a_pq(p: int, q: int) -> NccwComplex:
    """The one-parameter presentation: scalar multiplicities p and q at the
    two ends of a single M_q fibre."""
    if not 0 < p < q:
        raise ValueError("a_pq needs 0 < p < q")
    return NccwComplex.make([1, 1], [q], [[0, p]], [[q, 0]])


# ------------------------------------------------------------ flow blocks


@dataclass(frozen=True)
class CrossedBlockReport:
    p: int
    q: int
    a: IntMatrix
    charpoly: tuple[int, ...]
    det_i_minus_a: int
    det_minus_a: int
    z0: IntMatrix
    z1: IntMatrix
    k1_trivial: bool


def crossed_block(p: int, q: int) -> CrossedBlockReport:
    """The verified companion block for the irrational-flow mapping torus.

    A has ones on the superdiagonal and, in the last row, at columns 1 and
    q−p+1.  The construction is accepted only if its characteristic
    polynomial comes out as t^q − t^{q−p} − 1; every determinant identity is
    computed twice (elimination and polynomial evaluation).
    """
    if not 0 < p < q:
        raise ValueError("crossed_block needs 0 < p < q")
    if gcd(p, q) != 1:
        raise ValueError("p and q must be relatively prime")
    rows = [[1 if j == i + 1 else 0 for j in range(q)] for i in range(q - 1)]
    last = [0] * q
    last[0] = 1
    last[q - p] += 1
    a = IntMatrix.from_rows(rows + [last])

    coeffs = char_poly(a)
    expected = [0] * (q + 1)
    expected[0] = -1
    expected[q - p] += -1
    expected[q] += 1
    if coeffs != tuple(expected):
        raise RuntimeError(f"companion block ({p},{q}) failed its characteristic "
                           f"polynomial check: {coeffs}")

    identity = IntMatrix.identity(q)
    det_i_minus_a = determinant(identity - a)
    det_minus_a = determinant(-a)
    assert det_i_minus_a == eval_poly(coeffs, 1)
    assert det_minus_a == eval_poly(coeffs, 0)

    z0 = a.power(q + 1)
    z1 = a.power(q)
    return CrossedBlockReport(
        p=p,
        q=q,
        a=a,
        charpoly=coeffs,
        det_i_minus_a=det_i_minus_a,
        det_minus_a=det_minus_a,
        z0=z0,
        z1=z1,
        k1_trivial=is_surjective(z0 - z1),
    )


def crossed_nccw(p: int, q: int) -> NccwComplex:
    """Package the verified block as a complex: multiplicities A^{q+1}, A^q.

    Rank-1 E-blocks with the smallest attainable fibre dimensions; any other
    attainable choice is stably the same, so nothing is lost by the minimal
    one.
    """
    rep = crossed_block(p, q)
    e = (1,) * q
    f = minimal_attainable_f(rep.z0, rep.z1, e)
    return NccwComplex.make(e, f, rep.z0.to_rows(), rep.z1.to_rows())


def gallery_items() -> list[tuple[str, NccwComplex]]:
    """The fixed sweep list for batch suites; every entry passes validation."""
    items = [
        ("interval", interval()),
        ("circle", circle()),
        ("pointed_interval", pointed_interval()),
        ("three_star_tree", tree([(1, 2), (1, 3), (1, 4)])),
        ("path_tree", tree([(1, 2), (2, 3)])),
        ("q_c", q_c()),
        ("razak_2", razak(2)),
        ("razak_3", razak(3)),
        ("dimension_drop_2_3", dimension_drop(2, 3)),
        ("dimension_drop_2_4", dimension_drop(2, 4)),
        ("dimension_drop_6_10", dimension_drop(6, 10)),
        ("a_2_5", a_pq(2, 5)),
        ("a_3_4", a_pq(3, 4)),
        ("crossed_1_2", crossed_nccw(1, 2)),
        ("crossed_1_3", crossed_nccw(1, 3)),
        ("crossed_2_3", crossed_nccw(2, 3)),
    ]
    assert all(is_valid(a) for _, a in items)
    return items
