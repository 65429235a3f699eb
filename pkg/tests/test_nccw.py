"""NCCW complex data type, moves, K-theory, and graph extraction."""

from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nccwkit.intlinalg import AbelianGroup, IntMatrix
from nccwkit.nccw import (
    NccwComplex,
    direct_sum,
    has_pure_multiplicities,
    hereditary_cut,
    is_unital,
    is_valid,
    k_theory,
    minimal_attainable_f,
    permute_summands,
    remove_unit,
    stable_iso_replace,
    to_graph,
    unitize,
    validate,
)

INTERVAL = NccwComplex.make([1, 1], [1], [[1, 0]], [[0, 1]])
CIRCLE = NccwComplex.make([1], [1], [[1]], [[1]])
POINTED = NccwComplex.make([1], [1], [[0]], [[1]])  # C0(0,1]
QC = NccwComplex.make([1, 1], [2], [[0, 0]], [[1, 1]])


def razak(n: int) -> NccwComplex:
    return NccwComplex.make([1], [n], [[n - 1]], [[n]])


def dim_drop(p: int, q: int) -> NccwComplex:
    return NccwComplex.make([p, q], [p * q], [[q, 0]], [[0, p]])


# -------------------------------------------------------------- validation


def test_validate_examples():
    assert validate(INTERVAL) is None
    assert validate(dim_drop(2, 3)) is None
    bad = NccwComplex.make([2], [1], [[1]], [[1]])
    report = validate(bad)
    assert report is not None and "row 0" in report


def test_validate_reports_first_bad_row():
    a = NccwComplex.make([1, 1], [2, 1], [[1, 1], [1, 1]], [[0, 0], [0, 0]])
    report = validate(a)
    assert report is not None and "row 1" in report


def test_shape_errors_raise():
    with pytest.raises(ValueError):
        NccwComplex.make([], [1], [[]], [[]])
    with pytest.raises(ValueError):
        NccwComplex.make([1], [1], [[1, 1]], [[1]])


def test_is_unital():
    assert is_unital(dim_drop(2, 3))
    assert not is_unital(razak(4))
    assert not is_unital(QC)


# ---------------------------------------------------------------- K-theory


def test_k_theory_named_values():
    kt = k_theory(CIRCLE)
    assert (str(kt.k0), str(kt.k1)) == ("Z", "Z")
    kt = k_theory(INTERVAL)
    assert (str(kt.k0), str(kt.k1)) == ("Z", "0")
    for n in range(2, 11):
        kt = k_theory(razak(n))
        assert kt.k0.is_trivial and kt.k1.is_trivial
    kt = k_theory(QC)
    assert (str(kt.k0), str(kt.k1)) == ("Z", "0")


def test_k_theory_dimension_drop_gcd():
    from math import gcd

    for p in range(1, 8):
        for q in range(p + 1, 9):
            k1 = k_theory(dim_drop(p, q)).k1
            g = gcd(p, q)
            if g == 1:
                assert k1.is_trivial
            else:
                assert k1 == AbelianGroup(0, (g,))


# ------------------------------------------------------------------- moves


def test_unitize_examples():
    u = unitize(POINTED)
    assert u.e == (1, 1) and u.f == (1,)
    assert u.z0.to_rows() == [[0, 1]] and u.z1.to_rows() == [[1, 0]]
    # same complex as the interval up to summand order
    assert permute_summands(u, (1, 0)) == INTERVAL

    u = unitize(razak(5))
    assert u.z0.to_rows() == [[4, 1]] and u.z1.to_rows() == [[5, 0]]

    u = unitize(QC)
    assert u.z0.to_rows() == [[0, 0, 2]] and u.z1.to_rows() == [[1, 1, 0]]


def test_unitize_rejects_unital():
    with pytest.raises(ValueError):
        unitize(INTERVAL)


def test_remove_unit_examples():
    out = remove_unit(INTERVAL, 1)
    assert out == NccwComplex.make([1], [1], [[1]], [[0]])
    assert not is_unital(out)

    u = unitize(razak(3))
    assert remove_unit(u, u.k - 1) == razak(3)

    with pytest.raises(ValueError):
        remove_unit(razak(3), 0)  # not unital
    with pytest.raises(ValueError):
        remove_unit(dim_drop(2, 3), 0)  # block size 2


def test_hereditary_cut_bounds():
    a = NccwComplex.make([1, 1], [10], [[2, 2]], [[3, 4]])
    assert hereditary_cut(a, 0, 7).f == (7,)
    with pytest.raises(ValueError):
        hereditary_cut(a, 0, 6)
    assert hereditary_cut(a, 0, 10) == a  # identity move

    zero_row = NccwComplex.make([1], [3, 3], [[1], [0]], [[1], [0]])
    assert hereditary_cut(zero_row, 1, 1).f == (3, 1)


def test_stable_iso_replace():
    zd = dim_drop(2, 3)
    out = stable_iso_replace(zd, (1, 1), (3,))
    assert out.e == (1, 1) and out.f == (3,)
    assert out.z0 == zd.z0 and out.z1 == zd.z1
    assert stable_iso_replace(zd, zd.e, zd.f) == zd
    assert is_valid(stable_iso_replace(razak(3), (2,), (6,)))
    with pytest.raises(ValueError):
        stable_iso_replace(zd, (1, 1), (2,))  # row sum 3 > 2


def test_direct_sum_block_structure():
    s = direct_sum(INTERVAL, INTERVAL)
    assert s.k == 4 and s.l == 2
    assert s.z0.to_rows() == [[1, 0, 0, 0], [0, 0, 1, 0]]
    kt = k_theory(s)
    assert kt.k0.free_rank == 2 and kt.k1.is_trivial

    mixed = direct_sum(CIRCLE, dim_drop(2, 4))
    kt = k_theory(mixed)
    assert kt.k1 == AbelianGroup(1, (2,))  # Z from the circle, Z/2 from Z_{2,4}


# ------------------------------------------------------- purity and graphs


def test_has_pure_multiplicities():
    assert has_pure_multiplicities(INTERVAL)
    assert not has_pure_multiplicities(dim_drop(2, 3))  # e != (1,...,1)
    p3_fail = NccwComplex.make([1, 1], [2], [[1, 1]], [[2, 0]])
    assert not has_pure_multiplicities(p3_fail)


def test_to_graph_interval_circle():
    g = to_graph(INTERVAL)
    assert g.num_vertices == 2 and g.edges == ((0, 1),) and g.is_forest

    g = to_graph(CIRCLE)
    assert g.edges == ((0, 0),) and not g.is_forest


def test_to_graph_star():
    star = NccwComplex.make(
        [1, 1, 1, 1],
        [1, 1, 1],
        [[1, 0, 0, 0], [1, 0, 0, 0], [1, 0, 0, 0]],
        [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    )
    g = to_graph(star)
    assert g.is_forest and g.num_vertices == 4


def test_to_graph_rejects_impure_and_noncommutative():
    with pytest.raises(ValueError):
        to_graph(QC)
    doubled = NccwComplex.make([1, 1], [2], [[2, 0]], [[0, 2]])
    with pytest.raises(ValueError):
        to_graph(doubled)


# ------------------------------------------------------------- properties


def valid_complexes(max_side: int = 4, max_entry: int = 3, max_dim: int = 12):
    @st.composite
    def build(draw):
        k = draw(st.integers(1, max_side))
        l = draw(st.integers(1, max_side))
        e = tuple(draw(st.integers(1, 3)) for _ in range(k))
        z0 = [[draw(st.integers(0, max_entry)) for _ in range(k)] for _ in range(l)]
        z1 = [[draw(st.integers(0, max_entry)) for _ in range(k)] for _ in range(l)]
        base = minimal_attainable_f(
            IntMatrix.from_rows(z0), IntMatrix.from_rows(z1), e
        )
        f = tuple(b + draw(st.integers(0, 3)) for b in base)
        return NccwComplex.make(e, f, z0, z1)

    return build()


@settings(max_examples=120, deadline=None)
@given(valid_complexes())
def test_unitize_remove_round_trip(a):
    if is_unital(a):
        return
    u = unitize(a)
    assert is_unital(u)
    assert remove_unit(u, u.k - 1) == a


@settings(max_examples=120, deadline=None)
@given(valid_complexes())
def test_moves_preserve_k1_and_shift_k0(a):
    kt = k_theory(a)
    if not is_unital(a):
        u = unitize(a)
        ku = k_theory(u)
        assert ku.k1 == kt.k1
        assert ku.k0.free_rank == kt.k0.free_rank + 1
        back = remove_unit(u, u.k - 1)
        kb = k_theory(back)
        assert kb.k1 == kt.k1 and kb.k0.free_rank == kt.k0.free_rank

    shrunk = stable_iso_replace(
        a, a.e, minimal_attainable_f(a.z0, a.z1, a.e)
    )
    ks = k_theory(shrunk)
    assert ks.k1 == kt.k1 and ks.k0.free_rank == kt.k0.free_rank

    order = tuple(reversed(range(a.k)))
    kp = k_theory(permute_summands(a, order))
    assert kp.k1 == kt.k1 and kp.k0.free_rank == kt.k0.free_rank


@settings(max_examples=100, deadline=None)
@given(valid_complexes(max_side=5))
def test_forest_flag_matches_networkx(a):
    # derive pure commutative graph data from a's shape and entries
    k = a.k
    edges = []
    rows0, rows1 = [], []
    for i in range(a.l):
        u = sum(a.z0.row(i)) % k
        v = sum(a.z1.row(i)) % k
        edges.append((u, v))
        rows0.append([1 if j == u else 0 for j in range(k)])
        rows1.append([1 if j == v else 0 for j in range(k)])
    pure = NccwComplex.make(
        [1] * k, [1] * a.l, rows0, rows1
    )
    g = to_graph(pure)
    nxg = nx.MultiGraph()
    nxg.add_nodes_from(range(k))
    nxg.add_edges_from(edges)
    assert g.is_forest == nx.is_forest(nxg)
