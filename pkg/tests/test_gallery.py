"""Named examples and crossed-product blocks, checked against K-theory."""

from __future__ import annotations

from math import gcd

import pytest
import sympy

from nccwkit.gallery import (
    CrossedBlockReport,
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
from nccwkit.intlinalg import AbelianGroup
from nccwkit.nccw import has_pure_multiplicities, is_unital, is_valid, k_theory

Z = AbelianGroup(1)
ZERO = AbelianGroup(0)


@pytest.mark.parametrize(
    "a, k0, k1",
    [
        (interval(), Z, ZERO),
        (circle(), Z, Z),
        (pointed_interval(), ZERO, ZERO),
        (q_c(), Z, ZERO),
        (razak(2), ZERO, ZERO),
        (razak(7), ZERO, ZERO),
        (dimension_drop(2, 3), Z, ZERO),
        (dimension_drop(2, 4), Z, AbelianGroup(0, (2,))),
    ],
)
def test_named_k_theory(a, k0, k1):
    kt = k_theory(a)
    assert kt.k0 == k0 and kt.k1 == k1


def test_unitality_of_named_examples():
    assert is_unital(interval()) and is_unital(circle())
    assert not is_unital(pointed_interval())
    assert not is_unital(q_c())
    assert not is_unital(razak(4))
    assert is_unital(dimension_drop(3, 5))


def test_parameter_bounds():
    for bad in (lambda: razak(1), lambda: dimension_drop(3, 3),
                lambda: dimension_drop(0, 2), lambda: a_pq(5, 3)):
        with pytest.raises(ValueError):
            bad()


def test_tree():
    star = tree([(1, 2), (1, 3), (1, 4)])
    assert has_pure_multiplicities(star)
    assert k_theory(star).k1 == ZERO
    with pytest.raises(ValueError):
        tree([])
    with pytest.raises(ValueError, match="loop"):
        tree([(1, 1)])
    with pytest.raises(ValueError, match="vertex range"):
        tree([(0, 2)])
    with pytest.raises(ValueError, match="cycle"):
        tree([(1, 2), (2, 3), (3, 1)])
    with pytest.raises(ValueError, match="cycle"):
        tree([(1, 2), (1, 2)])  # a doubled edge is a cycle too


def test_dimension_drop_and_a_pq_agree_in_k_theory():
    for p, q in [(1, 2), (2, 3), (2, 4), (3, 6), (4, 9)]:
        ours, theirs = k_theory(dimension_drop(p, q)), k_theory(a_pq(p, q))
        assert ours.k0 == theirs.k0 and ours.k1 == theirs.k1
        expected = ZERO if gcd(p, q) == 1 else AbelianGroup(0, (gcd(p, q),))
        assert ours.k1 == expected


def test_crossed_block_1_2():
    rep = crossed_block(1, 2)
    assert rep.a.to_rows() == [[0, 1], [1, 1]]
    assert rep.charpoly == (-1, -1, 1)
    assert rep.det_i_minus_a == -1 and rep.det_minus_a == -1
    assert (rep.z0 - rep.z1).to_rows() == [[0, 1], [1, 1]]
    assert rep.k1_trivial


def test_crossed_block_rejections():
    with pytest.raises(ValueError, match="relatively prime"):
        crossed_block(2, 4)
    with pytest.raises(ValueError):
        crossed_block(3, 2)


@pytest.mark.parametrize(
    "p,q", [(p, q) for q in range(2, 9) for p in range(1, q) if gcd(p, q) == 1]
)
def test_crossed_blocks_all_coprime_pairs(p: int, q: int):
    rep = crossed_block(p, q)
    t = sympy.Symbol("t")
    theirs = sympy.Matrix(rep.a.to_rows()).charpoly(t).all_coeffs()
    assert list(rep.charpoly) == [int(c) for c in reversed(theirs)]
    assert sympy.Poly(t**q - t ** (q - p) - 1, t).all_coeffs() == theirs
    assert rep.det_i_minus_a == -1
    assert rep.det_minus_a == -1
    assert rep.k1_trivial


def test_crossed_nccw():
    a = crossed_nccw(2, 5)
    assert is_valid(a) and a.l == 5 and a.e == (1,) * 5
    kt = k_theory(a)
    assert kt.k1 == ZERO and kt.k0 == ZERO


def test_gallery_items():
    items = gallery_items()
    names = [n for n, _ in items]
    assert len(names) == len(set(names))
    assert all(is_valid(a) for _, a in items)
    trivial = [n for n, a in items if k_theory(a).k1.is_trivial]
    assert "circle" not in trivial and "dimension_drop_2_4" not in trivial
    assert "crossed_2_3" in trivial and "razak_2" in trivial
