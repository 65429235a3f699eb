"""Formal differences over the pair model: elements [a] − n·[1].

The carrier is always a unital complex — the input itself when unital, its
unitization otherwise — and an element is a semigroup class together with a
number of unit classes to be formally subtracted.  Comparison moves the
subtracted units across the inequality: u ≤ v exactly when

    x_u + v.units·[1]  ≤  x_v + u.units·[1]

in the pair model.  The carriers here have cancellation of projections, so no
extra stabilizing multiple of [1] is needed on both sides; ``leq_stabilized``
re-runs the comparison with every stabilizer up to a bound for anyone who
wants the belt-and-braces version, and agreement between the two is part of
the test suite.

Elements coming from a non-unital complex are tracked inside the unitization:
the inclusion pads the rank vector with a zero at the adjoined summand, and
``quotient_count`` reads that coordinate back.  Membership over the original
complex means the count is finite and matches the declared unit deficit.

Positivity is decided against zero, and a positive element is handed back as
an honest semigroup class by splitting the subtracted units off the carrier
class (the unit class is compact, so the decomposition is exact).
"""

from __future__ import annotations

from dataclasses import dataclass

from .cuntz import (
    CuElement,
    ExtNat,
    NotDominated,
    StepFn,
    add as cu_add,
    compact_decomposition,
    leq as cu_leq,
    scalar_mul,
)
from .nccw import NccwComplex, is_unital, is_valid, unitize

__all__ = [
    "CuTildeElement",
    "NotPositive",
    "add",
    "eq",
    "include_in_unitization",
    "is_member",
    "is_positive",
    "leq",
    "leq_stabilized",
    "positive_representative",
    "quotient_count",
    "strictly_positive_class",
    "unit_class",
]


def unit_class(a: NccwComplex) -> CuElement:
    """[1]: full ranks of the unit — e at the E-blocks, constant f inside."""
    if not is_unital(a):
        raise ValueError("unit_class needs a unital complex")
    return CuElement.make(a, list(a.e), [StepFn.constant(v) for v in a.f])


def strictly_positive_class(a: NccwComplex) -> CuElement:
    """The class of a strictly positive element: full ranks everywhere.

    Coincides with the unit class when the complex is unital; defined for
    every valid complex.
    """
    if not is_valid(a):
        raise ValueError("strictly_positive_class needs a valid complex")
    return CuElement.make(a, list(a.e), [StepFn.constant(v) for v in a.f])


def include_in_unitization(x: CuElement) -> CuElement:
    """Push a class over a non-unital complex into its unitization.

    The adjoined summand carries rank zero, which leaves every boundary
    constraint untouched because the new columns only add zero terms.
    """
    return CuElement(unitize(x.ambient), x.n + (ExtNat(0),), x.fns)


@dataclass(frozen=True)
class CuTildeElement:
    """A formal difference x − units·[1] over a unital carrier."""

    x: CuElement
    units: int

    def __post_init__(self) -> None:
        if not is_unital(self.x.ambient):
            raise ValueError("carrier must be unital; include_in_unitization first")
        if self.units < 0:
            raise ValueError("unit count must be nonnegative")

    @classmethod
    def zero(cls, ambient: NccwComplex) -> CuTildeElement:
        return cls(CuElement.zero(ambient), 0)


def _same_carrier(u: CuTildeElement, v: CuTildeElement) -> None:
    if u.x.ambient != v.x.ambient:
        raise ValueError("elements live over different carriers")


def leq(u: CuTildeElement, v: CuTildeElement) -> bool:
    _same_carrier(u, v)
    one = unit_class(u.x.ambient)
    return cu_leq(cu_add(u.x, scalar_mul(one, v.units)), cu_add(v.x, scalar_mul(one, u.units)))


def leq_stabilized(u: CuTildeElement, v: CuTildeElement, max_k: int) -> bool:
    """The order with an explicit stabilizer: ∃ k ≤ max_k making the padded
    comparison hold.  With cancellation this never differs from ``leq``."""
    _same_carrier(u, v)
    one = unit_class(u.x.ambient)
    for k in range(max_k + 1):
        lhs = cu_add(u.x, scalar_mul(one, v.units + k))
        rhs = cu_add(v.x, scalar_mul(one, u.units + k))
        if cu_leq(lhs, rhs):
            return True
    return False


def eq(u: CuTildeElement, v: CuTildeElement) -> bool:
    return leq(u, v) and leq(v, u)


def add(u: CuTildeElement, v: CuTildeElement) -> CuTildeElement:
    _same_carrier(u, v)
    return CuTildeElement(cu_add(u.x, v.x), u.units + v.units)


def is_positive(u: CuTildeElement) -> bool:
    return leq(CuTildeElement.zero(u.x.ambient), u)


@dataclass(frozen=True)
class NotPositive:
    """Returned when no semigroup class represents the formal difference."""


def positive_representative(u: CuTildeElement) -> CuElement | NotPositive:
    """A class w with w − 0·[1] equal to u, when u is positive.

    Splits units·[1] off the carrier class; the unit class is compact, so
    the split is exact and the candidate equality is re-checked before
    returning.
    """
    e = scalar_mul(unit_class(u.x.ambient), u.units)
    r = compact_decomposition(e, u.x)
    if isinstance(r, NotDominated):
        return NotPositive()
    assert eq(CuTildeElement(r, 0), u), "representative does not reproduce the element"
    return r


def quotient_count(u: CuTildeElement) -> int:
    """Rank at the adjoined summand, for carriers built by unitization.

    The adjoined summand is the last one; an infinite rank there means the
    element does not come from the non-unital part at all.
    """
    count = u.x.n[-1]
    if not count.is_finite:
        raise ValueError("adjoined summand carries infinite rank")
    return count.value


def is_member(u: CuTildeElement) -> bool:
    """Is u a formal difference over the original non-unital complex?

    Requires the adjoined-summand rank to be finite and to match the
    declared unit deficit.
    """
    if not u.x.n[-1].is_finite:
        return False
    return quotient_count(u) == u.units
