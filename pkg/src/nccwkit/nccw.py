"""1-dimensional NCCW complexes and the elementary moves on them.

A complex is the data (e, f, Z0, Z1): block sizes e_1..e_k of the
finite-dimensional algebra E, block sizes f_1..f_l of F, and two l x k
nonnegative integer multiplicity matrices describing the boundary maps at the
two endpoints of the interval.  The data is attainable iff Z0*e <= f and
Z1*e <= f componentwise, and the stable isomorphism class depends on the
matrices alone.

K-theory comes from the difference matrix: K1 = coker(Z0 - Z1) and
K0 = ker(Z0 - Z1), both computed exactly via the Smith normal form.

The four stable-class-preserving moves (unitize, remove_unit, hereditary_cut,
stable_iso_replace) plus summand permutation are implemented as pure
functions; each validates its precondition and returns a new complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .intlinalg import AbelianGroup, IntMatrix, kernel_and_cokernel


@dataclass(frozen=True)
class NccwComplex:
    e: tuple[int, ...]
    f: tuple[int, ...]
    z0: IntMatrix
    z1: IntMatrix

    def __post_init__(self) -> None:
        k, l = len(self.e), len(self.f)
        if k < 1 or l < 1:
            raise ValueError("both E and F need at least one summand")
        for m, name in ((self.z0, "Z0"), (self.z1, "Z1")):
            if (m.rows, m.cols) != (l, k):
                raise ValueError(f"{name} must be {l}x{k}, got {m.rows}x{m.cols}")

    @classmethod
    def make(
        cls,
        e: Sequence[int],
        f: Sequence[int],
        z0: Sequence[Sequence[int]],
        z1: Sequence[Sequence[int]],
    ) -> NccwComplex:
        return cls(tuple(e), tuple(f), IntMatrix.from_rows(z0), IntMatrix.from_rows(z1))

    @property
    def k(self) -> int:
        return len(self.e)

    @property
    def l(self) -> int:
        return len(self.f)


@dataclass(frozen=True)
class KTheory:
    k0: AbelianGroup
    k0_kernel_basis: tuple[tuple[int, ...], ...]
    k1: AbelianGroup


@dataclass(frozen=True)
class Multigraph:
    """Vertices 0..n-1 with an edge list that may contain loops and repeats."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    is_forest: bool


def weighted_row_sums(m: IntMatrix, e: Sequence[int]) -> tuple[int, ...]:
    """(m @ e) as a tuple — the dimension each F-block must accommodate."""
    return m.apply(tuple(e))


def minimal_attainable_f(z0: IntMatrix, z1: IntMatrix, e: Sequence[int]) -> tuple[int, ...]:
    """Smallest f making (e, f, z0, z1) attainable; each block stays >= 1."""
    s0 = weighted_row_sums(z0, e)
    s1 = weighted_row_sums(z1, e)
    return tuple(max(a, b, 1) for a, b in zip(s0, s1))


def validate(a: NccwComplex) -> str | None:
    """None when the data is attainable, else a message naming the violation."""
    for j, ej in enumerate(a.e):
        if ej < 1:
            return f"e[{j}] = {ej} is not positive"
    for i, fi in enumerate(a.f):
        if fi < 1:
            return f"f[{i}] = {fi} is not positive"
    for m, name in ((a.z0, "Z0"), (a.z1, "Z1")):
        for i in range(a.l):
            for j in range(a.k):
                if m.at(i, j) < 0:
                    return f"{name}[{i}][{j}] = {m.at(i, j)} is negative"
    for m, name in ((a.z0, "Z0"), (a.z1, "Z1")):
        sums = weighted_row_sums(m, a.e)
        for i in range(a.l):
            if sums[i] > a.f[i]:
                return f"row {i}: {name}.e = {sums[i]} exceeds f[{i}] = {a.f[i]}"
    return None


def is_valid(a: NccwComplex) -> bool:
    return validate(a) is None


def _require_valid(a: NccwComplex) -> None:
    report = validate(a)
    if report is not None:
        raise ValueError(f"invalid complex: {report}")


def is_unital(a: NccwComplex) -> bool:
    """Both boundary maps hit every F-block with full dimension."""
    return (
        weighted_row_sums(a.z0, a.e) == a.f
        and weighted_row_sums(a.z1, a.e) == a.f
    )


def k_theory(a: NccwComplex) -> KTheory:
    _require_valid(a)
    basis, coker = kernel_and_cokernel(a.z0 - a.z1)
    k0 = AbelianGroup(free_rank=len(basis))
    return KTheory(k0=k0, k0_kernel_basis=basis, k1=coker)


# ------------------------------------------------------------------- moves


def unitize(a: NccwComplex) -> NccwComplex:
    """Adjoin a unit: one new rank-1 E-summand filling the missing corner.

    The appended multiplicity columns are f - Z0*e and f - Z1*e, so the
    result is unital.  Already-unital input is rejected: adjoining a unit to
    a unital algebra changes the stable class.
    """
    _require_valid(a)
    if is_unital(a):
        raise ValueError("cannot unitize: complex is already unital")
    c0 = [fi - si for fi, si in zip(a.f, weighted_row_sums(a.z0, a.e))]
    c1 = [fi - si for fi, si in zip(a.f, weighted_row_sums(a.z1, a.e))]
    z0 = IntMatrix.from_rows([list(a.z0.row(i)) + [c0[i]] for i in range(a.l)])
    z1 = IntMatrix.from_rows([list(a.z1.row(i)) + [c1[i]] for i in range(a.l)])
    return NccwComplex(a.e + (1,), a.f, z0, z1)


def remove_unit(a: NccwComplex, j: int) -> NccwComplex:
    """Delete the rank-1 summand j from a unital complex (columns removed).

    Inverse to unitize: the input is recovered from the output by unitizing,
    up to the position of the new summand.
    """
    _require_valid(a)
    if not is_unital(a):
        raise ValueError("remove_unit needs a unital complex")
    if not 0 <= j < a.k:
        raise ValueError(f"summand index {j} out of range")
    if a.e[j] != 1:
        raise ValueError(f"summand {j} has block size {a.e[j]}, not 1")
    if a.k == 1:
        raise ValueError("cannot remove the only summand")
    e = a.e[:j] + a.e[j + 1 :]
    z0 = IntMatrix.from_rows([[x for t, x in enumerate(a.z0.row(i)) if t != j] for i in range(a.l)])
    z1 = IntMatrix.from_rows([[x for t, x in enumerate(a.z1.row(i)) if t != j] for i in range(a.l)])
    return NccwComplex(e, a.f, z0, z1)


def hereditary_cut(a: NccwComplex, i: int, fi_new: int) -> NccwComplex:
    """Shrink block i of F down to fi_new, keeping the corner full.

    Legal range: max((Z0*e)_i, (Z1*e)_i, 1) <= fi_new <= f_i.  The floor of 1
    covers the degenerate case where both boundary rows vanish — a 1x1 corner
    of the block is still full in it.
    """
    _require_valid(a)
    if not 0 <= i < a.l:
        raise ValueError(f"block index {i} out of range")
    lo = max(
        weighted_row_sums(a.z0, a.e)[i],
        weighted_row_sums(a.z1, a.e)[i],
        1,
    )
    if not lo <= fi_new <= a.f[i]:
        raise ValueError(
            f"hereditary cut of f[{i}] to {fi_new} outside legal range [{lo}, {a.f[i]}]"
        )
    f = a.f[:i] + (fi_new,) + a.f[i + 1 :]
    return NccwComplex(a.e, f, a.z0, a.z1)


def stable_iso_replace(
    a: NccwComplex, e_new: Sequence[int], f_new: Sequence[int]
) -> NccwComplex:
    """Swap the dimension vectors for any other attainable pair.

    The multiplicity matrices are untouched, so the stable class — and with
    it all of K-theory — is unchanged.
    """
    _require_valid(a)
    if len(e_new) != a.k or len(f_new) != a.l:
        raise ValueError("replacement dimensions must match the summand counts")
    out = NccwComplex(tuple(e_new), tuple(f_new), a.z0, a.z1)
    report = validate(out)
    if report is not None:
        raise ValueError(f"replacement dimensions not attainable: {report}")
    return out


def permute_summands(a: NccwComplex, order: Sequence[int]) -> NccwComplex:
    """Reorder the E-summands; position i of the result is old summand order[i]."""
    _require_valid(a)
    if sorted(order) != list(range(a.k)):
        raise ValueError("order must be a permutation of 0..k-1")
    e = tuple(a.e[t] for t in order)
    z0 = IntMatrix.from_rows([[a.z0.at(i, t) for t in order] for i in range(a.l)])
    z1 = IntMatrix.from_rows([[a.z1.at(i, t) for t in order] for i in range(a.l)])
    return NccwComplex(e, a.f, z0, z1)


def direct_sum(a: NccwComplex, b: NccwComplex) -> NccwComplex:
    _require_valid(a)
    _require_valid(b)
    e = a.e + b.e
    f = a.f + b.f
    z0 = IntMatrix.from_rows(
        [list(a.z0.row(i)) + [0] * b.k for i in range(a.l)]
        + [[0] * a.k + list(b.z0.row(i)) for i in range(b.l)]
    )
    z1 = IntMatrix.from_rows(
        [list(a.z1.row(i)) + [0] * b.k for i in range(a.l)]
        + [[0] * a.k + list(b.z1.row(i)) for i in range(b.l)]
    )
    return NccwComplex(e, f, z0, z1)


# -------------------------------------------------------- structure tests


def _row_nonzeros(m: IntMatrix, i: int) -> list[int]:
    return [j for j in range(m.cols) if m.at(i, j) != 0]


def has_pure_multiplicities(a: NccwComplex) -> bool:
    """Unital, E commutative, and every matrix row has at most one nonzero."""
    _require_valid(a)
    if not is_unital(a):
        return False
    if any(ej != 1 for ej in a.e):
        return False
    return all(
        len(_row_nonzeros(m, i)) <= 1 for m in (a.z0, a.z1) for i in range(a.l)
    )


def _forest_check(num_vertices: int, edges: Sequence[tuple[int, int]]) -> bool:
    """Union-find acyclicity; loops and parallel edges both close cycles."""
    parent = list(range(num_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def to_graph(a: NccwComplex) -> Multigraph:
    """The underlying multigraph of a pure-multiplicities commutative complex.

    Vertices are E-summands; F-block i contributes the edge joining the
    columns of its unique Z0 and Z1 entries.  Requires every nonzero entry to
    equal 1 (so the complex is a genuine commutative one: C of a graph).
    """
    _require_valid(a)
    if not has_pure_multiplicities(a):
        raise ValueError("to_graph needs pure multiplicities")
    for m, name in ((a.z0, "Z0"), (a.z1, "Z1")):
        for i in range(a.l):
            for j in range(a.k):
                if m.at(i, j) not in (0, 1):
                    raise ValueError(
                        f"{name}[{i}][{j}] = {m.at(i, j)}: entries must be 0 or 1"
                    )
    edges = []
    for i in range(a.l):
        # unital + pure forces exactly one nonzero per row in each matrix
        (j0,) = _row_nonzeros(a.z0, i)
        (j1,) = _row_nonzeros(a.z1, i)
        edges.append((j0, j1))
    return Multigraph(
        num_vertices=a.k,
        edges=tuple(edges),
        is_forest=_forest_check(a.k, edges),
    )
