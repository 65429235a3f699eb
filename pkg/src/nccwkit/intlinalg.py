"""Exact linear algebra over the integers.

Everything in this module works with plain Python integers, so there is no
overflow and no floating point anywhere.  The centrepiece is the Smith normal
form with its transform pair: for any integer matrix M we produce unimodular
U, V and a diagonal D with

    U * M * V = D,          d_1 | d_2 | ... | d_r,  the rest zero,

which is what kernels, cokernels and surjectivity tests over Z reduce to.

>>> m = IntMatrix.from_rows([[3, -2]])
>>> u, d, v = smith_normal_form(m)
>>> d.to_rows()
[[1, 0]]
>>> is_surjective(m)
True
>>> basis, coker = kernel_and_cokernel(m)
>>> basis
((2, 3),)
>>> str(coker)
'0'

The divisor chain is the classifying invariant of a finitely generated
abelian group; `AbelianGroup` stores the free rank and the invariant factors
separately (no factors of 0 or 1 are kept).

>>> str(kernel_and_cokernel(IntMatrix.from_rows([[2, 0], [0, 4]]))[1])
'Z/2 x Z/4'
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """An immutable rows x cols integer matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        if not all(isinstance(x, int) for x in self.entries):
            raise ValueError("matrix entries must be exact integers")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntMatrix:
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, tuple(int(x) for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    # -- access ------------------------------------------------------------

    def at(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(
            self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries))
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        self._same_shape(other)
        return IntMatrix(
            self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries))
        )

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[t] * other.entries[t * other.cols + j] for t in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product, the matrix acting on Z^cols."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(self.row(i)[j] * vec[j] for j in range(self.cols)) for i in range(self.rows))

    def power(self, n: int) -> IntMatrix:
        if not self.is_square:
            raise ValueError("matrix power needs a square matrix")
        if n < 0:
            raise ValueError("negative powers are not integral")
        result = IntMatrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)))

    def trace(self) -> int:
        if not self.is_square:
            raise ValueError("trace needs a square matrix")
        return sum(self.at(i, i) for i in range(self.rows))

    def _same_shape(self, other: IntMatrix) -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group Z^free_rank + Z/d_1 + ... + Z/d_s.

    The invariant factors satisfy 2 <= d_1 | d_2 | ... (units and zero are
    never stored: the free part is the `free_rank` field).
    """

    free_rank: int
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError("invariant factors must be at least 2")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisor chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    @property
    def torsion_order(self) -> int:
        order = 1
        for d in self.invariant_factors:
            order *= d
        return order

    def __str__(self) -> str:
        parts: list[str] = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " x ".join(parts) if parts else "0"


def determinant(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination.

    >>> determinant(IntMatrix.from_rows([[2, 4], [6, 8]]))
    -8
    """
    if not m.is_square:
        raise ValueError("determinant needs a square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = m.to_rows()
    sign = 1
    prev = 1
    for t in range(n - 1):
        if a[t][t] == 0:
            pivot_row = next((i for i in range(t + 1, n) if a[i][t] != 0), None)
            if pivot_row is None:
                return 0
            a[t], a[pivot_row] = a[pivot_row], a[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                # The Bareiss quotient is exact: prev divides the 2x2 minor.
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
            a[i][t] = 0
        prev = a[t][t]
    return sign * a[n - 1][n - 1]


def _argmin_pivot(a: list[list[int]], t: int, rows: int, cols: int) -> tuple[int, int] | None:
    best: tuple[int, int] | None = None
    best_val = 0
    for i in range(t, rows):
        for j in range(t, cols):
            x = a[i][j]
            if x != 0 and (best is None or abs(x) < best_val):
                best, best_val = (i, j), abs(x)
                if best_val == 1:
                    return best
    return best


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*m*V = D, U and V unimodular, D the SNF.

    Pivoting always selects a remaining entry of smallest absolute value,
    which keeps coefficient growth tame at the sizes this toolkit handles.
    The postconditions are asserted on every call.

    >>> _, d, _ = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> d.to_rows()
    [[2, 0], [0, 4]]
    """
    rows, cols = m.rows, m.cols
    a = m.to_rows()
    u = IntMatrix.identity(rows).to_rows()
    v = IntMatrix.identity(cols).to_rows()

    def row_sub(i: int, t: int, q: int) -> None:
        a[i] = [x - q * y for x, y in zip(a[i], a[t])]
        u[i] = [x - q * y for x, y in zip(u[i], u[t])]

    def col_sub(j: int, t: int, q: int) -> None:
        for r in range(rows):
            a[r][j] -= q * a[r][t]
        for r in range(cols):
            v[r][j] -= q * v[r][t]

    def col_add(j: int, t: int) -> None:
        for r in range(rows):
            a[r][j] += a[r][t]
        for r in range(cols):
            v[r][j] += v[r][t]

    def swap_rows(i: int, t: int) -> None:
        a[i], a[t] = a[t], a[i]
        u[i], u[t] = u[t], u[i]

    def swap_cols(j: int, t: int) -> None:
        for r in range(rows):
            a[r][j], a[r][t] = a[r][t], a[r][j]
        for r in range(cols):
            v[r][j], v[r][t] = v[r][t], v[r][j]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]

    def eliminate_from(t0: int) -> None:
        t = t0
        while t < min(rows, cols):
            piv = _argmin_pivot(a, t, rows, cols)
            if piv is None:
                break
            swap_rows(piv[0], t)
            swap_cols(piv[1], t)
            if a[t][t] < 0:
                negate_row(t)
            while True:
                dirty = False
                for i in range(rows):
                    if i != t and a[i][t] != 0:
                        q = a[i][t] // a[t][t]
                        row_sub(i, t, q)
                        if a[i][t] != 0:
                            # remainder is a strictly smaller positive pivot
                            swap_rows(i, t)
                            dirty = True
                if dirty:
                    continue
                for j in range(cols):
                    if j != t and a[t][j] != 0:
                        q = a[t][j] // a[t][t]
                        col_sub(j, t, q)
                        if a[t][j] != 0:
                            swap_cols(j, t)
                            dirty = True
                if not dirty:
                    break
            t += 1

    eliminate_from(0)

    # Repair the divisor chain: adding a later column folds two diagonal
    # entries into (gcd, lcm) after re-elimination.
    while True:
        offender = None
        for t in range(min(rows, cols) - 1):
            dt, dn = a[t][t], a[t + 1][t + 1]
            if dt != 0 and dn % dt != 0:
                offender = t
                break
        if offender is None:
            break
        col_add(offender, offender + 1)
        eliminate_from(offender)

    for t in range(min(rows, cols)):
        if a[t][t] < 0:
            negate_row(t)

    um = IntMatrix.from_rows(u)
    dm = IntMatrix.from_rows(a)
    vm = IntMatrix.from_rows(v)

    # Self-check: this is the module's contract, and it is cheap at desk scale.
    assert um @ m @ vm == dm, "SNF transform identity violated"
    assert abs(determinant(um)) == 1, "U is not unimodular"
    assert abs(determinant(vm)) == 1, "V is not unimodular"
    diag = [dm.at(t, t) for t in range(min(rows, cols))]
    assert all(x >= 0 for x in diag)
    for x, y in zip(diag, diag[1:]):
        assert not (x == 0 and y != 0), "zero diagonal entry precedes a nonzero one"
        assert x == 0 or y % x == 0, "divisor chain violated"
    assert all(
        dm.at(i, j) == 0 for i in range(rows) for j in range(cols) if i != j
    ), "D is not diagonal"
    return um, dm, vm


def snf_diagonal(m: IntMatrix) -> list[int]:
    _, d, _ = smith_normal_form(m)
    return [d.at(t, t) for t in range(min(m.rows, m.cols))]


def is_surjective(m: IntMatrix) -> bool:
    """Is m: Z^cols -> Z^rows onto?  True iff the SNF has `rows` unit entries.

    >>> is_surjective(IntMatrix.from_rows([[3, -2]]))
    True
    >>> is_surjective(IntMatrix.from_rows([[2]]))
    False
    """
    diag = snf_diagonal(m)
    nonzero = [d for d in diag if d != 0]
    return len(nonzero) == m.rows and all(d == 1 for d in nonzero)


def kernel_and_cokernel(m: IntMatrix) -> tuple[tuple[tuple[int, ...], ...], AbelianGroup]:
    """Integral kernel basis and the cokernel Z^rows / im(m) in invariant-factor form.

    With U*m*V = D, the kernel of m is spanned by the columns of V indexed by
    the zero diagonal positions of D, and the cokernel is the direct sum of
    Z/d_i over the nonzero diagonal plus a free summand for each zero row.
    """
    _, d, v = smith_normal_form(m)
    diag = [d.at(t, t) for t in range(min(m.rows, m.cols))]

    def _canonical_sign(vec: tuple[int, ...]) -> tuple[int, ...]:
        lead = next((x for x in vec if x != 0), 0)
        return tuple(-x for x in vec) if lead < 0 else vec

    kernel = tuple(
        _canonical_sign(v.col(j))
        for j in range(m.cols)
        if j >= len(diag) or diag[j] == 0
    )
    nonzero = [x for x in diag if x != 0]
    factors = tuple(x for x in nonzero if x >= 2)
    coker = AbelianGroup(free_rank=m.rows - len(nonzero), invariant_factors=factors)
    # rank-nullity over Z, plus the basis vectors really are in the kernel
    assert m.cols == len(kernel) + len(nonzero)
    assert all(all(x == 0 for x in m.apply(vec)) for vec in kernel)
    return kernel, coker


def char_poly(m: IntMatrix) -> tuple[int, ...]:
    """Coefficients of det(t*I - m), lowest degree first (monic: last entry 1).

    Computed by the Faddeev–LeVerrier recursion; every division is exact and
    asserted to be so.

    >>> char_poly(IntMatrix.from_rows([[0, 1], [1, 1]]))
    (-1, -1, 1)
    """
    if not m.is_square:
        raise ValueError("characteristic polynomial needs a square matrix")
    n = m.rows
    if n == 0:
        return (1,)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = m
    coeffs[n - 1] = -mk.trace()
    for k in range(2, n + 1):
        shift = coeffs[n - k + 1]
        mk = m @ IntMatrix(
            n, n, tuple(x + (shift if i % (n + 1) == 0 else 0) for i, x in enumerate(mk.entries))
        )
        tr = mk.trace()
        assert tr % k == 0, "Faddeev-LeVerrier trace must be divisible by the step"
        coeffs[n - k] = -tr // k
    return tuple(coeffs)


def char_poly_str(coeffs: Sequence[int], var: str = "t") -> str:
    """Human form of a polynomial given lowest-first coefficients.

    >>> char_poly_str((-1, -1, 1))
    't^2 - t - 1'
    """
    terms: list[str] = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if power == 0:
            body = str(mag)
        else:
            tpow = var if power == 1 else f"{var}^{power}"
            body = tpow if mag == 1 else f"{mag}*{tpow}"
        if not terms:
            terms.append(body if c > 0 else f"-{body}")
        else:
            terms.append(f" {sign} {body}")
    return "".join(terms) if terms else "0"


def eval_poly(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def gcd_vector(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = gcd(g, x)
    return g
