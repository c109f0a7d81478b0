"""Exact linear algebra over Z/NZ (and F_2 as the case N = 2).

Everything here works with row vectors: a matrix ``A`` whose rows span a
submodule of ``(Z/NZ)^m``.  The workhorse is :func:`howell_form`, which brings
a generating set into Howell normal form.  A Howell basis has the property
that the vectors of the span whose first ``j`` coordinates vanish are spanned
by the basis rows whose pivot lies at or after column ``j``; this is what
makes membership, canonical reduction and kernel extraction exact over a ring
that is not a field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    return a, s0, t0


def _normalizing_unit(v: int, modulus: int) -> int:
    """A unit ``u`` of Z/NZ with ``u*v == gcd(v, N) (mod N)``."""
    g = math.gcd(v, modulus)
    step = modulus // g
    if step == 1:
        return 1
    u = pow(v // g, -1, step)
    while math.gcd(u, modulus) != 1:
        u += step
    return u


@dataclass(frozen=True, eq=False)
class HowellBasis:
    """Rows in Howell normal form together with their pivot columns.

    ``pivot_values[i]`` divides the modulus and the entries above each pivot
    are reduced into ``[0, pivot_value)``.
    """

    rows: np.ndarray
    pivots: tuple[int, ...]
    modulus: int

    @property
    def pivot_values(self) -> tuple[int, ...]:
        return tuple(int(self.rows[i, c]) for i, c in enumerate(self.pivots))

    @property
    def width(self) -> int:
        return self.rows.shape[1]

    def size(self) -> int:
        """Number of elements of the spanned submodule."""
        out = 1
        for p in self.pivot_values:
            out *= self.modulus // p
        return out

    def reduce(self, vector, *, coefficients: bool = False):
        """Canonical representative of ``vector`` modulo the span.

        The result is the lexicographically smallest element of the coset
        (entries compared as integers in ``[0, N)``).  With
        ``coefficients=True`` the multipliers ``q`` with
        ``vector == result + q @ rows`` are returned as well.
        """
        v = np.asarray(vector, dtype=np.int64) % self.modulus
        if v.shape != (self.width,):
            raise DimensionMismatch(f"vector of length {v.shape} against width {self.width}")
        q = np.zeros(len(self.pivots), dtype=np.int64)
        for i, col in enumerate(self.pivots):
            p = int(self.rows[i, col])
            k = int(v[col]) // p
            if k:
                v = (v - k * self.rows[i]) % self.modulus
                q[i] = k
        if coefficients:
            return v, q
        return v

    def contains(self, vector) -> bool:
        return not self.reduce(vector).any()


def howell_form(matrix, modulus: int) -> HowellBasis:
    """Howell normal form of the row span of ``matrix`` over Z/NZ.

    Column by column, the rows below the current pivot are folded into the
    pivot row with unimodular 2x2 transforms built from extended gcds.  The
    pivot is then scaled by a unit so that it divides ``N``, the rows above
    are reduced against it, and its annihilator multiple ``(N/p) * row`` is
    appended so that later columns see it (this is what enforces the Howell
    property rather than plain echelon form).
    """
    a = np.asarray(matrix, dtype=np.int64)
    if a.ndim != 2:
        raise DimensionMismatch("expected a 2-d matrix")
    n_rows, n_cols = a.shape
    work = np.zeros((n_rows + n_cols, n_cols), dtype=np.int64)
    work[:n_rows] = a % modulus
    live = n_rows
    r = 0
    pivots: list[int] = []
    for col in range(n_cols):
        if r >= live:
            break
        for i in (np.nonzero(work[r + 1:live, col])[0] + r + 1).tolist():
            x, y = int(work[r, col]), int(work[i, col])
            g, s, t = _xgcd(x, y)
            top, bottom = work[r].copy(), work[i].copy()
            work[r] = (s * top + t * bottom) % modulus
            work[i] = ((y // g) * top - (x // g) * bottom) % modulus
        v = int(work[r, col])
        if v == 0:
            continue
        u = _normalizing_unit(v, modulus)
        if u != 1:
            work[r] = (u * work[r]) % modulus
        p = int(work[r, col])
        for i in np.nonzero(work[:r, col] >= p)[0].tolist():
            work[i] = (work[i] - (int(work[i, col]) // p) * work[r]) % modulus
        if p != 1:
            ann = ((modulus // p) * work[r]) % modulus
            if ann.any():
                work[live] = ann
                live += 1
        pivots.append(col)
        r += 1
    return HowellBasis(rows=work[:r].copy(), pivots=tuple(pivots), modulus=modulus)


@dataclass(frozen=True, eq=False)
class LinearMapZN:
    """A linear map ``(Z/NZ)^cols -> (Z/NZ)^rows`` given by a dense matrix.

    The matrix acts on column vectors: ``apply(v) == matrix @ v mod N``.
    """

    matrix: np.ndarray
    modulus: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64) % self.modulus
        object.__setattr__(self, "matrix", m)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    def apply(self, vector) -> np.ndarray:
        v = np.asarray(vector, dtype=np.int64)
        if v.shape[-1] != self.cols:
            raise DimensionMismatch(f"vector length {v.shape[-1]} != {self.cols} columns")
        return (v @ self.matrix.T) % self.modulus

    @cached_property
    def _augmented(self) -> HowellBasis:
        # [M^T | I]: rows with a nonzero left block give an image basis with
        # their preimages on the right; rows with a zero left block span ker M.
        aug = np.concatenate(
            [self.matrix.T, np.eye(self.cols, dtype=np.int64)], axis=1
        )
        return howell_form(aug, self.modulus)

    @cached_property
    def _split(self):
        h = self._augmented
        image_idx = [i for i, c in enumerate(h.pivots) if c < self.rows]
        kernel_idx = [i for i, c in enumerate(h.pivots) if c >= self.rows]
        image = HowellBasis(
            rows=h.rows[image_idx, : self.rows],
            pivots=tuple(h.pivots[i] for i in image_idx),
            modulus=self.modulus,
        )
        preimages = h.rows[image_idx, self.rows:]
        kernel = HowellBasis(
            rows=h.rows[kernel_idx, self.rows:],
            pivots=tuple(h.pivots[i] - self.rows for i in kernel_idx),
            modulus=self.modulus,
        )
        return image, preimages, kernel

    @property
    def image(self) -> HowellBasis:
        """Howell basis of the image (column span of the matrix)."""
        return self._split[0]

    @property
    def kernel(self) -> HowellBasis:
        """Howell basis of ``{v : M v = 0}``."""
        return self._split[2]

    def solve(self, target) -> np.ndarray | None:
        """Some ``v`` with ``M v == target``, or ``None`` if none exists."""
        t = np.asarray(target, dtype=np.int64) % self.modulus
        if t.shape != (self.rows,):
            raise DimensionMismatch(f"target length {t.shape} != {self.rows} rows")
        image, preimages, _ = self._split
        residue, q = image.reduce(t, coefficients=True)
        if residue.any():
            return None
        return (q @ preimages) % self.modulus if len(q) else np.zeros(self.cols, dtype=np.int64)


def image_membership_zn(matrix, target, modulus: int) -> np.ndarray | None:
    """Decide whether ``target`` lies in the column span of ``matrix`` mod N.

    Returns a preimage ``v`` with ``matrix @ v == target (mod N)``, or ``None``.
    """
    m = matrix if isinstance(matrix, LinearMapZN) else LinearMapZN(np.asarray(matrix), modulus)
    if m.modulus != modulus:
        raise DimensionMismatch("matrix modulus differs from requested modulus")
    return m.solve(target)


def kernel_f2(matrix) -> np.ndarray:
    """Basis of ``{v : M v = 0}`` over F_2, one vector per row (reduced echelon)."""
    m = np.asarray(matrix, dtype=np.int64) % 2
    return LinearMapZN(m, 2).kernel.rows.copy()


def rank_f2(matrix) -> int:
    return len(howell_form(np.asarray(matrix) % 2, 2).pivots)
