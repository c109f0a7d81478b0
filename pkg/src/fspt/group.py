"""Finite groups as validated multiplication tables, and twist homomorphisms G -> Z_2."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    GroupTooLarge,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotLatinSquare,
    ParseError,
)
from .zmod import kernel_f2

DEFAULT_MAX_ORDER = 24


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on the elements ``0..order-1``.

    ``table[g][h]`` is the index of ``g*h``.  Element indices are exactly the
    indices of the input table; nothing is re-canonicalized.  Build instances
    through :func:`validate_group`.
    """

    table: tuple[tuple[int, ...], ...]
    identity: int
    inverse: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.table)

    @cached_property
    def mul(self) -> np.ndarray:
        """The multiplication table as a read-only integer array."""
        arr = np.array(self.table, dtype=np.int64).reshape(self.order, self.order)
        arr.setflags(write=False)
        return arr

    def to_json(self) -> dict:
        return {"order": self.order, "table": [list(row) for row in self.table]}

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


def validate_group(table) -> FiniteGroup:
    """Check that a square table is a group law and locate identity/inverses."""
    try:
        arr = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"table is not a rectangular integer array: {exc}") from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ParseError(f"table must be a non-empty square array, got shape {arr.shape}")
    n = arr.shape[0]
    if arr.min() < 0 or arr.max() >= n:
        raise ParseError(f"table entries must lie in 0..{n - 1}")

    full = np.arange(n)
    for g in range(n):
        if not np.array_equal(np.sort(arr[g]), full):
            raise NotLatinSquare(f"row {g} is not a permutation of 0..{n - 1}")
    for h in range(n):
        if not np.array_equal(np.sort(arr[:, h]), full):
            raise NotLatinSquare(f"column {h} is not a permutation of 0..{n - 1}")

    candidates = [e for e in range(n) if np.array_equal(arr[e], full) and np.array_equal(arr[:, e], full)]
    if not candidates:
        raise NoIdentity("no two-sided identity element")
    e = candidates[0]

    inverse = []
    for g in range(n):
        hits = np.nonzero(arr[g] == e)[0]
        h = int(hits[0]) if len(hits) else -1
        if h < 0 or arr[h, g] != e:
            raise NoInverse(f"element {g} has no two-sided inverse")
        inverse.append(h)

    # (gh)k against g(hk) for all triples at once
    lhs = arr[arr[:, :, None], full[None, None, :]]
    rhs = arr[full[:, None, None], arr[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        g, h, k = (int(v) for v in bad[0])
        raise NotAssociative(f"(g*h)*k != g*(h*k) at (g, h, k) = {(g, h, k)}")

    return FiniteGroup(
        table=tuple(tuple(int(v) for v in row) for row in arr),
        identity=e,
        inverse=tuple(inverse),
    )


def parse_group_file(data: bytes | str, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    """Parse the JSON group format ``{"order": n, "table": [[...], ...]}``."""
    try:
        text = data.decode("utf-8") if isinstance(data, bytes) else data
        obj = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"invalid group file: {exc}") from exc
    return group_from_json(obj, max_order=max_order)


def group_from_json(obj, max_order: int = DEFAULT_MAX_ORDER) -> FiniteGroup:
    if not isinstance(obj, dict) or "table" not in obj:
        raise ParseError("group JSON must be an object with a 'table' field")
    table = obj["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise ParseError("'table' must be a list of lists")
    if "order" in obj and obj["order"] != len(table):
        raise ParseError(f"declared order {obj['order']} != table size {len(table)}")
    if len(table) > max_order:
        raise GroupTooLarge(f"group order {len(table)} exceeds the limit {max_order}")
    return validate_group(table)


def element_order(group: FiniteGroup, g: int) -> int:
    k, x = 1, g
    while x != group.identity:
        x = group.table[x][g]
        k += 1
    return k


@dataclass(frozen=True)
class TwistHom:
    """A homomorphism ``a: G -> Z_2`` stored as its value bits."""

    values: tuple[int, ...]

    @cached_property
    def bits(self) -> np.ndarray:
        arr = np.array(self.values, dtype=np.int64)
        arr.setflags(write=False)
        return arr

    def is_trivial(self) -> bool:
        return not any(self.values)

    def check(self, group: FiniteGroup) -> bool:
        b = self.bits
        return len(b) == group.order and bool(np.all((b[:, None] + b[None, :]) % 2 == b[group.mul]))


def trivial_twist(group: FiniteGroup) -> TwistHom:
    return TwistHom((0,) * group.order)


def enumerate_twist_homs(group: FiniteGroup) -> list[TwistHom]:
    """All homomorphisms G -> Z_2, sorted lexicographically by value vector.

    The homomorphism law ``a(g) + a(h) + a(gh) = 0`` is a linear system over
    F_2 in the unknowns ``a(0..n-1)``; the solutions are enumerated from a
    kernel basis, so the cost is governed by ``|Hom(G, Z_2)|``, not ``2^|G|``.
    """
    n = group.order
    rows = []
    for g in range(n):
        for h in range(n):
            row = np.zeros(n, dtype=np.int64)
            row[g] += 1
            row[h] += 1
            row[group.table[g][h]] += 1
            rows.append(row % 2)
    basis = kernel_f2(np.array(rows))
    homs = set()
    for coeffs in itertools.product((0, 1), repeat=len(basis)):
        v = np.zeros(n, dtype=np.int64)
        for c, row in zip(coeffs, basis):
            if c:
                v ^= row
        homs.add(tuple(int(x) for x in v))
    return [TwistHom(v) for v in sorted(homs)]


# Small constructors used by tests and examples.

def cyclic_group(n: int) -> FiniteGroup:
    return validate_group([[(g + h) % n for h in range(n)] for g in range(n)])


def direct_product(first: FiniteGroup, second: FiniteGroup) -> FiniteGroup:
    """Elements are ``g1 * |second| + g2``."""
    n2 = second.order
    pairs = [(g1, g2) for g1 in range(first.order) for g2 in range(n2)]
    table = [
        [first.table[a1][b1] * n2 + second.table[a2][b2] for (b1, b2) in pairs]
        for (a1, a2) in pairs
    ]
    return validate_group(table)


def symmetric_group(n: int) -> FiniteGroup:
    """S_n with permutations listed in lexicographic order; composition ``(p*q)(i) = p(q(i))``."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return validate_group(table)


def dihedral_group(n: int) -> FiniteGroup:
    """Order ``2n``: element ``s*n + r`` stands for ``x^s y^r`` with ``y x = x y^-1``."""
    def mul(a, b):
        s1, r1 = divmod(a, n)
        s2, r2 = divmod(b, n)
        # x^s1 y^r1 x^s2 y^r2 = x^(s1+s2) y^((-1)^s2 r1 + r2)
        return ((s1 + s2) % 2) * n + (r1 * (-1) ** s2 + r2) % n
    return validate_group([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)])
