"""Inhomogeneous cochains with values in A + A, A in {Z_2, mu_N}.

Coefficients are encoded additively: Z_2 as bits and the N-th roots of unity
as residues mod N (``k`` stands for ``exp(2 pi i k / N)``).  The pointwise
product of pairs is then addition of encodings, and ``Z_2`` acts on a pair by
exchanging its components.

A degree-``n`` cochain is stored densely as an integer array of shape
``(|G|,) * n + (2,)``; flattening in C order puts ``g_1`` as the most
significant digit and the pair component last.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import ComponentMismatch, DimensionMismatch, OddModulus, ParseError
from .group import FiniteGroup, TwistHom
from .zmod import LinearMapZN


class Ring(NamedTuple):
    """Coefficient ring of a cochain: ``Ring('z2', 2)`` or ``Ring('mu', N)``."""

    kind: str
    modulus: int

    def to_json(self):
        return "z2" if self.kind == "z2" else {"muN": self.modulus}

    @classmethod
    def from_json(cls, obj) -> "Ring":
        if obj == "z2":
            return Z2
        if isinstance(obj, dict) and isinstance(obj.get("muN"), int) and obj["muN"] >= 1:
            return mu(obj["muN"])
        raise ParseError(f"unknown ring {obj!r}")


Z2 = Ring("z2", 2)


def mu(n: int) -> Ring:
    return Ring("mu", int(n))


class PairValue(NamedTuple):
    plus: int
    minus: int


def swap_action(bit: int, v):
    """``v^bit``: exchange the two components when ``bit`` is 1.

    Accepts a :class:`PairValue` or any array whose last axis has length 2
    (``bit`` may then be an array broadcasting against ``v.shape[:-1]``).
    """
    if isinstance(v, PairValue):
        return PairValue(v.minus, v.plus) if bit % 2 else v
    v = np.asarray(v)
    bit = np.asarray(bit) % 2
    return np.where(bit[..., None].astype(bool), v[..., ::-1], v)


def pair_dot_exponent(u, v):
    """Componentwise product of two Z_2 pairs, ``(u+ v+, u- v-)``."""
    if isinstance(u, PairValue) and isinstance(v, PairValue):
        return PairValue((u.plus * v.plus) % 2, (u.minus * v.minus) % 2)
    return (np.asarray(u) * np.asarray(v)) % 2


@dataclass(frozen=True, eq=False)
class TwistedCochain:
    group: FiniteGroup
    degree: int
    ring: Ring
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64)
        shape = (self.group.order,) * self.degree + (2,)
        if vals.shape != shape:
            if vals.size != int(np.prod(shape)):
                raise DimensionMismatch(
                    f"degree-{self.degree} cochain needs {np.prod(shape)} entries, got {vals.size}"
                )
            vals = vals.reshape(shape)
        vals = vals % self.ring.modulus
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def modulus(self) -> int:
        return self.ring.modulus

    @classmethod
    def zeros(cls, group: FiniteGroup, degree: int, ring: Ring) -> "TwistedCochain":
        return cls(group, degree, ring, np.zeros((group.order,) * degree + (2,), dtype=np.int64))

    @classmethod
    def random(cls, group, degree, ring, rng: np.random.Generator) -> "TwistedCochain":
        shape = (group.order,) * degree + (2,)
        return cls(group, degree, ring, rng.integers(0, ring.modulus, size=shape))

    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def key(self) -> tuple[int, ...]:
        """Flattened encodings as a tuple; orders cochains lexicographically."""
        return tuple(int(v) for v in self.flat())

    def __getitem__(self, args) -> PairValue:
        p, q = self.values[tuple(args) if isinstance(args, (tuple, list)) else (args,)]
        return PairValue(int(p), int(q))

    def _compatible(self, other: "TwistedCochain"):
        if (other.group != self.group or other.degree != self.degree
                or other.ring != self.ring):
            raise ComponentMismatch(
                f"cannot combine degree {self.degree}/{self.ring} with degree {other.degree}/{other.ring}"
            )

    def __add__(self, other: "TwistedCochain") -> "TwistedCochain":
        self._compatible(other)
        return TwistedCochain(self.group, self.degree, self.ring, self.values + other.values)

    def __sub__(self, other: "TwistedCochain") -> "TwistedCochain":
        self._compatible(other)
        return TwistedCochain(self.group, self.degree, self.ring, self.values - other.values)

    def __neg__(self) -> "TwistedCochain":
        return TwistedCochain(self.group, self.degree, self.ring, -self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TwistedCochain):
            return NotImplemented
        return (self.group == other.group and self.degree == other.degree
                and self.ring == other.ring and np.array_equal(self.values, other.values))

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.values.any()

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "ring": self.ring.to_json(),
            "values": self.values.reshape(-1, 2).tolist(),
        }

    @classmethod
    def from_json(cls, obj, group: FiniteGroup) -> "TwistedCochain":
        try:
            degree = int(obj["degree"])
            ring = Ring.from_json(obj["ring"])
            values = np.asarray(obj["values"], dtype=np.int64)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed cochain: {exc}") from exc
        if values.shape != (group.order ** degree, 2):
            raise ParseError(
                f"degree-{degree} cochain on a group of order {group.order} needs "
                f"{group.order ** degree} pairs, got shape {values.shape}"
            )
        if values.min(initial=0) < 0 or values.max(initial=0) >= ring.modulus:
            raise ParseError(f"cochain entries must be reduced modulo {ring.modulus}")
        return cls(group, degree, ring, values)

    def __repr__(self) -> str:
        return f"TwistedCochain(degree={self.degree}, ring={self.ring.to_json()}, values={self.flat().tolist()})"


def _products(group: FiniteGroup, idx: list[np.ndarray]) -> np.ndarray:
    out = idx[0]
    for g in idx[1:]:
        out = group.mul[out, g]
    return out


def _coboundary_array(group: FiniteGroup, twist: np.ndarray, x: np.ndarray, degree: int) -> np.ndarray:
    """Twisted coboundary of a batch of degree-``degree`` cochains.

    ``x`` has shape ``batch + (n,)*degree + (2,)``; returns
    ``batch + (n,)*(degree+1) + (2,)`` (unreduced integers).
    """
    n = group.order
    batch = x.shape[: x.ndim - degree - 1]
    nb = len(batch)
    grid = list(np.indices((n,) * (degree + 1)))
    lead = (slice(None),) * nb

    def take(args):
        return x[lead + tuple(args)]

    # x^{a(g1)}(g2, ..., g_{n+1})
    out = swap_action(twist[grid[0]], take(grid[1:])).astype(np.int64)
    for i in range(degree):
        merged = grid[:i] + [group.mul[grid[i], grid[i + 1]]] + grid[i + 2:]
        sign = -1 if i % 2 == 0 else 1
        out = out + sign * take(merged)
    last_sign = 1 if degree % 2 == 1 else -1
    out = out + last_sign * take(grid[:degree])
    return out


def _check_twist(group: FiniteGroup, a: TwistHom):
    if len(a.values) != group.order:
        raise ComponentMismatch("twist homomorphism lives on a different group")


def coboundary(a: TwistHom, x: TwistedCochain) -> TwistedCochain:
    """The twisted differential ``d_a`` of a cochain of any degree."""
    _check_twist(x.group, a)
    out = _coboundary_array(x.group, a.bits, x.values, x.degree)
    return TwistedCochain(x.group, x.degree + 1, x.ring, out)


def coboundary_many(a: TwistHom, values: np.ndarray, degree: int, ring: Ring, group: FiniteGroup) -> np.ndarray:
    """Twisted coboundary of a stack of cochain arrays, reduced into ``ring``.

    ``values`` has shape ``batch + (|G|,)*degree + (2,)``.
    """
    _check_twist(group, a)
    values = np.asarray(values, dtype=np.int64)
    if values.ndim < degree + 1 or values.shape[values.ndim - degree - 1:] != (group.order,) * degree + (2,):
        raise DimensionMismatch(f"expected trailing shape {(group.order,) * degree + (2,)}, got {values.shape}")
    return _coboundary_array(group, a.bits, values, degree) % ring.modulus


def _expect_degree(x: TwistedCochain, degree: int):
    if x.degree != degree:
        raise ComponentMismatch(f"expected a degree-{degree} cochain, got degree {x.degree}")


def d1(a: TwistHom, x: TwistedCochain) -> TwistedCochain:
    """``x^{a(g)}(h) + x(g) - x(gh)``."""
    _expect_degree(x, 1)
    return coboundary(a, x)


def d2(a: TwistHom, y: TwistedCochain) -> TwistedCochain:
    """``y^{a(g)}(h,k) + y(g,hk) - y(gh,k) - y(g,h)``."""
    _expect_degree(y, 2)
    return coboundary(a, y)


def d3(a: TwistHom, z: TwistedCochain) -> TwistedCochain:
    """``z^{a(g)}(h,k,f) + z(g,hk,f) + z(g,h,k) - z(gh,k,f) - z(g,h,kf)``."""
    _expect_degree(z, 3)
    return coboundary(a, z)


def sign_lift(x: TwistedCochain, n: int) -> TwistedCochain:
    """``(-1)^x`` as a mu_N cochain: bit 1 becomes residue ``N/2``."""
    if n % 2:
        raise OddModulus(f"sign lift needs an even root order, got N={n}")
    if x.ring != Z2:
        raise ComponentMismatch("sign lift takes a Z_2-valued cochain")
    return TwistedCochain(x.group, x.degree, mu(n), x.values * (n // 2))


def twisted_cup(a: TwistHom, x: TwistedCochain, y: TwistedCochain) -> TwistedCochain:
    """Z_2 cup product ``(x . y^{a(g_1...g_p)})(g_1..g_p, h_1..h_q)``.

    This is the exponent pattern of every sign in the pentad calculus, e.g.
    ``kappa_L(g,h) . kappa_R^{a(gh)}(k,f)`` or ``b(g) . kappa_R^{a(g)}(h,k)``.
    """
    if x.ring != Z2 or y.ring != Z2:
        raise ComponentMismatch("twisted cup product is defined on Z_2 cochains")
    if x.group != y.group:
        raise ComponentMismatch("cochains live on different groups")
    _check_twist(x.group, a)
    g = x.group
    p, q = x.degree, y.degree
    grid = list(np.indices((g.order,) * (p + q)))
    left = x.values[tuple(grid[:p])]
    shift = a.bits[_products(g, grid[:p])]
    right = swap_action(shift, y.values[tuple(grid[p:])])
    return TwistedCochain(g, p + q, Z2, pair_dot_exponent(left, right))


@lru_cache(maxsize=256)
def _differential_matrix(group: FiniteGroup, a: TwistHom, degree: int, ring: Ring) -> LinearMapZN:
    n = group.order
    cols = n ** degree * 2
    basis = np.eye(cols, dtype=np.int64).reshape((cols,) + (n,) * degree + (2,))
    images = _coboundary_array(group, a.bits, basis, degree).reshape(cols, -1)
    return LinearMapZN(images.T, ring.modulus)


def differential_matrix(a: TwistHom, degree: int, ring: Ring, group: FiniteGroup) -> LinearMapZN:
    """Matrix of ``d_a`` on flattened degree-``degree`` cochains.

    Shape ``(|G|^(degree+1) * 2, |G|^degree * 2)``; results are cached per
    ``(group, a, degree, ring)`` so Howell forms are computed once.
    """
    if degree not in (1, 2, 3):
        raise DimensionMismatch(f"differential matrices exist for degrees 1..3, not {degree}")
    _check_twist(group, a)
    return _differential_matrix(group, a, degree, ring)


def basis_cochains(group: FiniteGroup, degree: int, ring: Ring):
    """Unit cochains in flattened order."""
    size = group.order ** degree * 2
    for i in range(size):
        v = np.zeros(size, dtype=np.int64)
        v[i] = 1
        yield TwistedCochain(group, degree, ring, v)


def verify_product_coboundary(a: TwistHom, m: TwistedCochain, x: TwistedCochain, n: int = 2) -> bool:
    """Check the sign identity behind witness composition.

    With ``s(g,h) = (-1)^{x(g) . m^{a(g)}(h)}``, the signs
    ``(-1)^{d x(g,h) . m^{a(gh)}(k) + x(g) . (d m)^{a(g)}(h,k)}`` must equal
    ``d s(g,h,k)`` at every triple.  Evaluated over mu_N for even ``N``.
    """
    _expect_degree(m, 1)
    _expect_degree(x, 1)
    exponent = twisted_cup(a, d1(a, x), m) + twisted_cup(a, x, d1(a, m))
    s = sign_lift(twisted_cup(a, x, m), n)
    return sign_lift(exponent, n) == d2(a, s)
