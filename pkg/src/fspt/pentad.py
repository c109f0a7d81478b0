"""Pentads ``(c, kappa_R, kappa_L, b, a)``, their reduction to triples, and the
equivalence relation between them with explicit witnesses ``(m, sigma)``.

Conventions: ``kappa_R, kappa_L, b, m`` are Z_2-pair cochains; ``c`` and
``sigma`` are mu_N-pair cochains.  A witness ``(m, sigma)`` sends pentad 1 to
pentad 2 through::

    kappa_R2 = d m + kappa_R1
    kappa_L2 = d b2 - d b1 - d m + kappa_L1
    c2       = (-1)^{kappa_L1 . m^a + (b2 - b1 - m) . kappa_R2^a} . d sigma . c1

where ``x . y^a`` is :func:`~fspt.cochain.twisted_cup`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cochain import (
    Z2,
    TwistedCochain,
    d1,
    d2,
    d3,
    differential_matrix,
    mu,
    sign_lift,
    twisted_cup,
)
from .errors import ComponentMismatch, GroupTooLarge, NotAMember, ParseError, WitnessInvalid
from .group import FiniteGroup, TwistHom, group_from_json

DEFAULT_EQUIVALENCE_BOUND = 8


@dataclass(frozen=True, eq=False)
class Pentad:
    c: TwistedCochain
    kappa_r: TwistedCochain
    kappa_l: TwistedCochain
    b: TwistedCochain
    a: TwistHom

    def __post_init__(self):
        g = self.c.group
        expected = [
            ("c", self.c, 3, "mu"),
            ("kappa_R", self.kappa_r, 2, "z2"),
            ("kappa_L", self.kappa_l, 2, "z2"),
            ("b", self.b, 1, "z2"),
        ]
        for name, x, degree, kind in expected:
            if x.group != g:
                raise ComponentMismatch(f"{name} lives on a different group")
            if x.degree != degree or x.ring.kind != kind:
                raise ComponentMismatch(
                    f"{name} must be a degree-{degree} {kind} cochain, got degree {x.degree} {x.ring.kind}"
                )
        if self.c.modulus % 2:
            raise ComponentMismatch("c must take values in mu_N with N even")
        if len(self.a.values) != g.order or not self.a.check(g):
            raise ComponentMismatch("a is not a homomorphism G -> Z_2")

    @property
    def group(self) -> FiniteGroup:
        return self.c.group

    @property
    def n(self) -> int:
        return self.c.modulus

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pentad):
            return NotImplemented
        return (self.a == other.a and self.c == other.c and self.kappa_r == other.kappa_r
                and self.kappa_l == other.kappa_l and self.b == other.b)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Triple:
    c: TwistedCochain
    kappa: TwistedCochain
    a: TwistHom

    @property
    def group(self) -> FiniteGroup:
        return self.c.group

    @property
    def n(self) -> int:
        return self.c.modulus

    def pentad(self) -> Pentad:
        zero = TwistedCochain.zeros(self.group, 1, Z2)
        return Pentad(self.c, self.kappa, self.kappa, zero, self.a)

    def key(self) -> tuple:
        return (self.a.values, self.kappa.key(), self.c.key())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Triple):
            return NotImplemented
        return self.a == other.a and self.kappa == other.kappa and self.c == other.c

    __hash__ = None


@dataclass(frozen=True, eq=False)
class EquivalenceWitness:
    m: TwistedCochain
    sigma: TwistedCochain

    @classmethod
    def trivial(cls, group: FiniteGroup, n: int) -> "EquivalenceWitness":
        return cls(TwistedCochain.zeros(group, 1, Z2), TwistedCochain.zeros(group, 2, mu(n)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, EquivalenceWitness):
            return NotImplemented
        return self.m == other.m and self.sigma == other.sigma

    __hash__ = None


def _first_violation(arr: np.ndarray):
    bad = np.argwhere(arr.reshape(arr.shape[:-1] + (-1,)).any(axis=-1))
    return None if len(bad) == 0 else [int(v) for v in bad[0]]


@dataclass
class MembershipReport:
    """Pass/fail per membership condition, with the first failing argument tuple."""

    conditions: dict[str, dict] = field(default_factory=dict)

    @property
    def member(self) -> bool:
        return all(c["passed"] for c in self.conditions.values())

    def add(self, name: str, residual: TwistedCochain):
        where = _first_violation(residual.values)
        self.conditions[name] = {"passed": where is None, "counterexample": where}

    def to_json(self) -> dict:
        return {"member": self.member, "conditions": self.conditions}


def check_pentad(p: Pentad) -> MembershipReport:
    a = p.a
    report = MembershipReport()
    report.add("b_relation", d1(a, p.b) - (p.kappa_l + p.kappa_r))
    report.add("kappa_R_cocycle", d2(a, p.kappa_r))
    report.add("kappa_L_cocycle", d2(a, p.kappa_l))
    rhs = sign_lift(twisted_cup(a, p.kappa_l, p.kappa_r), p.n)
    report.add("c_equation", d3(a, p.c) - rhs)
    return report


def is_member(p: Pentad) -> bool:
    return check_pentad(p).member


def _require_member(p: Pentad, label: str = "pentad"):
    report = check_pentad(p)
    if not report.member:
        failed = [k for k, v in report.conditions.items() if not v["passed"]]
        raise NotAMember(f"{label} violates {', '.join(failed)}")


def reduce_to_pd0(p: Pentad) -> tuple[Triple, EquivalenceWitness]:
    """Trade ``b`` for a sign on ``c``: returns ``(c~, kappa_R, a)`` and the
    witness ``(m=0, sigma=1)`` relating ``p`` to ``(c~, kappa_R, kappa_R, 0, a)``.
    """
    _require_member(p)
    c_tilde = p.c + sign_lift(twisted_cup(p.a, p.b, p.kappa_r), p.n)
    return Triple(c_tilde, p.kappa_r, p.a), EquivalenceWitness.trivial(p.group, p.n)


def _check_witness_shape(p: Pentad, m: TwistedCochain, sigma: TwistedCochain, b2: TwistedCochain):
    for name, x, degree, ring in (("m", m, 1, Z2), ("sigma", sigma, 2, mu(p.n)), ("b2", b2, 1, Z2)):
        if x.group != p.group or x.degree != degree or x.ring != ring:
            raise ComponentMismatch(f"{name} must be a degree-{degree} {ring.to_json()} cochain on the pentad's group")


def _sign_exponent(a, kappa_l1, b1, b2, m, kappa_r2) -> TwistedCochain:
    return twisted_cup(a, kappa_l1, m) + twisted_cup(a, b2 - b1 - m, kappa_r2)


def apply_equivalence(p: Pentad, m: TwistedCochain, sigma: TwistedCochain, b2: TwistedCochain) -> Pentad:
    """The pentad reached from ``p`` through the witness ``(m, sigma)`` with new ``b = b2``."""
    _check_witness_shape(p, m, sigma, b2)
    a = p.a
    dm = d1(a, m)
    kappa_r2 = dm + p.kappa_r
    kappa_l2 = d1(a, b2) - d1(a, p.b) - dm + p.kappa_l
    signs = sign_lift(_sign_exponent(a, p.kappa_l, p.b, b2, m, kappa_r2), p.n)
    c2 = signs + d2(a, sigma) + p.c
    return Pentad(c2, kappa_r2, kappa_l2, b2, a)


def witness_certifies(p1: Pentad, p2: Pentad, w: EquivalenceWitness) -> bool:
    """True iff substituting ``w`` into the transformation law turns ``p1`` into ``p2``."""
    if p1.a != p2.a or p1.group != p2.group or p1.n != p2.n:
        return False
    try:
        return apply_equivalence(p1, w.m, w.sigma, p2.b) == p2
    except ComponentMismatch:
        return False


class _EquivalenceSearch:
    """Cached data for witness search on one ``(G, a, N)``."""

    def __init__(self, group: FiniteGroup, a: TwistHom, n: int):
        self.group, self.a, self.n = group, a, n
        order = group.order
        count = 4 ** order
        width = 2 * order
        # candidate m in lexicographic order of flattened bit-vectors
        codes = np.arange(count, dtype=np.int64)
        bits = (codes[:, None] >> np.arange(width - 1, -1, -1)) & 1
        self.candidates = bits.reshape((count, order, 2))
        d1_all = differential_matrix(a, 1, Z2, group).apply(bits.reshape(count, -1))
        self.d1_candidates = d1_all.reshape((count,) + (order,) * 2 + (2,))
        self.d2 = differential_matrix(a, 2, mu(n), group)

    def search(self, p1: Pentad, p2: Pentad) -> EquivalenceWitness | None:
        a = self.a
        g = self.group
        want_r = (p2.kappa_r.values - p1.kappa_r.values) % 2
        db = (d1(a, p2.b) - d1(a, p1.b) + p1.kappa_l - p2.kappa_l).values
        ok_r = np.all(self.d1_candidates == want_r, axis=(1, 2, 3))
        # kappa_L2 = d b2 - d b1 - d m + kappa_L1  <=>  d m = d b2 - d b1 + kappa_L1 - kappa_L2
        ok_l = np.all(self.d1_candidates == db, axis=(1, 2, 3))
        for i in np.nonzero(ok_r & ok_l)[0].tolist():
            m = TwistedCochain(g, 1, Z2, self.candidates[i])
            exponent = _sign_exponent(a, p1.kappa_l, p1.b, p2.b, m, p2.kappa_r)
            target = p2.c - p1.c - sign_lift(exponent, self.n)
            sigma = self.d2.solve(target.flat())
            if sigma is not None:
                return EquivalenceWitness(m, TwistedCochain(g, 2, mu(self.n), sigma))
        return None


@lru_cache(maxsize=64)
def _search_for(group: FiniteGroup, a: TwistHom, n: int) -> _EquivalenceSearch:
    return _EquivalenceSearch(group, a, n)


def equivalent(p1: Pentad, p2: Pentad, max_order: int = DEFAULT_EQUIVALENCE_BOUND) -> EquivalenceWitness | None:
    """Decide ``p1 ~ p2``; return the first witness in lexicographic ``m`` order, or ``None``.

    ``sigma`` is searched among mu_N-valued cochains only, with ``N`` the
    common root order of ``c1`` and ``c2``.
    """
    if p1.group != p2.group or p1.n != p2.n:
        raise ComponentMismatch("pentads must share the group and the root order N")
    if p1.group.order > max_order:
        raise GroupTooLarge(f"witness search over 4^{p1.group.order} cochains exceeds bound |G| <= {max_order}")
    _require_member(p1, "first pentad")
    _require_member(p2, "second pentad")
    if p1.a != p2.a:
        return None
    return _search_for(p1.group, p1.a, p1.n).search(p1, p2)


def triple_equivalent(t1: Triple, t2: Triple, max_order: int = DEFAULT_EQUIVALENCE_BOUND) -> EquivalenceWitness | None:
    return equivalent(t1.pentad(), t2.pentad(), max_order=max_order)


def invert_witness(w: EquivalenceWitness, p1: Pentad, p2: Pentad) -> EquivalenceWitness:
    """Witness for ``p2 ~ p1`` from one for ``p1 ~ p2``.

    ``m`` is reused; ``sigma`` becomes ``sigma^-1`` times the sign cochain
    ``(-1)^{(b2 - b1 - m)(g) . m^{a(g)}(h)}`` whose coboundary absorbs the
    difference between the forward and backward sign factors.
    """
    if not witness_certifies(p1, p2, w):
        raise WitnessInvalid("witness does not certify p1 ~ p2")
    y = p2.b - p1.b - w.m
    sigma = -w.sigma + sign_lift(twisted_cup(p1.a, y, w.m), p1.n)
    inverse = EquivalenceWitness(w.m, sigma)
    if not witness_certifies(p2, p1, inverse):
        raise WitnessInvalid("constructed inverse witness failed re-verification")
    return inverse


def compose_witnesses(w1: EquivalenceWitness, w2: EquivalenceWitness,
                      p1: Pentad, p2: Pentad, p3: Pentad) -> EquivalenceWitness:
    """From ``w1: p1 ~ p2`` and ``w2: p2 ~ p3`` build ``(l + m, sigma sigma' sigma'')``.

    ``sigma''(g,h) = (-1)^{(b2 - b1 - m)(g) . l^{a(g)}(h)}``.
    """
    if not witness_certifies(p1, p2, w1):
        raise WitnessInvalid("first witness does not certify p1 ~ p2")
    if not witness_certifies(p2, p3, w2):
        raise WitnessInvalid("second witness does not certify p2 ~ p3")
    m, l = w1.m, w2.m
    correction = sign_lift(twisted_cup(p1.a, p2.b - p1.b - m, l), p1.n)
    composed = EquivalenceWitness(l + m, w1.sigma + w2.sigma + correction)
    if not witness_certifies(p1, p3, composed):
        raise WitnessInvalid("composed witness failed re-verification")
    return composed


# JSON bundles

def _twist_from_json(obj, group: FiniteGroup) -> TwistHom:
    if not isinstance(obj, list) or len(obj) != group.order or any(v not in (0, 1) for v in obj):
        raise ParseError("'a' must be a list of bits, one per group element")
    a = TwistHom(tuple(int(v) for v in obj))
    if not a.check(group):
        raise ParseError("'a' is not a homomorphism G -> Z_2")
    return a


def _cochain(obj, key, group, degree, kind) -> TwistedCochain:
    try:
        x = TwistedCochain.from_json(obj[key], group)
    except KeyError as exc:
        raise ParseError(f"missing field {key!r}") from exc
    if x.degree != degree or x.ring.kind != kind:
        raise ParseError(f"{key!r} must be a degree-{degree} {kind} cochain")
    return x


def pentad_to_json(p: Pentad) -> dict:
    return {
        "kind": "pentad",
        "group": p.group.to_json(),
        "a": list(p.a.values),
        "c": p.c.to_json(),
        "kappa_R": p.kappa_r.to_json(),
        "kappa_L": p.kappa_l.to_json(),
        "b": p.b.to_json(),
    }


def triple_to_json(t: Triple) -> dict:
    return {
        "kind": "triple",
        "group": t.group.to_json(),
        "a": list(t.a.values),
        "c": t.c.to_json(),
        "kappa": t.kappa.to_json(),
    }


def witness_to_json(w: EquivalenceWitness | None):
    if w is None:
        return None
    return {"m": w.m.to_json(), "sigma": w.sigma.to_json()}


def pentad_from_json(obj) -> Pentad:
    """Read a pentad bundle; a triple bundle is accepted and embedded with ``b = 0``."""
    if not isinstance(obj, dict):
        raise ParseError("pentad bundle must be a JSON object")
    group = group_from_json(obj.get("group"))
    a = _twist_from_json(obj.get("a"), group)
    kind = obj.get("kind", "pentad")
    try:
        if kind == "triple":
            return Triple(_cochain(obj, "c", group, 3, "mu"), _cochain(obj, "kappa", group, 2, "z2"), a).pentad()
        if kind == "pentad":
            return Pentad(
                _cochain(obj, "c", group, 3, "mu"),
                _cochain(obj, "kappa_R", group, 2, "z2"),
                _cochain(obj, "kappa_L", group, 2, "z2"),
                _cochain(obj, "b", group, 1, "z2"),
                a,
            )
    except ComponentMismatch as exc:
        raise ParseError(str(exc)) from exc
    raise ParseError(f"unknown bundle kind {kind!r}")


def witness_from_json(obj, group: FiniteGroup) -> EquivalenceWitness:
    return EquivalenceWitness(_cochain(obj, "m", group, 1, "z2"), _cochain(obj, "sigma", group, 2, "mu"))


__all__ = [
    "Pentad", "Triple", "EquivalenceWitness", "MembershipReport", "check_pentad", "is_member",
    "reduce_to_pd0", "apply_equivalence", "witness_certifies", "equivalent", "triple_equivalent",
    "invert_witness", "compose_witnesses", "pentad_to_json", "triple_to_json", "witness_to_json",
    "pentad_from_json", "witness_from_json",
]
