"""Enumeration of reduced triples ``(c, kappa, a)`` up to equivalence.

For a fixed twist ``a`` the classes split by the class of ``kappa`` in
``ker d2 / im d1`` over Z_2.  For a representative ``kappa`` the compatible
``c`` form a coset ``c0 + Z3`` with ``Z3 = ker d3`` over mu_N, and the
equivalences that keep ``kappa`` fixed (``d m = 0``) act on it by translation
through

    H = im d2  +  { (-1)^{kappa . m^a + m . kappa^a} : m in ker d1 }.

So the classes over ``kappa`` are the cosets of ``H`` inside ``c0 + Z3``,
each represented by its Howell-reduced (lexicographically least) element.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .cochain import Z2, TwistedCochain, d1, d2, d3, differential_matrix, mu, sign_lift, twisted_cup
from .errors import FsptError, GroupTooLarge, NotACocycle, OddModulus
from .group import FiniteGroup, TwistHom, enumerate_twist_homs
from .pentad import Pentad, Triple, check_pentad, triple_equivalent, triple_to_json
from .zmod import HowellBasis, howell_form, kernel_f2

DEFAULT_CLASSIFIER_BOUND = 4
KAPPA_BOUND = 8


def default_root_order(group: FiniteGroup) -> int:
    return 2 * group.order


def _check_root_order(n: int):
    if n <= 0 or n % 2:
        raise OddModulus(f"root order N must be a positive even integer, got {n}")


def kappa_kernel_basis(group: FiniteGroup, a: TwistHom, max_order: int = KAPPA_BOUND) -> list[TwistedCochain]:
    """F_2 basis of the twisted 2-cocycles (pair-valued)."""
    if group.order > max_order:
        raise GroupTooLarge(f"|G| = {group.order} exceeds the bound {max_order}")
    rows = kernel_f2(differential_matrix(a, 2, Z2, group).matrix)
    basis = [TwistedCochain(group, 2, Z2, r) for r in rows]
    for k in basis:
        if not d2(a, k).is_zero():
            raise FsptError("kernel basis vector failed direct re-verification")
    return basis


@dataclass(frozen=True, eq=False)
class KappaClass:
    representative: TwistedCochain
    twist: TwistHom
    coset_size: int


def _quotient_generators(base: HowellBasis, vectors, modulus: int) -> tuple[HowellBasis, list[np.ndarray]]:
    """Pick vectors that are independent modulo the growing span of ``base``."""
    chosen = []
    span = base
    for v in vectors:
        if span.reduce(v).any():
            chosen.append(np.asarray(v) % modulus)
            span = howell_form(np.vstack([span.rows, v]) if len(span.rows) else np.atleast_2d(v), modulus)
    return span, chosen


def kappa_classes(group: FiniteGroup, a: TwistHom, max_order: int = KAPPA_BOUND) -> list[KappaClass]:
    """Coset representatives of ``ker d2 / im d1`` over Z_2, lexicographically least per coset."""
    kernel = kappa_kernel_basis(group, a, max_order)
    image = differential_matrix(a, 1, Z2, group).image
    _, gens = _quotient_generators(image, [k.flat() for k in kernel], 2)
    reps = set()
    for coeffs in itertools.product((0, 1), repeat=len(gens)):
        v = np.zeros(image.width, dtype=np.int64)
        for c, g in zip(coeffs, gens):
            if c:
                v = v ^ g
        reps.add(tuple(int(x) for x in image.reduce(v)))
    coset = image.size()
    return [KappaClass(TwistedCochain(group, 2, Z2, np.array(r)), a, coset) for r in sorted(reps)]


def obstruction_cochain(kappa: TwistedCochain, a: TwistHom, n: int) -> TwistedCochain:
    """``(-1)^{kappa(g,h) . kappa^{a(gh)}(k,f)}`` as a degree-4 mu_N cochain."""
    if not d2(a, kappa).is_zero():
        raise NotACocycle("kappa is not a twisted 2-cocycle")
    return sign_lift(twisted_cup(a, kappa, kappa), n)


def solve_c(kappa: TwistedCochain, a: TwistHom, n: int, max_order: int = KAPPA_BOUND) -> TwistedCochain | None:
    """Some mu_N cochain ``c`` with ``d3 c`` equal to the obstruction, or ``None``."""
    _check_root_order(n)
    group = kappa.group
    if group.order > max_order:
        raise GroupTooLarge(f"|G| = {group.order} exceeds the bound {max_order}")
    w = obstruction_cochain(kappa, a, n)
    sol = differential_matrix(a, 3, mu(n), group).solve(w.flat())
    if sol is None:
        return None
    c = TwistedCochain(group, 3, mu(n), sol)
    if d3(a, c) != w:
        raise FsptError("solution of the c-equation failed re-verification")
    return c


def residual_translations(kappa: TwistedCochain, a: TwistHom, n: int) -> list[TwistedCochain]:
    """Sign cochains by which a cocycle ``m`` (``d m = 0``) shifts ``c`` at fixed ``kappa``."""
    group = kappa.group
    cocycles = kernel_f2(differential_matrix(a, 1, Z2, group).matrix)
    out = []
    for row in cocycles:
        m = TwistedCochain(group, 1, Z2, row)
        out.append(sign_lift(twisted_cup(a, kappa, m) + twisted_cup(a, m, kappa), n))
    return out


@dataclass(frozen=True, eq=False)
class Pd0Class:
    representative: Triple
    class_id: int
    members: int  # triples in the class, counted over the whole kappa coset


@dataclass(eq=False)
class KappaBranch:
    twist: TwistHom
    kappa: KappaClass
    solvable: bool
    solutions: int = 0
    orbit_size: int = 0
    classes: list[Pd0Class] = field(default_factory=list)


@dataclass(eq=False)
class Classification:
    group: FiniteGroup
    root_order: int
    twists: list[TwistHom]
    branches: list[KappaBranch]
    mode: str = "exact"
    complete: bool = True
    sampled: int | None = None

    @property
    def classes(self) -> list[Pd0Class]:
        return [c for b in self.branches for c in b.classes]

    def to_json(self) -> dict:
        per_twist = []
        for a in self.twists:
            entries = []
            for br in self.branches:
                if br.twist != a:
                    continue
                entries.append({
                    "kappa": br.kappa.representative.to_json(),
                    "coset_size": br.kappa.coset_size,
                    "solvable": br.solvable,
                    "counts": {
                        "solutions": br.solutions,
                        "orbit_size": br.orbit_size,
                        "classes": len(br.classes),
                    },
                    "classes": [
                        {"id": c.class_id, "members": c.members, "triple": triple_to_json(c.representative)}
                        for c in br.classes
                    ],
                })
            per_twist.append({"a": list(a.values), "kappa_classes": entries})
        out = {
            "group": self.group.to_json(),
            "root_order": self.root_order,
            "mode": self.mode,
            "complete": self.complete,
            "total_classes": len(self.classes),
            "twists": per_twist,
        }
        if self.sampled is not None:
            out["sampled_solutions"] = self.sampled
        return out


def _classify_branch(group: FiniteGroup, a: TwistHom, kc: KappaClass, n: int) -> KappaBranch:
    kappa = kc.representative
    c0 = solve_c(kappa, a, n)
    if c0 is None:
        return KappaBranch(a, kc, solvable=False)
    ring = mu(n)
    cocycles = differential_matrix(a, 3, ring, group).kernel
    boundaries = differential_matrix(a, 2, ring, group).image
    shifts = residual_translations(kappa, a, n)
    for s in shifts:
        if not d3(a, s).is_zero():
            raise FsptError("residual translation is not a 3-cocycle")
    stacked = [boundaries.rows] + [s.flat()[None, :] for s in shifts]
    h = howell_form(np.vstack(stacked), n)

    gens = [row for row in cocycles.rows if h.reduce(row).any()]
    start = tuple(int(x) for x in h.reduce(c0.flat()))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple(int(x) for x in h.reduce(np.array(v) + g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt

    solutions = cocycles.size()
    orbit = h.size()
    if len(seen) * orbit != solutions:
        raise FsptError("orbit accounting failed: classes x orbit size != solution count")
    reps = sorted(seen)
    classes = [
        Pd0Class(Triple(TwistedCochain(group, 3, ring, np.array(r)), kappa, a), -1, orbit * kc.coset_size)
        for r in reps
    ]
    return KappaBranch(a, kc, True, solutions, orbit, classes)


def _number(branches: list[KappaBranch]):
    i = 0
    for br in branches:
        numbered = []
        for c in br.classes:
            numbered.append(Pd0Class(c.representative, i, c.members))
            i += 1
        br.classes = numbered


def classify_pd0(group: FiniteGroup, n: int | None = None, max_order: int = DEFAULT_CLASSIFIER_BOUND,
                 threads: int = 1) -> Classification:
    """All classes of reduced triples over ``G`` with mu_N coefficients.

    Output order is canonical (twist, then kappa representative, then ``c``
    representative, all lexicographic) and independent of ``threads``.
    """
    if n is None:
        n = default_root_order(group)
    _check_root_order(n)
    if group.order > max_order:
        raise GroupTooLarge(f"|G| = {group.order} exceeds the classifier bound {max_order}")
    twists = enumerate_twist_homs(group)
    jobs = [(a, kc) for a in twists for kc in kappa_classes(group, a)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            branches = list(pool.map(lambda job: _classify_branch(group, job[0], job[1], n), jobs))
    else:
        branches = [_classify_branch(group, a, kc, n) for a, kc in jobs]
    branches.sort(key=lambda br: (br.twist.values, br.kappa.representative.key()))
    _number(branches)
    return Classification(group, n, twists, branches)


def random_cocycle(a: TwistHom, degree: int, n: int, group: FiniteGroup, rng: np.random.Generator) -> TwistedCochain:
    """Uniform random element of ``ker d`` in the given degree (mu_N, or Z_2 for ``n == 2``)."""
    ring = Z2 if n == 2 else mu(n)
    kernel = differential_matrix(a, degree, ring, group).kernel
    coeffs = rng.integers(0, n, size=len(kernel.rows))
    v = (coeffs @ kernel.rows) % n if len(kernel.rows) else np.zeros(kernel.width, dtype=np.int64)
    return TwistedCochain(group, degree, ring, v)


def random_member(group: FiniteGroup, a: TwistHom, n: int, rng: np.random.Generator, tries: int = 16) -> Pentad:
    """A random pentad with twist ``a``: random ``kappa_R`` with solvable obstruction, random ``b``,
    ``kappa_L = d b + kappa_R`` and ``c`` drawn uniformly from the compatible coset."""
    _check_root_order(n)
    zero = TwistedCochain.zeros(group, 2, Z2)
    kappa_r, c_tilde = zero, solve_c(zero, a, n)
    for _ in range(tries):
        k = random_cocycle(a, 2, 2, group, rng)
        c = solve_c(k, a, n)
        if c is not None:
            kappa_r, c_tilde = k, c
            break
    b = TwistedCochain.random(group, 1, Z2, rng)
    kappa_l = d1(a, b) + kappa_r
    c = c_tilde + random_cocycle(a, 3, n, group, rng) - sign_lift(twisted_cup(a, b, kappa_r), n)
    p = Pentad(c, kappa_r, kappa_l, b, a)
    if not check_pentad(p).member:
        raise FsptError("generated pentad is not a member")
    return p


def classify_by_witness(group: FiniteGroup, n: int | None = None, samples: int = 8, seed: int = 0,
                        max_order: int = 8) -> Classification:
    """Partition a seeded sample of solutions by pairwise witness search.

    For groups beyond the exact classifier's bound.  The result lists the
    distinct classes met among the samples and is marked incomplete.
    """
    if n is None:
        n = default_root_order(group)
    _check_root_order(n)
    if group.order > max_order:
        raise GroupTooLarge(f"|G| = {group.order} exceeds the witness-search bound {max_order}")
    rng = np.random.default_rng(seed)
    twists = enumerate_twist_homs(group)
    branches = []
    total = 0
    for a in twists:
        for kc in kappa_classes(group, a, max_order):
            c0 = solve_c(kc.representative, a, n, max_order)
            if c0 is None:
                branches.append(KappaBranch(a, kc, solvable=False))
                continue
            reps: list[Triple] = []
            for _ in range(samples):
                t = Triple(c0 + random_cocycle(a, 3, n, group, rng), kc.representative, a)
                total += 1
                if not any(triple_equivalent(t, r, max_order) is not None for r in reps):
                    reps.append(t)
            reps.sort(key=lambda t: t.c.key())
            branches.append(KappaBranch(a, kc, True, classes=[Pd0Class(t, -1, 0) for t in reps]))
    _number(branches)
    return Classification(group, n, twists, branches, mode="orbit-by-witness", complete=False, sampled=total)
