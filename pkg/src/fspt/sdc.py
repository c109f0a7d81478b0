"""Finite-dimensional self-dual CAR algebras as explicit matrices.

A space ``K = C^{2n}`` carries the conjugation ``f -> C conj(f)`` for a real
symmetric orthogonal ``C``.  A basis projection ``P`` (``P + C conj(P) C = 1``)
selects ``n`` modes; the Fock representation sends

    B(f) = a^*(P f) + a(P C conj f)

with Jordan-Wigner fermions ``a_j`` on ``(C^2)^{(x) n}``, mode 0 being the most
significant tensor factor.  Inner products are antilinear in the first slot,
and the anticommutator reads ``{B(f), B(g)} = <C conj f, g> 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np

from .errors import (
    InhomogeneousInput,
    NoImplementer,
    NonUniqueImplementer,
    NotABasisProjection,
    NotAHomomorphism,
    NotConjugationEquivariant,
    NotUnitary,
)
from .group import FiniteGroup

ALGEBRA_TOL = 1e-12
IMPLEMENTER_TOL = 1e-10
MAX_MODES = 6

_SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|: annihilates occupation 1
_Z = np.diag([1.0, -1.0]).astype(complex)
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True, eq=False)
class ConjugatedSpace:
    dim: int
    conj_matrix: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.conj_matrix, dtype=float)
        if c.shape != (self.dim, self.dim):
            raise ValueError("conjugation matrix has the wrong shape")
        if not np.allclose(c, c.T, atol=ALGEBRA_TOL) or not np.allclose(c @ c.T, np.eye(self.dim), atol=ALGEBRA_TOL):
            raise ValueError("conjugation matrix must be real, symmetric and orthogonal")
        object.__setattr__(self, "conj_matrix", c)

    @classmethod
    def standard(cls, dim: int) -> "ConjugatedSpace":
        if dim <= 0 or dim % 2:
            raise ValueError("a basis projection needs an even positive dimension")
        return cls(dim, np.eye(dim))

    def conjugate(self, f: np.ndarray) -> np.ndarray:
        return self.conj_matrix @ np.conj(f)

    def conjugate_operator(self, x: np.ndarray) -> np.ndarray:
        """``C x C`` for an operator ``x``, i.e. ``f -> C conj(x C conj f)``."""
        c = self.conj_matrix
        return c @ np.conj(x) @ c

    def bracket(self, f: np.ndarray, g: np.ndarray) -> complex:
        """``<C f, g>``: the scalar in ``{B(f), B(g)}``."""
        return complex(np.vdot(self.conjugate(f), g))


@dataclass(frozen=True, eq=False)
class BasisProjection:
    space: ConjugatedSpace
    matrix: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", p)
        d = self.space.dim
        if p.shape != (d, d):
            raise NotABasisProjection("projection has the wrong shape")
        if np.linalg.norm(p @ p - p) > 1e-10 or np.linalg.norm(p - p.conj().T) > 1e-10:
            raise NotABasisProjection("not an orthogonal projection")
        if np.linalg.norm(p + self.space.conjugate_operator(p) - np.eye(d)) > 1e-10:
            raise NotABasisProjection("P + C P C != 1")

    @classmethod
    def standard(cls, space: ConjugatedSpace) -> "BasisProjection":
        """Projection onto ``span{(e_{2j} + i e_{2j+1}) / sqrt 2}`` (needs ``C = 1``)."""
        d = space.dim
        p = np.zeros((d, d), dtype=complex)
        for j in range(d // 2):
            g = np.zeros(d, dtype=complex)
            g[2 * j], g[2 * j + 1] = 1, 1j
            g /= np.sqrt(2)
            p += np.outer(g, g.conj())
        return cls(space, p)

    @cached_property
    def mode_basis(self) -> np.ndarray:
        """Orthonormal basis of ``P K`` as columns, by Gram-Schmidt on ``P e_0, P e_1, ...``."""
        cols: list[np.ndarray] = []
        for k in range(self.space.dim):
            v = self.matrix[:, k].copy()
            for u in cols:
                v -= np.vdot(u, v) * u
            norm = np.linalg.norm(v)
            if norm > 1e-8:
                cols.append(v / norm)
        return np.array(cols).T


def _kron_all(ops):
    return reduce(np.kron, ops)


def jordan_wigner(n: int) -> list[np.ndarray]:
    """Annihilation operators ``a_0..a_{n-1}`` on ``2^n`` dims, mode 0 most significant."""
    return [_kron_all([_Z] * j + [_SIGMA_MINUS] + [_I2] * (n - j - 1)) for j in range(n)]


@dataclass(frozen=True, eq=False)
class Automorphism:
    """A map on the generators ``B(e_i)``, given by their images."""

    images: tuple[np.ndarray, ...]
    one_particle: np.ndarray | None = None


class SdcRep:
    """Fock representation of the self-dual CAR algebra over ``(K, C)`` from ``P``."""

    def __init__(self, projection: BasisProjection, mode_basis: np.ndarray | None = None):
        self.space = projection.space
        self.projection = projection
        basis = projection.mode_basis if mode_basis is None else np.asarray(mode_basis, dtype=complex)
        self.modes = basis.shape[1]
        if self.modes > MAX_MODES:
            raise ValueError(f"at most {MAX_MODES} modes per factor")
        self.mode_basis = basis
        self.annihilators = jordan_wigner(self.modes)
        self.dim = 2 ** self.modes
        parity = np.array([(-1) ** bin(i).count("1") for i in range(self.dim)], dtype=float)
        self.gamma = np.diag(parity).astype(complex)
        self.vacuum = np.zeros(self.dim, dtype=complex)
        self.vacuum[0] = 1.0

    def B(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=complex)
        create = self.mode_basis.conj().T @ f  # <g_j, P f>
        annihilate = self.mode_basis.T @ (self.space.conj_matrix @ f)  # conj <g_j, P C conj f>
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for j, a in enumerate(self.annihilators):
            out += create[j] * a.conj().T + annihilate[j] * a
        return out

    @cached_property
    def generators(self) -> tuple[np.ndarray, ...]:
        """``B(e_i)`` for the standard basis of ``K``."""
        eye = np.eye(self.space.dim)
        return tuple(self.B(eye[:, i]) for i in range(self.space.dim))

    def mode_vector(self, j: int) -> np.ndarray:
        return self.mode_basis[:, j]

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=complex)


def build_fock_rep(space: ConjugatedSpace, projection: BasisProjection | np.ndarray) -> SdcRep:
    if not isinstance(projection, BasisProjection):
        projection = BasisProjection(space, projection)
    elif projection.space is not space:
        projection = BasisProjection(space, projection.matrix)
    return SdcRep(projection)


def car_residual(rep: SdcRep, f, g) -> float:
    """``|| {B(f), B(g)} - <C f, g> 1 ||``."""
    bf, bg = rep.B(f), rep.B(g)
    return float(np.linalg.norm(bf @ bg + bg @ bf - rep.space.bracket(f, g) * rep.identity()))


def adjoint_residual(rep: SdcRep, f) -> float:
    return float(np.linalg.norm(rep.B(f).conj().T - rep.B(rep.space.conjugate(f))))


def grading_automorphism(rep: SdcRep) -> Automorphism:
    """``B(f) -> B(-f)``; checked against conjugation by the parity operator."""
    images = tuple(-b for b in rep.generators)
    for b, img in zip(rep.generators, images):
        if np.linalg.norm(rep.gamma @ b @ rep.gamma - img) > ALGEBRA_TOL:
            raise AssertionError("parity operator does not implement the grading")
    return Automorphism(images, -np.eye(rep.space.dim))


def bogoliubov(rep: SdcRep, u) -> Automorphism:
    """``B(f) -> B(u f)`` for a unitary ``u`` commuting with the conjugation."""
    u = np.asarray(u, dtype=complex)
    d = rep.space.dim
    if u.shape != (d, d) or np.linalg.norm(u.conj().T @ u - np.eye(d)) > ALGEBRA_TOL * 10 * d:
        raise NotUnitary("one-particle operator is not unitary")
    if np.linalg.norm(rep.space.conjugate_operator(u) - u) > ALGEBRA_TOL * 10 * d:
        raise NotConjugationEquivariant("u does not commute with the conjugation")
    eye = np.eye(d)
    return Automorphism(tuple(rep.B(u @ eye[:, i]) for i in range(d)), u)


def find_implementer(rep: SdcRep, auto: Automorphism) -> np.ndarray:
    """Unitary ``U`` with ``U B(e_i) U^* = image_i`` for every generator.

    ``U`` spans the common null space of ``X S_i - T_i X = 0``; its phase is
    fixed so that the entry of largest modulus is positive real.
    """
    dim = rep.dim
    eye = np.eye(dim)
    # row-major vec: vec(X S) = (I (x) S^T) vec X,  vec(T X) = (T (x) I) vec X
    blocks = [np.kron(eye, s.T) - np.kron(t, eye) for s, t in zip(rep.generators, auto.images)]
    system = np.vstack(blocks)
    _, sv, vh = np.linalg.svd(system)
    scale = max(1.0, float(sv[0]))
    null = np.sum(sv < 1e-9 * scale)
    if null == 0:
        raise NoImplementer(f"no nonzero intertwiner (smallest singular value {sv[-1]:.3e})")
    if null > 1:
        raise NonUniqueImplementer(f"intertwiner space has dimension {null}")
    x = vh[-1].conj().reshape(dim, dim)
    x *= np.sqrt(dim) / np.linalg.norm(x)
    k = np.argmax(np.abs(x))
    x *= np.abs(x.flat[k]) / x.flat[k]
    if np.linalg.norm(x @ x.conj().T - np.eye(dim)) > IMPLEMENTER_TOL * dim:
        raise NoImplementer("intertwiner is not proportional to a unitary")
    return x


def intertwining_residual(rep: SdcRep, auto: Automorphism, u: np.ndarray) -> float:
    return max(float(np.linalg.norm(u @ s @ u.conj().T - t)) for s, t in zip(rep.generators, auto.images))


def parity_of(rep, u: np.ndarray, tol: float = IMPLEMENTER_TOL) -> str:
    """``'even'`` if ``Gamma U Gamma = U``, ``'odd'`` if ``= -U``, else ``'inhomogeneous'``.

    ``rep`` is anything with a ``gamma`` attribute, or the grading matrix itself.
    """
    gamma = getattr(rep, "gamma", rep)
    conj = gamma @ u @ gamma
    scale = max(1.0, float(np.linalg.norm(u)))
    if np.linalg.norm(conj - u) <= tol * scale:
        return "even"
    if np.linalg.norm(conj + u) <= tol * scale:
        return "odd"
    return "inhomogeneous"


def _grade(gamma: np.ndarray, x: np.ndarray) -> int:
    kind = parity_of(gamma, x, tol=1e-9)
    if kind == "inhomogeneous":
        raise InhomogeneousInput("operator is not homogeneous for the grading")
    return 0 if kind == "even" else 1


class GradedTensor:
    """Graded tensor product of two graded representations: ``pi(a (x) b) = a Gamma_L^{grade b} (x) b``."""

    def __init__(self, left: SdcRep, right: SdcRep):
        self.left, self.right = left, right
        self.gamma = np.kron(left.gamma, right.gamma)
        self.dim = left.dim * right.dim

    def pi(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        gb = _grade(self.right.gamma, b)
        twist = self.left.gamma if gb else np.eye(self.left.dim)
        return np.kron(a @ twist, b)

    def B(self, f_left, f_right) -> np.ndarray:
        """Generator ``B(f_left (+) f_right)`` of the joint algebra over ``K_L (+) K_R``."""
        return self.pi(self.left.B(f_left), self.right.identity()) + self.pi(
            self.left.identity(), self.right.B(f_right)
        )

    def joint_bracket(self, f, g) -> complex:
        kl = self.left.space.dim
        return self.left.space.bracket(f[:kl], g[:kl]) + self.right.space.bracket(f[kl:], g[kl:])


def graded_tensor(left: SdcRep, right: SdcRep) -> GradedTensor:
    return GradedTensor(left, right)


def check_graded_implementers(left: SdcRep, right: SdcRep, zeta_left: Automorphism, zeta_right: Automorphism,
                   tol: float = IMPLEMENTER_TOL) -> dict:
    """Check how implementers of graded automorphisms on each factor act on the graded tensor product.

    With ``u_L, u_R`` the implementers, verifies on products of generators
    ``a (x) b`` (``a``, ``b`` generators or the unit) that

    * ``Ad(1 (x) u_R) pi(a (x) b) = pi(a (x) zeta_R(b))`` and
    * ``Ad(u_L (x) Gamma_R^{grade u_L}) pi(a (x) b) = pi(zeta_L(a) (x) b)``.
    """
    tensor = GradedTensor(left, right)
    u_left = find_implementer(left, zeta_left)
    u_right = find_implementer(right, zeta_right)
    parity_left = parity_of(left.gamma, u_left)
    parity_right = parity_of(right.gamma, u_right)
    homogeneous = "inhomogeneous" not in (parity_left, parity_right)

    lefts = [(left.identity(), left.identity())] + list(zip(left.generators, zeta_left.images))
    rights = [(right.identity(), right.identity())] + list(zip(right.generators, zeta_right.images))
    u_r = np.kron(np.eye(left.dim), u_right)
    first = 0.0
    second = float("inf")
    if homogeneous:
        grade = 1 if parity_left == "odd" else 0
        u_l = np.kron(u_left, right.gamma if grade else np.eye(right.dim))
        second = 0.0
    for a, za in lefts:
        for b, zb in rights:
            x = tensor.pi(a, b)
            first = max(first, float(np.linalg.norm(u_r @ x @ u_r.conj().T - tensor.pi(a, zb))))
            if homogeneous:
                second = max(second, float(np.linalg.norm(u_l @ x @ u_l.conj().T - tensor.pi(za, b))))
    return {
        "parity_left": parity_left,
        "parity_right": parity_right,
        "right_residual": first,
        "left_residual": second,
        "passed": homogeneous and first <= tol and second <= tol,
    }


@dataclass(frozen=True, eq=False)
class GradedMatrixUnits:
    units: dict
    parity: dict
    modes: int

    def __getitem__(self, key) -> np.ndarray:
        return self.units[key]


def _subsets(n: int):
    # occupation basis index i <-> subset of modes whose bits are set (mode 0 = most significant)
    return [frozenset(j for j in range(n) if (i >> (n - 1 - j)) & 1) for i in range(2 ** n)]


def graded_matrix_units(rep: SdcRep) -> GradedMatrixUnits:
    """``e_{IJ} = |I><J|`` in the occupation basis; grade ``|I| + |J| mod 2``."""
    subsets = _subsets(rep.modes)
    units, parity = {}, {}
    for i, big_i in enumerate(subsets):
        for j, big_j in enumerate(subsets):
            e = np.zeros((rep.dim, rep.dim), dtype=complex)
            e[i, j] = 1
            key = (big_i, big_j)
            units[key] = e
            parity[key] = (len(big_i) + len(big_j)) % 2
    return GradedMatrixUnits(units, parity, rep.modes)


def onsite_hamiltonian(rep: SdcRep, projection: BasisProjection | None = None):
    """``sum_j B(g_j) B(g_j)^* - B(g_j)^* B(g_j)`` over an orthonormal basis of ``P K``.

    Returns ``(H, eigenvalues ascending, ground eigenvector)``.
    """
    proj = rep.projection if projection is None else projection
    if not isinstance(proj, BasisProjection):
        proj = BasisProjection(rep.space, proj)
    h = np.zeros((rep.dim, rep.dim), dtype=complex)
    for j in range(proj.mode_basis.shape[1]):
        b = rep.B(proj.mode_basis[:, j])
        h += b @ b.conj().T - b.conj().T @ b
    evals, evecs = np.linalg.eigh(h)
    ground = evecs[:, 0]
    k = np.argmax(np.abs(ground))
    ground = ground * (np.abs(ground[k]) / ground[k])
    return h, evals, ground


@dataclass(eq=False)
class SymmetryAction:
    automorphisms: list[Automorphism]
    implementers: list[np.ndarray] | None
    vacuum_overlaps: list[float] | None
    commutes_with_projection: bool


def onsite_symmetry_action(rep: SdcRep, group: FiniteGroup, unitaries) -> SymmetryAction:
    """Bogoliubov automorphisms ``beta_g = B(f) -> B(U(g) f)`` for a one-particle representation.

    When every ``U(g)`` commutes with ``P`` the implementers are computed and
    their overlaps ``|<Omega, V_g Omega>|`` reported.
    """
    us = [np.asarray(u, dtype=complex) for u in unitaries]
    if len(us) != group.order:
        raise NotAHomomorphism("need one unitary per group element")
    for g in range(group.order):
        for h in range(group.order):
            if np.linalg.norm(us[g] @ us[h] - us[group.table[g][h]]) > 1e-10:
                raise NotAHomomorphism(f"U({g}) U({h}) != U({g}*{h})")
    autos = [bogoliubov(rep, u) for u in us]
    p = rep.projection.matrix
    commutes = all(np.linalg.norm(u @ p - p @ u) < 1e-10 for u in us)
    implementers = overlaps = None
    if commutes:
        implementers = [find_implementer(rep, auto) for auto in autos]
        overlaps = [float(abs(np.vdot(rep.vacuum, v @ rep.vacuum))) for v in implementers]
    return SymmetryAction(autos, implementers, overlaps, commutes)


def random_real_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish real orthogonal matrix (commutes with plain complex conjugation)."""
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    return q * np.sign(np.diag(r))


def random_basis_projection(space: ConjugatedSpace, rng: np.random.Generator) -> BasisProjection:
    """Rotate the standard projection by a random real orthogonal ``O``: ``O P O^T``."""
    o = random_real_orthogonal(space.dim, rng)
    base = BasisProjection.standard(ConjugatedSpace.standard(space.dim))
    return BasisProjection(space, o @ base.matrix @ o.T)
