from __future__ import annotations

import numpy as np
import pytest
from conftest import Z2

from fspt.errors import (
    InhomogeneousInput,
    NoImplementer,
    NonUniqueImplementer,
    NotABasisProjection,
    NotAHomomorphism,
    NotConjugationEquivariant,
    NotUnitary,
)
from fspt.group import cyclic_group
from fspt.sdc import (
    ALGEBRA_TOL,
    IMPLEMENTER_TOL,
    Automorphism,
    BasisProjection,
    ConjugatedSpace,
    bogoliubov,
    build_fock_rep,
    car_residual,
    check_graded_implementers,
    find_implementer,
    graded_matrix_units,
    graded_tensor,
    grading_automorphism,
    intertwining_residual,
    onsite_hamiltonian,
    onsite_symmetry_action,
    parity_of,
    random_basis_projection,
    random_real_orthogonal,
)


def standard_rep(n):
    space = ConjugatedSpace.standard(2 * n)
    return build_fock_rep(space, BasisProjection.standard(space))


def random_rep(n, rng):
    space = ConjugatedSpace.standard(2 * n)
    return build_fock_rep(space, random_basis_projection(space, rng))


def cvec(rng, d):
    return rng.normal(size=d) + 1j * rng.normal(size=d)


def monomials(rep, rng, count=6):
    """Random products of generators with their grades."""
    out = [(rep.identity(), 0)]
    for _ in range(count):
        length = int(rng.integers(1, 4))
        idx = rng.integers(0, len(rep.generators), size=length)
        x = rep.identity()
        for i in idx:
            x = x @ rep.generators[i]
        out.append((x, length % 2))
    return out


def test_single_mode_generator():
    rep = standard_rep(1)
    a = rep.annihilators[0]
    b1 = rep.B(np.array([1.0, 0.0]))
    assert np.allclose(b1, (a.conj().T + a) / np.sqrt(2), atol=ALGEBRA_TOL)
    assert np.allclose(b1 @ b1, 0.5 * np.eye(2), atol=ALGEBRA_TOL)


def test_real_vector_of_norm_sqrt2_gives_odd_self_adjoint_unitary():
    rng = np.random.default_rng(0)
    rep = random_rep(3, rng)
    f = rng.normal(size=6)
    f *= np.sqrt(2) / np.linalg.norm(f)
    b = rep.B(f)
    assert np.allclose(b, b.conj().T, atol=ALGEBRA_TOL)
    assert np.allclose(b @ b, np.eye(8), atol=ALGEBRA_TOL)
    assert parity_of(rep, b) == "odd"


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_car_relations(n):
    rng = np.random.default_rng(n)
    rep = random_rep(n, rng)
    d = 2 * n
    for _ in range(100):
        f, g = cvec(rng, d), cvec(rng, d)
        assert car_residual(rep, f, g) <= ALGEBRA_TOL
    for _ in range(10):
        f = cvec(rng, d)
        assert np.linalg.norm(rep.B(f).conj().T - rep.B(rep.space.conjugate(f))) <= ALGEBRA_TOL
        assert np.linalg.norm(rep.B(2 * f - 3j * f) - (2 - 3j) * rep.B(f)) <= 10 * ALGEBRA_TOL


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_grading_and_vacuum(n):
    rep = random_rep(n, np.random.default_rng(10 + n))
    assert np.allclose(rep.gamma @ rep.gamma, rep.identity())
    assert np.allclose(rep.gamma @ rep.vacuum, rep.vacuum)
    for b in rep.generators:
        assert np.linalg.norm(rep.gamma @ b @ rep.gamma + b) <= ALGEBRA_TOL
    for j in range(n):
        g = rep.mode_vector(j)
        b = rep.B(g)
        assert abs(np.vdot(rep.vacuum, b @ b.conj().T @ rep.vacuum)) <= ALGEBRA_TOL


def test_mode_basis_is_orthonormal_and_spans_range():
    rep = random_rep(4, np.random.default_rng(3))
    g = rep.mode_basis
    assert np.allclose(g.conj().T @ g, np.eye(4), atol=1e-12)
    assert np.allclose(g @ g.conj().T, rep.projection.matrix, atol=1e-12)


def test_nontrivial_conjugation():
    # C swaps the last two coordinates; W = V S maps a C = 1 projection to one for C
    c = np.eye(4)[[0, 1, 3, 2]]
    space = ConjugatedSpace(4, c)
    evals, v = np.linalg.eigh(c)
    w = v @ np.diag(np.where(evals > 0, 1, 1j))
    base = BasisProjection.standard(ConjugatedSpace.standard(4)).matrix
    rep = build_fock_rep(space, w @ base @ w.conj().T)
    rng = np.random.default_rng(4)
    for _ in range(30):
        assert car_residual(rep, cvec(rng, 4), cvec(rng, 4)) <= ALGEBRA_TOL
    _, evals, ground = onsite_hamiltonian(rep)
    assert abs(evals[0] + 2) <= IMPLEMENTER_TOL and abs(abs(np.vdot(rep.vacuum, ground)) - 1) <= IMPLEMENTER_TOL


def test_invalid_spaces_and_projections():
    with pytest.raises(ValueError):
        ConjugatedSpace.standard(3)
    with pytest.raises(ValueError):
        ConjugatedSpace(2, np.array([[1.0, 1.0], [0.0, 1.0]]))
    space = ConjugatedSpace.standard(2)
    with pytest.raises(NotABasisProjection):
        BasisProjection(space, np.eye(2))
    with pytest.raises(NotABasisProjection):
        BasisProjection(space, np.diag([1.0, 0.0]))
    with pytest.raises(NotABasisProjection):
        build_fock_rep(space, np.array([[1, 1], [0, 0]]))


def test_grading_automorphism():
    rep = standard_rep(1)
    theta = grading_automorphism(rep)
    for b, img in zip(rep.generators, theta.images):
        assert np.allclose(img, -b)
    assert np.allclose(rep.gamma, np.diag([1, -1]))
    rng = np.random.default_rng(5)
    rep = random_rep(2, rng)
    f, g = cvec(rng, 4), cvec(rng, 4)
    even = rep.B(f) @ rep.B(g)
    assert np.allclose(rep.B(-f) @ rep.B(-g), even)


def test_bogoliubov_special_cases():
    rng = np.random.default_rng(6)
    rep = random_rep(2, rng)
    ident = bogoliubov(rep, np.eye(4))
    for b, img in zip(rep.generators, ident.images):
        assert np.allclose(b, img)
    minus = bogoliubov(rep, -np.eye(4))
    for img, th in zip(minus.images, grading_automorphism(rep).images):
        assert np.allclose(img, th)
    rot = np.eye(4)
    t = 0.7
    rot[:2, :2] = [[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]]
    auto = bogoliubov(rep, rot)
    e = np.eye(4)
    for i in range(4):
        for j in range(4):
            s, r = auto.images[i], auto.images[j]
            assert np.linalg.norm(s @ r + r @ s - e[i] @ e[j] * np.eye(4)) <= ALGEBRA_TOL


def test_bogoliubov_errors():
    rep = standard_rep(1)
    with pytest.raises(NotUnitary):
        bogoliubov(rep, 2 * np.eye(2))
    with pytest.raises(NotConjugationEquivariant):
        bogoliubov(rep, 1j * np.eye(2))


def test_implementer_of_grading_is_gamma():
    rep = standard_rep(2)
    u = find_implementer(rep, grading_automorphism(rep))
    assert np.allclose(u, rep.gamma, atol=IMPLEMENTER_TOL)
    assert parity_of(rep, u) == "even"


def test_implementer_of_identity():
    rep = random_rep(2, np.random.default_rng(7))
    u = find_implementer(rep, bogoliubov(rep, np.eye(4)))
    assert np.allclose(u, np.eye(4), atol=IMPLEMENTER_TOL)


@pytest.mark.parametrize("seed", range(10))
def test_random_bogoliubov_implementer(seed):
    rng = np.random.default_rng(100 + seed)
    rep = random_rep(2, rng)
    auto = bogoliubov(rep, random_real_orthogonal(4, rng))
    u = find_implementer(rep, auto)
    assert np.allclose(u @ u.conj().T, np.eye(4), atol=IMPLEMENTER_TOL)
    assert intertwining_residual(rep, auto, u) <= IMPLEMENTER_TOL
    assert parity_of(rep, u) in ("even", "odd")
    k = np.argmax(np.abs(u))
    assert abs(u.flat[k].imag) <= 1e-12 and u.flat[k].real > 0


def test_inner_automorphism_implementer():
    rng = np.random.default_rng(8)
    rep = random_rep(2, rng)
    f = rng.normal(size=4)
    v = rep.B(f * np.sqrt(2) / np.linalg.norm(f))
    auto = Automorphism(tuple(v @ b @ v.conj().T for b in rep.generators))
    u = find_implementer(rep, auto)
    phase = np.vdot(v.ravel(), u.ravel()) / 4
    assert np.allclose(u, phase * v, atol=IMPLEMENTER_TOL)
    assert parity_of(rep, u) == "odd"


def test_implementer_errors():
    rep = standard_rep(2)
    with pytest.raises(NoImplementer):
        find_implementer(rep, Automorphism(tuple(0 * b for b in rep.generators)))
    with pytest.raises(NonUniqueImplementer):
        find_implementer(rep, Automorphism(rep.generators[:1]))


def test_parity_of():
    rng = np.random.default_rng(9)
    rep = random_rep(2, rng)
    assert parity_of(rep, rep.gamma) == "even"
    f = rng.normal(size=4)
    assert parity_of(rep, rep.B(f / np.linalg.norm(f))) == "odd"
    assert parity_of(rep, rep.identity() + rep.generators[0]) == "inhomogeneous"
    assert parity_of(rep.gamma, rep.gamma) == "even"


def test_graded_tensor_sign_law():
    rng = np.random.default_rng(11)
    left, right = random_rep(2, rng), random_rep(2, rng)
    t = graded_tensor(left, right)
    lm, rm = monomials(left, rng), monomials(right, rng)
    for a, da in lm:
        for b, db in rm:
            lhs = t.pi(left.identity(), b) @ t.pi(a, right.identity())
            assert np.linalg.norm(lhs - (-1) ** (da * db) * t.pi(a, b)) <= ALGEBRA_TOL
            if da == db == 0:
                assert np.allclose(t.pi(a, b), np.kron(a, b))
    for a1, _ in lm[:4]:
        for b1, db1 in rm[:4]:
            for a2, da2 in lm[:4]:
                for b2, _ in rm[:4]:
                    prod = t.pi(a1, b1) @ t.pi(a2, b2)
                    want = (-1) ** (db1 * da2) * t.pi(a1 @ a2, b1 @ b2)
                    assert np.linalg.norm(prod - want) <= ALGEBRA_TOL


def test_graded_tensor_grading_and_errors():
    left, right = standard_rep(1), standard_rep(1)
    t = graded_tensor(left, right)
    assert np.allclose(t.gamma, np.kron(left.gamma, right.gamma))
    with pytest.raises(InhomogeneousInput):
        t.pi(left.identity(), right.identity() + right.generators[0])


def test_joint_car_on_sum_space():
    rng = np.random.default_rng(12)
    left, right = random_rep(1, rng), random_rep(1, rng)
    t = graded_tensor(left, right)
    for _ in range(30):
        f, g = cvec(rng, 4), cvec(rng, 4)
        bf, bg = t.B(f[:2], f[2:]), t.B(g[:2], g[2:])
        assert np.linalg.norm(bf @ bg + bg @ bf - t.joint_bracket(f, g) * np.eye(4)) <= ALGEBRA_TOL
    x = t.B(np.array([1.0, 0]), np.zeros(2))
    y = t.B(np.zeros(2), np.array([1.0, 0]))
    assert np.linalg.norm(x @ y + y @ x) <= ALGEBRA_TOL


def test_graded_implementers_identity_and_grading():
    left, right = standard_rep(2), standard_rep(2)
    ident_l, ident_r = bogoliubov(left, np.eye(4)), bogoliubov(right, np.eye(4))
    assert check_graded_implementers(left, right, ident_l, ident_r)["passed"]
    report = check_graded_implementers(left, right, grading_automorphism(left), ident_r)
    assert report["passed"] and report["parity_left"] == "even"


@pytest.mark.parametrize("seed", range(10))
def test_graded_implementers_random(seed):
    rng = np.random.default_rng(200 + seed)
    left, right = random_rep(2, rng), random_rep(2, rng)
    report = check_graded_implementers(
        left, right,
        bogoliubov(left, random_real_orthogonal(4, rng)),
        bogoliubov(right, random_real_orthogonal(4, rng)),
    )
    assert report["passed"], report
    assert report["parity_left"] != "inhomogeneous" and report["parity_right"] != "inhomogeneous"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_graded_matrix_units(n):
    rep = standard_rep(n)
    units = graded_matrix_units(rep)
    keys = list(units.units)
    assert len(keys) == 4 ** n
    total = sum(units[(i, i)] for i, j in keys if i == j)
    assert np.array_equal(total, rep.identity())
    for (i, j) in keys:
        e = units[(i, j)]
        assert np.array_equal(e.conj().T, units[(j, i)])
        sign = (-1) ** ((len(i) + len(j)) % 2)
        assert np.array_equal(rep.gamma @ e @ rep.gamma, sign * e)
        assert units.parity[(i, j)] == (len(i) + len(j)) % 2
    rng = np.random.default_rng(n)
    for _ in range(50):
        (i, j), (k, l) = (keys[x] for x in rng.integers(0, len(keys), size=2))
        prod = units[(i, j)] @ units[(k, l)]
        want = units[(i, l)] if j == k else np.zeros_like(prod)
        assert np.array_equal(prod, want)
    span = np.array([units[k].ravel() for k in keys])
    assert np.linalg.matrix_rank(span) == 4 ** n


def test_matrix_unit_occupation_matches_number_operators():
    rep = standard_rep(2)
    units = graded_matrix_units(rep)
    for (i, j), e in units.units.items():
        if i == j:
            for mode, a in enumerate(rep.annihilators):
                number = a.conj().T @ a
                assert np.allclose(number @ e, (mode in i) * e)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_onsite_hamiltonian_spectrum(n):
    rep = random_rep(n, np.random.default_rng(300 + n))
    h, evals, ground = onsite_hamiltonian(rep)
    assert np.allclose(h, h.conj().T, atol=ALGEBRA_TOL)
    assert abs(evals[0] + n) <= IMPLEMENTER_TOL
    assert abs(evals[1] - evals[0] - 2) <= IMPLEMENTER_TOL
    assert abs(abs(np.vdot(rep.vacuum, ground)) - 1) <= IMPLEMENTER_TOL
    assert abs(np.vdot(rep.vacuum, h @ rep.vacuum) + n) <= IMPLEMENTER_TOL
    rounded = np.round(evals)
    assert np.allclose(evals, rounded, atol=IMPLEMENTER_TOL)
    assert all(int(e - n) % 2 == 0 for e in rounded)


def test_onsite_hamiltonian_two_modes_exact():
    rep = standard_rep(2)
    _, evals, _ = onsite_hamiltonian(rep)
    assert np.allclose(evals, [-2, 0, 0, 2], atol=IMPLEMENTER_TOL)


def test_symmetry_action_trivial_and_sign():
    rep = random_rep(2, np.random.default_rng(13))
    trivial = onsite_symmetry_action(rep, cyclic_group(1), [np.eye(4)])
    for b, img in zip(rep.generators, trivial.automorphisms[0].images):
        assert np.allclose(b, img)
    action = onsite_symmetry_action(rep, Z2, [np.eye(4), -np.eye(4)])
    for img, th in zip(action.automorphisms[1].images, grading_automorphism(rep).images):
        assert np.allclose(img, th)
    assert action.commutes_with_projection
    assert all(abs(o - 1) <= IMPLEMENTER_TOL for o in action.vacuum_overlaps)


def test_symmetry_commuting_with_projection_fixes_vacuum():
    rep = standard_rep(2)
    # a rotation in each (2j, 2j+1) plane multiplies the mode (e_2j + i e_2j+1) by a phase
    z3 = cyclic_group(3)
    r = np.array([[np.cos(2 * np.pi / 3), -np.sin(2 * np.pi / 3)], [np.sin(2 * np.pi / 3), np.cos(2 * np.pi / 3)]])
    us = [np.kron(np.eye(2), np.linalg.matrix_power(r, k)) for k in range(3)]
    action = onsite_symmetry_action(rep, z3, us)
    assert action.commutes_with_projection
    for auto, v, o in zip(action.automorphisms, action.implementers, action.vacuum_overlaps):
        assert abs(o - 1) <= IMPLEMENTER_TOL
        assert intertwining_residual(rep, auto, v) <= IMPLEMENTER_TOL


def test_symmetry_action_requires_homomorphism():
    rep = standard_rep(1)
    with pytest.raises(NotAHomomorphism):
        onsite_symmetry_action(rep, Z2, [np.eye(2), np.array([[0.0, -1.0], [1.0, 0.0]])])
    with pytest.raises(NotAHomomorphism):
        onsite_symmetry_action(rep, Z2, [np.eye(2)])
