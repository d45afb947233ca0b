import random

import numpy as np
import pytest
from numpy.testing import assert_allclose

from nilclose.exactfield import QQ, Subspace
from nilclose.malcev import (
    lattice_ball,
    psi,
    quotient_distance,
    reduce_batch,
    reduce_mod_lattice,
    second_kind_coords,
    split_coset,
    weak_malcev_through,
)
from nilclose.nilcore import (
    GroupSpec,
    NilMatrix,
    NotInGroupError,
    UnipotentElement,
    exp_nil,
    log_unip,
    ut_dim,
)
from nilclose.subalg import Subalgebra, bracket_closure

from conftest import SQRT2, E, rand_fraction, rand_nil, rand_scalar

E12, E13, E23 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def U(N):
    return UnipotentElement(N)


def rand_subalgebra(rng, group):
    dim = ut_dim(group.n)
    vecs = [[rand_scalar(rng, group.field) if rng.random() < 0.5 else group.field.zero
             for _ in range(dim)] for _ in range(rng.randint(0, 2))]
    return bracket_closure(group, Subspace(group.field, dim, vecs))


def unipotent_floats(rng, n, size, scale=1.0):
    g = np.broadcast_to(np.eye(n), (size, n, n)).copy()
    iu = np.triu_indices(n, 1)
    g[:, iu[0], iu[1]] = rng.random((size, len(iu[0]))) * scale
    return g


# -- weak Malcev bases ---------------------------------------------------------------

def test_malcev_through_center(heis):
    B = weak_malcev_through(Subalgebra.from_vectors(heis, [E13]))
    assert B.xs == (E(3, 1, 3), E(3, 1, 2), E(3, 2, 3))
    assert B.through_rank == 1


def test_malcev_from_zero(heis):
    B = weak_malcev_through(Subalgebra.zero(heis))
    assert B.through_rank == 0
    assert len(B) == 3
    assert B.prefixes_closed()


def test_malcev_through_irrational_plane_line(heis):
    t = SQRT2.theta
    B = weak_malcev_through(Subalgebra.from_vectors(heis, [(SQRT2.one, t, SQRT2.zero)]))
    assert B.xs == (E(3, 1, 2) + E(3, 1, 3, c=t), E(3, 1, 3), E(3, 2, 3))
    assert B.prefixes_closed()


def test_malcev_prefixes_random():
    rng = random.Random(41)
    for n in (3, 4, 5):
        G = GroupSpec.full(n, SQRT2)
        for _ in range(15):
            h = rand_subalgebra(rng, G)
            B = weak_malcev_through(h)
            assert B.prefixes_closed()
            assert B.prefix(B.through_rank) == h.space
            assert B.prefix(len(B)) == G.lie_algebra


# -- second-kind coordinates -------------------------------------------------------------

def test_coords_of_identity(heis):
    B = weak_malcev_through(Subalgebra.zero(heis))
    assert all(not s for s in second_kind_coords(UnipotentElement.identity(3, SQRT2), B))


def test_coords_plain_basis_example(heis):
    g = U(E(3, 1, 2)) * U(E(3, 2, 3))
    basis = [E(3, 1, 2), E(3, 2, 3), E(3, 1, 3)]
    s = second_kind_coords(g, basis, heis)
    assert s == [1, 1, 0]
    assert psi(s, basis) == g


def test_psi_coords_round_trip():
    rng = random.Random(42)
    for k in range(100):
        n = 2 + k % 4
        G = GroupSpec.full(n, SQRT2)
        B = weak_malcev_through(rand_subalgebra(rng, G))
        s = [rand_fraction(rng) for _ in range(len(B))]
        g = psi(s, B)
        assert second_kind_coords(g, B) == s
        h = U(rand_nil(rng, n, SQRT2))
        assert psi(second_kind_coords(h, B), B) == h


def test_coords_reject_outside_group():
    G = GroupSpec(3, Subspace(QQ, 3, [E12, E13]))
    B = weak_malcev_through(Subalgebra.zero(G))
    with pytest.raises(NotInGroupError):
        second_kind_coords(exp_nil(E(3, 2, 3, QQ)), B)


# -- reduction modulo UT(n, Z) ------------------------------------------------------------

def test_reduce_abelian_coordinate():
    g = np.eye(2)
    g[0, 1] = 2.7
    p = reduce_mod_lattice(g)
    assert_allclose(p.rep[0, 1], 0.7, atol=1e-12)
    assert_allclose(p.gamma, [[1, 2], [0, 1]])
    assert_allclose(p.rep @ p.gamma, g, atol=1e-12)


def test_reduce_heisenberg_point():
    g = np.eye(3)
    g[0, 1], g[1, 2], g[0, 2] = 0.5, 0.5, 1.3
    p = reduce_mod_lattice(g)
    assert_allclose(p.rep[0, 2], 0.3, atol=1e-12)
    expected_gamma = np.eye(3)
    expected_gamma[0, 2] = 1.0
    assert_allclose(p.gamma, expected_gamma)
    assert_allclose(p.rep @ p.gamma, g, atol=1e-12)


def test_reduce_integer_matrix():
    rng = random.Random(3)
    g = U(NilMatrix(4, [QQ(rng.randint(-5, 5)) for _ in range(6)], QQ.zero))
    p = reduce_mod_lattice(g)
    assert p.rep.is_identity()
    assert p.rep * p.gamma == g


def test_reduce_exact_random():
    rng = random.Random(43)
    for k in range(100):
        n = 2 + k % 4
        g = U(rand_nil(rng, n, SQRT2, density=0.9))
        p = reduce_mod_lattice(g)
        assert p.gamma.is_integral()
        assert p.rep * p.gamma == g
        assert all(0 <= x < 1 for x in p.rep.nil.entries)


def test_reduce_float_batch():
    rng = np.random.default_rng(0)
    for n in (2, 3, 4, 5):
        g = unipotent_floats(rng, n, 500, scale=40.0) - 20.0 * np.triu(np.ones((n, n)), 1)
        reps, gammas = reduce_batch(g)
        iu = np.triu_indices(n, 1)
        assert np.all((reps[:, iu[0], iu[1]] >= 0) & (reps[:, iu[0], iu[1]] < 1))
        assert_allclose(gammas, np.round(gammas))
        assert_allclose(reps @ gammas, g, atol=1e-9, rtol=1e-12)


def test_reduce_float_matches_exact():
    rng = random.Random(44)
    for _ in range(30):
        g = U(rand_nil(rng, 4, SQRT2, density=0.9))
        exact = reduce_mod_lattice(g)
        approx = reduce_mod_lattice(g.to_float())
        assert_allclose(approx.rep, exact.rep.to_float(), atol=1e-9)
        assert_allclose(approx.gamma, exact.gamma.to_float())


def test_reduce_snaps_near_integers():
    g = np.eye(2)
    g[0, 1] = 3.0 - 1e-12
    assert reduce_mod_lattice(g).rep[0, 1] == 0.0


# -- coset sections -------------------------------------------------------------------------

def test_split_inside_subgroup(heis):
    h = Subalgebra.from_vectors(heis, [E12, E13])
    g = exp_nil(E(3, 1, 2, c=SQRT2.theta) + E(3, 1, 3, c=3))
    a, hp = split_coset(g, h)
    assert a.is_identity()
    assert hp == g


def test_split_trivial_subgroup(heis):
    g = exp_nil(E(3, 1, 2) + E(3, 2, 3, c=SQRT2.theta))
    a, hp = split_coset(g, Subalgebra.zero(heis))
    assert a == g and hp.is_identity()


def test_split_is_constant_on_cosets():
    rng = random.Random(45)
    for k in range(60):
        n = 3 + k % 2
        G = GroupSpec.full(n, SQRT2)
        h = rand_subalgebra(rng, G)
        g = U(rand_nil(rng, n, SQRT2))
        a, hp = split_coset(g, h)
        assert a * hp == g
        assert h.contains(log_unip(hp))
        v = NilMatrix.zeros(n, SQRT2)
        for x in h.basis:
            v = v + x.scale(rand_scalar(rng))
        a2, hp2 = split_coset(g * exp_nil(v), h)
        assert a2 == a


# -- quotient distance --------------------------------------------------------------------------

def test_distance_to_self():
    rng = np.random.default_rng(1)
    for g in unipotent_floats(rng, 3, 10, scale=5.0):
        assert quotient_distance(g, g) == 0.0


def test_circle_wraparound():
    a, b = np.eye(2), np.eye(2)
    a[0, 1], b[0, 1] = 0.95, 0.05
    assert_allclose(quotient_distance(a, b), 0.1, atol=1e-12)


def test_distance_lattice_invariant():
    rng = np.random.default_rng(2)
    gam = np.eye(3)
    gam[0, 1], gam[1, 2], gam[0, 2] = 2, -1, 5
    for g, h in zip(unipotent_floats(rng, 3, 20), unipotent_floats(rng, 3, 20)):
        assert_allclose(quotient_distance(g @ gam, h), quotient_distance(g, h), atol=1e-12)


def test_distance_symmetric_and_nonnegative():
    rng = np.random.default_rng(3)
    for n in (2, 3, 4):
        xs, ys = unipotent_floats(rng, n, 200), unipotent_floats(rng, n, 200)
        for x, y in zip(xs, ys):
            d1, d2 = quotient_distance(x, y), quotient_distance(y, x)
            assert d1 >= 0
            assert abs(d1 - d2) <= 1e-12


def test_lattice_ball_sizes():
    assert len(lattice_ball(2)) == 3
    assert len(lattice_ball(3)) == 33
    assert any(np.array_equal(g, np.eye(4)) for g in lattice_ball(4))


def _triangle_violations(n, count, seed):
    rng = np.random.default_rng(seed)
    xs, ys, zs = (unipotent_floats(rng, n, count) for _ in range(3))
    bad = []
    for x, y, z in zip(xs, ys, zs):
        dxz = quotient_distance(x, z)
        if dxz > quotient_distance(x, y) + quotient_distance(y, z) + 1e-9:
            bad.append((x, y, z))
    return bad


def test_triangle_inequality_circle():
    assert not _triangle_violations(2, 3000, 4)


@pytest.mark.xfail(strict=True, reason="the symmetrized Frobenius quotient distance is not a "
                                       "metric on the Heisenberg nilmanifold")
def test_triangle_inequality_heisenberg():
    assert not _triangle_violations(3, 6000, 7)


def test_triangle_counterexample_heisenberg():
    """A documented triple where d(x, z) exceeds d(x, y) + d(y, z) by about 0.017."""
    def pt(e12, e13, e23):
        g = np.eye(3)
        g[0, 1], g[0, 2], g[1, 2] = e12, e13, e23
        return g

    x = pt(0.7352218154302615, 0.25914215158402465, 0.12047500166897296)
    y = pt(0.07165861845839638, 0.3199205425005739, 0.8856426418389579)
    z = pt(0.19182116262105098, 0.24902830822676225, 0.8315127972065834)
    gap = quotient_distance(x, z) - quotient_distance(x, y) - quotient_distance(y, z)
    assert_allclose(gap, 0.0167726, atol=1e-6)
