"""Local model at a base point: splittings, theta map, slice stabilizers."""

import random
from fractions import Fraction

import pytest

from orbitlimits.exactcore import Mat, Q0, Q1, _is_zero
from orbitlimits.lierep import ConjRep, Form, SymRep, elementary
from orbitlimits.localmodel import NotTransverse, build_local_model


def _g(a, b, c) -> Mat:
    return Mat.rational([[a, b], [c, -a]])


@pytest.fixture(scope="module")
def sl2_model():
    rep = SymRep(2, 2)
    ambient = [_g(1, 0, 0), _g(0, 1, 0), _g(0, 0, 1)]
    x = rep.to_coords(Form(2, 2, {(2, 0): 1}))
    return rep, x, build_local_model(rep, x, ambient=ambient)


def test_sl2_splitting_dims(sl2_model):
    rep, x, model = sl2_model
    assert (len(model.H), len(model.S), len(model.N)) == (1, 2, 1)
    assert model.verify() is True


def test_sl2_theta_and_inverse(sl2_model):
    rep, x, model = sl2_model
    n = rep.to_coords(Form(2, 2, {(0, 2): 1}))        # y^2
    theta = model.theta_matrix(n)
    # theta(y^2) maps x^2 to -y^2 and kills xy and y^2
    assert [[str(c) for c in row] for row in theta.a] == \
        [["0", "0", "0"], ["0", "0", "0"], ["-1", "0", "0"]]
    # (1 + theta)^{-1} = 1 - theta here since theta^2 = 0
    units = [[Q1 if i == j else Q0 for j in range(3)] for i in range(3)]
    inv = Mat.from_cols(model.inv_one_plus_theta(n, units))
    assert (Mat.identity(3) + theta) * inv == Mat.identity(3)


def test_sl2_slice_completion(sl2_model):
    rep, x, model = sl2_model
    n = rep.to_coords(Form(2, 2, {(0, 2): 1}))
    stab = model.slice_stabilizer(n)
    assert len(stab) == 1
    el = stab.elements[0]
    c = el.a[1][0]
    assert not _is_zero(c) and el == _g(0, -1, 1).scale(c)
    # the completed element stabilizes x^2 + y^2
    p2 = [a + b for a, b in zip(x, n)]
    assert all(_is_zero(v) for v in rep.act(el, p2))


def test_solve_decomposition_reconstructs(sl2_model):
    rep, x, model = sl2_model
    rng = random.Random(3)
    for _ in range(25):
        nc = [Fraction(rng.randint(-3, 3), rng.randint(1, 3))]
        n = model.n_vec(nc)
        dv = [Fraction(rng.randint(-3, 3)) for _ in range(rep.dim)]
        sc, nprime = model.solve_decomposition(n, dv)
        recon = rep.act(model.s_mat(sc), [a + b for a, b in zip(x, n)])
        recon = [a + b for a, b in zip(recon, model.n_vec(nprime))]
        assert recon == dv


def test_local_action_of_stabilizer_is_vertical(sl2_model):
    rep, x, model = sl2_model
    n = rep.to_coords(Form(2, 2, {(0, 2): 1}))
    # the slice stabilizer element induces zero motion at x + n
    stab = model.slice_stabilizer(n)
    t2 = model.local_action(stab.elements[0], n)
    assert all(_is_zero(v) for v in t2.sPart)
    assert all(_is_zero(v) for v in t2.nPart)


def test_star_action_matches_quotient(sl2_model):
    rep, x, model = sl2_model
    n = rep.to_coords(Form(2, 2, {(0, 2): 1}))
    h = model.H[0]
    hn = rep.act(h, n)
    assert model.star(h, n) == model.lamN(hn)


def test_explicit_policy_validates_complement():
    rep = ConjRep(2)
    j = Mat.rational([[0, 1], [0, 0]])
    x = rep.to_coords(j)
    # a supplied S that overlaps the stabilizer must be rejected
    with pytest.raises(NotTransverse):
        build_local_model(rep, x, policy="explicit",
                          S=[j, Mat.identity(2), elementary(2, 1, 0)])


def test_zero_base_point_rejected():
    rep = SymRep(2, 2)
    with pytest.raises(ValueError):
        build_local_model(rep, [Q0] * rep.dim)


def test_orthogonal_policy_full_gl():
    rep = SymRep(2, 2)
    f = Form(2, 2, {(2, 0): 1, (0, 2): 1})
    model = build_local_model(rep, rep.to_coords(f))
    assert len(model.H) + len(model.S) == 4
    assert len(model.TO) + len(model.N) == rep.dim
    assert model.verify() is True
