"""Torus weight supports and the instability optimizer."""

import math
from fractions import Fraction

import pytest

from orbitlimits.conjclosure import jordan_block
from orbitlimits.exactcore import Mat
from orbitlimits.kempf import (centered_ap_direction, grid_minimize, kempf_f,
                               kempf_descent, kempf_support,
                               leading_term_along, mu, pairing)
from orbitlimits.lierep import ConjRep, Form, SymRep, elementary


def _jn_support(n):
    rep = ConjRep(n)
    return kempf_support(rep, rep.to_coords(jordan_block(n)))


def test_support_of_monomial_form():
    rep = SymRep(3, 3)
    f = Form(3, 3, {(1, 1, 1): 1})
    sup = kempf_support(rep, rep.to_coords(f))
    assert sup.weights == [(1, 1, 1)]


def test_support_of_jn():
    # J_3 has entries at (0,1) and (1,2): weights e_0 - e_1 and e_1 - e_2
    sup = _jn_support(3)
    assert sorted(sup.weights) == [(0, 1, -1), (1, -1, 0)]


def test_support_rejects_zero_vector():
    rep = ConjRep(2)
    with pytest.raises(ValueError):
        kempf_support(rep, [Fraction(0)] * 4)


def test_mu_and_pairing_exact():
    sup = _jn_support(3)
    ell = [Fraction(1), Fraction(0), Fraction(-1)]
    assert mu(ell, sup) == 1
    assert pairing(ell, (1, -1, 0)) == 1


def test_leading_term_picks_minimal_weight():
    A = Mat.rational([[1, 2, 0, 5], [0, 1, 3, 0],
                      [0, 0, 1, 2], [0, 0, 0, 1]])
    rep = ConjRep(4)
    sup = kempf_support(rep, rep.to_coords(A))
    m, coords = leading_term_along([0, 1, 2, 3], sup)
    assert m == -3
    assert rep.from_coords(coords) == elementary(4, 0, 3, Fraction(5))


def test_single_weight_support_constant_f():
    rep = SymRep(3, 3)
    sup = kempf_support(rep, rep.to_coords(Form(3, 3, {(1, 1, 1): 1})))
    ell = centered_ap_direction(3)
    assert abs(kempf_f(10.0, ell, sup) - 1.0) < 1e-12
    res = kempf_descent(sup, 10.0)
    assert abs(res.f_value - 1.0) < 1e-12
    assert abs(res.mu_value) < 1e-12


def test_descent_deterministic():
    sup = _jn_support(3)
    a = kempf_descent(sup, 100.0, seed=7)
    b = kempf_descent(sup, 100.0, seed=7)
    assert a.ell == b.ell and a.f_value == b.f_value


@pytest.mark.parametrize("n", [3, 4])
def test_descent_matches_grid(n):
    sup = _jn_support(n)
    res = kempf_descent(sup, 1000.0)
    gp, gf = grid_minimize(sup, 1000.0)
    assert res.converged and res.monotone
    assert res.max_residual < 1e-9
    assert abs(res.f_value - gf) <= 1e-3 * abs(gf)
    assert res.mu_value >= float(mu(gp, sup)) - 1e-3


@pytest.mark.parametrize("t", [10.0, 100.0, 1000.0])
def test_minimizer_destabilizes_jn(t):
    # the f-minimizer enters {mu > 0} for every t on the documented set
    for n in (3, 4):
        res = kempf_descent(_jn_support(n), t)
        assert res.mu_value > 0


def test_descent_rejects_small_t():
    with pytest.raises(ValueError):
        kempf_descent(_jn_support(3), 1.0)


def test_constraint_residual_at_machine_precision():
    res = kempf_descent(_jn_support(4), 100.0)
    assert abs(sum(res.ell)) < 1e-12
    assert abs(math.sqrt(sum(x * x for x in res.ell)) - 1.0) < 1e-12
