"""Second fundamental forms, Gauss curvature contraction, worked models."""

from fractions import Fraction

import pytest

from orbitlimits.curvature import (adjoint_offdiagonal_vanishing, adjoint_pi,
                                   block_pi, block_pi_verify,
                                   cyclic_chart_form, cyclic_shift,
                                   cyclic_shift_suite, ell_bar, gamma_squared,
                                   p_closed, p_trace, riemann_and_ricci,
                                   second_fundamental_form, sphere_model,
                                   sphere_ricci)
from orbitlimits.exactcore import Mat, Q0, _is_zero


# ---------------------------------------------------------------------------
# sphere


@pytest.mark.parametrize("m", [2, 3, 4, 5])
@pytest.mark.parametrize("r", [Fraction(1), Fraction(2), Fraction(3, 2)])
def test_sphere_ricci_exact(m, r):
    ric = sphere_ricci(m, r)
    for i in range(m):
        for j in range(m):
            expected = Fraction(m - 1) / (r * r) if i == j else Q0
            assert ric[i][j] == expected


def test_sphere_second_form_skew_and_symmetric():
    x, S_ops, N_basis = sphere_model(3, Fraction(2))
    curv = second_fundamental_form(x, S_ops, N_basis)
    assert curv.skew is True
    assert curv.beta_is_minus_alpha is True
    assert curv.pi_symmetric()


def test_non_orthonormal_frame_rejected():
    x, S_ops, N_basis = sphere_model(2, Fraction(2))
    bad = [S_ops[0].scale(Fraction(2)), S_ops[1]]
    with pytest.raises(ValueError):
        second_fundamental_form(x, bad, N_basis)


# ---------------------------------------------------------------------------
# adjoint orbit at a regular diagonal matrix


def test_adjoint_pi_table():
    lams = (Fraction(1), Fraction(2), Fraction(4))
    table = adjoint_pi(lams)
    for (p, q), diag in table.items():
        d = (lams[q] - lams[p]) ** 2
        expected = [Q0] * 3
        expected[p] = -1 / d
        expected[q] = 1 / d
        assert diag == expected
    assert adjoint_offdiagonal_vanishing(lams)


def test_adjoint_pi_rejects_repeated_eigenvalues():
    with pytest.raises(Exception):
        adjoint_pi((Fraction(1), Fraction(1), Fraction(2)))


# ---------------------------------------------------------------------------
# block form


def test_block_pi_formula():
    X = Mat.rational([[1, 2], [3, 5]])
    Y = Mat.rational([[2, 0], [1, 4]])
    out = block_pi(X, Y)
    XY, YX = X * Y, Y * X
    for i in range(2):
        for j in range(2):
            assert out.a[i][j] == XY.a[i][j]
            assert out.a[2 + i][2 + j] == -YX.a[i][j]
            assert _is_zero(out.a[i][2 + j]) and _is_zero(out.a[2 + i][j])


def test_block_pi_both_routes():
    X = Mat.rational([[0, 1], [1, 1]])
    Y = Mat.rational([[2, 2], [0, 3]])
    assert block_pi_verify(X, Y, Fraction(2), Fraction(5))


# ---------------------------------------------------------------------------
# cyclic shift


@pytest.mark.parametrize("n", range(3, 8))
def test_cyclic_shift_suite(n):
    suite = cyclic_shift_suite(n)
    assert suite["stabilizer_is_c_powers"]
    assert suite["ell_bar_in_S"]
    assert suite["closed_form_matches_trace"]
    assert suite["no_c0_component"]
    assert suite["gamma_squared"] == Fraction(12, n + 1)
    assert suite["gamma_constant_on_ell_ij"]
    assert suite["even_spacing_minimizes"]
    assert suite["riemann_antisymmetry"]


@pytest.mark.parametrize("n,flags", [(3, [0, 1]), (4, [0, 2]), (5, [0, 2]),
                                     (6, [0, 3]), (7, [0, 3])])
def test_cyclic_chart_vanishing_flags(n, flags):
    assert cyclic_shift_suite(n)["chart_vanishing_L"] == flags


def test_cyclic_closed_form_values():
    # spot checks of p_ij^k = (n-1)-(i+j) at k = i+j+1 mod n, k != 0
    assert p_closed(5, 0, 0) == p_trace(5, 0, 0)
    assert p_closed(5, 4, 4)[4] == Fraction(-4)
    assert all(_is_zero(x) for x in p_closed(5, 4, 0))   # wraps to k = 0


def test_cyclic_chart_machinery_n5():
    chart = cyclic_chart_form(5)
    assert chart.osculates is True
    assert chart.chart_matches_projection is True
    P = cyclic_shift_suite(5)["p_tables"]
    for i in range(5):
        for j in range(5):
            assert chart.pi[i][j] == \
                [Q0 if k == 1 else P[i][j][k] for k in range(5)]


def test_gamma_squared_direct():
    n = 5
    assert gamma_squared(ell_bar(n), cyclic_shift(n)) == Fraction(2)


# ---------------------------------------------------------------------------
# Gauss contraction sanity


def test_riemann_antisymmetry_on_sphere():
    x, S_ops, N_basis = sphere_model(3, Fraction(1))
    curv = riemann_and_ricci(second_fundamental_form(x, S_ops, N_basis))
    r = curv.riemann
    m = 3
    for i in range(m):
        for j in range(m):
            for k in range(m):
                for l in range(m):
                    assert r[i][j][k][l] == -r[j][i][k][l]
                    assert r[i][j][k][l] == -r[i][j][l][k]
