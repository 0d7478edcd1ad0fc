"""Limits of forms under one-parameter subgroups: K(t), K0, feasibility."""

from fractions import Fraction

import pytest

from orbitlimits.examples import (LAM4, O2_LAM, O3_LAM, det3_form, o2_form,
                                  o3_form, o3_reference_kt, q4_form,
                                  q4_prime_form, O3_STRUCTURE)
from orbitlimits.exactcore import (Mat, Q0, RationalFn, UniPoly,
                                   coords_in_basis, _is_zero)
from orbitlimits.lierep import ConjRep, Form, SymRep, bracket, elementary
from orbitlimits.limits import (OnePS, check_graded_conditions, classify_case,
                                expand_orbit_curve, extension_feasible,
                                filtered_dims, hoffman_case, limit_algebra,
                                limit_algebra_by_conjugation, same_span,
                                tangent_of_exit, triple_stabilizers)
from orbitlimits.reproduce import _lam_data


@pytest.fixture(scope="module")
def o2_data():
    return limit_algebra(o2_form(), O2_LAM)


@pytest.fixture(scope="module")
def o3_data():
    return limit_algebra(o3_form(), O3_LAM)


# ---------------------------------------------------------------------------
# expansions


def test_o2_expansion():
    exp = expand_orbit_curve(o2_form(), O2_LAM)
    assert (exp.a, exp.b) == (0, 2)
    assert exp.g == Form(2, 4, {(0, 4): 1})          # y^4
    assert exp.f_b == Form(2, 4, {(2, 2): 2})        # 2 y^2 z^2
    assert exp.transversal is True


def test_trivial_oneps_gives_whole_form():
    f = o2_form()
    exp = expand_orbit_curve(f, OnePS([0, 0]))
    assert exp.g == f and exp.b is None


def test_tangent_of_exit_o2():
    te = tangent_of_exit(o2_form(), O2_LAM)
    assert te.direction == Form(2, 4, {(2, 2): 2, (4, 0): 2})


# ---------------------------------------------------------------------------
# O2: K(t), K0, feasibility


def test_o2_kt_and_k0(o2_data):
    assert len(o2_data.Kt) == 1
    kt = o2_data.Kt[0].mat
    alpha = kt.a[0][1]
    assert not _is_zero(alpha)
    assert kt.a[1][0] == alpha * RationalFn.coerce(UniPoly.t(2, -1))
    k0 = o2_data.K0[0]
    assert k0 == elementary(2, 0, 1, k0.a[0][1])


def test_o2_feasibility(o2_data):
    feas = extension_feasible(o2_data)
    assert feas.feasible
    assert feas.hoffman == 3
    assert feas.regular == (True, True)


def test_o2_case_classification():
    assert classify_case(o2_form(), O2_LAM).tag == "A"


def test_o2_filtered_dims():
    fd = filtered_dims(o2_form(), O2_LAM)
    # dim K = 1 and the element has a weight -1 component
    assert fd[-1] == 1 and fd[0] == 0


# ---------------------------------------------------------------------------
# O3: structure constants over Q(t)


def test_o3_kt_spans_printed_basis(o3_data):
    assert len(o3_data.Kt) == 3
    printed = [k.map(RationalFn.coerce) for k in o3_reference_kt()]
    assert same_span([kt.mat for kt in o3_data.Kt], printed, 3)


def test_o3_printed_structure_constants():
    kt = o3_reference_kt()
    for (i, j), coeffs in O3_STRUCTURE.items():
        br = kt[i] * kt[j] - kt[j] * kt[i]
        rhs = Mat.zeros(3, 3, zero=UniPoly.zero())
        for cf, km in zip(coeffs, kt):
            rhs = rhs + km.map(lambda x, cf=cf: cf * x)
        assert br == rhs


def test_o3_case_classification():
    assert classify_case(o3_form(), O3_LAM).tag == "B"


def test_o3_computed_structure_closed(o3_data):
    sc = o3_data.structure_constants()
    assert sorted(sc) == [(0, 1), (0, 2), (1, 2)]


# ---------------------------------------------------------------------------
# dual pipeline


def test_dual_pipeline_o2():
    d1 = limit_algebra(o2_form(), O2_LAM)
    d2 = limit_algebra_by_conjugation(o2_form(), O2_LAM)
    assert same_span(d1.K0, d2.K0, 2)


def test_dual_pipeline_o3():
    d1 = limit_algebra(o3_form(), O3_LAM)
    d2 = limit_algebra_by_conjugation(o3_form(), O3_LAM)
    assert same_span(d1.K0, d2.K0, 3)


# ---------------------------------------------------------------------------
# det3 with lambda_4 (the cheapest-to-state full-size case)


@pytest.fixture(scope="module")
def lam4_data():
    return _lam_data("l4")


def test_lam4_expansion(lam4_data):
    exp = lam4_data.expansion
    assert (exp.a, exp.b) == (1, 2)
    assert exp.g == q4_form()
    assert exp.f_b == q4_prime_form()


def test_lam4_k0_dims(lam4_data):
    assert len(lam4_data.K0) == 16
    assert lam4_data.graded_dims_tuple() == (1, 10, 5)


def test_lam4_filtered_dims():
    fd = filtered_dims(det3_form(), LAM4)
    assert fd == {-1: 16, 0: 11, 1: 1, 2: 0}


def test_lam4_triple_stabilizers():
    ts = triple_stabilizers(det3_form(), LAM4)
    assert ts.klf_dims_tuple() == (1, 6, 1)
    assert len(ts.K) == 16


# ---------------------------------------------------------------------------
# graded conditions and K0 invariants


def test_o2_graded_conditions(o2_data):
    conds = check_graded_conditions(o2_data)
    assert conds and all(c["status"] in ("solved", "zero") for c in conds)


def test_k0_killed_by_star(o2_data):
    # every k in K0 lies in H and annihilates f_b modulo the tangent space
    model = o2_data.model
    rep = o2_data.rep
    fb = rep.to_coords(o2_data.expansion.f_b)
    glrep = ConjRep(2)
    h_flat = [glrep.to_coords(m) for m in model.H]
    for k in o2_data.K0:
        assert coords_in_basis(h_flat, glrep.to_coords(k)) is not None
        # star-annihilation: lambda_N(k . f_b) = 0
        assert all(_is_zero(x) for x in model.star(k, fb))


def test_k0_bracket_closed(o3_data):
    glrep = ConjRep(3)
    flat = [glrep.to_coords(m) for m in o3_data.K0]
    for i in range(len(o3_data.K0)):
        for j in range(i + 1, len(o3_data.K0)):
            br = glrep.to_coords(bracket(o3_data.K0[i], o3_data.K0[j]))
            assert coords_in_basis(flat, br) is not None


def test_hoffman_requires_codim_one():
    H = [elementary(2, 0, 1), elementary(2, 1, 0)]
    assert hoffman_case(H, H, 2) is None
