"""gl(X), its bracket, and its actions on forms and on matrices.

Conventions (pinned by the Sym^2 worked example):
  * a matrix g acts on polynomials as the derivation
        g . f = sum_{i,j} g[i][j] * x_j * d f / d x_i
    so E_ij sends x_i to x_j and the action of [[a,b],[c,-a]] on x^2 is
    2a x^2 + 2b xy;
  * on matrices g acts by commutator, g . y = g y - y g;
  * monomial bases are ordered graded-lexicographically in the given
    variable order, matrix-entry bases row-major.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence

from .exactcore import (Mat, Q0, Q1, _as_fraction, _is_zero, lin_indep_subset,
                        nullspace)


class Form:
    """Homogeneous polynomial over Q: dict {exponent tuple: coefficient}."""

    __slots__ = ("nvars", "degree", "terms")

    def __init__(self, nvars: int, degree: int, terms: dict):
        self.nvars = nvars
        self.degree = degree
        t = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars or sum(e) != degree:
                raise ValueError(f"exponent {e} not of degree {degree} in {nvars} vars")
            if not _is_zero(c):
                t[e] = t.get(e, Q0) + c
                if _is_zero(t[e]):
                    del t[e]
        self.terms = t

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (isinstance(other, Form) and self.nvars == other.nvars
                and self.degree == other.degree and self.terms == other.terms)

    def __add__(self, other: "Form") -> "Form":
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Q0) + c
        return Form(self.nvars, self.degree, t)

    def __sub__(self, other: "Form") -> "Form":
        return self + other.scale(-1)

    def scale(self, s) -> "Form":
        return Form(self.nvars, self.degree, {e: c * s for e, c in self.terms.items()})

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            mono = "*".join(f"x{i+1}^{k}" if k > 1 else f"x{i+1}"
                            for i, k in enumerate(e) if k)
            parts.append(f"({self.terms[e]})*{mono}" if mono else f"({self.terms[e]})")
        return " + ".join(parts)


def monomial_basis(nvars: int, degree: int) -> list[tuple]:
    """All exponent tuples of the given total degree, graded-lex order."""
    out = []

    def rec(prefix, rem, slots):
        if slots == 1:
            out.append(prefix + (rem,))
            return
        for k in range(rem, -1, -1):
            rec(prefix + (k,), rem - k, slots - 1)

    rec((), degree, nvars)
    return out


class SymRep:
    """gl(nvars) acting on Sym^degree by derivations."""

    def __init__(self, nvars: int, degree: int):
        self.nvars = nvars
        self.degree = degree
        self.basis = monomial_basis(nvars, degree)
        self.index = {e: i for i, e in enumerate(self.basis)}
        self.dim = len(self.basis)
        self.n = nvars

    def to_coords(self, f: Form) -> list:
        v = [Q0] * self.dim
        for e, c in f.terms.items():
            v[self.index[e]] = c
        return v

    def from_coords(self, v: Sequence) -> Form:
        return Form(self.nvars, self.degree,
                    {e: c for e, c in zip(self.basis, v) if not _is_zero(c)})

    def act_elementary(self, i: int, j: int, v: Sequence) -> list:
        """E_ij . v  =  x_j d/dx_i applied coordinatewise."""
        out = [Q0] * self.dim
        for idx, c in enumerate(v):
            if _is_zero(c):
                continue
            e = self.basis[idx]
            if e[i] == 0:
                continue
            mult = e[i]
            ee = list(e)
            ee[i] -= 1
            ee[j] += 1
            tgt = self.index[tuple(ee)]
            out[tgt] = out[tgt] + mult * c
        return out

    def act(self, g: Mat, v: Sequence) -> list:
        out = [Q0] * self.dim
        for i in range(self.n):
            for j in range(self.n):
                gij = g.a[i][j]
                if _is_zero(gij):
                    continue
                for idx, x in enumerate(self.act_elementary(i, j, v)):
                    if not _is_zero(x):
                        out[idx] = out[idx] + gij * x
        return out

    def coord_weight(self, idx: int, weights: Sequence[int]) -> int:
        return sum(k * w for k, w in zip(self.basis[idx], weights))

    def act_weight(self, i: int, j: int, weights: Sequence[int]) -> int:
        """Weight of E_ij as an operator: it moves V_chi to V_{chi+w}.

        E_ij = x_j d/dx_i trades one x_i for one x_j, so w = d_j - d_i.
        This is also the grading of gl under conjugation by the 1-PS
        (Hom(Z,Y) sits in degree -1 when Z scales by t and Y is fixed).
        """
        return weights[j] - weights[i]


class ConjRep:
    """gl(n) acting on n x n matrices by commutator."""

    def __init__(self, n: int):
        self.n = n
        self.basis = [(i, j) for i in range(n) for j in range(n)]
        self.index = {p: k for k, p in enumerate(self.basis)}
        self.dim = n * n
        self.nvars = n

    def to_coords(self, m: Mat) -> list:
        return [m.a[i][j] for (i, j) in self.basis]

    def from_coords(self, v: Sequence) -> Mat:
        n = self.n
        return Mat([[v[i * n + j] for j in range(n)] for i in range(n)])

    def act_elementary(self, i: int, j: int, v: Sequence) -> list:
        # E_ij . Y = E_ij Y - Y E_ij
        n = self.n
        out = [Q0] * self.dim
        for k in range(n):
            x = v[j * n + k]          # (E_ij Y)[i,k] = Y[j,k]
            if not _is_zero(x):
                out[i * n + k] = out[i * n + k] + x
            x = v[k * n + i]          # (Y E_ij)[k,j] = Y[k,i]
            if not _is_zero(x):
                out[k * n + j] = out[k * n + j] - x
        return out

    def act(self, g: Mat, v: Sequence) -> list:
        m = self.from_coords(list(v))
        gm = Mat([[g.a[i][j] for j in range(self.n)] for i in range(self.n)])
        return self.to_coords(gm * m - m * gm)

    def coord_weight(self, idx: int, weights: Sequence[int]) -> int:
        i, j = self.basis[idx]
        return weights[i] - weights[j]

    def act_weight(self, i: int, j: int, weights: Sequence[int]) -> int:
        """Weight of E_ij acting by commutator: lam E_ij lam^{-1} = t^{d_i-d_j} E_ij."""
        return weights[i] - weights[j]


Representation = SymRep | ConjRep


def bracket(a: Mat, b: Mat) -> Mat:
    if a.rows != b.rows or a.cols != b.cols:
        raise ValueError("bracket dimension mismatch")
    return a * b - b * a


def act_on_form(g: Mat, f: Form) -> Form:
    rep = SymRep(f.nvars, f.degree)
    return rep.from_coords(rep.act(g, rep.to_coords(f)))


def act_on_matrix(g: Mat, y: Mat) -> Mat:
    if g.rows != y.rows or g.cols != y.cols:
        raise ValueError("act_on_matrix dimension mismatch")
    return g * y - y * g


def substitute_linear(f: Form, rows: Sequence[Sequence]) -> dict:
    """Exponent->coefficient mapping of f after x_i -> sum_j rows[i][j]*x_j.

    Coefficients may be Fraction or UniPoly (for polynomial families A(t));
    the result dict is over whatever scalar type closes under + and *.
    """
    nv = f.nvars
    zero_exp = (0,) * nv

    def mul_linear(poly: dict, row) -> dict:
        out = {}
        for e, c in poly.items():
            for j, a in enumerate(row):
                if _is_zero(a):
                    continue
                ee = list(e)
                ee[j] += 1
                key = tuple(ee)
                prev = out.get(key)
                out[key] = a * c if prev is None else prev + a * c
        return {e: c for e, c in out.items() if not _is_zero(c)}

    total: dict = {}
    for e, coef in f.terms.items():
        poly = {zero_exp: coef}
        for i, k in enumerate(e):
            for _ in range(k):
                poly = mul_linear(poly, rows[i])
        for ee, c in poly.items():
            prev = total.get(ee)
            total[ee] = c if prev is None else prev + c
    return {e: c for e, c in total.items() if not _is_zero(c)}


def group_act_form(A: Mat, f: Form) -> Form:
    """The group action consistent with the derivation action: substitution
    x_i -> sum_j A[i][j] x_j (so A = I + eps*g perturbs f by eps * g.f)."""
    return Form(f.nvars, f.degree, substitute_linear(f, A.a))


def elementary(n: int, i: int, j: int, coef=Q1) -> Mat:
    m = Mat.zeros(n, n)
    m.a[i][j] = _as_fraction(coef) if isinstance(coef, (int, str, Fraction)) else coef
    return m


def action_matrix(rep: Representation, g: Mat) -> Mat:
    """The dim(V) x dim(V) matrix of the action of g on the chosen basis."""
    cols = []
    for k in range(rep.dim):
        v = [Q0] * rep.dim
        v[k] = Q1
        cols.append(rep.act(g, v))
    return Mat.from_cols(cols)


def _action_map_matrix(rep: Representation, v: Sequence) -> Mat:
    """Matrix of g |-> rho(g).v : gl -> V; columns indexed by E_ij row-major."""
    n = rep.n
    cols = []
    for i in range(n):
        for j in range(n):
            cols.append(rep.act_elementary(i, j, list(v)))
    return Mat.from_cols(cols)


def stabilizer_algebra(rep: Representation, v: Sequence) -> list[Mat]:
    """Basis of {g in gl : rho(g).v = 0}, deterministic order."""
    n = rep.n
    ker = nullspace(_action_map_matrix(rep, v))
    out = []
    for w in ker:
        out.append(Mat([[w[i * n + j] for j in range(n)] for i in range(n)]))
    return out


def tangent_space(rep: Representation, v: Sequence) -> list[list]:
    """Basis of the image {rho(g).v : g in gl} as V-coordinate vectors."""
    m = _action_map_matrix(rep, v)
    cols = m.columns()
    idx = lin_indep_subset(cols)
    return [cols[k] for k in idx]
