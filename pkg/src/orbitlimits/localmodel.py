"""Local model at a base point x: V = TO ⊕ N, gl = H ⊕ S, the θ-map,
exact (1+θ(n))^{-1}, slice stabilizers (S-completion) and Φ.

The solve for (1+θ(n))^{-1} uses the factorization θ(n) = B ∘ λ_S with
B(s-coeffs) = s·n, so only the dim(S) system C = I + λ_S∘B is ever
eliminated; det C = det(1+θ(n)) gives the Δ of the limit pipeline.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .exactcore import (Mat, Q0, Q1, RationalFn, SingularMatrix, UniPoly,
                        _is_zero, _zero_like, det_bareiss, lin_indep_subset,
                        nullspace, rref, solve)
from .lierep import ConjRep, Representation, bracket, stabilizer_algebra


class Projector:
    """Coordinates with respect to a full basis of column vectors.

    When integer coordinate weights are supplied and every basis column is
    weight-pure, the change of basis is inverted blockwise per weight.
    """

    def __init__(self, cols: Sequence[Sequence], coord_weights=None):
        self.n = len(cols)
        if self.n != len(cols[0]):
            raise ValueError("not a square change of basis")
        blocks = None
        if coord_weights is not None:
            colw = []
            pure = True
            for c in cols:
                ws = {coord_weights[i] for i, x in enumerate(c) if not _is_zero(x)}
                if len(ws) != 1:
                    pure = False
                    break
                colw.append(ws.pop())
            if pure:
                blocks = {}
                for j, w in enumerate(colw):
                    blocks.setdefault(w, ([], []))[1].append(j)
                for i, w in enumerate(coord_weights):
                    if w in blocks:
                        blocks[w][0].append(i)
        if blocks is None:
            blocks = {0: (list(range(self.n)), list(range(self.n)))}
        self.blocks = []
        covered = 0
        for w, (coord_idx, col_idx) in sorted(blocks.items()):
            if len(coord_idx) != len(col_idx):
                raise ValueError("weight block not square; basis does not span")
            sub = Mat([[cols[j][i] for j in col_idx] for i in coord_idx])
            inv_cols = solve(sub, [[Q1 if i == j else Q0 for i in range(len(coord_idx))]
                                   for j in range(len(coord_idx))])
            inv = Mat.from_cols(inv_cols)
            self.blocks.append((coord_idx, col_idx, inv))
            covered += len(coord_idx)
        if covered != self.n:
            raise ValueError("weight blocks do not cover all coordinates")

    def coords(self, v: Sequence) -> list:
        out = [Q0] * self.n
        for coord_idx, col_idx, inv in self.blocks:
            sub = [v[i] for i in coord_idx]
            res = inv.apply(sub)
            for j, x in zip(col_idx, res):
                out[j] = x
        return out


def graded_basis(vectors: Sequence[Sequence], coord_weights) -> list[list]:
    """Replace a basis of a weight-graded subspace by a weight-pure one."""
    comps = []
    for v in vectors:
        by_w = {}
        for i, x in enumerate(v):
            if not _is_zero(x):
                by_w.setdefault(coord_weights[i], [Q0] * len(v))[i] = x
        comps.extend(by_w.values())
    idx = lin_indep_subset(comps)
    if len(idx) != len(vectors):
        raise ValueError("subspace is not weight-graded")
    return [comps[k] for k in idx]


class SliceTangent:
    __slots__ = ("sPart", "nPart")

    def __init__(self, sPart, nPart):
        self.sPart = sPart   # coefficients over the S-basis
        self.nPart = nPart   # coefficients over the N-basis


class SliceStabilizer:
    __slots__ = ("elements", "h_parts", "s_parts", "h_coeffs")

    def __init__(self, elements, h_parts, s_parts, h_coeffs):
        self.elements = elements
        self.h_parts = h_parts
        self.s_parts = s_parts
        self.h_coeffs = h_coeffs

    def __len__(self):
        return len(self.elements)


class LocalModel:
    def __init__(self, rep: Representation, x: Sequence, H, S, TO, N,
                 weights=None, levi=None, ambient=None):
        self.rep = rep
        self.x = list(x)
        self.H = H                    # list of Mat (gl elements)
        self.S = S                    # list of Mat
        self.TO = TO                  # list of V-coordinate vectors, TO[i] = S[i].x
        self.N = N                    # list of V-coordinate vectors
        self.weights = weights
        self.levi = levi
        self.ambient = ambient        # optional basis of a subalgebra containing H+S
        cw = None
        if weights is not None:
            cw = [rep.coord_weight(i, weights) for i in range(rep.dim)]
        self._vproj = Projector(TO + N, cw)
        glrep = ConjRep(rep.n)
        glw = None
        if weights is not None:
            glw = [glrep.coord_weight(i, weights) for i in range(glrep.dim)]
        self._glrep = glrep
        if ambient is None:
            self._glproj = Projector([glrep.to_coords(m) for m in H + S], glw)
        else:
            self._glproj = None
            self._glbasis = [glrep.to_coords(m) for m in H + S]

    # -- projections --------------------------------------------------
    def split_V(self, v: Sequence):
        c = self._vproj.coords(v)
        k = len(self.TO)
        return c[:k], c[k:]

    def lamS(self, v: Sequence) -> list:
        """s-coefficients of the TO-component (lambda_S: V -> S-coeffs)."""
        return self.split_V(v)[0]

    def lamN(self, v: Sequence) -> list:
        return self.split_V(v)[1]

    def split_gl(self, g: Mat):
        if self._glproj is not None:
            c = self._glproj.coords(self._glrep.to_coords(g))
        else:
            from .exactcore import coords_in_basis
            c = coords_in_basis(self._glbasis, self._glrep.to_coords(g))
            if c is None:
                raise ValueError("element not in the ambient algebra H + S")
        k = len(self.H)
        return c[:k], c[k:]

    def n_vec(self, ncoeffs: Sequence) -> list:
        """N-coefficients -> V-coordinate vector."""
        out = [Q0] * self.rep.dim
        for c, nv in zip(ncoeffs, self.N):
            if _is_zero(c):
                continue
            for i, x in enumerate(nv):
                if not _is_zero(x):
                    out[i] = out[i] + c * x
        return out

    def s_mat(self, scoeffs: Sequence) -> Mat:
        n = self.rep.n
        out = Mat.zeros(n, n)
        for c, s in zip(scoeffs, self.S):
            if _is_zero(c):
                continue
            out = out + s.scale(c)
        return out

    def h_mat(self, hcoeffs: Sequence) -> Mat:
        n = self.rep.n
        out = Mat.zeros(n, n)
        for c, h in zip(hcoeffs, self.H):
            if _is_zero(c):
                continue
            out = out + h.scale(c)
        return out

    # -- theta --------------------------------------------------------
    def theta(self, n: Sequence, dv: Sequence) -> list:
        """θ(n)(dv) = λ_S(dv)·n, as a V-coordinate vector."""
        s = self.s_mat(self.lamS(dv))
        return self.rep.act(s, list(n))

    def theta_matrix(self, n: Sequence) -> Mat:
        cols = []
        for k in range(self.rep.dim):
            e = [Q0] * self.rep.dim
            e[k] = Q1
            cols.append(self.theta(n, e))
        return Mat.from_cols(cols)

    def _B_cols(self, n: Sequence) -> list[list]:
        return [self.rep.act(s, list(n)) for s in self.S]

    def _C_matrix(self, n: Sequence, bcols=None) -> Mat:
        """C = I_S + λ_S ∘ B on S-coefficients; det C = det(1+θ(n))."""
        bcols = self._B_cols(n) if bcols is None else bcols
        k = len(self.S)
        lam = [self.lamS(b) for b in bcols]
        rows = []
        for i in range(k):
            rows.append([lam[j][i] + (1 if i == j else 0) for j in range(k)])
        return Mat(rows)

    def delta(self, n: Sequence):
        """det(1 + θ(n))."""
        return det_bareiss(self._C_matrix(n))

    def inv_one_plus_theta(self, n: Sequence, dvs: Sequence[Sequence]) -> list[list]:
        """(1+θ(n))^{-1} applied to each V-vector in dvs."""
        bcols = self._B_cols(n)
        C = self._C_matrix(n, bcols)
        rhs = [self.lamS(dv) for dv in dvs]
        try:
            us = solve(C, rhs) if self.S else [[] for _ in dvs]
        except ValueError as e:
            raise SingularMatrix(f"1+theta(n) is singular: {e}") from e
        out = []
        for dv, u in zip(dvs, us):
            w = list(dv)
            for uj, b in zip(u, bcols):
                if _is_zero(uj):
                    continue
                w = [a - uj * x for a, x in zip(w, b)]
            out.append(w)
        return out

    # -- slice formulas -----------------------------------------------
    def solve_decomposition(self, n: Sequence, dv: Sequence):
        """The unique (s, n') with s·(x+n) + n' = dv.

        Returns (s-coefficients, n'-coefficients over the N-basis).
        """
        w = self.inv_one_plus_theta(n, [dv])[0]
        sc, nc = self.split_V(w)
        return sc, nc

    def local_action(self, g: Mat, n: Sequence) -> SliceTangent:
        """The induced action of g at the slice point x+n."""
        hc, sc = self.split_gl(g)
        h = self.h_mat(hc)
        hn = self.rep.act(h, list(n))
        s2, n2 = self.solve_decomposition(n, hn)
        return SliceTangent([a + b for a, b in zip(sc, s2)], n2)

    def slice_stabilizer(self, n: Sequence) -> SliceStabilizer:
        """Stabilizer of x+n: elements h + s with λ_N((1+θ(n))^{-1}(h·n)) = 0
        and s = -λ_S((1+θ(n))^{-1}(h·n))."""
        hns = [self.rep.act(h, list(n)) for h in self.H]
        ws = self.inv_one_plus_theta(n, hns)
        splits = [self.split_V(w) for w in ws]
        MN = Mat.from_cols([nc for (_, nc) in splits]) if self.N else Mat.zeros(0, len(self.H))
        ker = nullspace(MN) if self.H else []
        elements, h_parts, s_parts, h_coeffs = [], [], [], []
        for alpha in ker:
            h = self.h_mat(alpha)
            sc = [Q0] * len(self.S)
            for aj, (scj, _) in zip(alpha, splits):
                if _is_zero(aj):
                    continue
                sc = [a - aj * b for a, b in zip(sc, scj)]
            s = self.s_mat(sc)
            elements.append(h + s)
            h_parts.append(h)
            s_parts.append(s)
            h_coeffs.append(alpha)
        return SliceStabilizer(elements, h_parts, s_parts, h_coeffs)

    def phi(self, scoeffs: Sequence, n: Sequence) -> list:
        """Φ(s ⊗ n) = λ_S(s·n)."""
        return self.lamS(self.rep.act(self.s_mat(scoeffs), list(n)))

    def star(self, h: Mat, n: Sequence) -> list:
        """h ⋆ n = λ_N(h·n), the induced H-action on N ≅ V/TO."""
        return self.lamN(self.rep.act(h, list(n)))

    def verify(self):
        glrep = self._glrep
        ambient_dim = glrep.dim if self.ambient is None else len(self.ambient)
        if len(self.H) + len(self.S) != ambient_dim:
            raise ValueError("H + S does not fill the ambient algebra")
        if len(self.TO) + len(self.N) != self.rep.dim:
            raise ValueError("TO + N does not fill V")
        for s, to in zip(self.S, self.TO):
            if self.rep.act(s, self.x) != list(to):
                raise ValueError("TO basis is not S.x")
        if self.levi is not None:
            R, Qpart = self.levi
            for r in R:
                rn_cols = [self.rep.act(r, list(nv)) for nv in self.N]
                for c in rn_cols:
                    if any(not _is_zero(x) for x in self.lamS(c)):
                        raise ValueError("reductive part does not preserve N")
        return True


def _orthocomplement(vectors: Sequence[Sequence], dim: int) -> list[list]:
    """Coefficientwise orthogonal complement of the span inside Q^dim."""
    if not vectors:
        return [[Q1 if i == j else Q0 for i in range(dim)] for j in range(dim)]
    return nullspace(Mat([list(v) for v in vectors]))


class NotTransverse(ValueError):
    pass


def build_local_model(rep: Representation, x: Sequence, policy: str = "orthogonal",
                      S: Optional[Sequence[Mat]] = None,
                      N: Optional[Sequence[Sequence]] = None,
                      N_contains: Optional[Sequence[Sequence]] = None,
                      weights=None, levi=None,
                      ambient: Optional[Sequence[Mat]] = None) -> LocalModel:
    """Build the local model at x.

    policy 'orthogonal': complements are coefficientwise-orthogonal (the
    positive-definite trace pairing Tr(a b^T) on gl, the coefficient inner
    product on V).  policy 'explicit': S and/or N supplied and validated.
    N_contains lists vectors that must lie inside N (the expansion tail of a
    limit pipeline); N is then completed with coordinate vectors.  ambient
    restricts the acting algebra to a subalgebra of gl (e.g. sl via its
    trace-zero basis).
    """
    x = list(x)
    if all(_is_zero(c) for c in x):
        raise ValueError("base point x must be nonzero")
    glrep = ConjRep(rep.n)
    cw = [rep.coord_weight(i, weights) for i in range(rep.dim)] if weights is not None else None
    glw = [glrep.coord_weight(i, weights) for i in range(glrep.dim)] if weights is not None else None

    if ambient is None:
        H = stabilizer_algebra(rep, x)
        ambient_dim = glrep.dim
    else:
        # stabilizer within the span of the ambient basis
        cols = Mat.from_cols([rep.act(a, x) for a in ambient])
        H = []
        for co in nullspace(cols):
            m = Mat.zeros(rep.n, rep.n)
            for c, a in zip(co, ambient):
                if not _is_zero(c):
                    m = m + a.scale(c)
            H.append(m)
        ambient_dim = len(ambient)
    if cw is not None:
        H = [glrep.from_coords(v) for v in
             graded_basis([glrep.to_coords(h) for h in H], glw)]

    if policy == "explicit" and S is not None:
        Sb = list(S)
        idx = lin_indep_subset([glrep.to_coords(m) for m in H + Sb])
        if len(idx) != len(H) + len(Sb) or len(H) + len(Sb) != ambient_dim:
            raise NotTransverse("supplied S is not a complement of the stabilizer")
    elif ambient is not None:
        # complement of H inside the ambient span, orthogonal in ambient coords
        amb_cols = [glrep.to_coords(a) for a in ambient]
        h_in_amb = []
        from .exactcore import coords_in_basis
        for h in H:
            co = coords_in_basis(amb_cols, glrep.to_coords(h))
            h_in_amb.append(co)
        comp = _orthocomplement(h_in_amb, len(ambient))
        Sb = []
        for co in comp:
            m = Mat.zeros(rep.n, rep.n)
            for c, a in zip(co, ambient):
                if not _is_zero(c):
                    m = m + a.scale(c)
            Sb.append(m)
    else:
        comp = _orthocomplement([glrep.to_coords(h) for h in H], glrep.dim)
        if glw is not None:
            comp = graded_basis(comp, glw)
        Sb = [glrep.from_coords(v) for v in comp]

    TO = [rep.act(s, x) for s in Sb]
    if len(lin_indep_subset(TO)) != len(TO):
        raise NotTransverse("S does not inject into the tangent space")

    if policy == "explicit" and N is not None:
        Nb = [list(v) for v in N]
    else:
        contained = [list(v) for v in (N_contains or [])]
        if contained:
            idx = lin_indep_subset(TO + contained)
            extra = [contained[k - len(TO)] for k in idx if k >= len(TO)]
            if len(extra) != len(lin_indep_subset(contained)):
                raise NotTransverse("N_contains meets the tangent space")
            Nb = list(extra)
            for j in range(rep.dim):
                if len(TO) + len(Nb) == rep.dim:
                    break
                unit = [Q0] * rep.dim
                unit[j] = Q1
                if len(lin_indep_subset(TO + Nb + [unit])) == len(TO) + len(Nb) + 1:
                    Nb.append(unit)
        else:
            Nb = _orthocomplement(TO, rep.dim)
            if cw is not None:
                Nb = graded_basis(Nb, cw)
    if len(lin_indep_subset(TO + Nb)) != rep.dim or len(TO) + len(Nb) != rep.dim:
        raise NotTransverse("supplied N is not a complement of the tangent space")

    model = LocalModel(rep, x, H, Sb, TO, Nb, weights=weights, levi=levi,
                       ambient=list(ambient) if ambient is not None else None)
    model.verify()
    return model
