"""Projective orbit closures of matrices under conjugation.

Combinatorics of partitions and Jordan data, the X_k^r separating
varieties, the dominance test "theta trianglelefteq chi" deciding which
nilpotent signatures occur in a projective orbit closure, constructive
witness families, and the slice analyses at J_n and J_{a,b}.

Conventions:
  * companion matrices follow the layout with -c_{m-1},...,-c_0 down the
    first column and 1s on the superdiagonal, so the characteristic (and
    minimal) polynomial of companion(c) is X^m + c_{m-1}X^{m-1} + ... + c_0;
  * the witness 1-PS A(t) = diag(t, t^2, ..., t^n) acts by conjugation,
    (A x A^{-1})[i][j] = t^{i-j} x[i][j], and the lowest t-power of the
    conjugated block-companion matrix is t^{-1} J_chi.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Sequence

from .exactcore import (Mat, Q0, Q1, UniPoly, _as_fraction, _is_zero,
                        nullspace, rank)
from .lierep import ConjRep, elementary, stabilizer_algebra
from .limits import charpoly, is_nilpotent_matrix, _poly_of_matrix
from .localmodel import LocalModel, build_local_model


# ---------------------------------------------------------------------------
# partitions
# ---------------------------------------------------------------------------

class Partition:
    """A partition of n: weakly decreasing positive parts."""

    __slots__ = ("parts", "n")

    def __init__(self, parts: Sequence[int]):
        parts = tuple(int(p) for p in parts if p)
        if any(p <= 0 for p in parts):
            raise ValueError("partition parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("partition parts must be weakly decreasing")
        self.parts = parts
        self.n = sum(parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        other = Partition(other) if not isinstance(other, Partition) else other
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition{self.parts}"

    def part(self, j: int) -> int:
        """The j-th part (1-indexed), 0 beyond the end."""
        return self.parts[j - 1] if 1 <= j <= len(self.parts) else 0


def transpose(p: Partition) -> Partition:
    """gamma_i = #{j : p_j >= i}; an involution preserving n."""
    p = p if isinstance(p, Partition) else Partition(p)
    if not p.parts:
        return Partition(())
    return Partition([sum(1 for a in p.parts if a >= i)
                      for i in range(1, p.parts[0] + 1)])


def dominates(a: Partition, b: Partition) -> bool:
    """All prefix sums of a are >= those of b (partitions of the same n)."""
    a = a if isinstance(a, Partition) else Partition(a)
    b = b if isinstance(b, Partition) else Partition(b)
    if a.n != b.n:
        raise ValueError(f"partitions of different sizes: {a.n} vs {b.n}")
    sa = sb = 0
    for i in range(max(len(a), len(b))):
        sa += a.part(i + 1)
        sb += b.part(i + 1)
        if sa < sb:
            return False
    return True


def all_partitions(n: int) -> list[Partition]:
    """All partitions of n (largest part first, lexicographic)."""
    out = []

    def rec(rem, maxp, prefix):
        if rem == 0:
            out.append(Partition(prefix))
            return
        for p in range(min(rem, maxp), 0, -1):
            rec(rem - p, p, prefix + [p])

    rec(n, n, [])
    return out


class NilpotentSignature(Partition):
    """The Jordan-block-size partition of a nilpotent matrix."""


# ---------------------------------------------------------------------------
# Jordan data
# ---------------------------------------------------------------------------

class JordanSpec:
    """Eigenvalue -> Jordan-block-size partition data of a matrix.

    Eigenvalues may be rationals or hashable symbolic labels (strings);
    only the multiplicity structure enters the closure theorem, but
    witness families require rational eigenvalues.
    """

    __slots__ = ("blocks", "n")

    def __init__(self, blocks: Sequence[tuple]):
        seen = set()
        bl = []
        for ev, sizes in blocks:
            ev = _as_fraction(ev) if isinstance(ev, (int, str, Fraction)) and not (
                isinstance(ev, str) and not _looks_rational(ev)) else ev
            if ev in seen:
                raise ValueError(f"repeated eigenvalue {ev!r}")
            seen.add(ev)
            bl.append((ev, sizes if isinstance(sizes, Partition) else Partition(sizes)))
        self.blocks = bl
        self.n = sum(p.n for _, p in bl)

    def __repr__(self):
        return f"JordanSpec({self.blocks!r})"

    @classmethod
    def diagonalizable(cls, multiplicities: dict) -> "JordanSpec":
        """Spec of a diagonalizable matrix: eigenvalue -> multiplicity."""
        return cls([(ev, Partition([1] * m)) for ev, m in multiplicities.items()])

    @classmethod
    def from_matrix(cls, m: Mat) -> "JordanSpec":
        """Jordan data of a rational matrix with all-rational eigenvalues.

        Eigenvalues are extracted as rational roots of the characteristic
        polynomial; raises if any irrational/complex eigenvalue remains.
        """
        n = m.rows
        p = charpoly(m)
        roots = _rational_roots(p)
        total = sum(mult for _, mult in roots)
        if total != n:
            raise ValueError("matrix has non-rational eigenvalues; "
                             "supply a JordanSpec with symbolic labels instead")
        blocks = []
        for ev, mult in roots:
            shifted = m - Mat.identity(n).scale(ev)
            # lambda^T_k = dim ker((m - ev)^k) - dim ker((m - ev)^{k-1})
            tparts = []
            prev = 0
            power = Mat.identity(n)
            for _ in range(mult):
                power = power * shifted
                kd = n - rank(power)
                tparts.append(kd - prev)
                prev = kd
                if kd == mult:
                    break
            blocks.append((ev, transpose(Partition(tparts))))
        return cls(blocks)

    def is_diagonalizable(self) -> bool:
        return all(all(p == 1 for p in sizes) for _, sizes in self.blocks)

    def spectrum_partition(self) -> Partition:
        """Multiplicity partition (diagonalizable specs only)."""
        if not self.is_diagonalizable():
            raise ValueError("spectrum partition is defined for diagonalizable specs")
        return Partition(sorted((len(sizes) for _, sizes in self.blocks), reverse=True))

    def to_matrix(self) -> Mat:
        """The Jordan canonical form (rational eigenvalues only)."""
        mats = []
        for ev, sizes in self.blocks:
            if not isinstance(ev, Fraction):
                raise ValueError("symbolic eigenvalues have no matrix realization")
            for s in sizes:
                mats.append(jordan_block(s, ev))
        return direct_sum(mats)


def _looks_rational(s: str) -> bool:
    try:
        Fraction(s)
        return True
    except ValueError:
        return False


def _rational_roots(p: UniPoly) -> list[tuple]:
    """[(root, multiplicity)] of the rational roots of p, over Q."""
    coeffs = {e: c for e, c in p.c.items() if not _is_zero(c)}
    if not coeffs:
        return []
    from math import gcd
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // gcd(den, c.denominator)
    ic = {e: int(c * den) for e, c in coeffs.items()}
    v = min(ic)
    lead = ic[max(ic)]
    # candidate roots a/b with a | constant term (of p / X^v), b | leading
    c0 = ic[v]
    cands = {Fraction(0)} if v > 0 else set()
    for a in _divisors(abs(c0)):
        for b in _divisors(abs(lead)):
            cands.add(Fraction(a, b))
            cands.add(Fraction(-a, b))
    out = []
    for r in sorted(cands):
        mult = 0
        q = p
        while q.degree() >= 1 and _is_zero(q(r)):
            q = q.exact_div(UniPoly({1: Q1, 0: -r}))
            mult += 1
        if mult:
            out.append((r, mult))
    return out


def _divisors(m: int) -> list[int]:
    m = abs(m)
    if m == 0:
        return [1]
    out = []
    d = 1
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            out.append(m // d)
        d += 1
    return sorted(set(out))


def transpose_block_spectrum(spec: JordanSpec) -> Partition:
    """chi_j = sum over eigenvalues of the j-th largest block size."""
    if not spec.blocks:
        return Partition(())
    depth = max(len(sizes) for _, sizes in spec.blocks)
    return Partition([sum(sizes.part(j) for _, sizes in spec.blocks)
                      for j in range(1, depth + 1)])


def nilpotent_signature(m: Mat) -> NilpotentSignature:
    """Block-size partition of a nilpotent matrix, from ranks of powers."""
    n = m.rows
    if not is_nilpotent_matrix(m):
        raise ValueError("matrix is not nilpotent")
    tparts = []
    prev = n
    power = Mat.identity(n)
    while True:
        power = power * m
        r = rank(power)
        tparts.append(prev - r)
        prev = r
        if r == 0:
            break
    return NilpotentSignature(transpose(Partition(tparts)).parts)


# ---------------------------------------------------------------------------
# the X_k^r membership predicate
# ---------------------------------------------------------------------------

def in_Xkr(spec, k: int, r: int) -> bool:
    """Membership in X_k^r = {x : rank((x-l_1 I)...(x-l_k I)) <= r for some
    eigenvalues l_i of x}, decided combinatorially.

    The minimal achievable rank is n minus the sum of the k largest entries
    of the concatenated transpose partitions (each extra factor (x - mu)
    drops the rank by the number of mu-blocks not yet exhausted).
    """
    if k < 0 or r < 0:
        raise ValueError("k and r must be nonnegative")
    if isinstance(spec, JordanSpec):
        entries = [e for _, sizes in spec.blocks for e in transpose(sizes)]
        n = spec.n
    else:
        p = spec if isinstance(spec, Partition) else Partition(spec)
        entries = list(transpose(p))
        n = p.n
    entries.sort(reverse=True)
    drop = sum(entries[:k])
    return n - drop <= r


# ---------------------------------------------------------------------------
# the closure decision
# ---------------------------------------------------------------------------

class ClosureDecision:
    __slots__ = ("contains", "chi", "theta", "separating", "family")

    def __init__(self, contains, chi, theta, separating=None, family=None):
        self.contains = contains
        self.chi = chi
        self.theta = theta
        self.separating = separating  # (k, r) with x in X_k^r, theta not
        self.family = family          # WitnessFamily when contains and rational

    def __bool__(self):
        return bool(self.contains)


def closure_contains_nilpotent(spec: JordanSpec, theta) -> ClosureDecision:
    """Does the projective conjugation-orbit closure of spec contain
    nilpotents of signature theta?  True iff theta is dominated by the
    transpose block-spectrum chi; returns the separating (k, r) pair on
    failure and the constructive witness family on success."""
    theta = theta if isinstance(theta, Partition) else Partition(theta)
    if theta.n != spec.n:
        raise ValueError(f"size mismatch: partition of {theta.n} vs spec of size {spec.n}")
    chi = transpose_block_spectrum(spec)
    if dominates(chi, theta):
        family = None
        if all(isinstance(ev, Fraction) for ev, _ in spec.blocks):
            family = witness_family(spec)
        return ClosureDecision(True, chi, theta, family=family)
    # least prefix where theta overtakes chi
    sa = sb = 0
    ell = None
    for i in range(1, max(len(chi), len(theta)) + 1):
        sa += chi.part(i)
        sb += theta.part(i)
        if sb > sa:
            ell = i
            break
    k = chi.part(ell + 1)
    r = sum(chi.part(i) - k for i in range(1, ell + 1))
    if not in_Xkr(spec, k, r) or in_Xkr(theta, k, r):
        raise AssertionError("separating witness failed its own certificate")
    return ClosureDecision(False, chi, theta, separating=(k, r))


# ---------------------------------------------------------------------------
# constructive witness families
# ---------------------------------------------------------------------------

def jordan_block(size: int, ev=Q0) -> Mat:
    m = Mat.zeros(size, size)
    ev = _as_fraction(ev)
    for i in range(size):
        m.a[i][i] = ev
        if i + 1 < size:
            m.a[i][i + 1] = Q1
    return m


def direct_sum(mats: Sequence[Mat]) -> Mat:
    n = sum(m.rows for m in mats)
    out = Mat.zeros(n, n)
    off = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out.a[off + i][off + j] = m.a[i][j]
        off += m.rows
    return out


def companion(coeffs: Sequence) -> Mat:
    """Companion matrix of X^m + c_{m-1}X^{m-1} + ... + c_0 for
    coeffs = [c_0, ..., c_{m-1}]: -c down the first column (top entry
    -c_{m-1}), 1s on the superdiagonal."""
    m = len(coeffs)
    poly = any(isinstance(c, UniPoly) for c in coeffs)
    one = UniPoly.const(1) if poly else Q1
    out = Mat.zeros(m, m)
    if poly:
        out = out.map(UniPoly.coerce)
    for i in range(m):
        c = _coerce_scalar(coeffs[m - 1 - i])
        out.a[i][0] = -(UniPoly.coerce(c) if poly else c)
        if i + 1 < m:
            out.a[i][i + 1] = one
    return out


def _coerce_scalar(c):
    if isinstance(c, UniPoly):
        return c
    return _as_fraction(c)


def j_chi(chi: Partition) -> Mat:
    return direct_sum([jordan_block(s) for s in chi])


class WitnessFamily:
    """x' = direct sum of companion blocks; A(t) = diag(t, ..., t^n)
    conjugates it so the lowest t-power term is t^{leading_power} J_chi."""

    __slots__ = ("x_prime", "weights", "chi", "leading_term", "leading_power")

    def __init__(self, x_prime, weights, chi, leading_term, leading_power):
        self.x_prime = x_prime
        self.weights = weights
        self.chi = chi
        self.leading_term = leading_term
        self.leading_power = leading_power

    def conjugated(self) -> Mat:
        """A(t) x' A(t)^{-1} with entries in t, shifted by t^{-leading_power}
        so all exponents are nonnegative (the (i,j) entry carries t^{i-j})."""
        n = self.x_prime.rows
        shift = -self.leading_power
        out = Mat.zeros(n, n)
        for i in range(n):
            for j in range(n):
                c = self.x_prime.a[i][j]
                if _is_zero(c):
                    out.a[i][j] = UniPoly.const(0)
                else:
                    out.a[i][j] = UniPoly({i - j + shift: _as_fraction(c)})
        return out

    def at(self, t0) -> Mat:
        """The honest conjugate A(t0) x' A(t0)^{-1} at a nonzero rational t0."""
        t0 = _as_fraction(t0)
        n = self.x_prime.rows
        out = Mat.zeros(n, n)
        for i in range(n):
            for j in range(n):
                c = self.x_prime.a[i][j]
                if not _is_zero(c):
                    out.a[i][j] = c * t0 ** (i - j)
        return out


def witness_family(spec: JordanSpec) -> WitnessFamily:
    """The constructive family driving spec to J_chi: group one Jordan block
    per eigenvalue into each x_j (so its minimal polynomial equals its
    characteristic polynomial), replace x_j by its companion form, and
    conjugate the direct sum by A(t) = diag(t, ..., t^n)."""
    if not all(isinstance(ev, Fraction) for ev, _ in spec.blocks):
        raise ValueError("witness families need rational eigenvalues")
    chi = transpose_block_spectrum(spec)
    blocks = []
    for j in range(1, len(chi) + 1):
        p = UniPoly.const(1)
        for ev, sizes in spec.blocks:
            e = sizes.part(j)
            if e:
                p = p * (UniPoly({1: Q1, 0: -ev}) ** e)
        deg = p.degree()
        coeffs = [p.coeff(i) for i in range(deg)]  # c_0 .. c_{deg-1}
        blocks.append(companion(coeffs))
    x_prime = direct_sum(blocks)
    n = spec.n
    # lowest power of t in A(t) x' A(t)^{-1}: entry (i,j) scales by t^{i-j}
    low = min(i - j for i in range(n) for j in range(n)
              if not _is_zero(x_prime.a[i][j]))
    lead = Mat.zeros(n, n)
    for i in range(n):
        for j in range(n):
            if i - j == low and not _is_zero(x_prime.a[i][j]):
                lead.a[i][j] = x_prime.a[i][j]
    if low != -1 or lead != j_chi(chi):
        raise AssertionError("witness family leading term is not J_chi")
    return WitnessFamily(x_prime, list(range(1, n + 1)), chi, lead, low)


def family_to_Jn(coeffs: Sequence) -> Mat:
    """Theorem-Jn inner scaling: companion matrix with c_k(t) = t^{n-k} c_k,
    whose eigenvalues are t times those of companion(coeffs) and whose
    limit at t=0 is J_n.  Entries are polynomials in t."""
    n = len(coeffs)
    scaled = [UniPoly({n - k: _as_fraction(coeffs[k])}) for k in range(n)]
    return companion(scaled)


# ---------------------------------------------------------------------------
# numeric probe: invariant-based closeness of the witness family to J_chi
# ---------------------------------------------------------------------------

def probe_family(fam: WitnessFamily, t0=Fraction(1, 1000), tol: float = 0.05,
                 rank_rel: float = 1e-2) -> dict:
    """Evaluate the family at a small rational t and test, numerically, that
    v = t * A(t) x' A(t)^{-1} is close to the orbit of J_chi.

    Two scale-invariant checks:
      * nilpotency distance max_k (|e_k(v)| / ||v||_F^k)^{1/k} < tol, where
        e_k are the characteristic-polynomial coefficients (each term decays
        linearly in t, so tol ~ a few times t is the right scale);
      * the rank of each power v^k, counting singular values above
        rank_rel * ||v||_F^k (thresholding against the original matrix's
        scale, since the spurious singular values of v^k are O(t) while the
        genuine ones are O(||v||^k)), matches that of J_chi.
    Intended for small n (<= 4 at t = 1e-3)."""
    import numpy as np

    v = fam.at(t0).scale(_as_fraction(t0))
    n = v.rows
    arr = np.array([[float(x) for x in row] for row in v.a])
    fro = float(np.linalg.norm(arr))
    pc = charpoly(v)
    dist = 0.0
    for k in range(1, n + 1):
        ek = abs(float(pc.coeff(n - k))) / fro ** k
        dist = max(dist, ek ** (1.0 / k))
    target = j_chi(fam.chi)
    tarr = np.array([[float(x) for x in row] for row in target.a])
    tfro = float(np.linalg.norm(tarr))
    ranks, tranks = [], []
    pa, pt = arr.copy(), tarr.copy()
    for k in range(1, n + 1):
        ranks.append(_num_rank(pa, rank_rel * fro ** k))
        tranks.append(_num_rank(pt, rank_rel * tfro ** k))
        pa = pa @ arr
        pt = pt @ tarr
    return {
        "t": t0,
        "nilpotency_distance": dist,
        "nilpotent_to_tol": dist < tol,
        "rank_sequence": ranks,
        "target_rank_sequence": tranks,
        "ranks_match": ranks == tranks,
    }


def _num_rank(arr, threshold: float) -> int:
    import numpy as np

    s = np.linalg.svd(arr, compute_uv=False)
    return int((s > threshold).sum())


# ---------------------------------------------------------------------------
# the slice at J_n
# ---------------------------------------------------------------------------

def Z_shift(n: int, k: int) -> Mat:
    """Z_k: ones on the k-th superdiagonal (k may be negative)."""
    m = Mat.zeros(n, n)
    for i in range(n):
        j = i + k
        if 0 <= j < n:
            m.a[i][j] = Q1
    return m


def companion_slice_basis(n: int) -> list[list]:
    """V-coordinate basis of C_n: matrices supported on the first column."""
    rep = ConjRep(n)
    return [rep.to_coords(elementary(n, i, 0)) for i in range(n)]


def jn_local_model(n: int) -> LocalModel:
    rep = ConjRep(n)
    jn = Z_shift(n, 1)
    S = [elementary(n, i, j) for i in range(1, n) for j in range(n)]
    return build_local_model(rep, rep.to_coords(jn), policy="explicit",
                             S=S, N=companion_slice_basis(n))


def minimal_polynomial(m: Mat) -> UniPoly:
    """Monic minimal polynomial over Q, via the dependency of powers of m."""
    n = m.rows
    glrep = ConjRep(n)
    power = Mat.identity(n)
    vecs = []
    for _ in range(n + 1):
        vecs.append(glrep.to_coords(power))
        ker = nullspace(Mat.from_cols(vecs))
        if ker:
            co = ker[0]
            deg = len(vecs) - 1
            lead = co[deg]
            return UniPoly({i: c / lead for i, c in enumerate(co) if not _is_zero(c)})
        power = power * m
    raise AssertionError("unreachable: powers of an n x n matrix are dependent")


def jn_slice_report(n: int, seed: int = 0) -> dict:
    """Local-model analysis at J_n: the normal slice is the space of
    companion matrices, theta(n)^2 vanishes identically, the minimal
    polynomial on the slice is the companion polynomial, and every slice
    point has an n-dimensional stabilizer."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rep = ConjRep(n)
    model = jn_local_model(n)
    model.verify()
    report = {"n": n, "dim_H": len(model.H), "dim_S": len(model.S),
              "dim_N": len(model.N)}
    # H is spanned by the nonnegative shifts Z_0..Z_{n-1}
    zs = Mat.from_cols([ConjRep(n).to_coords(Z_shift(n, k)) for k in range(n)])
    hs = Mat.from_cols([ConjRep(n).to_coords(h) for h in model.H])
    report["H_is_span_Z"] = rank(zs) == rank(hs) == rank(
        Mat.from_cols(zs.columns() + hs.columns())) == n
    # theta(n1) theta(n2) = 0 on basis pairs => theta(n)^2 = 0 for all n in N
    theta_sq_zero = True
    mats = [model.theta_matrix(nv) for nv in model.N]
    for t1 in mats:
        for t2 in mats:
            if any(not _is_zero(x) for row in (t1 * t2).a for x in row):
                theta_sq_zero = False
    report["theta_squared_zero"] = theta_sq_zero
    rng = random.Random(seed)
    samples = []
    for _ in range(3):
        c = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)]
        comp = companion(c)
        p = minimal_polynomial(comp)
        expected = UniPoly({n: Q1, **{i: _as_fraction(c[i]) for i in range(n)}})
        # N basis is E_{i,0}; companion's first column entries are -c reversed
        nvec = model.n_vec([-_as_fraction(ci) for ci in reversed(c)])
        stab = model.slice_stabilizer(nvec)
        samples.append({
            "c": c,
            "min_poly_is_companion": p == expected,
            "stabilizer_dim": len(stab),
        })
    report["samples"] = samples
    report["stabilizer_dim_always_n"] = all(s["stabilizer_dim"] == n for s in samples)
    report["min_poly_always_companion"] = all(s["min_poly_is_companion"] for s in samples)
    return report


def z4_example() -> dict:
    """The explicit S-completion stabilizing Z_4 = J_4 + E_41: starting from
    h = J_4^3, the completion s = E_21 + E_32 + E_43 satisfies
    [s, J_4] = -[h, C_4] and s + h stabilizes Z_4."""
    n = 4
    j4 = Z_shift(4, 1)
    c4 = elementary(4, 3, 0)
    z4 = j4 + c4
    h = j4 * j4 * j4
    s = elementary(4, 1, 0) + elementary(4, 2, 1) + elementary(4, 3, 2)
    br = lambda a, b: a * b - b * a
    ok_completion = br(s, j4) == br(h, c4).scale(-1)
    ok_stab = br(s + h, z4) == Mat.zeros(4, 4)
    model = jn_local_model(4)
    rep = ConjRep(4)
    stab = model.slice_stabilizer(rep.to_coords(c4))
    return {"completion_identity": ok_completion, "stabilizes": ok_stab,
            "s_plus_h": s + h, "slice_stabilizer_dim": len(stab)}


# ---------------------------------------------------------------------------
# the slice at J_{a,b}
# ---------------------------------------------------------------------------

def jab_matrix(a: int, b: int) -> Mat:
    return direct_sum([Z_shift(a, 1), Z_shift(b, 1)])


def jab_normal_basis(a: int, b: int) -> list[Mat]:
    """Basis of the normal slice C at J_{a,b}: first-column vectors of both
    companion blocks (c's and d's), the alpha row coupling the top block's
    last row into the second block's columns, and the beta column coupling
    the second block's rows into the first column."""
    n = a + b
    out = [elementary(n, i, 0) for i in range(a)]                     # c's
    out += [elementary(n, a + i, a) for i in range(b)]                # d's
    out += [elementary(n, a - 1, a + i) for i in range(b)]            # alpha's
    out += [elementary(n, a + i, 0) for i in range(b)]                # beta's
    return out


def jab_slice_point(a: int, b: int, c, d, alpha, beta) -> Mat:
    """J_{a,b} + C(c, d, alpha, beta) with the companion sign convention
    (first columns carry -c_{a-1}..-c_0 and -d_{b-1}..-d_0)."""
    n = a + b
    m = jab_matrix(a, b)
    for i in range(a):
        m.a[i][0] = m.a[i][0] - _as_fraction(c[a - 1 - i])
    for i in range(b):
        m.a[a + i][a] = m.a[a + i][a] - _as_fraction(d[b - 1 - i])
    for i in range(b):
        m.a[a - 1][a + i] = m.a[a - 1][a + i] + _as_fraction(alpha[i])
    for i in range(b):
        m.a[a + i][0] = m.a[a + i][0] + _as_fraction(beta[i])
    return m


def jab_slice_report(a: int, b: int, seed: int = 0, nsamples: int = 5) -> dict:
    """Slice analysis at J_{a,b} (a >= b >= 1): dim H = dim C = a + 3b; on
    the slice the minimal polynomial has degree >= a and eigenspaces have
    dimension <= 2; the nilpotent one-parameter members J_i(t) have
    signatures (a+b-i+1, i-1); and when the minimal polynomial has degree
    exactly a it equals that of the top companion block T_a while that of
    T_b divides it."""
    if not (a >= b >= 1):
        raise ValueError("need a >= b >= 1")
    n = a + b
    rep = ConjRep(n)
    jab = jab_matrix(a, b)
    H = stabilizer_algebra(rep, rep.to_coords(jab))
    C = jab_normal_basis(a, b)
    model = build_local_model(rep, rep.to_coords(jab), policy="explicit",
                              N=[rep.to_coords(m) for m in C])
    model.verify()
    report = {"a": a, "b": b, "dim_H": len(H), "dim_C": len(C),
              "dims_equal_a_plus_3b": len(H) == len(C) == a + 3 * b}
    rng = random.Random(seed)
    deg_ok = ker_ok = True
    for _ in range(nsamples):
        c = [Fraction(rng.randint(-4, 4)) for _ in range(a)]
        d = [Fraction(rng.randint(-4, 4)) for _ in range(b)]
        al = [Fraction(rng.randint(-4, 4)) for _ in range(b)]
        be = [Fraction(rng.randint(-4, 4)) for _ in range(b)]
        T = jab_slice_point(a, b, c, d, al, be)
        p = minimal_polynomial(T)
        if p.degree() < a:
            deg_ok = False
        for ev, _ in _rational_roots(charpoly(T)):
            shifted = T - Mat.identity(n).scale(ev)
            if n - rank(shifted) > 2:
                ker_ok = False
    report["min_poly_degree_at_least_a"] = deg_ok
    report["eigenspace_dim_at_most_2"] = ker_ok
    # the nilpotent family: alpha_i = t, everything else zero
    family = []
    for i in range(1, b + 1):
        zt = [Q0] * b
        al = list(zt)
        al[i - 1] = Q1
        Ji = jab_slice_point(a, b, [Q0] * a, [Q0] * b, al, [Q0] * b)
        sig = nilpotent_signature(Ji)
        expected = Partition([p for p in (a + b - i + 1, i - 1) if p])
        family.append({"i": i, "signature": sig, "expected": expected,
                       "matches": sig == expected})
    report["nilpotent_family"] = family
    report["nilpotent_family_ok"] = all(f["matches"] for f in family)
    # degree-a minimal polynomial: p = min poly of T_a; min poly of T_b | p
    pa = UniPoly.const(1)
    for i in range(1, a + 1):
        pa = pa * UniPoly({1: Q1, 0: -Fraction(i)})
    pb = UniPoly.const(1)
    for i in range(1, b + 1):
        pb = pb * UniPoly({1: Q1, 0: -Fraction(i)})
    c = [pa.coeff(i) for i in range(a)]
    d = [pb.coeff(i) for i in range(b)]
    # the couplings must vanish for the minimal polynomial to drop to degree a
    T = jab_slice_point(a, b, c, d, [Q0] * b, [Q0] * b)
    p = minimal_polynomial(T)
    Ta = companion(c)
    Tb = companion(d)
    report["divisibility_sample"] = {
        "min_poly_degree": p.degree(),
        "equals_min_poly_Ta": p == minimal_polynomial(Ta),
        "Tb_divides": _is_zero_poly(p.divmod(minimal_polynomial(Tb))[1]) if p.degree() == a else None,
        "p_of_Tb_vanishes": all(_is_zero(x) for row in _poly_of_matrix(p, Tb).a for x in row),
    }
    return report


def _is_zero_poly(p: UniPoly) -> bool:
    return all(_is_zero(c) for c in p.c.values())
