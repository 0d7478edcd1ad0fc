"""Exact scalars (Q, Q[t], Q(t)) and exact dense linear algebra.

Everything downstream (stabilizers, local models, limit algebras) reduces to
kernels, solves and determinants over one of three scalar rings:

  * Fraction        -- the rationals,
  * UniPoly         -- univariate polynomials in t over Q, sparse dict rep,
  * RationalFn      -- reduced fractions of UniPoly (den monic).

Matrices are dense row-major lists; elimination is generic over any of the
three scalar types (UniPoly matrices are promoted to RationalFn when a field
is required, with fraction-free Bareiss available for determinants).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

Q0 = Fraction(0)
Q1 = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to Fraction")


class UniPoly:
    """Sparse polynomial in t over Q.  Immutable."""

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = _as_fraction(v)
                if v:
                    c[int(e)] = v
        self.c = c

    # -- constructors -------------------------------------------------
    @staticmethod
    def const(v) -> "UniPoly":
        return UniPoly({0: _as_fraction(v)})

    @staticmethod
    def t(e: int = 1, coef=1) -> "UniPoly":
        return UniPoly({e: _as_fraction(coef)})

    @staticmethod
    def zero() -> "UniPoly":
        return UniPoly()

    @staticmethod
    def coerce(x) -> "UniPoly":
        if isinstance(x, UniPoly):
            return x
        return UniPoly.const(_as_fraction(x))

    # -- structure ----------------------------------------------------
    def __bool__(self):
        return bool(self.c)

    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return max(self.c) if self.c else -1

    def valuation(self) -> int:
        """Smallest exponent with nonzero coefficient; -1 for zero."""
        return min(self.c) if self.c else -1

    def lc(self) -> Fraction:
        return self.c[self.degree()] if self.c else Q0

    def coeff(self, e: int) -> Fraction:
        return self.c.get(e, Q0)

    def is_const(self) -> bool:
        return not self.c or set(self.c) == {0}

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self.c.get(0, Q0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UniPoly.const(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, RationalFn):
            return NotImplemented
        other = UniPoly.coerce(other)
        c = dict(self.c)
        for e, v in other.c.items():
            w = c.get(e, Q0) + v
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        out = UniPoly.__new__(UniPoly)
        out.c = c
        return out

    __radd__ = __add__

    def __neg__(self):
        out = UniPoly.__new__(UniPoly)
        out.c = {e: -v for e, v in self.c.items()}
        return out

    def __sub__(self, other):
        if isinstance(other, RationalFn):
            return NotImplemented
        return self + (-UniPoly.coerce(other))

    def __rsub__(self, other):
        return UniPoly.coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, RationalFn):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            v = _as_fraction(other)
            if not v:
                return UniPoly.zero()
            out = UniPoly.__new__(UniPoly)
            out.c = {e: w * v for e, w in self.c.items()}
            return out
        other = UniPoly.coerce(other)
        c: dict[int, Fraction] = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = e1 + e2
                w = c.get(e, Q0) + v1 * v2
                if w:
                    c[e] = w
                else:
                    c.pop(e, None)
        out = UniPoly.__new__(UniPoly)
        out.c = c
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        r = UniPoly.const(1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def shift(self, k: int) -> "UniPoly":
        """Multiply by t**k (k may be negative if the valuation allows)."""
        if k < 0 and self.c and min(self.c) + k < 0:
            raise ValueError("negative exponent in shift")
        out = UniPoly.__new__(UniPoly)
        out.c = {e + k: v for e, v in self.c.items()}
        return out

    def divmod(self, other: "UniPoly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        r = dict(self.c)
        q: dict[int, Fraction] = {}
        dlc = other.lc()
        dd = other.degree()
        while r:
            e = max(r)
            if e < dd:
                break
            f = r[e] / dlc
            q[e - dd] = f
            for e2, v2 in other.c.items():
                ee = e - dd + e2
                w = r.get(ee, Q0) - f * v2
                if w:
                    r[ee] = w
                else:
                    r.pop(ee, None)
        qq = UniPoly.__new__(UniPoly)
        qq.c = q
        rr = UniPoly.__new__(UniPoly)
        rr.c = r
        return qq, rr

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if r:
            raise ValueError("inexact polynomial division")
        return q

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while b:
            a, b = b, a.divmod(b)[1]
        if not a:
            return a
        return a * (1 / a.lc())

    def monic(self) -> "UniPoly":
        if not self:
            return self
        return self * (1 / self.lc())

    def __call__(self, x) -> Fraction:
        x = _as_fraction(x)
        r = Q0
        for e, v in self.c.items():
            r += v * x**e
        return r

    def derivative(self) -> "UniPoly":
        return UniPoly({e - 1: v * e for e, v in self.c.items() if e})

    def __repr__(self):
        if not self.c:
            return "0"
        parts = []
        for e in sorted(self.c):
            v = self.c[e]
            if e == 0:
                parts.append(str(v))
            elif e == 1:
                parts.append(f"{v}*t" if v != 1 else "t")
            else:
                parts.append(f"{v}*t^{e}" if v != 1 else f"t^{e}")
        return " + ".join(parts).replace("+ -", "- ")


class RationalFn:
    """Reduced fraction num/den in Q(t); den monic and nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = UniPoly.coerce(num)
        den = UniPoly.const(1) if den is None else UniPoly.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = UniPoly.const(1)
        else:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num.exact_div(g)
                den = den.exact_div(g)
            lcinv = 1 / den.lc()
            if lcinv != 1:
                num = num * lcinv
                den = den * lcinv
        self.num = num
        self.den = den

    @staticmethod
    def coerce(x) -> "RationalFn":
        if isinstance(x, RationalFn):
            return x
        return RationalFn(UniPoly.coerce(x))

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, UniPoly)):
            other = RationalFn.coerce(other)
        if not isinstance(other, RationalFn):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = RationalFn.coerce(other)
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        r = RationalFn.__new__(RationalFn)
        r.num = -self.num
        r.den = self.den
        return r

    def __sub__(self, other):
        return self + (-RationalFn.coerce(other))

    def __rsub__(self, other):
        return RationalFn.coerce(other) + (-self)

    def __mul__(self, other):
        other = RationalFn.coerce(other)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFn.coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalFn.coerce(other) / self

    def is_poly(self) -> bool:
        return self.den.is_const()

    def as_poly(self) -> UniPoly:
        if not self.is_poly():
            raise ValueError("not a polynomial")
        return self.num * (1 / self.den.const_value())

    def __call__(self, x) -> Fraction:
        x = _as_fraction(x)
        d = self.den(x)
        if not d:
            raise ZeroDivisionError(f"pole at t={x}")
        return self.num(x) / d

    def __repr__(self):
        if self.den.is_const():
            return repr(self.as_poly())
        return f"({self.num!r})/({self.den!r})"


class PoleAtZero(ValueError):
    pass


def limit_at_zero(f: RationalFn) -> Fraction:
    """Value at t=0 after reduction; raises PoleAtZero on a genuine pole."""
    f = RationalFn.coerce(f)
    d0 = f.den(0)
    if not d0:
        raise PoleAtZero("rational function has a pole at t=0")
    return f.num(0) / d0


# ---------------------------------------------------------------------------
# matrices


class Mat:
    """Dense row-major matrix over Fraction / UniPoly / RationalFn."""

    __slots__ = ("rows", "cols", "a")

    def __init__(self, rows_of_entries: Sequence[Sequence]):
        self.a = [list(r) for r in rows_of_entries]
        self.rows = len(self.a)
        self.cols = len(self.a[0]) if self.a else 0
        for r in self.a:
            if len(r) != self.cols:
                raise ValueError("ragged matrix")

    # -- constructors -------------------------------------------------
    @staticmethod
    def zeros(r: int, c: int, zero=Q0) -> "Mat":
        return Mat([[zero] * c for _ in range(r)])

    @staticmethod
    def identity(n: int, one=Q1, zero=Q0) -> "Mat":
        m = Mat.zeros(n, n, zero)
        for i in range(n):
            m.a[i][i] = one
        return m

    @staticmethod
    def from_cols(cols: Sequence[Sequence]) -> "Mat":
        return Mat([list(r) for r in zip(*cols)]) if cols else Mat([])

    @staticmethod
    def rational(rows) -> "Mat":
        return Mat([[_as_fraction(x) for x in r] for r in rows])

    # -- access -------------------------------------------------------
    def __getitem__(self, ij):
        return self.a[ij[0]][ij[1]]

    def col(self, j: int) -> list:
        return [self.a[i][j] for i in range(self.rows)]

    def columns(self) -> list[list]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "Mat":
        return Mat([list(r) for r in zip(*self.a)]) if self.a else Mat([])

    def map(self, f: Callable) -> "Mat":
        return Mat([[f(x) for x in r] for r in self.a])

    def eval_at(self, x) -> "Mat":
        """Evaluate polynomial / rational-function entries at t=x."""
        return self.map(lambda e: e(x) if isinstance(e, (UniPoly, RationalFn)) else e)

    def __eq__(self, other):
        return (isinstance(other, Mat) and self.a == other.a)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: "Mat") -> "Mat":
        return Mat([[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(self.a, other.a)])

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat([[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(self.a, other.a)])

    def __neg__(self) -> "Mat":
        return self.map(lambda x: -x)

    def scale(self, s) -> "Mat":
        return self.map(lambda x: x * s)

    def __mul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ot = other.transpose().a
        out = []
        for r in self.a:
            row = []
            for c in ot:
                s = None
                for x, y in zip(r, c):
                    if _is_zero(x) or _is_zero(y):
                        continue
                    p = x * y
                    s = p if s is None else s + p
                row.append(s if s is not None else _zero_like(r[0] if r else Q0))
            out.append(row)
        return Mat(out)

    def apply(self, v: Sequence) -> list:
        """Matrix times column vector."""
        out = []
        for r in self.a:
            s = None
            for x, y in zip(r, v):
                if _is_zero(x) or _is_zero(y):
                    continue
                p = x * y
                s = p if s is None else s + p
            out.append(s if s is not None else Q0)
        return out

    def trace(self):
        s = self.a[0][0]
        for i in range(1, self.rows):
            s = s + self.a[i][i]
        return s

    def __repr__(self):
        return "Mat(" + ",\n    ".join(repr(r) for r in self.a) + ")"


def _is_zero(x) -> bool:
    return not x


def _zero_like(x):
    if isinstance(x, UniPoly):
        return UniPoly.zero()
    if isinstance(x, RationalFn):
        return RationalFn(0)
    return Q0


def _field_promote(rows):
    """Promote UniPoly entries to RationalFn so division is available."""
    has_poly = any(isinstance(x, UniPoly) for r in rows for x in r)
    has_rf = any(isinstance(x, RationalFn) for r in rows for x in r)
    if has_poly or has_rf:
        return [[RationalFn.coerce(x) for x in r] for r in rows], RationalFn(1), RationalFn(0)
    return [[_as_fraction(x) for x in r] for r in rows], Q1, Q0


def rref(m: Mat):
    """Reduced row echelon form over the fraction field.

    Returns (rows, pivot_column_indices).
    """
    rows, one, zero = _field_promote(m.a)
    nr, nc = len(rows), (len(rows[0]) if rows else 0)
    pivots = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        p = next((i for i in range(r, nr) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def nullspace(m: Mat) -> list[list]:
    """Basis of the right kernel, as column vectors over the fraction field.

    Deterministic: free columns in increasing order, free coordinate set to 1.
    """
    rows, pivots = rref(m)
    nc = m.cols
    one = RationalFn(1) if rows and isinstance(rows[0][0], RationalFn) else Q1
    zero = _zero_like(one) if not isinstance(one, Fraction) else Q0
    pivset = set(pivots)
    basis = []
    for free in range(nc):
        if free in pivset:
            continue
        v = [zero] * nc
        v[free] = one
        for r, pc in zip(rows, pivots):
            if r[free]:
                v[pc] = -r[free]
        basis.append(v)
    return basis


def solve(m: Mat, rhs_cols: Sequence[Sequence]) -> list[list]:
    """Solve m·x = b for each column b; m must be square invertible."""
    n = m.rows
    if m.cols != n:
        raise ValueError("solve requires a square matrix")
    k = len(rhs_cols)
    aug_rows = [list(m.a[i]) + [col[i] for col in rhs_cols] for i in range(n)]
    rows, pivots = rref(Mat(aug_rows))
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [[rows[i][n + j] for i in range(n)] for j in range(k)]


def det_bareiss(m: Mat):
    """Fraction-free determinant (Bareiss) over Fraction or UniPoly entries."""
    n = m.rows
    if m.cols != n:
        raise ValueError("determinant of non-square matrix")
    if n == 0:
        return Q1
    a = [list(r) for r in m.a]
    poly = any(isinstance(x, UniPoly) for r in a for x in r)
    if poly:
        a = [[UniPoly.coerce(x) for x in r] for r in a]
        one = UniPoly.const(1)
    else:
        a = [[_as_fraction(x) for x in r] for r in a]
        one = Q1
    sign = 1
    prev = one
    for k in range(n - 1):
        if not a[k][k]:
            p = next((i for i in range(k + 1, n) if a[i][k]), None)
            if p is None:
                return _zero_like(one)
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                e = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                if poly:
                    e = e.exact_div(prev) if k else e
                else:
                    e = e / prev if k else e
                a[i][j] = e
            a[i][k] = _zero_like(one)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


class SingularMatrix(ValueError):
    pass


def invert_via_adjugate(m: Mat):
    """(det, adj) with m·adj = det·I exactly, for UniPoly (or Fraction) entries."""
    n = m.rows
    if m.cols != n:
        raise ValueError("adjugate of non-square matrix")
    d = det_bareiss(m)
    if _is_zero(d):
        raise SingularMatrix("matrix is singular over Q(t)")
    # adj = det * m^{-1}: solve over the fraction field, then clear back.
    inv_cols = solve(m, [[(Q1 if i == j else Q0) for i in range(n)] for j in range(n)])
    drf = RationalFn.coerce(d)
    adj_cols = []
    for col in inv_cols:
        adj_cols.append([_to_poly_scalar(RationalFn.coerce(x) * drf) for x in col])
    return d, Mat.from_cols(adj_cols)


def _to_poly_scalar(x: RationalFn):
    p = x.as_poly()
    return p.const_value() if p.is_const() else p


def neumann_inverse_apply(theta_apply: Callable, v: Sequence, max_terms: int):
    """(1+θ)^{-1} v as v - θv + θ²v - ..., valid when θ is nilpotent.

    Raises if the series does not terminate within max_terms.
    """
    acc = list(v)
    term = list(v)
    for _ in range(max_terms):
        term = [-x for x in theta_apply(term)]
        if all(_is_zero(x) for x in term):
            return acc
        acc = [a + b for a, b in zip(acc, term)]
    raise ValueError("Neumann series did not terminate (theta not nilpotent?)")


def clear_denominators(col: Sequence) -> list[UniPoly]:
    """Scale a Q(t)-column by the lcm of denominators to get a Q[t]-column."""
    col = [RationalFn.coerce(x) for x in col]
    lcm = UniPoly.const(1)
    for x in col:
        g = lcm.gcd(x.den)
        lcm = lcm * x.den.exact_div(g)
    return [(x.num * lcm.exact_div(x.den)) for x in col]


def column_normalize(m: Mat) -> Mat:
    """Normalize Q(t)-columns so that evaluation at t=0 has full column rank.

    Preserves the Q(t)-column span: clear denominators, strip common t-powers,
    then repeatedly replace any column whose value at 0 depends on the others
    by the reduced combination divided by its t-valuation.
    """
    cols = [clear_denominators(c) for c in m.columns()]

    def strip(c):
        v = min((p.valuation() for p in c if p), default=0)
        return [p.shift(-v) if p else p for p in c] if v > 0 else c

    cols = [strip(c) for c in cols]
    guard = 0
    while True:
        guard += 1
        if guard > 10000:
            raise RuntimeError("column_normalize failed to terminate")
        at0 = Mat([[c[i](0) for c in cols] for i in range(m.rows)])
        ker = nullspace(at0)
        if not ker:
            break
        v = ker[0]
        j = max(i for i, x in enumerate(v) if x)
        comb = [UniPoly.zero() for _ in range(m.rows)]
        for i, x in enumerate(v):
            if x:
                comb = [a + x * b for a, b in zip(comb, cols[i])]
        if all(not p for p in comb):
            raise ValueError("columns are linearly dependent over Q(t)")
        cols[j] = strip(comb)
    return Mat.from_cols(cols)


def lin_indep_subset(cols: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal linearly independent subset, greedy from the left."""
    if not cols:
        return []
    rows, pivots = rref(Mat.from_cols(cols))
    return pivots


def coords_in_basis(basis_cols: Sequence[Sequence], v: Sequence):
    """Express v in a given independent set of columns; None if not in span."""
    aug = Mat.from_cols(list(basis_cols) + [list(v)])
    rows, pivots = rref(aug)
    k = len(basis_cols)
    if k in pivots:
        return None
    coeffs = [Q0] * k
    for r, pc in zip(rows, pivots):
        coeffs[pc] = r[k]
    return coeffs
