"""Torus weight supports and the instability optimizer.

For the diagonal torus of GL(n), a vector v in a module V splits as
v = sum_chi v_chi over integer weight vectors chi; diag(l) acts on v_chi with
factor <l, chi>.  The functional

    f(t, l) = sum_chi |v_chi|^2 t^{-<l, chi>}

is minimized over the trace-zero unit sphere O_{n-2} = {sum p = 0, |p| = 1};
for t large its minimizer lands in {l : mu(l, v) > alpha} whenever that set
is non-empty, where mu(l, v) = min_chi <l, chi>.  The minimizer is computed
by projected gradient descent with backtracking and deterministic
multi-start, with an exhaustive rational-grid oracle for small n.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .exactcore import Q0, _as_fraction, _is_zero
from .lierep import ConjRep, SymRep


@dataclass(frozen=True)
class WeightComponent:
    chi: tuple[int, ...]
    norm_sq: Fraction
    coords: tuple  # full V-coordinate vector of v_chi


@dataclass
class WeightSupport:
    """The torus support Xi(v): weight vectors with their component norms."""

    n: int                      # torus rank (number of diagonal entries)
    components: list[WeightComponent]

    def __post_init__(self):
        if any(_is_zero(c.norm_sq) for c in self.components):
            raise ValueError("zero-norm component in support")

    @property
    def weights(self) -> list[tuple[int, ...]]:
        return [c.chi for c in self.components]


def kempf_support(rep: SymRep | ConjRep, v) -> WeightSupport:
    """Group the coordinates of v by diagonal-torus weight.

    Sym^d basis monomial x^e has weight e; the matrix entry (i, j) has
    weight e_i - e_j.
    """
    if all(_is_zero(x) for x in v):
        raise ValueError("support of the zero vector")
    n = rep.nvars if isinstance(rep, SymRep) else rep.n
    groups: dict[tuple, list] = {}
    for idx, c in enumerate(v):
        if _is_zero(c):
            continue
        if isinstance(rep, SymRep):
            chi = tuple(rep.basis[idx])
        else:
            i, j = rep.basis[idx]
            w = [0] * n
            w[i] += 1
            w[j] -= 1
            chi = tuple(w)
        groups.setdefault(chi, [Q0] * rep.dim)[idx] = _as_fraction(c)
    comps = []
    for chi in sorted(groups):
        coords = groups[chi]
        nsq = sum((x * x for x in coords), Q0)
        comps.append(WeightComponent(chi, nsq, tuple(coords)))
    return WeightSupport(n=n, components=comps)


def pairing(ell, chi):
    s = None
    for a, b in zip(ell, chi):
        if b:
            p = a * b
            s = p if s is None else s + p
    return 0 if s is None else s


def mu(ell, support: WeightSupport):
    """min <l, chi> over the support; exact when l is rational."""
    return min(pairing(ell, c.chi) for c in support.components)


def kempf_f(t: float, ell, support: WeightSupport) -> float:
    return sum(float(c.norm_sq) * t ** (-float(pairing(ell, c.chi)))
               for c in support.components)


def leading_term_along(ell, support: WeightSupport):
    """(mu, coords of v_l): the sum of minimal-pairing weight components.

    Exact when l is rational; v_l is a projective limit of v along t^l.
    """
    vals = [pairing(ell, c.chi) for c in support.components]
    m = min(vals)
    dim = len(support.components[0].coords)
    out = [Q0] * dim
    for val, c in zip(vals, support.components):
        if val == m:
            out = [a + b for a, b in zip(out, c.coords)]
    return m, out


# ---------------------------------------------------------------------------
# projected gradient descent on O_{n-2}


def _project_point(p: list[float]) -> list[float]:
    m = sum(p) / len(p)
    q = [x - m for x in p]
    nrm = math.sqrt(sum(x * x for x in q))
    if nrm < 1e-300:
        raise ValueError("point collapsed to the origin during projection")
    return [x / nrm for x in q]


def _project_gradient(g: list[float], p: list[float]) -> list[float]:
    m = sum(g) / len(g)
    g = [x - m for x in g]
    dp = sum(a * b for a, b in zip(g, p))
    return [a - dp * b for a, b in zip(g, p)]


def centered_ap_direction(n: int) -> list[float]:
    """The descending centered arithmetic progression on O_{n-2}."""
    raw = [(n + 1) / 2.0 - (i + 1) for i in range(n)]
    return _project_point(raw)


def _seed_points(n: int, n_starts: int, seed: int) -> list[list[float]]:
    seeds = [centered_ap_direction(n),
             [-x for x in centered_ap_direction(n)]]
    for i in range(n - 1):
        raw = [0.0] * n
        raw[i], raw[i + 1] = 1.0, -1.0
        seeds.append(_project_point(raw))
    rng = random.Random(seed)
    while len(seeds) < n_starts:
        seeds.append(_project_point([rng.gauss(0.0, 1.0) for _ in range(n)]))
    return seeds[:max(n_starts, 2)]


@dataclass
class KempfResult:
    ell: list[float]
    f_value: float
    mu_value: float
    converged: bool
    iterations: int
    monotone: bool
    max_residual: float


def kempf_descent(support: WeightSupport, t: float, *, seed: int = 0,
                  n_starts: int = 8, max_iter: int = 2000,
                  gtol: float = 1e-8) -> KempfResult:
    """Minimize f(t, .) on O_{n-2} by projected gradient descent.

    Deterministic multi-start (centered arithmetic progressions, adjacent
    coordinate differences, then a seeded Gaussian fill); backtracking line
    search with an Armijo condition; every iterate is re-projected so the
    constraint residuals stay at machine precision.  Non-convergence is
    reported through the `converged` flag with the best iterate.
    """
    if t <= 1:
        raise ValueError("need t > 1")
    n = support.n
    lognsq = [(float(c.norm_sq), [float(x) for x in c.chi])
              for c in support.components]
    lt = math.log(t)

    def f_and_grad(p):
        fv = 0.0
        g = [0.0] * n
        for nsq, chi in lognsq:
            e = nsq * math.exp(-lt * sum(a * b for a, b in zip(p, chi)))
            fv += e
            for i in range(n):
                if chi[i]:
                    g[i] -= lt * chi[i] * e
        return fv, g

    best = None
    for p0 in _seed_points(n, n_starts, seed):
        p = list(p0)
        fv, g = f_and_grad(p)
        monotone = True
        converged = False
        it = 0
        gn = math.inf
        max_res = _residual(p)
        for it in range(1, max_iter + 1):
            pg = _project_gradient(g, p)
            gn2 = sum(x * x for x in pg)
            gn = math.sqrt(gn2)
            if gn < gtol:
                converged = True
                break
            step = 1.0
            accepted = False
            for _ in range(60):
                cand = _project_point([a - step * b for a, b in zip(p, pg)])
                fc, gc = f_and_grad(cand)
                if fc <= fv - 1e-4 * step * gn2:
                    if fc > fv:
                        monotone = False
                    p, fv, g = cand, fc, gc
                    accepted = True
                    break
                step *= 0.5
            if not accepted:
                break
            max_res = max(max_res, _residual(p))
        if not converged:
            converged = gn < 1e-6
        res = KempfResult(ell=p, f_value=fv, mu_value=float(mu(p, support)),
                          converged=converged, iterations=it,
                          monotone=monotone, max_residual=max_res)
        if best is None or res.f_value < best.f_value:
            best = res
    return best


def _residual(p: list[float]) -> float:
    return max(abs(sum(p)),
               abs(math.sqrt(sum(x * x for x in p)) - 1.0))


def grid_minimize(support: WeightSupport, t: float,
                  resolution: int = 20) -> tuple[list[float], float]:
    """Brute-force oracle: best direction q/|q|, q in (Z/resolution)^n with
    sum q = 0, evaluated on f(t, .).  Intended for small n."""
    n = support.n
    best_p, best_f = None, math.inf
    R = resolution
    for q in itertools.product(range(-R, R + 1), repeat=n - 1):
        last = -sum(q)
        if abs(last) > R:
            continue
        full = list(q) + [last]
        if all(x == 0 for x in full):
            continue
        nrm = math.sqrt(sum(x * x for x in full))
        p = [x / nrm for x in full]
        fv = kempf_f(t, p, support)
        if fv < best_f:
            best_f, best_p = fv, p
    return best_p, best_f
