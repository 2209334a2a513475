"""
The fractional maximal operators on piecewise-linear functions.

For a query point x the non-centered operator is the maximum over a <= x <= b of

    Phi(a, b) = ((b-a)/2)^beta * (1/(b-a)) * integral_a^b |f|  =  2^-beta (b-a)^(beta-1) (F(b) - F(a))

with F the primitive of |f|.  Extending an interval past the support only adds length, so a
ranges over [min(x, lo), x] and b over [x, max(x, hi)].  The breakpoints of |f| cut this
rectangle into cells on which |f| is affine in each variable and F is quadratic.  On a cell
edge the stationarity condition is a quadratic in one variable, and at an interior stationary
point both partial conditions hold, which forces |f|(a) = |f|(b) and again leaves a quadratic.
The maximum is therefore found by evaluating Phi on a finite candidate set: cell corners,
edge roots and interior roots.
"""

import math

from collections import namedtuple

import numpy as np

from maxop.mcore.pwl_function import PwlFunction
from maxop.mutil.errors import MxParameterError, MxDomainError, MxToleranceError
from maxop.mutil.logging import debug, info, warn
from maxop.mutil.misc import parallel_map

TOL_VAL = 1e-9                  # relative tolerance defining the argmax set for the tie-break
BETA_MIN = 0.05
BETA_MAX = 0.95

_MIN_WIDTH = 1e-12              # shorter intervals are never candidates (Phi -> 0 there)
_CHUNK = 256                    # rows per block in the brute-force oracle


class BetaParams(object):

    beta = 0.5
    q = 2.0                     # exponent of the derivative norm, 1/(1-beta)
    q_conj = 2.0                # Holder conjugate of q, 1/beta

    def __init__(self, beta, beta_min = BETA_MIN, beta_max = BETA_MAX):
        try:
            beta = float(beta)
        except (TypeError, ValueError):
            raise MxParameterError("invalid beta: '{0}'".format(beta))
        if not (beta_min <= beta <= beta_max):
            raise MxParameterError("beta must lie in [{0}, {1}], got {2}".format(beta_min, beta_max, beta))
        self.beta = beta
        self.q = 1.0 / (1.0 - beta)
        self.q_conj = 1.0 / beta

    @classmethod
    def fromConfig(cls, beta, config):
        frac = config.get_section('fractional')
        return cls(beta, frac.get('beta_min', BETA_MIN), frac.get('beta_max', BETA_MAX))

    def __repr__(self):
        return "BetaParams(beta={0})".format(self.beta)


class GoodBall(namedtuple('GoodBall', 'a b radius value')):
    __slots__ = ()


def _quadratic_roots(a, b, c):
    """
    Both roots of a t^2 + b t + c = 0, elementwise, NaN where a root does not exist.
    Uses the cancellation-free form; a = 0 degrades to the linear root.
    """
    with np.errstate(all='ignore'):
        disc = b*b - 4*a*c
        disc = np.where((disc < 0) & (disc > -1e-12 * (b*b + np.abs(4*a*c))), 0.0, disc)
        sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
        sgn = np.where(b >= 0, 1.0, -1.0)
        q = -0.5 * (b + sgn * sq)
        r1 = np.where(a != 0, q / np.where(a != 0, a, 1.0), np.nan)
        r2 = np.where(q != 0, c / np.where(q != 0, q, 1.0), np.nan)
    return r1, r2

def _in_range(t, lo, hi):
    slack = 1e-12 * np.maximum(1.0, np.abs(hi))
    return np.isfinite(t) & (t >= lo - slack) & (t <= hi + slack)


class FractionalMaximal(object):
    """
    M~_beta f and M_beta f for one function and one beta.  Construction precomputes |f| and
    its primitive; every query is then a small vectorized computation.
    """

    f = None
    params = None
    tol_val = TOL_VAL

    def __init__(self, f, params, tol_val = TOL_VAL):
        if not isinstance(params, BetaParams):
            params = BetaParams(params)
        self.f = f
        self.params = params
        try:
            tol_val = float(tol_val)
        except (TypeError, ValueError):
            raise MxParameterError("invalid tie tolerance: '{0}'".format(tol_val))
        if not 0 <= tol_val < 1:
            raise MxParameterError("tie tolerance must lie in [0, 1), got {0}".format(tol_val))
        self.tol_val = tol_val
        self.F = f.primitive
        self.X = self.F.x
        self.l1 = f.l1_norm()
        self.linf = f.linf_norm()
        self._c = 2.0 ** (-params.beta)

    @property
    def is_zero(self):
        return self.f.is_zero

    def _abs_at(self, pts):
        return np.interp(pts, self.F.x, self.F.v, left=0.0, right=0.0)

    def phi(self, a, b):
        "Phi(a, b), vectorized; zero for degenerate intervals."
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        width = b - a
        ok = width > _MIN_WIDTH
        with np.errstate(all='ignore'):
            val = self._c * np.power(np.where(ok, width, 1.0), self.params.beta - 1.0) * (self.F(b) - self.F(a))
        return np.where(ok, val, 0.0)

    def radius_bound(self, v0):
        "Any interval with Phi >= v0 > 0 has radius at most (||f||_1 / (2 v0))^(1/(1-beta))."
        return (self.l1 / (2.0 * v0)) ** self.params.q

    # Non-centered search

    def _grids(self, x):
        X = self.X
        lo = min(x, X[0])
        hi = max(x, X[-1])
        A = np.unique(np.concatenate(([lo, x], X[(X > lo) & (X < x)])))
        B = np.unique(np.concatenate(([x, hi], X[(X > x) & (X < hi)])))
        return A, B

    def _solve_b(self, a, j, B, vB, FB, sb):
        "Edge roots in b for fixed left ends a, b in cells j."
        beta = self.params.beta
        q = B[j]
        h = B[j+1] - q
        v, s = vB[j], sb[j]
        d = q - a
        A2 = s * (1 + beta) / 2
        B1 = beta * v + s * d
        C0 = v * d - (1 - beta) * (FB[j] - self.F(a))
        t1, t2 = _quadratic_roots(A2, B1, C0)
        t = np.concatenate((t1, t2))
        ok = _in_range(t, 0.0, np.concatenate((h, h)))
        aa = np.concatenate((a, a))
        bb = np.concatenate((q, q)) + np.clip(t, 0.0, None)
        return aa[ok], bb[ok]

    def _solve_a(self, b, i, A, vA, FA, sa):
        "Edge roots in a for fixed right ends b, a in cells i (parametrized leftwards from A[i+1])."
        beta = self.params.beta
        p = A[i+1]
        h = p - A[i]
        w = vA[i+1]
        s = -sa[i]
        d = b - p
        A2 = s * (1 + beta) / 2
        B1 = beta * w + s * d
        C0 = w * d - (1 - beta) * (self.F(b) - FA[i+1])
        t1, t2 = _quadratic_roots(A2, B1, C0)
        t = np.concatenate((t1, t2))
        ok = _in_range(t, 0.0, np.concatenate((h, h)))
        aa = np.concatenate((p, p)) - np.clip(t, 0.0, None)
        bb = np.concatenate((b, b))
        return aa[ok], bb[ok]

    def _interior(self, A, B, vA, vB, FA, FB, sa, sb, rmax):
        beta = self.params.beta
        na, nb = len(A) - 1, len(B) - 1
        if na < 1 or nb < 1:
            return np.zeros(0), np.zeros(0)
        I, J = np.meshgrid(np.arange(na), np.arange(nb), indexing='ij')
        I, J = I.ravel(), J.ravel()
        near = (B[J] - A[I+1]) <= 2 * rmax
        I, J = I[near], J[near]

        va, s_a, vb, s_b = vA[I], sa[I], vB[J], sb[J]
        ha, hb = A[I+1] - A[I], B[J+1] - B[J]
        outa, outb = [], []

        # |f| sloped on the b cell: w = w0 + w1 u, then one quadratic in u
        m = s_b != 0
        if np.any(m):
            va_, sa_, vb_, sb_ = va[m], s_a[m], vb[m], s_b[m]
            w0 = (va_ - vb_) / sb_
            w1 = sa_ / sb_
            D0 = B[J[m]] - A[I[m]] + w0
            D1 = w1 - 1
            K = FB[J[m]] - FA[I[m]]
            c0 = K + vb_ * w0 + sb_ * w0 * w0 / 2
            c1 = vb_ * w1 + sb_ * w0 * w1 - va_
            c2 = sb_ * w1 * w1 / 2 - sa_ / 2
            Q2 = sa_ * D1 - (1 - beta) * c2
            Q1 = va_ * D1 + sa_ * D0 - (1 - beta) * c1
            Q0 = va_ * D0 - (1 - beta) * c0
            for u in _quadratic_roots(Q2, Q1, Q0):
                w = w0 + w1 * u
                ok = _in_range(u, 0.0, ha[m]) & _in_range(w, 0.0, hb[m])
                outa.append((A[I[m]] + u)[ok])
                outb.append((B[J[m]] + w)[ok])

        # |f| flat on the b cell and sloped on the a cell: a is pinned, b from its edge equation
        m = (s_b == 0) & (s_a != 0)
        if np.any(m):
            astar = A[I[m]] + (vb[m] - va[m]) / s_a[m]
            ok = _in_range(astar - A[I[m]], 0.0, ha[m])
            if np.any(ok):
                ca, cb = self._solve_b(astar[ok], J[m][ok], B, vB, FB, sb)
                outa.append(ca)
                outb.append(cb)

        if not outa:
            return np.zeros(0), np.zeros(0)
        return np.concatenate(outa), np.concatenate(outb)

    def candidates(self, x):
        "All (a, b) pairs that can realize the supremum at x."
        A, B = self._grids(x)
        vA, vB = self._abs_at(A), self._abs_at(B)
        FA, FB = self.F(A), self.F(B)
        sa = np.diff(vA) / np.diff(A) if len(A) > 1 else np.zeros(0)
        sb = np.diff(vB) / np.diff(B) if len(B) > 1 else np.zeros(0)

        ca, cb = np.meshgrid(A, B, indexing='ij')
        ca, cb = [ca.ravel()], [cb.ravel()]

        v0 = float(self.phi(ca[0], cb[0]).max())
        rmax = self.radius_bound(v0) if v0 > 0 else np.inf

        if len(B) > 1:
            a = np.repeat(A, len(B) - 1)
            j = np.tile(np.arange(len(B) - 1), len(A))
            ea, eb = self._solve_b(a, j, B, vB, FB, sb)
            ca.append(ea)
            cb.append(eb)
        if len(A) > 1:
            b = np.repeat(B, len(A) - 1)
            i = np.tile(np.arange(len(A) - 1), len(B))
            ea, eb = self._solve_a(b, i, A, vA, FA, sa)
            ca.append(ea)
            cb.append(eb)

        ia, ib = self._interior(A, B, vA, vB, FA, FB, sa, sb, rmax)
        ca.append(ia)
        cb.append(ib)

        ca, cb = np.concatenate(ca), np.concatenate(cb)
        ca = np.clip(ca, A[0], x)
        cb = np.clip(cb, x, B[-1])
        keep = (cb - ca) > _MIN_WIDTH
        return ca[keep], cb[keep]

    def _select(self, ca, cb, vals):
        """
        Among candidates within tol_val (relative) of the best value, the one with the
        largest a, then the smallest b.
        """
        best = vals.max()
        tie = vals >= best * (1 - self.tol_val)
        amax = ca[tie].max()
        tie &= ca >= amax - 1e-12 * max(1.0, abs(amax))
        k = np.flatnonzero(tie)[np.argmin(cb[tie])]
        return k

    def eval_uncentered(self, x):
        if self.is_zero:
            return 0.0
        ca, cb = self.candidates(x)
        return float(self.phi(ca, cb).max())

    def good_ball(self, x):
        if self.is_zero:
            raise MxDomainError("the zero function has no good ball")
        ca, cb = self.candidates(x)
        vals = self.phi(ca, cb)
        k = self._select(ca, cb, vals)
        a, b = float(ca[k]), float(cb[k])
        return GoodBall(a, b, (b - a) / 2, float(vals[k]))

    def derivative_at(self, x):
        "(M~f)'(x) = r^beta (|f|(b) - |f|(a)) / (2r) on the good ball (a, b) of radius r."
        ball = self.good_ball(x)
        r = ball.radius
        return float(r ** self.params.beta * (self._abs_at(ball.b) - self._abs_at(ball.a)) / (2 * r))

    def derivative_samples(self, nodes, threads = 1):
        nodes = np.asarray(nodes, dtype=float)
        if self.is_zero:
            return np.zeros_like(nodes)
        chunks = np.array_split(nodes, max(1, min(len(nodes), 64)))
        parts = parallel_map(lambda xs: [self.derivative_at(x) for x in xs], chunks, threads)
        return np.concatenate([np.asarray(p, dtype=float) for p in parts]) if parts else np.zeros(0)

    # Centered search

    def _centered_candidates(self, x):
        X = self.X
        beta = self.params.beta
        R = max(x - X[0], X[-1] - x)
        dist = np.abs(X - x)
        rs = np.unique(np.concatenate(([0.0, R], dist[dist < R])))
        r0, r1 = rs[:-1], rs[1:]
        h = r1 - r0

        g0 = self._abs_at(x + r0) + self._abs_at(x - r0)
        g1 = self._abs_at(x + r1) + self._abs_at(x - r1)
        w = (g1 - g0) / h
        u = g0 - w * r0
        I0 = self.F(x + r0) - self.F(x - r0)

        # r g(r) = (1-beta) I(r) with g(r) = u + w r on the cell
        A2 = w * (1 + beta) / 2
        B1 = beta * u
        C0 = -(1 - beta) * (I0 - u * r0 - w * r0 * r0 / 2)
        cands = [r1]
        for t in _quadratic_roots(A2, B1, C0):
            cands.append(t[_in_range(t, r0, r1)])
        r = np.concatenate(cands)
        return r[r > _MIN_WIDTH / 2]

    def centered_ball(self, x):
        if self.is_zero:
            raise MxDomainError("the zero function has no good ball")
        r = self._centered_candidates(x)
        vals = self.phi(x - r, x + r)
        k = self._select(x - r, x + r, vals)
        rk = float(r[k])
        return GoodBall(x - rk, x + rk, rk, float(vals[k]))

    def eval_centered(self, x):
        if self.is_zero:
            return 0.0
        r = self._centered_candidates(x)
        return float(self.phi(x - r, x + r).max())

    # Independent oracle

    def brute_force_eval(self, x, h):
        """
        Max of Phi over all a <= x <= b with a, b on the h-grid through x, restricted to the
        analytic radius bound.
        """
        if h <= 0:
            raise MxParameterError("oracle resolution must be positive, got {0}".format(h))
        if self.is_zero:
            return 0.0
        X = self.X
        lo, hi = min(x, X[0]), max(x, X[-1])
        v0 = float(self.phi(lo, hi))
        if v0 > 0:
            reach = 2 * self.radius_bound(v0) + h
            lo, hi = max(lo, x - reach), min(hi, x + reach)
        a = x - h * np.arange(int(math.ceil((x - lo) / h)) + 1)
        b = x + h * np.arange(int(math.ceil((hi - x) / h)) + 1)
        Fa, Fb = self.F(a), self.F(b)
        beta = self.params.beta

        best = 0.0
        for k in range(0, len(a), _CHUNK):
            width = b[None,:] - a[k:k+_CHUNK,None]
            mass = Fb[None,:] - Fa[k:k+_CHUNK,None]
            with np.errstate(all='ignore'):
                val = np.where(width > 0, self._c * np.power(np.where(width > 0, width, 1.0), beta - 1) * mass, 0.0)
            best = max(best, float(val.max()))
        return best

    def oracle_modulus(self, value, h):
        """
        Bound on (true sup - grid max): the optimal interval has width at least
        w = (2^beta value / ||f||_inf)^(1/beta), and rounding it outwards to the grid costs a
        factor of at most (1 + 2h/w)^(1-beta).
        """
        if value <= 0 or self.linf <= 0:
            return 0.0
        beta = self.params.beta
        wlo = (2 ** beta * value / self.linf) ** (1 / beta)
        return value * ((1 + 2 * h / wlo) ** (1 - beta) - 1)


# Module-level entry points

def eval_uncentered(f, p, x, tol_val = TOL_VAL):
    return FractionalMaximal(f, p, tol_val).eval_uncentered(x)

def eval_centered(f, p, x, tol_val = TOL_VAL):
    return FractionalMaximal(f, p, tol_val).eval_centered(x)

def good_ball(f, p, x, tol_val = TOL_VAL):
    return FractionalMaximal(f, p, tol_val).good_ball(x)

def derivative_at(f, p, x, tol_val = TOL_VAL):
    return FractionalMaximal(f, p, tol_val).derivative_at(x)

def brute_force_eval(f, p, x, h):
    return FractionalMaximal(f, p).brute_force_eval(x, h)


# Checks

def holder_bound_check(f, p, points, slack = 1e-9):
    """
    M~_beta f(x) <= 2^-beta ||f||_{1/beta} at every point.  Returns (passed, max ratio).
    """
    op = FractionalMaximal(f, p)
    bound = 2.0 ** (-op.params.beta) * f.lq_norm(op.params.q_conj)
    vals = np.array([op.eval_uncentered(x) for x in points])
    if bound <= 0:
        return (bool(np.all(vals <= slack)), 0.0)
    return (bool(np.all(vals <= bound + slack)), float(vals.max() / bound) if len(vals) else 0.0)

def decay_bound_check(op, points, slack = 1e-9):
    """
    For f != 0: M~f > 0 everywhere, and outside the support at distance d,
    M~f(x) <= 2^-beta d^(beta-1) ||f||_1 since any admissible interval has length >= d.
    Returns (passed, max ratio to the bound over points outside the support).
    """
    if op.is_zero:
        return (all(op.eval_uncentered(x) == 0 for x in points), 0.0)
    lo, hi = op.f.support()
    beta = op.params.beta
    passed, worst = True, 0.0
    for x in points:
        v = op.eval_uncentered(x)
        if v <= 0:
            passed = False
        d = max(lo - x, x - hi, 0.0)
        if d > 0:
            bound = 2.0 ** (-beta) * d ** (beta - 1) * op.l1
            worst = max(worst, v / bound)
            if v > bound * (1 + slack):
                passed = False
    return (passed, worst)

def claim_radius_check(ball, x, y):
    """
    If the good ball at x reaches left of y < x, its radius is at least (x - y)/2.
    Returns (applicable, passed).
    """
    if not (ball.a < y < x):
        return (False, True)
    return (True, ball.radius >= (x - y) / 2 - 1e-12 * max(1.0, abs(x)))

def claim_monotone_check(op, y, points, slack = 1e-9):
    """
    For y right of the support and y < z < w whose good balls both start left of y,
    M~f(w) <= M~f(z).  Returns (passed, worst ratio M~f(w)/M~f(z)).
    """
    pts = sorted(x for x in points if x > y)
    reach = []
    for x in pts:
        ball = op.good_ball(x)
        if ball.a < y:
            reach.append((x, ball.value))
    worst = 0.0
    passed = True
    for k in range(1, len(reach)):
        prev, cur = reach[k-1][1], reach[k][1]
        ratio = cur / prev if prev > 0 else 0.0
        worst = max(worst, ratio)
        if cur > prev * (1 + slack):
            passed = False
    return (passed, worst)


# Quadrature of |(M~f)'|^q

class QuadratureResult(namedtuple('QuadratureResult', 'value truncation_error quadrature_error')):

    __slots__ = ()

    def __float__(self):
        return float(self.value)


class GridSpec(object):
    """
    Quadrature nodes for integrals of |(M~f)'|^q: composite trapezoid on the core
    [lo - pad, hi + pad] (fine spacing step/2, with coarse step weights on the same nodes for
    the Richardson comparison), then geometric Gauss-Legendre panels outwards to the distance
    where the analytic tail bound falls below tail_tol.
    """

    step = 4e-3
    pad = 1.0
    tail_tol = 1e-10
    tail_ratio = 2.0
    gauss_order = 16
    richardson_tol = 1e-3
    max_refine = 2              # step halvings allowed when the discrepancy is too large

    _FIELDS = ('step', 'pad', 'tail_tol', 'tail_ratio', 'gauss_order', 'richardson_tol', 'max_refine')

    def __init__(self, **kwargs):
        for k,v in kwargs.items():
            if k not in self._FIELDS:
                raise MxParameterError("unknown grid setting '{0}'".format(k))
            setattr(self, k, v)
        if self.step <= 0 or self.tail_tol <= 0 or self.richardson_tol <= 0:
            raise MxParameterError("grid step and tolerances must be positive")
        if self.pad < 0 or self.tail_ratio <= 1 or int(self.gauss_order) < 2:
            raise MxParameterError("invalid grid: pad >= 0, tail_ratio > 1 and gauss_order >= 2 are required")
        self.gauss_order = int(self.gauss_order)
        if int(self.max_refine) < 0:
            raise MxParameterError("max_refine must not be negative")
        self.max_refine = int(self.max_refine)

    @classmethod
    def fromConfig(cls, config):
        grid = config.get_grid()
        return cls(**{k: grid[k] for k in cls._FIELDS if k in grid})

    def __repr__(self):
        return "GridSpec({0})".format(", ".join("{0}={1}".format(k, getattr(self, k)) for k in self._FIELDS))

    def refined(self):
        "The same grid with half the core step."
        g = GridSpec(**{k: getattr(self, k) for k in self._FIELDS})
        g.step = self.step / 2
        return g

    def core(self, lo, hi):
        "(nodes, fine weights, coarse weights) of the trapezoid rules on [lo, hi]."
        n = max(2, int(math.ceil((hi - lo) / self.step)))
        xs = np.linspace(lo, hi, 2*n + 1)
        hf = (hi - lo) / (2*n)
        wf = np.full(2*n + 1, hf)
        wf[0] = wf[-1] = hf / 2
        wc = np.zeros(2*n + 1)
        wc[::2] = 2 * hf
        wc[0] = wc[-1] = hf
        return xs, wf, wc

    def truncation(self, K, beta):
        """
        Distance D past the support edge beyond which one side contributes at most tail_tol/2,
        from |(M~f)'| <= K (d/2)^(beta-2).  Returns (D, bound actually achieved at max(D, pad)).
        """
        q = 1.0 / (1.0 - beta)
        e = (2.0 - beta) * q
        if K <= 0:
            return (self.pad, 0.0)
        coef = K ** q * 2.0 ** e / (e - 1)
        D = (coef / (self.tail_tol / 2)) ** (1.0 / (e - 1))
        D = max(D, self.pad)
        return (D, 2 * coef * D ** (1 - e))

    def tail(self, start, end):
        "Gauss-Legendre nodes and weights on geometric panels covering distances [start, end]."
        if end <= start:
            return np.zeros(0), np.zeros(0)
        gx, gw = np.polynomial.legendre.leggauss(self.gauss_order)
        edges = [start]
        while edges[-1] < end:
            nxt = max(edges[-1] * self.tail_ratio, edges[-1] + max(self.pad, self.step))
            edges.append(min(nxt, end))
        nodes, weights = [], []
        for a,b in zip(edges, edges[1:]):
            nodes.append((b - a) / 2 * gx + (a + b) / 2)
            weights.append((b - a) / 2 * gw)
        return np.concatenate(nodes), np.concatenate(weights)


class DerivativeQuadrature(object):
    """
    Samples (M~_beta f)' of several functions on one shared node set, so that norms and
    pairwise distances of the derivatives all come from the same quadrature.
    """

    def __init__(self, functions, params, grid, threads = None, tol_val = TOL_VAL):
        self.params = params if isinstance(params, BetaParams) else BetaParams(params)
        self.grid = grid
        self.ops = [FractionalMaximal(f, self.params, tol_val) for f in functions]
        beta = self.params.beta

        supps = [op.f.support() for op in self.ops if not op.is_zero]
        if not supps:
            self.samples = None
            self.truncation_error = 0.0
            return

        lo = min(s[0] for s in supps)
        hi = max(s[1] for s in supps)
        K = sum((1 - beta) * op.l1 / 4 for op in self.ops)
        D, self.truncation_error = grid.truncation(K, beta)

        xs, self.wf, self.wc = grid.core(lo - grid.pad, hi + grid.pad)
        td, tw = grid.tail(grid.pad, D)
        self.ncore = len(xs)
        nodes = np.concatenate((xs, hi + td, lo - td))
        self.wtail = np.concatenate((tw, tw))
        debug("derivative quadrature: {0} core nodes, {1} tail nodes, truncation at distance {2:.4g}",
              len(xs), len(self.wtail), D)

        self.samples = [op.derivative_samples(nodes, threads) for op in self.ops]

    def _integrate(self, vals):
        q = self.params.q
        if self.samples is None:
            return QuadratureResult(0.0, 0.0, 0.0)
        p = np.abs(vals) ** q
        core, tail = p[:self.ncore], p[self.ncore:]
        tail_part = float(np.dot(self.wtail, tail))
        fine = (float(np.dot(self.wf, core)) + tail_part) ** (1.0 / q)
        coarse = (float(np.dot(self.wc, core)) + tail_part) ** (1.0 / q)
        err = abs(fine - coarse)
        scale = max(fine, 1e-300)
        if err > self.grid.richardson_tol * scale and fine > 1e-12:
            raise MxToleranceError("quadrature discrepancy {0:.3g} exceeds {1:.3g} relative; refine the grid step".format(
                err / scale, self.grid.richardson_tol))
        if err > 0.5 * self.grid.richardson_tol * scale and fine > 1e-12:
            warn("quadrature discrepancy {0:.3g} is close to the limit {1:.3g}", err / scale, self.grid.richardson_tol)
        return QuadratureResult(fine, self.truncation_error ** (1.0 / q), err)

    def norm(self, i):
        if self.samples is None:
            return QuadratureResult(0.0, 0.0, 0.0)
        return self._integrate(self.samples[i])

    def distance(self, i, k):
        if self.samples is None:
            return QuadratureResult(0.0, 0.0, 0.0)
        return self._integrate(self.samples[i] - self.samples[k])

    # Restrictions to the core interval, where the trapezoid nodes lie

    def _core_lq(self, vals):
        q = self.params.q
        return float(np.dot(self.wf, np.abs(vals[:self.ncore]) ** q)) ** (1.0 / q)

    def core_norm(self, i):
        if self.samples is None:
            return 0.0
        return self._core_lq(self.samples[i])

    def core_distance(self, i, k):
        if self.samples is None:
            return 0.0
        return self._core_lq(self.samples[i] - self.samples[k])

    def pointwise_gap(self, i, k):
        "Median over the core nodes of |(M~f_i)'(x) - (M~f_k)'(x)|."
        if self.samples is None:
            return 0.0
        return float(np.median(np.abs(self.samples[i][:self.ncore] - self.samples[k][:self.ncore])))

def with_refinement(measure, grid):
    """
    Calls measure(grid), halving the grid step after each MxToleranceError, at most
    grid.max_refine times.  Returns (the grid that succeeded, the result).
    """
    level = 0
    while True:
        try:
            return grid, measure(grid)
        except MxToleranceError as ex:
            if level >= grid.max_refine:
                raise
            level += 1
            grid = grid.refined()
            info("{0}; retrying with step {1:.3g}", ex, grid.step)

def derivative_lq_norm(f, p, grid, threads = None, tol_val = TOL_VAL):
    "||(M~_beta f)'||_q with q = 1/(1-beta), as a QuadratureResult."
    return with_refinement(lambda g: DerivativeQuadrature([f], p, g, threads, tol_val).norm(0), grid)[1]

def derivative_lq_distance(f, g, p, grid, threads = None, tol_val = TOL_VAL):
    "||(M~_beta f)' - (M~_beta g)'||_q on a common grid."
    return with_refinement(lambda gs: DerivativeQuadrature([f, g], p, gs, threads, tol_val).distance(0, 1), grid)[1]
