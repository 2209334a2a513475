"""
Exact discrete Hardy-Littlewood maximal operators on eventually constant signals.

Every value here is an exact Fraction.  Averages are compared by integer cross
multiplication over the signal's scaled prefix sums, so no search ever rounds.
"""

import math

from bisect import bisect_right
from collections import namedtuple
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial

from maxop.mutil.errors import MxParameterError, MxDomainError, MxPreconditionError, MxCheckError
from maxop.mutil.logging import debug
from maxop.mutil.misc import parallel_map, rational_str

CENTERED = 'centered'
UNCENTERED = 'uncentered'
KINDS = (CENTERED, UNCENTERED)

def check_kind(kind):
    if kind not in KINDS:
        raise MxParameterError("unknown maximal operator kind '{0}' (use centered or uncentered)".format(kind))
    return kind


class MaxPoint(namedtuple('MaxPoint', 'value left right at_infinity')):
    """
    The maximal operator at one point.  'left' and 'right' are the extents r, s of the
    minimal good window [n-r, n+s] (equal for the centered operator).  Both are None when the
    supremum is only approached as the window grows without bound.
    """

    __slots__ = ()

    @property
    def radius(self):
        return self.left

    def to_json(self):
        if self.at_infinity:
            return 'inf'
        return {'left': self.left, 'right': self.right}


def centered_max_value(f, n):
    """
    Mf(n) = sup over r >= 0 of the average of |f| on [n-r, n+r].

    Once the window covers the whole of f's window (r >= R0) the sum grows linearly in r, so the
    average is (alpha + beta*r)/(2r+1), which is monotone with limit beta/2.  Below R0 every radius
    is tried, stopping early once even the mass of the R0 box cannot beat the current best.
    """
    o, e = f.offset, f.end
    R0 = max(0, n - o + 1, e - n)
    cap = f.abs_sum_scaled(n - R0, n + R0)

    best_num, best_den, best_r = f.abs_sum_scaled(n, n), 1, 0
    for r in range(1, R0 + 1):
        den = 2*r + 1
        if cap * best_den < best_num * den:
            break
        num = f.abs_sum_scaled(n - r, n + r)
        if num * best_den > best_num * den:
            best_num, best_den, best_r = num, den, r

    al, ar = f.abs_tails_scaled
    beta = al + ar
    alpha = cap - beta * R0
    scale = f.denominator

    if beta - 2*alpha > 0 and beta * best_den > 2 * best_num:
        return MaxPoint(Fraction(beta, 2 * scale), None, None, True)

    return MaxPoint(Fraction(best_num, best_den * scale), best_r, best_r, False)

def uncentered_max_value(f, n):
    """
    M~f(n) = sup over r, s >= 0 of the average of |f| on [n-r, n+s].

    Any window reaching past f's window on one side is a weighted average of a box window
    and that side's tail value, so the supremum is the larger of the box maximum and the two
    tail magnitudes.  The witness is the box window with the smallest r+s, then the smallest r.
    """
    o, e = f.offset, f.end
    RL = max(0, n - o + 1)
    RS = max(0, e - n)
    cap = f.abs_sum_scaled(n - RL, n + RS)

    best_num, best_den, best_r, best_s = f.abs_sum_scaled(n, n), 1, 0, 0
    for r in range(RL + 1):
        if cap * best_den < best_num * (r + 1):
            break
        for s in range(RS + 1):
            den = r + s + 1
            if cap * best_den < best_num * den:
                break
            num = f.abs_sum_scaled(n - r, n + s)
            lhs, rhs = num * best_den, best_num * den
            if lhs > rhs or (lhs == rhs and (r + s, r) < (best_r + best_s, best_r)):
                best_num, best_den, best_r, best_s = num, den, r, s

    tail = max(f.abs_tails_scaled)
    scale = f.denominator

    if tail * best_den > best_num:
        return MaxPoint(Fraction(tail, scale), None, None, True)

    return MaxPoint(Fraction(best_num, best_den * scale), best_r, best_s, False)

def value_function(kind):
    return centered_max_value if check_kind(kind) == CENTERED else uncentered_max_value

def profile_limits(f, kind):
    "Limits of Mf at -infinity and +infinity."
    tl, tr = abs(f.tail_left), abs(f.tail_right)
    if check_kind(kind) == UNCENTERED:
        m = max(tl, tr)
        return (m, m)
    half = (tl + tr) / 2
    return (max(tl, half), max(tr, half))


class MaximalProfile(object):
    """
    Mf (or M~f) evaluated exactly on a window, with the good windows and the limits at
    -infinity and +infinity.  Points outside the window are computed on demand.
    """

    kind = CENTERED
    signal = None
    window_offset = 0
    points = ()
    left_limit = Fraction(0)
    right_limit = Fraction(0)

    def __init__(self, signal, kind, window_offset, points):
        self.signal = signal
        self.kind = check_kind(kind)
        self.window_offset = window_offset
        self.points = tuple(points)
        self.left_limit, self.right_limit = profile_limits(signal, kind)
        self._value_fn = value_function(kind)

    @property
    def hi(self):
        return self.window_offset + len(self.points) - 1

    @property
    def values(self):
        return tuple(p.value for p in self.points)

    @property
    def good_radii(self):
        return tuple(None if p.at_infinity else (p.left, p.right) for p in self.points)

    @property
    def exact(self):
        """
        True when the whole of Mf outside the window is known to be monotone: zero tails and a
        window containing the support.
        """
        f = self.signal
        if not f.zero_tails:
            return False
        supp = f.support()
        return supp is None or (self.window_offset <= supp[0] and supp[1] <= self.hi)

    def point(self, n):
        i = n - self.window_offset
        if 0 <= i < len(self.points):
            return self.points[i]
        return self._value_fn(self.signal, n)

    def mf(self, n):
        return self.point(n).value

    __call__ = mf

    def variation(self, lo = None, hi = None):
        """
        Variation of Mf over [lo, hi].  Either bound defaults to the window edge; -inf/inf
        add the monotone tail out to the limit, which needs an exact profile.
        """
        a = self.window_offset if lo is None or lo == -math.inf else lo
        b = self.hi if hi is None or hi == math.inf else hi
        if a > b:
            raise MxParameterError("empty variation range [{0},{1}]".format(a, b))

        infinite = (lo == -math.inf or hi == math.inf)
        if infinite and not self.exact:
            raise MxDomainError("tail variation of Mf needs zero tails and a window containing the support")

        vals = [self.mf(n) for n in range(a, b + 1)]
        total = sum((abs(y - x) for x,y in zip(vals, vals[1:])), Fraction(0))
        if lo == -math.inf:
            total += abs(vals[0] - self.left_limit)
        if hi == math.inf:
            total += abs(vals[-1] - self.right_limit)
        return total

    def to_json(self):
        return {
            'kind': self.kind,
            'window': [self.window_offset, self.hi],
            'values': [rational_str(p.value) for p in self.points],
            'good_radii': [p.to_json() for p in self.points],
            'left_limit': rational_str(self.left_limit),
            'right_limit': rational_str(self.right_limit),
            'signal': self.signal.to_json(),
        }

def maximal_profile(f, kind, window, threads = 1):
    lo, hi = window
    if lo > hi:
        raise MxParameterError("profile window is empty: [{0},{1}]".format(lo, hi))
    fn = value_function(kind)
    points = parallel_map(lambda n: fn(f, n), range(lo, hi + 1), threads)
    return MaximalProfile(f, kind, lo, points)

def total_variation_of_max(f, kind = CENTERED):
    """
    Var(Mf) over all of Z.  Beyond the support of a zero-tail signal Mf is non-increasing
    going outwards, so the total is the variation over the support plus the two edge values.
    """
    if not f.zero_tails:
        raise MxDomainError("exact Var(Mf) is only available for signals with zero tails")
    supp = f.support()
    if supp is None:
        return Fraction(0)
    return maximal_profile(f, kind, supp).variation(-math.inf, math.inf)


# Extrema structure of a profile

class ExtremumInterval(namedtuple('ExtremumInterval', 'kind lo hi value')):

    __slots__ = ()

    MAX = 'max'
    MIN = 'min'

    @property
    def is_max(self):
        return self.kind == self.MAX

    @property
    def is_min(self):
        return self.kind == self.MIN


class ExtremaDecomposition(object):

    profile = None
    intervals = ()

    def __init__(self, profile, intervals):
        self.profile = profile
        self.intervals = tuple(intervals)

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    @property
    def maxima(self):
        return [iv for iv in self.intervals if iv.is_max]

    @property
    def minima(self):
        return [iv for iv in self.intervals if iv.is_min]

    def preceding(self, interval):
        i = self.intervals.index(interval)
        return self.intervals[i-1] if i > 0 else None

def _extend_plateau(p, n, step):
    val = p.mf(n)
    while p.mf(n + step) == val:
        n += step
    return n

def extrema_decomposition(p):
    """
    Splits Mf on the profile window into maximal constant runs and tags the strict local
    maxima and minima among them.  A run touching the window edge with an equal neighbour
    outside is extended when the profile is exact (Mf decays to zero out there) and is an
    error otherwise, except for a constant profile, which has no extrema.
    """
    runs = []
    for i, v in enumerate(p.values):
        n = p.window_offset + i
        if runs and runs[-1][2] == v:
            runs[-1][1] = n
        else:
            runs.append([n, n, v])

    first, last = runs[0], runs[-1]
    left_nb = p.mf(first[0] - 1)
    right_nb = p.mf(last[1] + 1)

    if p.exact and first[2] > 0 and left_nb == first[2]:
        first[0] = _extend_plateau(p, first[0], -1)
        left_nb = p.mf(first[0] - 1)
    if p.exact and last[2] > 0 and right_nb == last[2]:
        last[1] = _extend_plateau(p, last[1], 1)
        right_nb = p.mf(last[1] + 1)

    if len(runs) == 1 and left_nb == first[2] == right_nb:
        return ExtremaDecomposition(p, ())

    if left_nb == first[2] or right_nb == last[2]:
        raise MxDomainError("ambiguous extrema at the edge of window [{0},{1}]; widen the window".format(
            p.window_offset, p.hi))

    intervals = []
    for k, (lo, hi, v) in enumerate(runs):
        before = runs[k-1][2] if k > 0 else left_nb
        after = runs[k+1][2] if k < len(runs) - 1 else right_nb
        if before < v > after:
            intervals.append(ExtremumInterval(ExtremumInterval.MAX, lo, hi, v))
        elif before > v < after:
            intervals.append(ExtremumInterval(ExtremumInterval.MIN, lo, hi, v))

    return ExtremaDecomposition(p, intervals)


KurkaSums = namedtuple('KurkaSums', 's1 s2 k u')

def kurka_sums(p, k, u):
    """
    Total rise S1 and total fall S2 of Mf across the extrema lying in [k, u], with k and u
    themselves included as end terms.  u may be math.inf for an exact profile, in which case
    the last term is the limit of Mf at +infinity.
    """
    if k < p.window_offset or (u != math.inf and u > p.hi):
        raise MxParameterError("range [{0},{1}] is not inside profile window [{2},{3}]".format(
            k, u, p.window_offset, p.hi))
    if u < k:
        raise MxParameterError("empty range [{0},{1}]".format(k, u))

    dec = extrema_decomposition(p)

    if u == math.inf:
        if not p.exact:
            raise MxDomainError("kurka sums to infinity need zero tails and a window containing the support")
        inner = [iv.hi for iv in dec if k < iv.hi]
        vals = [p.mf(k)] + [p.mf(x) for x in inner] + [p.right_limit]
    else:
        inner = [iv.hi for iv in dec if k < iv.hi < u]
        vals = [p.mf(k)] + [p.mf(x) for x in inner] + [p.mf(u)]

    s1 = s2 = Fraction(0)
    for x,y in zip(vals, vals[1:]):
        if y > x:
            s1 += y - x
        else:
            s2 += x - y
    return KurkaSums(s1, s2, k, u)

def critical_set(p, f, k, window):
    """
    Positions (in the decomposition's list of maxima) of the local maxima [a-, a+] whose
    preceding point b+ (the right end of the previous local minimum, else k) and a+ lie in the
    window, with Mf(a) != |f(a)| throughout and a+ - r(a+) <= k.
    """
    lo, hi = window
    dec = extrema_decomposition(p)
    result = []
    for i, iv in enumerate(dec.maxima):
        prev = dec.preceding(iv)
        b = prev.hi if prev is not None else k
        if b < lo or iv.hi > hi:
            continue
        if any(p.mf(a) == abs(f(a)) for a in range(iv.lo, iv.hi + 1)):
            continue
        pt = p.point(iv.hi)
        if pt.at_infinity:
            continue
        if iv.hi - pt.left <= k:
            result.append(i)
    return result


class Lemma7Witness(namedtuple('Lemma7Witness', 's bound attained_value radius radius_step')):
    """
    A point s in [b+, a+ + r] with |f(s)| >= Mf(b+) + (Mf(a+) - Mf(b+))(2r+1)/(2(a+ - b+)).
    radius_step records whether a+ - r < b+ held for the good radius r at a+.
    """
    __slots__ = ()

def _check_local_max_config(p, local_max, local_min):
    f = p.signal
    if not (local_max.is_max and local_min.is_min):
        raise MxPreconditionError("expected a local maximum and a local minimum, got {0} and {1}".format(
            local_max.kind, local_min.kind))
    if local_max.hi == local_min.hi:
        raise MxPreconditionError("degenerate configuration a+ = b+ = {0}".format(local_max.hi))
    if not local_min.hi < local_max.lo:
        raise MxPreconditionError("local minimum [{0},{1}] does not precede local maximum [{2},{3}]".format(
            local_min.lo, local_min.hi, local_max.lo, local_max.hi))
    for a in range(local_max.lo, local_max.hi + 1):
        if p.mf(a) == abs(f(a)):
            raise MxPreconditionError("Mf(a) = |f(a)| at a = {0} on the local maximum".format(a))
    between = [p.mf(n) for n in range(local_min.hi, local_max.lo + 1)]
    if any(y < x for x,y in zip(between, between[1:])):
        raise MxPreconditionError("Mf is not monotone on [{0},{1}]".format(local_min.hi, local_max.lo))
    pt = p.point(local_max.hi)
    if pt.at_infinity:
        raise MxPreconditionError("no attained good radius at a+ = {0}".format(local_max.hi))
    return pt.left

def lemma7_witness(p, local_max, local_min):
    """
    Finds s with |f(s)| at least the averaged bound, scanning [a+ + r - 2(a+ - b+), a+ + r]
    (clipped to start at b+) and taking the first point where |f| is largest.  Violated
    preconditions raise MxPreconditionError; a scan that falls short of the bound raises
    MxCheckError.
    """
    if p.kind != CENTERED:
        raise MxParameterError("lemma7_witness applies to the centered operator only")

    r = _check_local_max_config(p, local_max, local_min)
    f = p.signal
    a, b = local_max.hi, local_min.hi
    gap = a - b
    ma, mb = p.mf(a), p.mf(b)

    bound = mb + (ma - mb) * Fraction(2*r + 1, 2*gap)

    s_lo = max(b, a + r - 2*gap)
    s_hi = a + r
    s = max(range(s_lo, s_hi + 1), key = lambda x: (abs(f(x)), -x))
    attained = abs(f(s))

    if attained < bound:
        raise MxCheckError("no point in [{0},{1}] reaches the bound {2}".format(s_lo, s_hi, bound),
                           check = 'lemma7')

    return Lemma7Witness(s, bound, attained, r, a - r < b)

def harvest_lemma7_configurations(p):
    """
    Returns every (local max, preceding local min) pair of a centered profile that satisfies
    the witness preconditions.
    """
    if p.kind != CENTERED:
        return []
    f = p.signal
    dec = extrema_decomposition(p)
    found = []
    for iv in dec.maxima:
        prev = dec.preceding(iv)
        if prev is None:
            continue
        if any(p.mf(a) == abs(f(a)) for a in range(iv.lo, iv.hi + 1)):
            continue
        if p.point(iv.hi).at_infinity:
            continue
        found.append((iv, prev))
    return found

def average_shift_inequality_check(f, m, n, r):
    """
    Checks A_r f(m) >= A_r f(n) - 2C|m-n|/(2r+1) with C = sup|f|.  Returns (passed, slack)
    where slack is the exact difference of the two sides.
    """
    if r < 0:
        raise MxParameterError("radius must be nonnegative, got {0}".format(r))
    C = f.lp_norm(math.inf)
    lhs = f.window_average(m - r, m + r)
    rhs = f.window_average(n - r, n + r) - Fraction(2 * abs(m - n), 2*r + 1) * C
    slack = lhs - rhs
    return (slack >= 0, slack)


# Closed form of Mf beyond the support, and distances between two maximal functions

class DecayTail(object):
    """
    Mf outside the support of a zero-tail signal, in closed form.

    Work in the outward coordinate m (m = n on the right, m = -n on the left).  For m at or
    beyond the support edge, every useful window ends at or past m and starts at some t in the
    support, so Mf(m) = max_t Suf(t)/(c(m-t)+1), with Suf(t) the mass of |f| from t outwards and
    c = 2 (centered) or 1 (uncentered).  That is 1/min_t l_t(m) for the lines
    l_t(m) = (c(m-t)+1)/Suf(t), and the lower envelope of those lines is built exactly.
    """

    kind = CENTERED
    side = 'right'
    anchor = None               # support edge in the outward coordinate; None for f = 0
    pieces = ()                 # (start, t, Suf(t)) in increasing start order
    _starts = ()

    def __init__(self, f, kind, side = 'right'):
        if not f.zero_tails:
            raise MxDomainError("decay tails need a signal with zero tails")
        if side not in ('left', 'right'):
            raise MxParameterError("side must be left or right, not '{0}'".format(side))

        self.kind = check_kind(kind)
        self.side = side
        self._c = 2 if kind == CENTERED else 1

        g = f if side == 'right' else f.reflect()
        supp = g.support()
        if supp is None:
            return

        lo, hi = supp
        self.anchor = hi
        lines = []
        suffix = Fraction(0)
        for t in range(hi, lo - 1, -1):
            suffix += abs(g(t))
            if suffix > 0:
                lines.append((t, suffix))

        self.pieces = tuple(self._envelope(lines, Fraction(hi)))
        self._starts = [math.ceil(x) for x,_,_ in self.pieces]

    def _line(self, line, m):
        t, S = line
        return (self._c * (m - t) + 1) / S

    def _envelope(self, lines, x):
        c = self._c
        cur = min(lines, key = lambda L: (self._line(L, x), -L[1]))
        pieces = [(x, cur[0], cur[1])]
        while True:
            best = None
            t1, S1 = cur
            for L in lines:
                t2, S2 = L
                if S2 <= S1:
                    continue            # not a smaller slope
                xi = ((c*t1 - 1) * S2 - (c*t2 - 1) * S1) / (c * (S2 - S1))
                if xi <= x:
                    continue
                if best is None or (xi, -S2) < (best[0], -best[1][1]):
                    best = (xi, L)
            if best is None:
                break
            x, cur = best
            pieces.append((x, cur[0], cur[1]))
        return pieces

    def piece_at(self, m):
        "The (t, Suf(t)) pair realizing Mf at integer outward coordinate m."
        i = bisect_right(self._starts, m) - 1
        _, t, S = self.pieces[max(i, 0)]
        return (t, S)

    def value_out(self, m):
        if self.anchor is None:
            return Fraction(0)
        if m < self.anchor:
            raise MxParameterError("point {0} is inside the support".format(m))
        t, S = self.piece_at(m)
        return S / (self._c * (m - t) + 1)

    def value(self, n):
        return self.value_out(n if self.side == 'right' else -n)

    def polynomial(self, m):
        """
        (S, P) with Mf = S/P(x) on the piece active at m, P a float Polynomial in x.  The zero
        function is (0, 1).
        """
        if self.anchor is None:
            return (0.0, Polynomial([1.0]))
        t, S = self.piece_at(m)
        return (float(S), Polynomial([float(1 - self._c * t), float(self._c)]))

def decay_tail(f, kind = CENTERED, side = 'right'):
    "Mf beyond the support of f on one side, in closed form."
    return DecayTail(f, kind, side)


_STEP = Polynomial([1.0, 1.0])

def _critical_points(num, den):
    "Real roots of (num/den)'; numerically located, padded later."
    crit = (num.deriv() * den - num * den.deriv()).trim()
    if crit.degree() < 1:
        return []
    out = []
    for z in crit.roots():
        if not np.isfinite(z):
            continue
        if abs(z.imag) <= 1e-3 * max(1.0, abs(z.real)):
            out.append(z.real)
    return out


class _TailDifference(object):
    """
    D(m) = Mf(m) - Mg(m) for m >= start in the outward coordinate, with both maximal
    functions in closed form.  Integer key points split [start, inf) into blocks on which D
    (or its forward difference) is monotone, so exact evaluation at the keys is enough.
    """

    def __init__(self, tf, tg, start):
        self.tf = tf
        self.tg = tg
        self.start = start
        bounds = set([start])
        for tail in (tf, tg):
            bounds.update(s for s in tail._starts if s > start)
        self.bounds = sorted(bounds)

    def value(self, m):
        return self.tf.value_out(m) - self.tg.value_out(m)

    def _segments(self):
        b = self.bounds
        for i, lo in enumerate(b):
            hi = b[i+1] - 1 if i + 1 < len(b) else None
            yield lo, hi

    def _rational(self, m):
        S1, P1 = self.tf.polynomial(m)
        S2, P2 = self.tg.polynomial(m)
        return (S1 * P2 - S2 * P1, P1 * P2)

    def keys(self, delta = False):
        keys = set()
        for lo, hi in self._segments():
            num, den = self._rational(lo)
            top = hi
            if delta:
                num, den = num(_STEP) * den - num * den(_STEP), den * den(_STEP)
                if hi is not None:
                    keys.add(hi)
                    top = hi - 1
            keys.add(lo)
            if top is not None:
                keys.add(max(lo, top))
            for z in _critical_points(num, den):
                if not (z >= lo - 2 and (top is None or z <= top + 2)):
                    continue
                base = math.floor(z)
                for k in range(base - 1, base + 3):
                    if k >= lo and (top is None or k <= top):
                        keys.add(k)
        return sorted(keys)

    def variation(self):
        ks = self.keys()
        vals = [self.value(k) for k in ks]
        total = sum((abs(y - x) for x,y in zip(vals, vals[1:])), Fraction(0))
        return total + abs(vals[-1])

    def sup(self):
        return max(abs(self.value(k)) for k in self.keys())

    def delta_sup(self):
        return max(abs(self.value(k + 1) - self.value(k)) for k in self.keys(delta = True))


def _hull(f, g):
    supps = [s for s in (f.support(), g.support()) if s is not None]
    if not supps:
        return None
    return (min(s[0] for s in supps), max(s[1] for s in supps))

class _MaxDifference(object):

    def __init__(self, f, g, kind):
        if not (f.zero_tails and g.zero_tails):
            raise MxDomainError("exact distances between maximal functions need zero tails")
        self.kind = check_kind(kind)
        self.hull = _hull(f, g)
        if self.hull is None:
            return
        lo, hi = self.hull
        pf = maximal_profile(f, kind, self.hull)
        pg = maximal_profile(g, kind, self.hull)
        self.window = [x - y for x,y in zip(pf.values, pg.values)]
        self.right = _TailDifference(DecayTail(f, kind, 'right'), DecayTail(g, kind, 'right'), hi)
        self.left = _TailDifference(DecayTail(f, kind, 'left'), DecayTail(g, kind, 'left'), -lo)
        debug("difference over hull {0}: {1} right keys, {2} left keys", self.hull,
              len(self.right.bounds), len(self.left.bounds))

    def variation(self):
        if self.hull is None:
            return Fraction(0)
        w = self.window
        inner = sum((abs(y - x) for x,y in zip(w, w[1:])), Fraction(0))
        return inner + self.right.variation() + self.left.variation()

    def sup(self):
        if self.hull is None:
            return Fraction(0)
        return max([abs(x) for x in self.window] + [self.right.sup(), self.left.sup()])

    def delta_sup(self):
        if self.hull is None:
            return Fraction(0)
        w = self.window
        inner = [abs(y - x) for x,y in zip(w, w[1:])]
        return max(inner + [self.right.delta_sup(), self.left.delta_sup()])

def difference_variation(f, g, kind = CENTERED):
    "Exact Var(Mf - Mg) over all of Z for zero-tail f and g."
    return _MaxDifference(f, g, kind).variation()

def sup_distance(f, g, kind = CENTERED):
    "Exact sup |Mf - Mg| over Z."
    return _MaxDifference(f, g, kind).sup()

def derivative_sup_distance(f, g, kind = CENTERED):
    "Exact sup |(Mf)' - (Mg)'| over Z."
    return _MaxDifference(f, g, kind).delta_sup()
