import math

import numpy as np
import voluptuous as V

from maxop.mutil.errors import MxParameterError
from maxop.mutil.config import load_structured_file, validate_with

CANONICAL_TOL = 1e-12           # breakpoints closer than this are merged

_Real = V.Any(float, int)

_pwl_schema = V.Schema({
    V.Required('breakpoints'): [ _Real ],
    V.Required('values'): [ _Real ],
})

PERTURBATION_KINDS = ('scaling', 'additive', 'translate')


class AbsPrimitive(object):
    """
    F(x) = integral of |f| from -infinity to x, which is piecewise quadratic.  Built on the
    breakpoints of |f| (zero crossings included) and evaluated vectorized.
    """

    def __init__(self, fabs):
        x = fabs.breakpoints
        v = fabs.values
        self.x = x
        self.v = v
        if len(x) < 2:
            self.slope = np.zeros(0)
            self.cum = np.zeros(max(len(x), 1))
            self.total = 0.0
            return
        h = np.diff(x)
        self.slope = np.diff(v) / h
        self.cum = np.concatenate(([0.0], np.cumsum(h * (v[:-1] + v[1:]) / 2)))
        self.total = float(self.cum[-1])

    def __call__(self, pts):
        pts = np.asarray(pts, dtype=float)
        if len(self.x) < 2:
            return np.zeros_like(pts)
        k = np.clip(np.searchsorted(self.x, pts, side='right') - 1, 0, len(self.x) - 2)
        d = np.clip(pts, self.x[0], self.x[-1]) - self.x[k]
        return self.cum[k] + self.v[k] * d + self.slope[k] * d * d / 2


class PwlFunction(object):
    """
    A continuous, compactly supported, piecewise-linear function: affine between consecutive
    breakpoints and zero outside [first, last].  The zero function has no breakpoints.
    """

    breakpoints = None
    values = None

    _primitive = None

    def __init__(self, breakpoints = (), values = (), tol = CANONICAL_TOL):
        x = np.asarray(breakpoints, dtype=float).ravel()
        v = np.asarray(values, dtype=float).ravel()
        if len(x) != len(v):
            raise MxParameterError("breakpoints and values differ in length ({0} vs {1})".format(len(x), len(v)))
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise MxParameterError("breakpoints and values must be finite")
        if len(x) and (abs(v[0]) > tol or abs(v[-1]) > tol):
            raise MxParameterError("values at the first and last breakpoints must be 0")
        if np.any(np.diff(x) < -tol):
            raise MxParameterError("breakpoints must be increasing")

        self.breakpoints, self.values = self._canonical(x, v, tol)

    @staticmethod
    def _canonical(x, v, tol):
        if len(x) == 0:
            return x, v

        # merge near-duplicate breakpoints
        keep_x, keep_v = [x[0]], [v[0]]
        for xi, vi in zip(x[1:], v[1:]):
            if xi - keep_x[-1] <= tol:
                keep_x[-1] = (keep_x[-1] + xi) / 2
                keep_v[-1] = (keep_v[-1] + vi) / 2
            else:
                keep_x.append(xi)
                keep_v.append(vi)
        x = np.array(keep_x)
        v = np.array(keep_v)
        v[0] = v[-1] = 0.0

        # drop interior points lying on the segment through their neighbours
        if len(x) > 2:
            inner = np.ones(len(x), dtype=bool)
            lhs = (v[1:-1] - v[:-2]) * (x[2:] - x[:-2])
            rhs = (v[2:] - v[:-2]) * (x[1:-1] - x[:-2])
            scale = np.maximum(1.0, np.abs(v).max()) * (x[-1] - x[0])
            inner[1:-1] = np.abs(lhs - rhs) > tol * scale
            x, v = x[inner], v[inner]

        # strip zero runs at both ends
        lo, hi = 0, len(x) - 1
        while lo < hi and abs(v[lo + 1]) <= tol:
            lo += 1
        while hi > lo and abs(v[hi - 1]) <= tol:
            hi -= 1
        if hi - lo < 2:
            return np.zeros(0), np.zeros(0)
        return x[lo:hi+1].copy(), v[lo:hi+1].copy()

    # Constructors

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def hat(cls, center = 0.0, half_width = 1.0, height = 1.0):
        if half_width <= 0:
            raise MxParameterError("hat half width must be positive")
        return cls([center - half_width, center, center + half_width], [0.0, height, 0.0])

    @classmethod
    def tents(cls, specs):
        "Sum of hats given as (center, half_width, height) triples."
        result = cls.zero()
        for c,w,h in specs:
            result = result.add(cls.hat(c, w, h))
        return result

    @classmethod
    def from_json(cls, data, tol = CANONICAL_TOL):
        data = validate_with(_pwl_schema, data, "piecewise-linear function")
        return cls(data['breakpoints'], data['values'], tol)

    @classmethod
    def fromFile(cls, path, tol = CANONICAL_TOL):
        return cls.from_json(load_structured_file(path), tol)

    def to_json(self):
        return {'breakpoints': [float(b) for b in self.breakpoints],
                'values': [float(v) for v in self.values]}

    # Structure

    @property
    def is_zero(self):
        return len(self.breakpoints) == 0

    def support(self):
        if self.is_zero:
            return None
        return (float(self.breakpoints[0]), float(self.breakpoints[-1]))

    def __call__(self, x):
        if self.is_zero:
            out = np.zeros_like(np.asarray(x, dtype=float))
        else:
            out = np.interp(x, self.breakpoints, self.values, left=0.0, right=0.0)
        return float(out) if np.ndim(out) == 0 else out

    eval = __call__

    def __eq__(self, other):
        if not isinstance(other, PwlFunction):
            return NotImplemented
        return (np.array_equal(self.breakpoints, other.breakpoints) and
                np.array_equal(self.values, other.values))

    __hash__ = None

    def almost_equal(self, other, tol = 1e-9):
        return self.sub(other).linf_norm() <= tol

    def __repr__(self):
        return "PwlFunction({0}, {1})".format(list(self.breakpoints), list(self.values))

    # Algebra

    def abs(self):
        "|f|, with every zero crossing inserted as a breakpoint."
        x, v = self.breakpoints, self.values
        if self.is_zero:
            return self
        cross = np.nonzero(v[:-1] * v[1:] < 0)[0]
        if len(cross):
            xc = x[cross] + (x[cross+1] - x[cross]) * v[cross] / (v[cross] - v[cross+1])
            x = np.insert(x, cross + 1, xc)
            v = np.insert(v, cross + 1, 0.0)
        return PwlFunction(x, np.abs(v))

    def add(self, other):
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        x = np.union1d(self.breakpoints, other.breakpoints)
        return PwlFunction(x, self(x) + other(x))

    def scale(self, c):
        return PwlFunction(self.breakpoints, float(c) * self.values)

    def neg(self):
        return self.scale(-1.0)

    def sub(self, other):
        return self.add(other.neg())

    def shift(self, t):
        "Returns x -> f(x - t)."
        return PwlFunction(self.breakpoints + float(t), self.values)

    __add__ = add
    __sub__ = sub
    __neg__ = neg
    __abs__ = abs

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    # Norms, all from segment geometry

    @property
    def primitive(self):
        if self._primitive is None:
            self._primitive = AbsPrimitive(self.abs())
        return self._primitive

    def integral_abs(self, a, b):
        "Integral of |f| over [a, b]."
        F = self.primitive
        return float(F(b) - F(a))

    def l1_norm(self):
        return self.primitive.total

    def derivative_l1_norm(self):
        return float(np.abs(np.diff(self.values)).sum()) if not self.is_zero else 0.0

    def w11_norm(self):
        return self.l1_norm() + self.derivative_l1_norm()

    def linf_norm(self):
        return float(np.abs(self.values).max()) if not self.is_zero else 0.0

    def lq_norm(self, q):
        """
        (integral |f|^q)^(1/q), integrating |affine|^q exactly per segment:
        h * (b^(q+1) - a^(q+1)) / ((q+1)(b-a)) for endpoint magnitudes a != b, h * a^q otherwise.
        """
        if q == math.inf:
            return self.linf_norm()
        if q < 1:
            raise MxParameterError("L^q norm requires q >= 1, got {0}".format(q))
        fa = self.abs()
        if fa.is_zero:
            return 0.0
        x, v = fa.breakpoints, fa.values
        h = np.diff(x)
        a, b = v[:-1], v[1:]
        diff = b - a
        flat = np.abs(diff) <= 1e-14 * np.maximum(1.0, np.maximum(a, b))
        safe = np.where(flat, 1.0, diff)
        seg = np.where(flat,
                       h * np.power((a + b) / 2, q),
                       h * (np.power(b, q + 1) - np.power(a, q + 1)) / ((q + 1) * safe))
        return float(seg.sum()) ** (1.0 / q)

    def derivative_l1_distance(self, other):
        "||f' - g'||_1"
        return self.sub(other).derivative_l1_norm()

    def sobolev_embedding_check(self):
        "sup|f| <= ||f'||_1 / 2 for compact support.  Returns (passed, lhs, rhs)."
        lhs = self.linf_norm()
        rhs = self.derivative_l1_norm() / 2
        return (lhs <= rhs * (1 + 1e-12) + 1e-15, lhs, rhs)

    def interpolation_check(self, q, slack = 1e-9):
        """
        ||f||_q' <= ||f||_inf^(1/q) ||f||_1^(1/q') with q' = q/(q-1).  Returns (passed, lhs, rhs).
        """
        if q <= 1:
            raise MxParameterError("interpolation check needs q > 1, got {0}".format(q))
        qc = q / (q - 1)
        lhs = self.lq_norm(qc)
        rhs = self.linf_norm() ** (1 / q) * self.l1_norm() ** (1 / qc)
        return (lhs <= rhs * (1 + slack) + 1e-300, lhs, rhs)


def sample_perturbation(f, kind, j, bump = None):
    """
    The j-th member of a family converging to f in W^{1,1}:
      scaling    (1 + 1/j) f
      additive   f + g/j, with g the unit hat unless a bump is given
      translate  f(. - 1/j), shifting the breakpoints exactly
    """
    if j < 1:
        raise MxParameterError("perturbation index must be at least 1, got {0}".format(j))
    if kind == 'scaling':
        return f.scale(1.0 + 1.0 / j)
    if kind == 'additive':
        g = bump if bump is not None else PwlFunction.hat()
        return f.add(g.scale(1.0 / j))
    if kind == 'translate':
        return f.shift(1.0 / j)
    raise MxParameterError("unknown perturbation kind '{0}' (use {1})".format(kind, ", ".join(PERTURBATION_KINDS)))
