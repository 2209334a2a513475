import math

from fractions import Fraction
from functools import reduce
from itertools import accumulate

import voluptuous as V

from maxop.mutil.errors import MxParameterError
from maxop.mutil.config import load_structured_file, validate_with
from maxop.mutil.misc import parse_rational, rational_str

_Rational = V.Any(int, str)

_signal_schema = V.Schema({
    'tail_left': _Rational,
    'tail_right': _Rational,
    'offset': int,
    V.Required('values'): [ _Rational ],
})

def _lcm(a, b):
    return a * b // math.gcd(a, b)


class DiscreteSignal(object):
    """
    A function of bounded variation on the integers, restricted to the eventually constant
    ones: a finite window of exact rational values starting at 'offset', with the constant
    'tail_left' everywhere to the left of the window and 'tail_right' everywhere to the right.

    Signals are immutable and always stored in canonical form: window entries equal to the
    adjacent tail are trimmed, so two signals are equal exactly when they are equal as functions.
    """

    tail_left = Fraction(0)
    tail_right = Fraction(0)
    offset = 0
    values = ()

    _denominator = None         # common denominator of every |f(n)|
    _prefix = None              # prefix sums of |values|, scaled by _denominator
    _abs_left = 0               # |tail_left| scaled by _denominator
    _abs_right = 0

    def __init__(self, values = (), offset = 0, tail_left = 0, tail_right = 0):
        if isinstance(offset, bool) or not isinstance(offset, int):
            raise MxParameterError("signal offset must be an integer: '{0}'".format(offset))

        vals = tuple(parse_rational(v) for v in values)
        tl = parse_rational(tail_left)
        tr = parse_rational(tail_right)

        start, end = 0, len(vals)
        while start < end and vals[start] == tl:
            start += 1
        while end > start and vals[end-1] == tr:
            end -= 1

        self.tail_left = tl
        self.tail_right = tr
        self.values = vals[start:end]

        if not self.values and tl == tr:
            self.offset = 0
        else:
            self.offset = offset + start

    # Constructors

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, c):
        return cls((), 0, c, c)

    @classmethod
    def impulse(cls, n = 0, c = 1):
        return cls((c,), n)

    @classmethod
    def indicator(cls, lo, hi, c = 1):
        if lo > hi:
            raise MxParameterError("indicator window is empty: [{0},{1}]".format(lo, hi))
        return cls((c,) * (hi - lo + 1), lo)

    @classmethod
    def step(cls, left, right, at = 0):
        "f(n) = left for n < at, right for n >= at"
        return cls((), at, left, right)

    @classmethod
    def from_json(cls, data):
        data = validate_with(_signal_schema, data, "signal")
        return cls(data['values'], data.get('offset', 0), data.get('tail_left', 0), data.get('tail_right', 0))

    @classmethod
    def fromFile(cls, path):
        return cls.from_json(load_structured_file(path))

    def to_json(self):
        return {
            'tail_left': rational_str(self.tail_left),
            'tail_right': rational_str(self.tail_right),
            'offset': self.offset,
            'values': [rational_str(v) for v in self.values],
        }

    # Basic structure

    @property
    def end(self):
        "First index of the right tail."
        return self.offset + len(self.values)

    @property
    def zero_tails(self):
        return self.tail_left == 0 and self.tail_right == 0

    @property
    def is_zero(self):
        return self.zero_tails and not self.values

    def support(self):
        """
        Returns (lo, hi), the smallest window outside which f agrees with its tails, or None when
        no such point exists (constants and pure steps).
        """
        if not self.values:
            return None
        return (self.offset, self.end - 1)

    def __call__(self, n):
        if n < self.offset:
            return self.tail_left
        if n >= self.end:
            return self.tail_right
        return self.values[n - self.offset]

    eval = __call__

    def __eq__(self, other):
        if not isinstance(other, DiscreteSignal):
            return NotImplemented
        return (self.tail_left == other.tail_left and self.tail_right == other.tail_right and
                self.offset == other.offset and self.values == other.values)

    def __hash__(self):
        return hash((self.tail_left, self.tail_right, self.offset, self.values))

    def __repr__(self):
        return "DiscreteSignal({0}, offset={1}, tail_left={2}, tail_right={3})".format(
            [rational_str(v) for v in self.values], self.offset,
            rational_str(self.tail_left), rational_str(self.tail_right))

    # Exact sums of |f|

    def _ensure_prefix(self):
        if self._prefix is not None:
            return
        mags = [abs(v) for v in self.values]
        den = reduce(_lcm, (m.denominator for m in mags),
                     _lcm(self.tail_left.denominator, self.tail_right.denominator))
        self._denominator = den
        self._abs_left = int(abs(self.tail_left) * den)
        self._abs_right = int(abs(self.tail_right) * den)
        self._prefix = tuple(accumulate((int(m * den) for m in mags), initial = 0))

    @property
    def denominator(self):
        "Every partial sum of |f| is an integer multiple of 1/denominator."
        self._ensure_prefix()
        return self._denominator

    @property
    def abs_tails_scaled(self):
        self._ensure_prefix()
        return (self._abs_left, self._abs_right)

    def abs_sum_scaled(self, x, y):
        """
        Returns denominator * sum(|f(k)| for k in [x,y]) as an integer, in constant time.
        An empty range (y < x) sums to zero.
        """
        if y < x:
            return 0
        self._ensure_prefix()
        o, e = self.offset, self.end
        total = 0
        if x < o:
            total += (min(y, o - 1) - x + 1) * self._abs_left
        if y >= e:
            total += (y - max(x, e) + 1) * self._abs_right
        wx, wy = max(x, o), min(y, e - 1)
        if wx <= wy:
            total += self._prefix[wy - o + 1] - self._prefix[wx - o]
        return total

    def abs_sum(self, x, y):
        return Fraction(self.abs_sum_scaled(x, y), self.denominator)

    def window_average(self, x, y):
        """
        The average of |f| over the integer interval [x,y], dividing by the number of
        summands y-x+1.
        """
        if x > y:
            raise MxParameterError("window_average requires x <= y, got [{0},{1}]".format(x, y))
        return Fraction(self.abs_sum_scaled(x, y), self.denominator * (y - x + 1))

    # Norms

    def derivative(self):
        "The forward difference f(n+1) - f(n), which always has zero tails."
        lo = self.offset - 1
        return DiscreteSignal([self(n+1) - self(n) for n in range(lo, self.end)], lo)

    def variation(self):
        seq = (self.tail_left,) + self.values + (self.tail_right,)
        return sum((abs(b - a) for a,b in zip(seq, seq[1:])), Fraction(0))

    def bv_norm(self):
        return abs(self.tail_left) + self.variation()

    def lp_norm(self, p):
        """
        The l^p norm.  Exact (a Fraction) for p = 1 and p = infinity, math.inf when a tail is
        nonzero and p is finite, and a float for every other p.  Integer p sums exactly before
        taking the root.
        """
        if p == math.inf or p == 'inf':
            return max([abs(self.tail_left), abs(self.tail_right)] + [abs(v) for v in self.values])
        if p < 1:
            raise MxParameterError("l^p norm requires p >= 1, got {0}".format(p))
        if not self.zero_tails:
            return math.inf
        if p == 1:
            return sum((abs(v) for v in self.values), Fraction(0))
        if float(p).is_integer():
            total = sum((abs(v) ** int(p) for v in self.values), Fraction(0))
            return float(total) ** (1.0 / p)
        return sum(float(abs(v)) ** p for v in self.values) ** (1.0 / p)

    # Pointwise arithmetic

    def _pointwise(self, other, op):
        lo = min(self.offset, other.offset)
        end = max(self.end, other.end)
        return DiscreteSignal([op(self(n), other(n)) for n in range(lo, end)], lo,
                              op(self.tail_left, other.tail_left), op(self.tail_right, other.tail_right))

    def add(self, other):
        return self._pointwise(other, lambda a,b: a + b)

    def sub(self, other):
        return self._pointwise(other, lambda a,b: a - b)

    def scale(self, c):
        c = parse_rational(c)
        return DiscreteSignal([c * v for v in self.values], self.offset, c * self.tail_left, c * self.tail_right)

    def abs(self):
        return DiscreteSignal([abs(v) for v in self.values], self.offset, abs(self.tail_left), abs(self.tail_right))

    def shift(self, k):
        "Returns n -> f(n - k)."
        return DiscreteSignal(self.values, self.offset + k, self.tail_left, self.tail_right)

    def reflect(self):
        "Returns n -> f(-n)."
        return DiscreteSignal(tuple(reversed(self.values)), 1 - self.end, self.tail_right, self.tail_left)

    __add__ = add
    __sub__ = sub
    __abs__ = abs

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__
