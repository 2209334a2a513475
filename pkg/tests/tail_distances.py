from prefix import *

from fractions import Fraction as Fr

from maxop.mcore.discrete_signal import DiscreteSignal
from maxop.mcore.discrete_maximal import (CENTERED, UNCENTERED, DecayTail, decay_tail, centered_max_value, uncentered_max_value,
                                          difference_variation, sup_distance, derivative_sup_distance)
from maxop.mutil.errors import MxParameterError, MxDomainError

DELTA = DiscreteSignal.impulse(0)
TWO_SPIKES = DiscreteSignal([1, 0, 0, 0, 0, 1])
BUMPY = DiscreteSignal([2, 0, "1/2", 0, 0, 3, 1], -3)

class TestDecayTail(unittest.TestCase):

    def test_delta(self):
        right = DecayTail(DELTA, CENTERED)
        left = DecayTail(DELTA, CENTERED, 'left')
        ur = DecayTail(DELTA, UNCENTERED)
        for n in range(0, 12):
            self.assertEqual(right.value(n), Fr(1, 2*n + 1))
            self.assertEqual(left.value(-n), Fr(1, 2*n + 1))
            self.assertEqual(ur.value(n), Fr(1, n + 1))

    def test_function_form(self):
        tail = decay_tail(BUMPY, UNCENTERED, 'left')
        self.assertEqual(tail.side, 'left')
        self.assertEqual(tail.value(-10), uncentered_max_value(BUMPY, -10).value)
        self.assertEqual(decay_tail(DELTA).value(3), Fr(1,7))

    def test_matches_direct_evaluation(self):
        for f in (TWO_SPIKES, BUMPY):
            lo, hi = f.support()
            for kind, fn in ((CENTERED, centered_max_value), (UNCENTERED, uncentered_max_value)):
                right = DecayTail(f, kind)
                left = DecayTail(f, kind, 'left')
                for d in range(0, 30):
                    self.assertEqual(right.value(hi + d), fn(f, hi + d).value)
                    self.assertEqual(left.value(lo - d), fn(f, lo - d).value)

    def test_errors(self):
        self.assertRaises(MxParameterError, DecayTail(TWO_SPIKES, CENTERED).value, 3)
        self.assertRaises(MxParameterError, DecayTail, DELTA, CENTERED, 'up')
        self.assertRaises(MxDomainError, DecayTail, DiscreteSignal.step(1, 0), CENTERED)
        self.assertEqual(DecayTail(DiscreteSignal.zero(), CENTERED).value(7), 0)

class TestDistances(unittest.TestCase):

    def test_scaled_spikes(self):
        g = TWO_SPIKES.scale("5/4")
        self.assertEqual(difference_variation(g, TWO_SPIKES), Fr(6,7))
        self.assertEqual(sup_distance(g, TWO_SPIKES), Fr(1,4))
        self.assertEqual(derivative_sup_distance(g, TWO_SPIKES), Fr(1,6))

    def test_scaled_delta(self):
        self.assertEqual(difference_variation(DELTA.scale("3/2"), DELTA), 1)
        self.assertEqual(difference_variation(DELTA.scale("3/2"), DELTA, UNCENTERED), 1)

    def test_identical(self):
        self.assertEqual(difference_variation(BUMPY, BUMPY), 0)
        self.assertEqual(sup_distance(BUMPY, BUMPY), 0)
        self.assertEqual(derivative_sup_distance(DiscreteSignal.zero(), DiscreteSignal.zero()), 0)

    def test_against_zero(self):
        self.assertEqual(difference_variation(TWO_SPIKES, DiscreteSignal.zero()), Fr(24,7))
        self.assertEqual(sup_distance(TWO_SPIKES, DiscreteSignal.zero()), 1)

    def test_nonzero_tails(self):
        self.assertRaises(MxDomainError, difference_variation, DiscreteSignal.step(1, 0), DELTA)

if __name__ == '__main__':
    unittest.main()
