from prefix import *

import math
import os
import tempfile

import numpy as np

from maxop.mcore.pwl_function import PwlFunction, sample_perturbation
from maxop.mutil.errors import MxParameterError

HAT = PwlFunction.hat()
ZIGZAG = PwlFunction([0, 1, 2, 3], [0, 1, -1, 0])

class TestConstruction(unittest.TestCase):

    def test_canonical_forms(self):
        self.assertEqual(PwlFunction([-1, -0.5, 0, 1], [0, 0.5, 1, 0]), HAT)
        self.assertEqual(PwlFunction([-3, -1, 0, 1, 2], [0, 0, 1, 0, 0]), HAT)
        self.assertTrue(PwlFunction([0, 1, 2], [0, 0, 0]).is_zero)
        self.assertIsNone(PwlFunction.zero().support())

    def test_bad_input(self):
        self.assertRaises(MxParameterError, PwlFunction, [0, 1], [0])
        self.assertRaises(MxParameterError, PwlFunction, [0, 1, 2], [1, 1, 0])
        self.assertRaises(MxParameterError, PwlFunction, [0, 2, 1], [0, 1, 0])
        self.assertRaises(MxParameterError, PwlFunction, [0, math.inf, 2], [0, 1, 0])
        self.assertRaises(MxParameterError, PwlFunction.hat, 0.0, 0.0)

    def test_eval(self):
        self.assertEqual(HAT(0.5), 0.5)
        self.assertEqual(HAT(7.0), 0.0)
        np.testing.assert_allclose(HAT([-0.25, 0.0, 2.0]), [0.75, 1.0, 0.0])
        self.assertEqual(PwlFunction.zero()(3.0), 0.0)

    def test_json(self):
        f = PwlFunction.from_json({'breakpoints': [0, 1, 2], 'values': [0, 2.5, 0]})
        self.assertEqual(f.linf_norm(), 2.5)
        self.assertEqual(PwlFunction.from_json(f.to_json()), f)
        self.assertRaises(MxParameterError, PwlFunction.from_json, {'breakpoints': [0, 1, 2], 'values': [0, '1', 0]})
        self.assertRaises(MxParameterError, PwlFunction.from_json, {'breakpoints': [0, 1]})

    def test_json_tolerance(self):
        data = {'breakpoints': [-1, 0, 0.005, 1], 'values': [0, 1, 1, 0]}
        self.assertEqual(len(PwlFunction.from_json(data).breakpoints), 4)
        merged = PwlFunction.from_json(data, tol = 0.01)
        self.assertEqual(len(merged.breakpoints), 3)
        self.assertAlmostEqual(merged.breakpoints[1], 0.0025, delta = 1e-15)

    def test_from_file(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "f.json")
            with open(path, 'w') as fp:
                fp.write('{"breakpoints": [0, 1e-05, 1], "values": [0, 1, 0]}')
            f = PwlFunction.fromFile(path)
        self.assertEqual(f.support(), (0.0, 1.0))

class TestNorms(unittest.TestCase):

    def test_hat(self):
        self.assertAlmostEqual(HAT.l1_norm(), 1.0, delta = 1e-14)
        self.assertEqual(HAT.derivative_l1_norm(), 2.0)
        self.assertAlmostEqual(HAT.w11_norm(), 3.0, delta = 1e-14)
        self.assertEqual(HAT.linf_norm(), 1.0)
        self.assertAlmostEqual(HAT.lq_norm(2), math.sqrt(2/3), delta = 1e-12)
        self.assertEqual(HAT.lq_norm(math.inf), 1.0)
        self.assertRaises(MxParameterError, HAT.lq_norm, 0.5)

    def test_abs_inserts_crossings(self):
        fa = ZIGZAG.abs()
        np.testing.assert_allclose(fa.breakpoints, [0, 1, 1.5, 2, 3])
        self.assertAlmostEqual(fa.l1_norm(), 1.5, delta = 1e-14)
        self.assertAlmostEqual(ZIGZAG.l1_norm(), 1.5, delta = 1e-14)

    def test_integral_abs(self):
        self.assertAlmostEqual(HAT.integral_abs(-1, 0), 0.5, delta = 1e-14)
        self.assertAlmostEqual(HAT.integral_abs(-0.5, 0.5), 0.75, delta = 1e-14)
        self.assertAlmostEqual(HAT.integral_abs(-10, 10), 1.0, delta = 1e-14)

    def test_zero(self):
        z = PwlFunction.zero()
        self.assertEqual(z.l1_norm(), 0.0)
        self.assertEqual(z.lq_norm(3), 0.0)
        self.assertEqual(z.derivative_l1_norm(), 0.0)

    def test_distances(self):
        self.assertAlmostEqual(HAT.shift(0.25).derivative_l1_distance(HAT), 1.0, delta = 1e-12)
        self.assertTrue(HAT.almost_equal(HAT.shift(1e-12)))
        self.assertAlmostEqual(PwlFunction.tents([(0, 1, 1), (3, 1, 2)]).l1_norm(), 3.0, delta = 1e-12)

    def test_inequalities(self):
        for f in (HAT, ZIGZAG, PwlFunction.tents([(0, 1, 1), (1.5, 0.5, -2)])):
            self.assertTrue(f.sobolev_embedding_check()[0])
            for q in (1.5, 2, 4):
                self.assertTrue(f.interpolation_check(q)[0])
        self.assertRaises(MxParameterError, HAT.interpolation_check, 1)

class TestPerturbations(unittest.TestCase):

    def test_families(self):
        self.assertAlmostEqual(sample_perturbation(HAT, 'scaling', 4).linf_norm(), 1.25, delta = 1e-14)
        self.assertEqual(sample_perturbation(HAT, 'translate', 2).support(), (-0.5, 1.5))
        self.assertAlmostEqual(sample_perturbation(HAT, 'additive', 2)(0.0), 1.5, delta = 1e-14)
        bump = PwlFunction.hat(5.0)
        self.assertAlmostEqual(sample_perturbation(HAT, 'additive', 4, bump)(5.0), 0.25, delta = 1e-14)

    def test_converges_in_w11(self):
        for kind in ('scaling', 'additive', 'translate'):
            dists = [sample_perturbation(HAT, kind, j).sub(HAT).w11_norm() for j in (1, 4, 16)]
            self.assertGreater(dists[0], dists[1])
            self.assertGreater(dists[1], dists[2])

    def test_errors(self):
        self.assertRaises(MxParameterError, sample_perturbation, HAT, 'scaling', 0)
        self.assertRaises(MxParameterError, sample_perturbation, HAT, 'rotate', 1)

if __name__ == '__main__':
    unittest.main()
