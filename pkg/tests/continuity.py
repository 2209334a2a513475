from prefix import *

import errno

from fractions import Fraction as Fr

from maxop.mcore.discrete_signal import DiscreteSignal
from maxop.mcore.discrete_maximal import UNCENTERED
from maxop.mcore.pwl_function import PwlFunction, sample_perturbation
from maxop.mcore.fractional_maximal import GridSpec
from maxop.mcore.continuity_lab import (DISCRETE, FRACTIONAL, run_discrete_experiment, run_fractional_experiment,
                                        discrete_member, bump_from_spec, generate_corpus, verify_corpus_discrete,
                                        TENT, verify_corpus_pwl, oracle_max_value, lemma7_results)
from maxop.mutil.errors import MxParameterError, MxDomainError, MxToleranceError, MxCheckError

TWO_SPIKES = DiscreteSignal([1, 0, 0, 0, 0, 1])
DELTA = DiscreteSignal.impulse(0)
HAT = PwlFunction.hat()

TEST_GRID = GridSpec(step = 0.05, tail_tol = 1e-6, richardson_tol = 0.5)
FINE_GRID = GridSpec(step = 0.02, tail_tol = 1e-6, richardson_tol = 0.5)

class TestDiscreteExperiments(unittest.TestCase):

    def test_scaling_rows(self):
        rep = run_discrete_experiment(TWO_SPIKES, 'scaling', [1, 2, 4, 8], threads = 2)
        self.assertTrue(rep.passed, rep.failed_checks)
        for r in rep.rows:
            j = r['j']
            self.assertEqual(r['input_dist'], Fr(4, j))
            self.assertEqual(r['out_dist_primary'], Fr(24, 7*j))
            self.assertEqual(r['out_dist_sup'], Fr(1, j))
            self.assertEqual(r['extra']['deriv_sup'], Fr(2, 3*j))
            self.assertEqual(r['extra']['var_mfj'], (1 + Fr(1, j)) * Fr(24,7))
            self.assertEqual(r['extra']['var_mf'], Fr(24,7))
        self.assertEqual(rep.columns, ('j', 'input_dist', 'out_dist_primary', 'out_dist_sup',
                                       'deriv_sup', 'var_mfj', 'var_mf'))
        self.assertEqual(rep.metadata['operator'], 'centered')
        self.assertIsNone(rep.metadata['bump'])
        self.assertNotIn('final_ratio', rep.checks)

    def test_additive_default_bump(self):
        rep = run_discrete_experiment(DELTA, 'additive', [1, 4, 16, 64])
        for name in ('sup_bound', 'brezis_lieb', 'input_decreasing', 'kurka_identities'):
            self.assertTrue(rep.checks[name], name)
        primary = rep.column('out_dist_primary')
        self.assertLessEqual(primary[-1], primary[0] / 20)
        self.assertEqual(rep.column('input_dist'), [Fr(2, j) for j in (1, 4, 16, 64)])
        self.assertEqual(rep.metadata['bump'], DiscreteSignal.impulse(3).to_json())

    def test_uncentered(self):
        rep = run_discrete_experiment(TWO_SPIKES, 'scaling', [1, 3], kind = UNCENTERED)
        self.assertTrue(rep.passed, rep.failed_checks)
        self.assertEqual(rep.column('out_dist_sup'), [1, Fr(1,3)])

    def test_final_ratio(self):
        rep = run_discrete_experiment(TWO_SPIKES, 'scaling', [1, 4, 16, 64, 256])
        self.assertTrue(rep.passed, rep.failed_checks)
        self.assertTrue(rep.checks['final_ratio'])
        primary = rep.column('out_dist_primary')
        self.assertEqual(primary[-1] / primary[0], Fr(1, 256))

    def test_final_ratio_failure(self):
        rep = run_discrete_experiment(TWO_SPIKES, 'scaling', [1, 32], final_ratio = Fr(1, 1000))
        self.assertFalse(rep.checks['final_ratio'])
        self.assertFalse(rep.passed)
        self.assertEqual(rep.failed_checks, ['final_ratio'])
        rep = run_discrete_experiment(TWO_SPIKES, 'scaling', [1, 32], final_ratio = 0.05)
        self.assertTrue(rep.checks['final_ratio'])

    def test_members(self):
        self.assertEqual(discrete_member(DELTA, 'scaling', 2), DiscreteSignal.impulse(0, "3/2"))
        self.assertEqual(discrete_member(DELTA, 'additive', 2, DELTA), DiscreteSignal.impulse(0, "3/2"))
        self.assertRaises(MxParameterError, discrete_member, DELTA, 'translate', 2)
        self.assertRaises(MxParameterError, discrete_member, DELTA, 'scaling', 0)

    def test_errors(self):
        self.assertRaises(MxDomainError, run_discrete_experiment, DiscreteSignal.step(1, 0), 'scaling', [1, 2])
        self.assertRaises(MxParameterError, run_discrete_experiment, DELTA, 'translate', [1, 2])
        self.assertRaises(MxParameterError, run_discrete_experiment, DELTA, 'scaling', [4, 2])
        self.assertRaises(MxParameterError, run_discrete_experiment, DELTA, 'scaling', [0, 2])
        self.assertRaises(MxParameterError, run_discrete_experiment, DELTA, 'scaling', [])
        self.assertRaises(MxParameterError, run_discrete_experiment, DELTA, 'scaling', [1], 'sideways')

class TestFractionalExperiments(unittest.TestCase):

    def test_scaling(self):
        rep = run_fractional_experiment(HAT, 'scaling', 0.5, [1, 4, 16, 64], grid = TEST_GRID, sup_samples = 41)
        self.assertEqual(rep.kind, FRACTIONAL)
        self.assertTrue(rep.passed, rep.failed_checks)
        norm = rep.rows[0]['extra']['norm']
        self.assertGreater(norm, 0.0)
        for r in rep.rows:
            j = r['j']
            self.assertAlmostEqual(r['out_dist_primary'], norm / j, delta = 1e-9 * norm)
            self.assertAlmostEqual(r['extra']['norm_j'], (1 + 1/j) * norm, delta = 1e-9 * norm)
            self.assertAlmostEqual(r['input_dist'], 3.0 / j, delta = 1e-12)
            self.assertAlmostEqual(r['extra']['lemma1'], 2.0 / j, delta = 1e-12)
        self.assertEqual(rep.metadata['sup_samples'], 41)
        for name in ('final_ratio', 'pointwise', 'compact'):
            self.assertTrue(rep.checks[name], name)
        first = rep.rows[0]['extra']
        self.assertGreater(first['pointwise_gap'], 0.0)
        for r in rep.rows:
            j, extra = r['j'], r['extra']
            self.assertAlmostEqual(extra['pointwise_gap'], first['pointwise_gap'] / j, delta = 1e-6 * first['pointwise_gap'])
            self.assertAlmostEqual(extra['core_norm_j'], (1 + 1/j) * extra['core_norm'], delta = 1e-9 * extra['core_norm'])
            self.assertLessEqual(extra['core_dist'], r['out_dist_primary'] * (1 + 1e-9))
        self.assertEqual(rep.metadata['grid']['step'], 0.05)

    def test_translate(self):
        rep = run_fractional_experiment(HAT, 'translate', 0.5, [1, 16], grid = FINE_GRID, sup_samples = 41)
        primary = rep.column('out_dist_primary')
        self.assertLess(primary[1], primary[0])
        self.assertTrue(rep.checks['lemma2_chain'])
        self.assertTrue(rep.checks['monotone'])

    def test_additive_bump(self):
        bump = bump_from_spec({'breakpoints': [2, 2.5, 3], 'values': [0, 1, 0]}, FRACTIONAL)
        rep = run_fractional_experiment(HAT, 'additive', 0.25, [1, 8], grid = TEST_GRID, bump = bump, sup_samples = 21)
        self.assertTrue(rep.checks['lemma2_chain'])
        self.assertEqual(rep.metadata['bump'], bump.to_json())

    def test_unresolved_grid(self):
        coarse = GridSpec(step = 0.2, tail_tol = 1e-4, richardson_tol = 1e-9)
        with self.assertRaises(MxToleranceError) as cm:
            run_fractional_experiment(HAT, 'scaling', 0.5, [1, 2], coarse)
        self.assertIn('(scaling family, beta 0.5, js [1, 2])', str(cm.exception))
        self.assertEqual(cm.exception.errno, errno.ERANGE)

    def test_bad_beta(self):
        self.assertRaises(MxParameterError, run_fractional_experiment, HAT, 'scaling', 0.999, [1])

    def test_final_ratio_failure(self):
        rep = run_fractional_experiment(HAT, 'scaling', 0.5, [1, 32], grid = TEST_GRID, sup_samples = 21, final_ratio = 0.01)
        self.assertFalse(rep.checks['final_ratio'])
        self.assertFalse(rep.passed)
        short = run_fractional_experiment(HAT, 'scaling', 0.5, [1, 4], grid = TEST_GRID, sup_samples = 21)
        self.assertNotIn('final_ratio', short.checks)

    def test_grid_refined(self):
        grid = GridSpec(step = 0.1, tail_tol = 1e-6, richardson_tol = 0.5, max_refine = 1)
        rep = run_fractional_experiment(HAT, 'scaling', 0.5, [1, 2], grid = grid, sup_samples = 11)
        self.assertIn(rep.metadata['grid']['step'], (0.1, 0.05))
        self.assertEqual(rep.metadata['grid']['max_refine'], 1)

class TestCorpus(unittest.TestCase):

    def test_deterministic(self):
        self.assertEqual(generate_corpus(11, 6), generate_corpus(11, 6))
        self.assertEqual(generate_corpus(11, 3, 'pwl'), generate_corpus(11, 3, 'pwl'))
        self.assertNotEqual(generate_corpus(11, 6), generate_corpus(12, 6))

    def test_shapes(self):
        for f in generate_corpus(5, 20):
            self.assertTrue(f.zero_tails)
            if f.support() is not None:
                lo, hi = f.support()
                self.assertGreaterEqual(lo, -32)
                self.assertLessEqual(hi, 31)
                self.assertLessEqual(hi - lo + 1, 64)
        for g in generate_corpus(5, 10, 'pwl'):
            self.assertLessEqual(len(g.breakpoints), 16)
            if not g.is_zero:
                lo, hi = g.support()
                self.assertGreaterEqual(lo, -4.0)
                self.assertLessEqual(hi, 4.0)


    def test_tents(self):
        tents = generate_corpus(9, 12, TENT)
        self.assertEqual(tents, generate_corpus(9, 12, 'tent'))
        for g in tents:
            x = g.breakpoints
            self.assertEqual(len(x), 3)
            self.assertEqual((g.values[0], g.values[2]), (0.0, 0.0))
            self.assertGreaterEqual(g.values[1], 0.5)
            self.assertGreaterEqual(x[1] - x[0], 1.0 - 1e-9)
            self.assertGreaterEqual(x[2] - x[1], 1.0 - 1e-9)

    def test_tent_translates(self):
        # every shift 1/j stays within both half widths, so the derivative gap is linear in 1/j
        for g in generate_corpus(4, 5, TENT):
            gap = [sample_perturbation(g, 'translate', j).abs().derivative_l1_distance(g.abs()) for j in (1, 64)]
            self.assertGreater(gap[0], 0.0)
            self.assertAlmostEqual(gap[1] / gap[0], 1/64, delta = 1e-9)

    def test_nonnegative(self):
        for f in generate_corpus(6, 20, nonnegative = True):
            self.assertTrue(all(v >= 0 for v in f.values))
        for g in generate_corpus(6, 10, 'pwl', nonnegative = True):
            self.assertTrue(all(v >= 0 for v in g.values))
    def test_errors(self):
        self.assertRaises(MxParameterError, generate_corpus, 1, 0)
        self.assertRaises(MxParameterError, generate_corpus, 1, 3, 'spline')
        self.assertRaises(MxParameterError, generate_corpus, 1, 3, DISCRETE, 65)

    def test_oracle(self):
        f = DiscreteSignal([2, 0, "1/2", 0, 0, 3, 1], -3)
        self.assertEqual(oracle_max_value(f, 7), Fr(4,11))
        self.assertEqual(oracle_max_value(DELTA, -4, UNCENTERED), Fr(1,5))

    def test_lemma7_results(self):
        results = lemma7_results(DiscreteSignal([1, 0, 0, 0, 1]))
        self.assertEqual(len(results), 1)
        mx, mn, outcome = results[0]
        self.assertEqual((mx.lo, mn.lo), (2, 1))
        self.assertNotIsInstance(outcome, MxCheckError)
        self.assertEqual(outcome.s, 4)
        self.assertEqual(lemma7_results(DiscreteSignal()), [])

class TestSweeps(unittest.TestCase):

    def test_discrete(self):
        counts = verify_corpus_discrete(3, 2, window = (-40, 40), shift_samples = 5, threads = 2)
        for name in ('oracle', 'tail_closed_form', 'domination', 'decay', 'variation_bound', 'shift_inequality'):
            checked, failed = counts[name]
            self.assertGreater(checked, 0, name)
            self.assertEqual(failed, 0, name)
        self.assertIn('lemma7', counts)

    def test_pwl(self):
        counts = verify_corpus_pwl(5, 1, betas = (0.5,), samples = 10, h = 1e-2)
        for name in ('holder_bound', 'oracle', 'decay', 'claim_radius', 'sobolev', 'interpolation'):
            self.assertEqual(counts[name][1], 0, name)
        self.assertEqual(counts['sobolev'][0], 1)

if __name__ == '__main__':
    unittest.main()
