from prefix import *

from fractions import Fraction as Fr

from maxop.mcore.discrete_signal import DiscreteSignal
from maxop.mcore.continuity_lab import (DISCRETE, TENT, generate_corpus, run_discrete_experiment,
                                        run_fractional_experiment, verify_corpus_discrete, verify_corpus_pwl)

# Frozen corpora at full size.  These take tens of minutes, so they only run when
# MAXOP_ACCEPTANCE is set in the environment.

ENV_ACCEPTANCE = 'MAXOP_ACCEPTANCE'
FULL_RUN = unittest.skipUnless(os.environ.get(ENV_ACCEPTANCE), "set {0}=1 to run".format(ENV_ACCEPTANCE))

DISC_SEED = 2024
PWL_SEED = 7
TENT_SEED = 11

JS = [2 ** k for k in range(9)]         # 1 .. 256

@FULL_RUN
class TestDiscreteSweep(unittest.TestCase):

    def test_corpus(self):
        counts = verify_corpus_discrete(DISC_SEED, 1000, window = (-80, 80), shift_samples = 100)
        for name, (checked, failed) in counts.items():
            self.assertEqual(failed, 0, name)
        self.assertEqual(counts['oracle'][0], 1000 * 161)
        self.assertEqual(counts['shift_inequality'][0], 1000 * 100)
        self.assertGreaterEqual(counts['lemma7'][0], 500)

@FULL_RUN
class TestDiscreteConvergence(unittest.TestCase):

    def test_self_bump(self):
        # f + f/j is an exact rescaling, so Var(Mf_j - Mf) = Var(Mf)/j on every signal
        for f in generate_corpus(DISC_SEED, 50):
            rep = run_discrete_experiment(f, 'additive', JS, bump = f)
            self.assertTrue(rep.passed, (f, rep.failed_checks))
            self.assertIn('final_ratio', rep.checks)
            for r in rep.rows:
                self.assertEqual(r['out_dist_primary'], r['extra']['var_mf'] / r['j'])

    def test_nonnegative_impulse_bump(self):
        bump = DiscreteSignal.impulse(3)
        for f in generate_corpus(DISC_SEED, 50, DISCRETE, nonnegative = True):
            rep = run_discrete_experiment(f, 'additive', JS, bump = bump)
            for name in ('sup_bound', 'brezis_lieb', 'kurka_identities', 'input_decreasing'):
                self.assertTrue(rep.checks[name], (f, name))
            sup = rep.column('out_dist_sup')
            self.assertTrue(all(b <= a for a,b in zip(sup, sup[1:])), f)
            self.assertEqual(rep.column('input_dist'), [Fr(2, j) for j in JS])

@FULL_RUN
class TestFractionalSweep(unittest.TestCase):

    def test_corpus(self):
        counts = verify_corpus_pwl(PWL_SEED, 20, samples = 100, h = 1e-2)
        for name, (checked, failed) in counts.items():
            if name == 'derivative':
                self.assertLessEqual(failed, checked // 100, name)
            else:
                self.assertEqual(failed, 0, name)
        self.assertEqual(counts['sobolev'][0], 20)

@FULL_RUN
class TestFractionalConvergence(unittest.TestCase):

    def test_tent_translates(self):
        for f in generate_corpus(TENT_SEED, 20, TENT):
            for beta in (0.25, 0.5, 0.75):
                rep = run_fractional_experiment(f, 'translate', beta, [1, 4, 16, 64])
                self.assertTrue(rep.passed, (f, beta, rep.failed_checks))
                self.assertIn('final_ratio', rep.checks)
                lemma1 = rep.column('lemma1')
                self.assertAlmostEqual(lemma1[-1] / lemma1[0], 1/64, delta = 1e-9)

if __name__ == '__main__':
    unittest.main()
