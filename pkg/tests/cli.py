from prefix import *

import io
import json
import errno
import tempfile

from contextlib import redirect_stdout
from unittest import mock

from maxop.exec import maxop as maxop_exec
from maxop.exec import continuity as continuity_exec
from maxop.mcore.commands import (run_cli, MAXOP_COMMAND_DOC, MAXOP_COMMANDS, CONTINUITY_COMMAND_DOC,
                                  CONTINUITY_COMMANDS)
from maxop.mcore.continuity_lab import load_report
from maxop.mutil.misc import ENV_OPTIONS

TWO_SPIKES = {'values': [1, 0, 0, 0, 0, 1]}
HUMP = {'values': [1, 0, 0, 0, 1]}
HAT = {'breakpoints': [-1, 0, 1], 'values': [0, 1, 0]}

QUICK_GRID = """
grid:
  step: 0.05
  tail_tol: 1.0e-6
  richardson_tol: 0.5
  sup_samples: 21
"""

class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name, data):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as fp:
            fp.write(data if isinstance(data, str) else json.dumps(data))
        return path

    def run_maxop(self, *argv):
        return self._run(maxop_exec.__doc__, MAXOP_COMMAND_DOC, MAXOP_COMMANDS, argv)

    def run_continuity(self, *argv):
        return self._run(continuity_exec.__doc__, CONTINUITY_COMMAND_DOC, CONTINUITY_COMMANDS, argv)

    def _run(self, doc, cmd_doc, commands, argv):
        out = io.StringIO()
        with redirect_stdout(out):
            status = run_cli(doc, cmd_doc, commands, ['--no-defaults'] + list(argv))
        return status, out.getvalue()

class TestMaxop(CliTestCase):

    def test_disc_max(self):
        path = self.write("delta.json", {'values': [1]})
        status, out = self.run_maxop('disc-max', '--input=' + path, '--window=-2:2')
        self.assertEqual(status, 0)
        self.assertIn('1/5', out)
        self.assertIn('Mf', out)

    def test_disc_max_json(self):
        path = self.write("pair.json", {'values': [1, 1]})
        out_path = os.path.join(self.tmp.name, "m.json")
        status, out = self.run_maxop('--threads=2', 'disc-max', '--input=' + path, '--kind=uncentered',
                                     '--window=2:2', '--out=' + out_path)
        self.assertEqual(status, 0)
        self.assertIn('profile of 1 points', out)
        with open(out_path) as fp:
            data = json.load(fp)
        self.assertEqual(data['kind'], 'uncentered')
        self.assertEqual(data['window'], [2, 2])
        self.assertEqual(data['values'], ["2/3"])
        self.assertEqual(data['good_radii'], [{'left': 2, 'right': 0}])
        self.assertEqual(data['signal'], {'tail_left': '0', 'tail_right': '0', 'offset': 0, 'values': ['1', '1']})
        self.assertEqual((data['left_limit'], data['right_limit']), ('0', '0'))

    def test_disc_var_and_kurka(self):
        path = self.write("spikes.json", TWO_SPIKES)
        status, out = self.run_maxop('disc-var', '--input=' + path)
        self.assertEqual(status, 0)
        self.assertIn('24/7', out)
        status, out = self.run_maxop('kurka', '--input=' + path, '--k=0')
        self.assertEqual(status, 0)
        self.assertIn('12/7', out)
        self.assertIn('17/7', out)
        status, out = self.run_maxop('kurka', '--input=' + path, '--k=0', '--u=5')
        self.assertEqual(status, 0)
        self.assertIn('10/7', out)
        self.assertEqual(self.run_maxop('kurka', '--input=' + path, '--k=3', '--u=1')[0], errno.EINVAL)

    def test_lemma7_scan(self):
        status, out = self.run_maxop('lemma7-scan', '--input=' + self.write("hump.yaml", "values: [1, 0, 0, 0, 1]\n"))
        self.assertEqual(status, 0)
        self.assertIn('ok', out)
        self.assertIn('1/2', out)

    def test_lemma7_scan_corpus(self):
        status, out = self.run_maxop('lemma7-scan', '--seed=1', '--count=5')
        self.assertEqual(status, 0)
        self.assertIn('configurations', out)
        self.assertIn('in 5 signals (seed 1), 0 failed', out)

    def test_fractional(self):
        path = self.write("hat.json", HAT)
        status, out = self.run_maxop('frac-max', '--input=' + path, '--beta=0.5', '--points=0:0:1', '--centered')
        self.assertEqual(status, 0)
        self.assertIn('0.544331054', out)
        status, out = self.run_maxop('good-ball', '--input=' + path, '--beta=0.5', '--x=0')
        self.assertEqual(status, 0)
        self.assertIn('-0.666666667', out)

    def test_deriv_lq(self):
        config = self.write("quick.yaml", QUICK_GRID)
        status, out = self.run_maxop('--config=' + config, 'deriv-lq', '--input=' + self.write("hat.json", HAT),
                                     '--beta=0.5')
        self.assertEqual(status, 0)
        self.assertIn('truncation error', out)

    def test_canonical_tolerance(self):
        path = self.write("narrow.json", {'breakpoints': [0, 0.005, 0.01], 'values': [0, 1, 0]})
        self.assertEqual(self.run_maxop('good-ball', '--input=' + path, '--beta=0.5', '--x=0')[0], 0)
        config = self.write("loose.yaml", "fractional:\n  canonical_tol: 0.02\n")
        status, _ = self.run_maxop('--config=' + config, 'good-ball', '--input=' + path, '--beta=0.5', '--x=0')
        self.assertEqual(status, errno.EDOM)

    def test_errors(self):
        missing = os.path.join(self.tmp.name, "nothing.json")
        self.assertEqual(self.run_maxop('disc-var', '--input=' + missing)[0], errno.ENOENT)
        path = self.write("hat.json", HAT)
        self.assertEqual(self.run_maxop('good-ball', '--input=' + path, '--beta=2', '--x=0')[0], errno.EINVAL)
        self.assertEqual(self.run_maxop('disc-max', '--input=' + path, '--kind=sideways')[0], errno.EINVAL)
        self.assertEqual(self.run_maxop('disc-var', '--input=' + self.write("step.json", {'values': [], 'tail_left': 1}))[0],
                         errno.EDOM)
        self.assertEqual(self.run_maxop('--threads=0', 'disc-var', '--input=' + path)[0], errno.EINVAL)

    def test_usage(self):
        self.assertRaises(SystemExit, self.run_maxop, 'no-such-command')
        self.assertRaises(SystemExit, self.run_maxop, '--version')

    def test_environment_options(self):
        path = self.write("spikes.json", TWO_SPIKES)
        with mock.patch.dict(os.environ, {ENV_OPTIONS: '--log-level=bogus'}):
            out = io.StringIO()
            with redirect_stdout(out):
                status = run_cli(maxop_exec.__doc__, MAXOP_COMMAND_DOC, MAXOP_COMMANDS, ['disc-var', '--input=' + path])
            self.assertEqual(status, errno.EINVAL)
            self.assertEqual(self.run_maxop('disc-var', '--input=' + path)[0], 0)

class TestContinuity(CliTestCase):

    def test_disc_report(self):
        out_path = os.path.join(self.tmp.name, "r.csv")
        status, out = self.run_continuity('disc', '--input=' + self.write("s.json", TWO_SPIKES), '--js=1,2,4',
                                          '--out=' + out_path)
        self.assertEqual(status, 0)
        self.assertIn('checks:', out)
        with open(out_path) as fp:
            self.assertEqual(fp.read().splitlines()[1], "1,4,24/7,1,2/3,48/7,24/7")

    def test_disc_table(self):
        status, out = self.run_continuity('disc', '--input=' + self.write("s.json", TWO_SPIKES), '--js=1,2',
                                          '--family=additive', '--operator=uncentered')
        self.assertIn('input_dist', out)
        self.assertIn('sup_bound', out)

    def test_frac_report(self):
        config = self.write("quick.yaml", QUICK_GRID)
        out_path = os.path.join(self.tmp.name, "r.json")
        status, out = self.run_continuity('--config=' + config, 'frac', '--input=' + self.write("hat.json", HAT),
                                          '--beta=0.5', '--js=1,4', '--out=' + out_path)
        self.assertEqual(status, 0)
        rep = load_report(out_path)
        self.assertTrue(rep.passed)
        self.assertEqual([r['j'] for r in rep.rows], [1, 4])

    def test_corpus(self):
        out_dir = os.path.join(self.tmp.name, "corpus")
        status, out = self.run_continuity('corpus', '--seed=1', '--count=3', '--kind=disc', '--out=' + out_dir)
        self.assertEqual(status, 0)
        self.assertEqual(sorted(os.listdir(out_dir)), ["signal-0000.json", "signal-0001.json", "signal-0002.json"])
        status, out = self.run_continuity('corpus', '--seed=2', '--count=2', '--kind=tent', '--out=' + out_dir)
        self.assertEqual(status, 0)
        self.assertIn('2 tent items', out)
        self.assertIn("pwl-0000.json", os.listdir(out_dir))
        self.assertEqual(self.run_continuity('corpus', '--seed=1', '--count=3', '--kind=spline')[0], errno.EINVAL)

if __name__ == '__main__':
    unittest.main()
