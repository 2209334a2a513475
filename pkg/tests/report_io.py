from prefix import *

import json
import tempfile

from fractions import Fraction as Fr

from maxop.mcore.discrete_signal import DiscreteSignal
from maxop.mcore.continuity_lab import (DISCRETE, FRACTIONAL, ExperimentReport, run_discrete_experiment,
                                        emit_report, load_report, write_corpus, generate_corpus)
from maxop.mutil.errors import MxParameterError, MxNotFoundError

TWO_SPIKES = DiscreteSignal([1, 0, 0, 0, 0, 1])

FRACTIONAL_ROWS = [
    {'j': 1, 'input_dist': 3.0, 'out_dist_primary': 0.5, 'out_dist_sup': 0.25, 'extra': {'norm': 0.5}},
    {'j': 4, 'input_dist': 0.75, 'out_dist_primary': 0.125, 'out_dist_sup': 0.0625, 'extra': {'norm': 0.5}},
]

class TestReports(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.report = run_discrete_experiment(TWO_SPIKES, 'scaling', [1, 2, 4])

    def tearDown(self):
        self.tmp.cleanup()

    def _path(self, name):
        return os.path.join(self.tmp.name, name)

    def test_csv(self):
        path = self._path("r.csv")
        emit_report(self.report, 'csv', path)
        with open(path) as fp:
            lines = fp.read().splitlines()
        self.assertEqual(lines[0], "j,input_dist,out_dist_primary,out_dist_sup,deriv_sup,var_mfj,var_mf")
        self.assertEqual(lines[1], "1,4,24/7,1,2/3,48/7,24/7")
        self.assertEqual(len(lines), 4)

    def test_json_keeps_exact_values(self):
        path = self._path("r.json")
        emit_report(self.report, 'json', path)
        with open(path) as fp:
            raw = json.load(fp)
        self.assertEqual(raw['rows'][2]['out_dist_primary'], '6/7')
        self.assertTrue(raw['passed'])
        back = load_report(path)
        self.assertEqual(back.column('out_dist_primary'), [Fr(24,7), Fr(12,7), Fr(6,7)])
        self.assertEqual(back.column('var_mf'), [Fr(24,7)] * 3)
        self.assertEqual(back.checks, self.report.checks)
        self.assertTrue(back.passed)

    def test_fractional_floats(self):
        rep = ExperimentReport(FRACTIONAL, 'scaling', FRACTIONAL_ROWS, {'beta': 0.5}, {'monotone': True, 'lemma1': False})
        self.assertFalse(rep.passed)
        self.assertEqual(rep.failed_checks, ['lemma1'])
        path = self._path("f.csv")
        emit_report(rep, 'csv', path)
        with open(path) as fp:
            self.assertEqual(fp.read().splitlines()[2], "4,0.75,0.125,0.0625,0.5")
        emit_report(rep, 'json', self._path("f.json"))
        self.assertEqual(load_report(self._path("f.json")).column('out_dist_sup'), [0.25, 0.0625])

    def test_errors(self):
        self.assertRaises(MxParameterError, emit_report, self.report, 'xml', self._path("r.xml"))
        self.assertRaises(MxNotFoundError, load_report, self._path("none.json"))
        with open(self._path("bad.json"), 'w') as fp:
            fp.write("{not json")
        self.assertRaises(MxParameterError, load_report, self._path("bad.json"))
        self.assertRaises(MxParameterError, ExperimentReport.from_json, {'kind': DISCRETE, 'rows': []})
        self.assertRaises(MxParameterError, ExperimentReport, 'analog', 'scaling')

class TestCorpusFiles(unittest.TestCase):

    def test_written_signals_reload(self):
        items = generate_corpus(9, 4)
        with tempfile.TemporaryDirectory() as d:
            paths = write_corpus(items, os.path.join(d, "corpus"))
            self.assertEqual([os.path.basename(p) for p in paths],
                             ["signal-{0:04d}.json".format(i) for i in range(4)])
            self.assertEqual([DiscreteSignal.fromFile(p) for p in paths], items)

if __name__ == '__main__':
    unittest.main()
