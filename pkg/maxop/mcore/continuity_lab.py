"""
Convergence experiments for the maximal operators, plus the seeded test corpora and report files.

An experiment takes a function f and a family f_j converging to it (scaling, additive or
translate), and for each j records how far the inputs are apart and how far the maximal
functions are apart.  Every report carries a set of named in-run checks; a report has passed
only when all of them hold.
"""

import os
import csv
import json

from collections import OrderedDict
from fractions import Fraction

import numpy as np

from maxop.mcore.discrete_signal import DiscreteSignal
from maxop.mcore.discrete_maximal import (CENTERED, UNCENTERED, check_kind, centered_max_value, uncentered_max_value,
                                          maximal_profile, total_variation_of_max, kurka_sums,
                                          harvest_lemma7_configurations, lemma7_witness, average_shift_inequality_check,
                                          difference_variation, sup_distance, derivative_sup_distance, DecayTail)
from maxop.mcore.pwl_function import PwlFunction, CANONICAL_TOL, sample_perturbation
from maxop.mcore.fractional_maximal import (BetaParams, FractionalMaximal, DerivativeQuadrature, GridSpec,
                                            with_refinement, holder_bound_check, decay_bound_check,
                                            claim_radius_check)
from maxop.mutil.errors import MxParameterError, MxNotFoundError, MxDomainError, MxCheckError, MxToleranceError
from maxop.mutil.logging import debug, info, warn
from maxop.mutil.misc import parallel_map, parse_rational, rational_str

DISCRETE = 'discrete'
FRACTIONAL = 'fractional'

DISCRETE_FAMILIES = ('scaling', 'additive')
FRACTIONAL_FAMILIES = ('scaling', 'additive', 'translate')

DEFAULT_SLACK = 1.05            # "decreasing" allows each row to exceed the previous by 5%
DEFAULT_HOLDER_SLACK = 1e-6
DEFAULT_LEMMA1_RATIO = 0.05
DEFAULT_DISC_FINAL_RATIO = Fraction(1, 20)
DEFAULT_FRAC_FINAL_RATIO = 0.1
RATIO_MIN_SPAN = 20             # final/initial ratios are only checked once j grows this much

BASE_COLUMNS = ('j', 'input_dist', 'out_dist_primary', 'out_dist_sup')

def default_discrete_bump():
    return DiscreteSignal.impulse(3)

def default_pwl_bump():
    return PwlFunction.hat()

def bump_from_spec(spec, kind, tol = CANONICAL_TOL):
    """
    A bump is either a mapping in the signal/function JSON format or the path of such a file.
    None selects the family default.  tol is the breakpoint merge tolerance for functions.
    """
    if spec is None:
        return default_discrete_bump() if kind == DISCRETE else default_pwl_bump()
    if kind == DISCRETE:
        return DiscreteSignal.fromFile(spec) if isinstance(spec, str) else DiscreteSignal.from_json(spec)
    return PwlFunction.fromFile(spec, tol) if isinstance(spec, str) else PwlFunction.from_json(spec, tol)


class ExperimentReport(object):

    kind = DISCRETE
    family = None
    rows = None                 # list of dicts, one per j, in increasing j
    metadata = None
    checks = None               # check name -> bool

    def __init__(self, kind, family, rows = None, metadata = None, checks = None):
        if kind not in (DISCRETE, FRACTIONAL):
            raise MxParameterError("unknown report kind '{0}'".format(kind))
        self.kind = kind
        self.family = family
        self.rows = list(rows or [])
        self.metadata = OrderedDict(metadata or {})
        self.checks = OrderedDict(checks or {})

    @property
    def passed(self):
        return all(self.checks.values())

    @property
    def failed_checks(self):
        return [k for k,v in self.checks.items() if not v]

    @property
    def extra_columns(self):
        cols = []
        for r in self.rows:
            for k in r.get('extra', {}):
                if k not in cols:
                    cols.append(k)
        return cols

    @property
    def columns(self):
        return BASE_COLUMNS + tuple(self.extra_columns)

    def column(self, name):
        if name in BASE_COLUMNS:
            return [r[name] for r in self.rows]
        return [r['extra'].get(name) for r in self.rows]

    def flat_rows(self):
        "Rows as flat dicts over self.columns."
        out = []
        for r in self.rows:
            d = OrderedDict((k, r[k]) for k in BASE_COLUMNS)
            d.update(r.get('extra', {}))
            out.append(d)
        return out

    def _value_out(self, v):
        if self.kind == DISCRETE and isinstance(v, Fraction):
            return rational_str(v)
        return v

    def _value_in(self, v):
        if self.kind == DISCRETE and isinstance(v, str):
            return parse_rational(v)
        return v

    def to_json(self):
        return OrderedDict([
            ('kind', self.kind),
            ('family', self.family),
            ('metadata', self.metadata),
            ('checks', self.checks),
            ('passed', self.passed),
            ('rows', [OrderedDict([('j', r['j'])] +
                                  [(k, self._value_out(r[k])) for k in BASE_COLUMNS[1:]] +
                                  [('extra', OrderedDict((k, self._value_out(v)) for k,v in r.get('extra', {}).items()))])
                      for r in self.rows]),
        ])

    @classmethod
    def from_json(cls, data):
        try:
            rep = cls(data['kind'], data['family'], metadata = data.get('metadata'), checks = data.get('checks'))
            for r in data['rows']:
                row = OrderedDict([('j', r['j'])] + [(k, rep._value_in(r[k])) for k in BASE_COLUMNS[1:]])
                row['extra'] = OrderedDict((k, rep._value_in(v)) for k,v in r.get('extra', {}).items())
                rep.rows.append(row)
        except (KeyError, TypeError) as ex:
            raise MxParameterError("malformed report: {0}".format(ex))
        return rep

    def __repr__(self):
        return "<ExperimentReport {0}/{1}: {2} rows, {3}>".format(self.kind, self.family, len(self.rows),
                                                                  "passed" if self.passed else "FAILED")


def _make_row(j, input_dist, primary, sup, extra):
    return OrderedDict([('j', j), ('input_dist', input_dist), ('out_dist_primary', primary),
                        ('out_dist_sup', sup), ('extra', OrderedDict(extra))])

def _check_js(j_list):
    js = [int(j) for j in j_list]
    if not js:
        raise MxParameterError("at least one j is required")
    if any(j < 1 for j in js):
        raise MxParameterError("every j must be at least 1: {0}".format(js))
    if any(b <= a for a,b in zip(js, js[1:])):
        raise MxParameterError("j values must be strictly increasing: {0}".format(js))
    return js

def _non_increasing(vals, slack = 1):
    return all(b <= a * slack for a,b in zip(vals, vals[1:]))

def _strictly_decreasing_or_zero(vals):
    return all(v == 0 for v in vals) or all(b < a for a,b in zip(vals, vals[1:]))


# Discrete experiments

def discrete_member(f, family, j, bump = None):
    "The j-th member of a discrete family, computed exactly."
    if j < 1:
        raise MxParameterError("perturbation index must be at least 1, got {0}".format(j))
    if family == 'scaling':
        return f.scale(1 + Fraction(1, j))
    if family == 'additive':
        g = bump if bump is not None else default_discrete_bump()
        return f.add(g.scale(Fraction(1, j)))
    if family == 'translate':
        raise MxParameterError("the translate family is only defined for continuous functions")
    raise MxParameterError("unknown discrete family '{0}' (use {1})".format(family, ", ".join(DISCRETE_FAMILIES)))

def _kurka_consistent(f, kind):
    "Kurka sums over the support agree with the variation and the endpoint values."
    supp = f.support()
    if supp is None:
        return True
    lo, hi = supp
    p = maximal_profile(f, kind, supp)
    try:
        ks = kurka_sums(p, lo, hi)
    except MxDomainError as ex:
        debug("kurka sums skipped: {0}", ex)
        return True
    return ks.s1 + ks.s2 == p.variation(lo, hi) and abs(ks.s1 - ks.s2) == abs(p.mf(lo) - p.mf(hi))

def run_discrete_experiment(f, family, j_list, kind = CENTERED, bump = None, threads = None,
                            final_ratio = DEFAULT_DISC_FINAL_RATIO):
    """
    Exact experiment for a zero-tail signal: per j the BV distance of the inputs, Var(Mf_j - Mf),
    sup |Mf_j - Mf| and sup |(Mf_j)' - (Mf)'| over all of Z, with Var(Mf_j) and Var(Mf).
    Once j spans a factor of RATIO_MIN_SPAN the last Var(Mf_j - Mf) must also be at most
    final_ratio times the first.
    """
    final_ratio = Fraction(str(final_ratio)) if isinstance(final_ratio, float) else Fraction(final_ratio)
    check_kind(kind)
    js = _check_js(j_list)
    if family not in DISCRETE_FAMILIES:
        discrete_member(f, family, 1)
    if bump is None:
        bump = default_discrete_bump()
    if not f.zero_tails or not bump.zero_tails:
        raise MxDomainError("discrete experiments need the signal and the bump to have zero tails")

    var_mf = total_variation_of_max(f, kind)

    def one_row(j):
        fj = discrete_member(f, family, j, bump)
        debug("discrete {0} row j={1}", family, j)
        return (_make_row(j, fj.sub(f).bv_norm(),
                          difference_variation(fj, f, kind),
                          sup_distance(fj, f, kind),
                          [('deriv_sup', derivative_sup_distance(fj, f, kind)),
                           ('var_mfj', total_variation_of_max(fj, kind)),
                           ('var_mf', var_mf)]),
                _kurka_consistent(fj, kind))

    results = parallel_map(one_row, js, threads)
    rows = [r for r,_ in results]

    primary = [r['out_dist_primary'] for r in rows]
    checks = OrderedDict([
        ('sup_bound', all(r['out_dist_sup'] <= r['input_dist'] for r in rows)),
        ('monotone', _non_increasing(primary)),
        ('derivative_monotone', _non_increasing([r['extra']['deriv_sup'] for r in rows])),
        ('kurka_identities', all(k for _,k in results) and _kurka_consistent(f, kind)),
        ('brezis_lieb', all(abs(r['extra']['var_mfj'] - var_mf) <= r['out_dist_primary'] for r in rows)),
        ('input_decreasing', _strictly_decreasing_or_zero([r['input_dist'] for r in rows])),
    ])
    if js[-1] >= RATIO_MIN_SPAN * js[0]:
        checks['final_ratio'] = primary[-1] <= final_ratio * primary[0]

    metadata = OrderedDict([
        ('operator', kind),
        ('js', js),
        ('signal', f.to_json()),
        ('bump', bump.to_json() if family == 'additive' else None),
    ])

    report = ExperimentReport(DISCRETE, family, rows, metadata, checks)
    info("discrete experiment {0}: {1}", family, "passed" if report.passed else
         "failed checks " + ", ".join(report.failed_checks))
    return report


# Fractional experiments

def _sup_points(functions, pad, count):
    supps = [g.support() for g in functions if not g.is_zero]
    if not supps:
        return np.zeros(0)
    lo = min(s[0] for s in supps) - pad
    hi = max(s[1] for s in supps) + pad
    return np.linspace(lo, hi, count)

def run_fractional_experiment(f, family, beta, j_list, grid = None, bump = None, threads = None,
                              slack = DEFAULT_SLACK, holder_slack = DEFAULT_HOLDER_SLACK,
                              lemma1_ratio = DEFAULT_LEMMA1_RATIO, final_ratio = DEFAULT_FRAC_FINAL_RATIO,
                              sup_samples = 201, tol_val = None):
    """
    Experiment for a piecewise-linear f: per j the W^{1,1} distance of the inputs, the L^q
    distance of the derivatives of the fractional maximal functions (common quadrature for all
    j, its step halved until the Richardson estimate is within tolerance), and the sampled sup
    distance of the maximal functions.  Pointwise and core-interval views of the derivatives
    are recorded next to the L^q distance.
    """
    js = _check_js(j_list)
    params = beta if isinstance(beta, BetaParams) else BetaParams(beta)
    grid = grid or GridSpec()
    if family == 'additive' and bump is None:
        bump = default_pwl_bump()
    members = [sample_perturbation(f, family, j, bump) for j in js]

    kwargs = {} if tol_val is None else {'tol_val': tol_val}

    def measure(g):
        quad = DerivativeQuadrature([f] + members, params, g, threads, **kwargs)
        return (quad, quad.norm(0), [quad.norm(k + 1) for k in range(len(js))],
                [quad.distance(k + 1, 0) for k in range(len(js))])

    try:
        grid, (quad, norm_f, norms, dists) = with_refinement(measure, grid)
    except MxToleranceError as ex:
        ex.annotate("({0} family, beta {1}, js {2})".format(family, params.beta, js))
        raise

    points = _sup_points([f] + members, grid.pad, sup_samples)
    op_f = FractionalMaximal(f, params, **kwargs)
    base = np.array([op_f.eval_uncentered(x) for x in points])
    b = params.beta

    def one_row(k):
        j, fj = js[k], members[k]
        debug("fractional {0} row j={1}", family, j)
        d = fj.sub(f)
        op_j = FractionalMaximal(fj, params, **kwargs)
        vals = np.array([op_j.eval_uncentered(x) for x in points])
        sup = float(np.abs(vals - base).max()) if len(points) else 0.0
        return _make_row(j, d.w11_norm(), float(dists[k]), sup, [
            ('norm_j', float(norms[k])),
            ('norm', float(norm_f)),
            ('lemma1', fj.abs().derivative_l1_distance(f.abs())),
            ('holder_lq', 2.0 ** (-b) * d.lq_norm(params.q_conj)),
            ('holder_interp', 2.0 ** (-b) * d.linf_norm() ** (1 / params.q) * d.l1_norm() ** (1 / params.q_conj)),
            ('pointwise_gap', quad.pointwise_gap(k + 1, 0)),
            ('core_norm_j', quad.core_norm(k + 1)),
            ('core_norm', quad.core_norm(0)),
            ('core_dist', quad.core_distance(k + 1, 0)),
            ('quadrature_error', dists[k].quadrature_error),
        ])

    rows = parallel_map(one_row, range(len(js)), threads)

    primary = [r['out_dist_primary'] for r in rows]
    lemma1 = [r['extra']['lemma1'] for r in rows]
    gaps = [r['extra']['pointwise_gap'] for r in rows]
    last = rows[-1]
    long_run = js[-1] >= RATIO_MIN_SPAN * js[0]

    if long_run and lemma1[0] > 0:
        lemma1_ok = _non_increasing(lemma1, slack) and lemma1[-1] <= lemma1_ratio * lemma1[0]
    else:
        lemma1_ok = _non_increasing(lemma1, slack)

    checks = OrderedDict([
        ('lemma2_chain', all(r['out_dist_sup'] <= r['extra']['holder_lq'] + holder_slack and
                             r['extra']['holder_lq'] <= r['extra']['holder_interp'] + holder_slack for r in rows)),
        ('monotone', _non_increasing(primary, slack)),
        ('lemma1', lemma1_ok),
        ('pointwise', gaps[-1] <= gaps[0] * slack + holder_slack),
        ('compact', all(abs(r['extra']['core_norm_j'] - r['extra']['core_norm']) <=
                        r['extra']['core_dist'] * (1 + 1e-9) + holder_slack and
                        r['extra']['core_dist'] <= r['out_dist_primary'] * (1 + 1e-9) + holder_slack for r in rows)),
        ('brezis_lieb', abs(last['extra']['norm_j'] - last['extra']['norm']) <=
                        2 * last['out_dist_primary'] + holder_slack),
    ])
    if long_run:
        checks['final_ratio'] = primary[-1] <= final_ratio * primary[0]

    metadata = OrderedDict([
        ('beta', params.beta),
        ('q', params.q),
        ('js', js),
        ('grid', OrderedDict((k, getattr(grid, k)) for k in GridSpec._FIELDS)),
        ('truncation_error', norm_f.truncation_error),
        ('sup_samples', int(len(points))),
        ('function', f.to_json()),
        ('bump', bump.to_json() if family == 'additive' else None),
    ])

    report = ExperimentReport(FRACTIONAL, family, rows, metadata, checks)
    info("fractional experiment {0} beta={1}: {2}", family, params.beta, "passed" if report.passed else
         "failed checks " + ", ".join(report.failed_checks))
    return report


# Corpora

TENT = 'tent'
CORPUS_KINDS = (DISCRETE, 'pwl', TENT)

def generate_corpus(seed, count, kind = DISCRETE, max_support = 64, max_breakpoints = 16, nonnegative = False):
    """
    A deterministic list of random inputs.  Discrete signals have zero tails, at most
    max_support window entries placed around 0, numerators in [-8, 8] (or [0, 8] when
    nonnegative) and denominators in {1, 2, 4, 8}.  Piecewise-linear functions have 3 to
    max_breakpoints breakpoints drawn in [-4, 4] with zero end values.  Tents are single
    asymmetric hats: peak in [-2, 2], height in [0.5, 2] and both half widths in [1, 2.5].
    """
    if count < 1:
        raise MxParameterError("corpus size must be at least 1, got {0}".format(count))
    rng = np.random.default_rng(seed)
    out = []
    if kind == DISCRETE:
        if not 1 <= max_support <= 64:
            raise MxParameterError("max_support must lie in [1, 64]")
        for _ in range(count):
            n = int(rng.integers(1, max_support + 1))
            offset = int(rng.integers(-32, 32 - n + 1))
            nums = rng.integers(0 if nonnegative else -8, 9, size=n)
            dens = rng.choice([1, 2, 4, 8], size=n)
            out.append(DiscreteSignal([Fraction(int(a), int(b)) for a,b in zip(nums, dens)], offset))
    elif kind == 'pwl':
        if max_breakpoints < 3:
            raise MxParameterError("max_breakpoints must be at least 3")
        for _ in range(count):
            m = int(rng.integers(3, max_breakpoints + 1))
            x = np.sort(rng.uniform(-4.0, 4.0, size=m))
            v = rng.uniform(0.0 if nonnegative else -1.0, 1.0, size=m)
            v[0] = v[-1] = 0.0
            out.append(PwlFunction(x, v))
    elif kind == TENT:
        for _ in range(count):
            c = float(rng.uniform(-2.0, 2.0))
            h = float(rng.uniform(0.5, 2.0))
            left, right = (float(w) for w in rng.uniform(1.0, 2.5, size=2))
            out.append(PwlFunction([c - left, c, c + right], [0.0, h, 0.0]))
    else:
        raise MxParameterError("unknown corpus kind '{0}' (use {1})".format(kind, ", ".join(CORPUS_KINDS)))
    return out

def write_corpus(items, directory):
    "Writes each item as <prefix>-NNNN.json and returns the paths."
    os.makedirs(directory, exist_ok = True)
    paths = []
    for i, item in enumerate(items):
        prefix = 'signal' if isinstance(item, DiscreteSignal) else 'pwl'
        path = os.path.join(directory, "{0}-{1:04d}.json".format(prefix, i))
        with open(path, 'w') as fp:
            json.dump(item.to_json(), fp, indent = 1)
        paths.append(path)
    return paths


# Report files

def _csv_value(report, v):
    if v is None:
        return ''
    if report.kind == DISCRETE:
        return rational_str(v) if isinstance(v, Fraction) else str(v)
    if isinstance(v, float):
        return "{0:.12g}".format(v)
    return str(v)

def emit_report(report, fmt, path):
    if fmt == 'json':
        with open(path, 'w') as fp:
            json.dump(report.to_json(), fp, indent = 1)
    elif fmt == 'csv':
        cols = report.columns
        with open(path, 'w', newline = '') as fp:
            w = csv.writer(fp)
            w.writerow(cols)
            for r in report.flat_rows():
                w.writerow([_csv_value(report, r.get(c)) for c in cols])
    else:
        raise MxParameterError("unknown report format '{0}' (use csv or json)".format(fmt))
    debug("report written to {0}", path)

def load_report(path):
    if not os.path.exists(path):
        raise MxNotFoundError("report not found: {0}".format(path))
    try:
        with open(path, 'r') as fp:
            data = json.load(fp)
    except ValueError as ex:
        raise MxParameterError("cannot parse report '{0}': {1}".format(path, ex))
    return ExperimentReport.from_json(data)


# Property sweeps over corpora

def _best_window(f, sums, lengths):
    "Exact max of sums / (denominator * lengths), with the float argmax narrowing the search."
    ratio = sums / lengths
    near = np.flatnonzero(ratio >= ratio.max() * (1 - 1e-9))
    den = f.denominator
    return max(Fraction(int(sums[k]), den * int(lengths[k])) for k in near)

def oracle_max_value(f, n, kind = CENTERED):
    """
    Mf(n) by trying every window that can matter: for a zero-tail signal, windows reaching
    past the support only add zeros, so radii beyond it never help.  The window sums are
    formed with numpy from the integer prefix sums of |f|.
    """
    o, e = f.offset, f.end
    RL, RS = max(0, n - o + 1), max(0, e - n)
    if check_kind(kind) == CENTERED:
        RL = RS = max(RL, RS)
    lo = n - RL
    mags = [f.abs_sum_scaled(k, k) for k in range(lo, n + RS + 1)]
    if sum(mags) >= 2 ** 62:
        return _oracle_exact(f, n, kind, RL, RS)
    prefix = np.concatenate(([0], np.cumsum(np.array(mags, dtype=np.int64))))
    if kind == CENTERED:
        r = np.arange(RL + 1)
        return _best_window(f, prefix[RL + r + 1] - prefix[RL - r], 2 * r + 1)
    r = np.arange(RL + 1)[:, None]
    s = np.arange(RS + 1)[None, :]
    sums = prefix[RL + s + 1] - prefix[RL - r]
    return _best_window(f, sums.ravel(), (r + s + 1).ravel())

def _oracle_exact(f, n, kind, RL, RS):
    if kind == CENTERED:
        return max(f.window_average(n - r, n + r) for r in range(RL + 1))
    return max(f.window_average(n - r, n + s) for r in range(RL + 1) for s in range(RS + 1))

def lemma7_results(f):
    """
    Checks every local max / local min configuration of the centered Mf on the support of f.
    Returns (local max, local min, outcome) triples, the outcome being the witness or the
    MxCheckError it raised.
    """
    supp = f.support()
    if supp is None:
        return []
    p = maximal_profile(f, CENTERED, supp)
    try:
        configs = harvest_lemma7_configurations(p)
    except MxDomainError as ex:
        debug("no configurations for {0!r}: {1}", f, ex)
        return []
    out = []
    for mx, mn in configs:
        try:
            out.append((mx, mn, lemma7_witness(p, mx, mn)))
        except MxCheckError as ex:
            warn("lemma7 witness failed for {0!r}: {1}", f, ex)
            out.append((mx, mn, ex))
    return out

def _sweep_counts(names):
    return OrderedDict((k, [0, 0]) for k in names)

def _tally(counts, name, ok):
    counts[name][0] += 1
    if not ok:
        counts[name][1] += 1

def _verify_signal(f, window, shift_samples, rng_seed):
    counts = _sweep_counts(('oracle', 'tail_closed_form', 'domination', 'decay', 'variation_bound',
                            'shift_inequality', 'lemma7'))
    lo, hi = window
    supp = f.support()
    tails = {k: (DecayTail(f, k, 'left'), DecayTail(f, k, 'right')) for k in (CENTERED, UNCENTERED)}
    prev = {}
    for n in range(lo, hi + 1):
        mc = centered_max_value(f, n).value
        mu = uncentered_max_value(f, n).value
        _tally(counts, 'oracle', mc == oracle_max_value(f, n, CENTERED) and mu == oracle_max_value(f, n, UNCENTERED))
        _tally(counts, 'domination', mc >= abs(f(n)) and mu >= mc)
        if supp is not None and (n < supp[0] or n > supp[1]):
            side = 0 if n < supp[0] else 1
            _tally(counts, 'tail_closed_form', tails[CENTERED][side].value(n) == mc and
                                              tails[UNCENTERED][side].value(n) == mu)
        if supp is not None and n > supp[1] and 'right' in prev:
            _tally(counts, 'decay', mc <= prev['right'])
        if supp is not None and n >= supp[1]:
            prev['right'] = mc
    if supp is not None:
        left = [centered_max_value(f, n).value for n in range(lo, min(supp[0], hi + 1))]
        for a,b in zip(left, left[1:]):
            _tally(counts, 'decay', a <= b)

    _tally(counts, 'variation_bound', total_variation_of_max(f, UNCENTERED) <= f.variation())

    rng = np.random.default_rng(rng_seed)
    for _ in range(shift_samples):
        m, n = (int(v) for v in rng.integers(-80, 81, size=2))
        r = int(rng.integers(0, 40))
        _tally(counts, 'shift_inequality', average_shift_inequality_check(f, m, n, r)[0])

    for _, _, outcome in lemma7_results(f):
        _tally(counts, 'lemma7', not isinstance(outcome, MxCheckError))
    return counts

def _merge_counts(parts):
    total = OrderedDict()
    for c in parts:
        for k,(n,bad) in c.items():
            cur = total.setdefault(k, [0, 0])
            cur[0] += n
            cur[1] += bad
    return total

def verify_corpus_discrete(seed, count, window = (-80, 80), shift_samples = 20, threads = None):
    """
    Exact property sweep over a seeded discrete corpus.  Returns an ordered mapping of check
    name to [checked, failed].
    """
    corpus = generate_corpus(seed, count, DISCRETE)
    parts = parallel_map(lambda k: _verify_signal(corpus[k], window, shift_samples, (seed, k)),
                         range(len(corpus)), threads)
    return _merge_counts(parts)

def _verify_pwl(f, betas, samples, h, fd_h, rng_seed):
    counts = _sweep_counts(('holder_bound', 'oracle', 'derivative', 'decay', 'claim_radius',
                            'sobolev', 'interpolation'))
    _tally(counts, 'sobolev', f.sobolev_embedding_check()[0])
    _tally(counts, 'interpolation', f.interpolation_check(2.0)[0])
    if f.is_zero:
        return counts
    lo, hi = f.support()
    rng = np.random.default_rng(rng_seed)
    points = np.sort(rng.uniform(lo - 2.0, hi + 2.0, size=samples))
    for beta in betas:
        params = BetaParams(beta)
        op = FractionalMaximal(f, params)
        _tally(counts, 'holder_bound', holder_bound_check(f, params, points)[0])
        _tally(counts, 'decay', decay_bound_check(op, points)[0])
        for x in points[::max(1, len(points) // 5)]:
            v = op.eval_uncentered(x)
            grid_v = op.brute_force_eval(x, h)
            _tally(counts, 'oracle', grid_v - 1e-9 <= v <= grid_v + op.oracle_modulus(grid_v, h) + 1e-9)
        for x in points:
            ball = op.good_ball(x)
            y = x - rng.uniform(0.0, 2.0)
            applicable, ok = claim_radius_check(ball, x, y)
            if applicable:
                _tally(counts, 'claim_radius', ok)
            fd = (op.eval_uncentered(x + fd_h) - op.eval_uncentered(x - fd_h)) / (2 * fd_h)
            _tally(counts, 'derivative', abs(op.derivative_at(x) - fd) <= 1e-4)
    return counts

def verify_corpus_pwl(seed, count, betas = (0.25, 0.5, 0.75), samples = 100, h = 1e-3, fd_h = 1e-5, threads = None,
                      kind = 'pwl'):
    """
    Numerical property sweep over a seeded piecewise-linear corpus.  The derivative check
    compares against central differences at random points, so isolated failures at jumps of
    the good-ball structure are possible; they are counted, not raised.
    """
    corpus = generate_corpus(seed, count, kind)
    parts = parallel_map(lambda k: _verify_pwl(corpus[k], betas, samples, h, fd_h, (seed, k)),
                         range(len(corpus)), threads)
    return _merge_counts(parts)
