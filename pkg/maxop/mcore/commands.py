import os
import csv
import sys
import json
import math
import shlex

from docopt import docopt

from maxop.mcore.version import VERSION_MESSAGE
from maxop.mcore.discrete_signal import DiscreteSignal
from maxop.mcore.discrete_maximal import (CENTERED, check_kind, maximal_profile, total_variation_of_max,
                                          harvest_lemma7_configurations, lemma7_witness, kurka_sums)
from maxop.mcore.pwl_function import PwlFunction, CANONICAL_TOL
from maxop.mcore.fractional_maximal import (BetaParams, FractionalMaximal, GridSpec, DerivativeQuadrature,
                                            with_refinement)
from maxop.mcore import continuity_lab as lab
from maxop.mutil.config import Configuration
from maxop.mutil.errors import MxError, MxParameterError, MxCheckError, get_errno_from_exception
from maxop.mutil.format import TableFormatter, fstr
from maxop.mutil.logging import set_log_level, debug, info, error
from maxop.mutil.misc import ENV_OPTIONS, thread_count, parallel_map

MAXOP_COMMAND_DOC = """
Usage: maxop disc-max --input=<file> [--kind=<kind>] [--window=<lo:hi>] [--out=<file>]
       maxop disc-var --input=<file> [--kind=<kind>]
       maxop lemma7-scan (--seed=<s> --count=<n> | --input=<file> [--window=<lo:hi>])
       maxop kurka --input=<file> --k=<k> [--u=<u>] [--kind=<kind>] [--window=<lo:hi>]
       maxop frac-max --input=<file> --beta=<b> [--points=<a:b:n>] [--centered] [--out=<file>]
       maxop good-ball --input=<file> --beta=<b> --x=<x>
       maxop deriv-lq --input=<file> --beta=<b> [--tol=<t>] [--step=<h>]

Options:
    --kind=<kind>       centered or uncentered [default: centered]
    --u=<u>             right end of the kurka range, an integer or inf [default: inf]
"""

CONTINUITY_COMMAND_DOC = """
Usage: continuity frac --input=<file> --beta=<b> [--family=<name>] [--js=<list>] [--bump=<file>]
                       [--out=<file>] [--format=<fmt>]
       continuity disc --input=<file> [--family=<name>] [--js=<list>] [--operator=<kind>] [--bump=<file>]
                       [--out=<file>] [--format=<fmt>]
       continuity corpus --seed=<s> --count=<n> --kind=<kind> [--out=<dir>] [--verify]

Options:
    --family=<name>     scaling, additive or translate [default: scaling]
    --operator=<kind>   centered or uncentered [default: centered]
"""

DEFAULT_FRAC_JS = "1,4,16,64"
DEFAULT_DISC_JS = "1,2,4,8,16,32,64,128,256"


# Argument parsing helpers

def _parse_int(text, what):
    try:
        return int(text)
    except (TypeError, ValueError):
        raise MxParameterError("{0} must be an integer, not '{1}'".format(what, text))

def _parse_float(text, what):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise MxParameterError("{0} must be a number, not '{1}'".format(what, text))

def _parse_bound(text, what):
    "An integer, or 'inf'."
    if str(text).strip().lower() in ('inf', '+inf'):
        return math.inf
    return _parse_int(text, what)

def _parse_range(text, what):
    "'lo:hi' as a pair of integers."
    parts = str(text).split(':')
    if len(parts) != 2:
        raise MxParameterError("{0} must look like lo:hi, not '{1}'".format(what, text))
    lo = _parse_int(parts[0], what)
    hi = _parse_int(parts[1], what)
    if lo > hi:
        raise MxParameterError("{0} is empty: {1}".format(what, text))
    return (lo, hi)

def _parse_points(text):
    "'a:b:n', n evenly spaced points from a to b."
    parts = str(text).split(':')
    if len(parts) != 3:
        raise MxParameterError("--points must look like a:b:n, not '{0}'".format(text))
    a, b = _parse_float(parts[0], '--points'), _parse_float(parts[1], '--points')
    n = _parse_int(parts[2], '--points')
    if n < 1:
        raise MxParameterError("--points needs at least one point")
    if n == 1:
        return [a]
    return [a + (b - a) * k / (n - 1) for k in range(n)]

def _parse_js(text):
    return [_parse_int(j, '--js') for j in str(text).split(',') if j.strip()]

def _default_window(f, pad = 2):
    supp = f.support()
    if supp is None:
        return (-pad, pad)
    return (supp[0] - pad, supp[1] + pad)


def write_rows(rows, columns, out = None):
    """
    Writes dict rows as CSV to 'out', or returns them as an aligned table when out is None.
    'columns' lists (heading, key) pairs.
    """
    if out:
        with open(out, 'w', newline = '') as fp:
            w = csv.writer(fp)
            w.writerow([h for h,_ in columns])
            for r in rows:
                w.writerow([fstr(r.get(k)) if r.get(k) is not None else '' for _,k in columns])
        return "{0} rows written to {1}".format(len(rows), out)
    tf = TableFormatter(*columns)
    tf.add_rows(rows)
    return tf.get_formatted_data()


class CommandContext(object):
    "What every command needs besides its options: the configuration and the thread count."

    config = None
    threads = 1

    def __init__(self, config):
        self.config = config
        self.threads = thread_count(config.get_settings().get('threads'))


class _BaseCommand(object):

    command_name = "X"

    def match(self, opts):
        if isinstance(self.command_name, tuple):
            return all(opts.get(name, False) for name in self.command_name)
        return opts.get(self.command_name, False)

    def exec(self, opts, context):
        """
        Returns (output text, exit status).  Errors propagate to the caller, which turns them
        into an exit code.
        """
        debug("running command {0}", self.command_name)
        result = self.do_exec(opts, context)
        if isinstance(result, tuple):
            return result
        return (str(result), 0)


# maxop commands

def _load_pwl(path, ctx):
    tol = ctx.config.get_section('fractional').get('canonical_tol', CANONICAL_TOL)
    return PwlFunction.fromFile(path, tol)

def _operator(f, beta, ctx):
    params = BetaParams.fromConfig(beta, ctx.config)
    return FractionalMaximal(f, params, ctx.config.get_section('fractional').get('tol_val', 1e-9))

class discMaxCommand(_BaseCommand):

    command_name = 'disc-max'

    def do_exec(self, opts, ctx):
        f = DiscreteSignal.fromFile(opts['--input'])
        kind = check_kind(opts['--kind'])
        window = _parse_range(opts['--window'], '--window') if opts['--window'] else _default_window(f)
        p = maximal_profile(f, kind, window, ctx.threads)
        if opts['--out']:
            with open(opts['--out'], 'w') as fp:
                json.dump(p.to_json(), fp, indent = 1)
            return "profile of {0} points written to {1}".format(len(p.points), opts['--out'])
        rows = []
        for i, pt in enumerate(p.points):
            n = p.window_offset + i
            rows.append({'n': n, 'f': f(n), 'mf': pt.value,
                         'left': 'inf' if pt.at_infinity else pt.left,
                         'right': 'inf' if pt.at_infinity else pt.right})
        return write_rows(rows, [('n', 'n'), ('f', 'f'), ('Mf', 'mf'), ('r', 'left'), ('s', 'right')])

class discVarCommand(_BaseCommand):

    command_name = 'disc-var'

    def do_exec(self, opts, ctx):
        f = DiscreteSignal.fromFile(opts['--input'])
        kind = check_kind(opts['--kind'])
        rows = [{'name': 'Var(f)', 'value': f.variation()},
                {'name': '||f||_BV', 'value': f.bv_norm()},
                {'name': 'Var(Mf) [{0}]'.format(kind), 'value': total_variation_of_max(f, kind)}]
        return write_rows(rows, [('quantity', 'name'), ('value', 'value')])

class lemma7ScanCommand(_BaseCommand):

    command_name = 'lemma7-scan'

    def do_exec(self, opts, ctx):
        if opts['--seed'] is not None:
            return self._scan_corpus(opts, ctx)
        f = DiscreteSignal.fromFile(opts['--input'])
        if opts['--window']:
            window = _parse_range(opts['--window'], '--window')
        else:
            window = f.support() or _default_window(f)
        p = maximal_profile(f, CENTERED, window, ctx.threads)
        rows = []
        status = 0
        for mx, mn in harvest_lemma7_configurations(p):
            row = {'a': mx.hi, 'b': mn.hi}
            try:
                w = lemma7_witness(p, mx, mn)
                row.update(r=w.radius, s=w.s, bound=w.bound, attained=w.attained_value,
                           step=w.radius_step, result='ok')
            except MxCheckError as ex:
                row['result'] = 'FAIL'
                error(ex)
                status = 1
            rows.append(row)
        info("{0} configurations checked", len(rows))
        return (write_rows(rows, [('a+', 'a'), ('b+', 'b'), ('r', 'r'), ('s', 's'), ('bound', 'bound'),
                                  ('|f(s)|', 'attained'), ('a+-r<b+', 'step'), ('result', 'result')]), status)

    def _scan_corpus(self, opts, ctx):
        seed = _parse_int(opts['--seed'], '--seed')
        count = _parse_int(opts['--count'], '--count')
        corpus = lab.generate_corpus(seed, count, lab.DISCRETE)
        results = parallel_map(lab.lemma7_results, corpus, ctx.threads)
        rows = []
        for k, (f, res) in enumerate(zip(corpus, results)):
            if not res:
                continue
            supp = f.support()
            rows.append({'signal': k, 'support': "{0}:{1}".format(*supp), 'configs': len(res),
                         'failed': sum(1 for _,_,outcome in res if isinstance(outcome, MxCheckError))})
        total = sum(r['configs'] for r in rows)
        failed = sum(r['failed'] for r in rows)
        text = write_rows(rows, [('signal', 'signal'), ('support', 'support'), ('configurations', 'configs'),
                                 ('failed', 'failed')])
        summary = "{0} configurations in {1} signals (seed {2}), {3} failed".format(total, count, seed, failed)
        return ("{0}\n\n{1}".format(text, summary), 1 if failed else 0)

class kurkaCommand(_BaseCommand):

    command_name = 'kurka'

    def do_exec(self, opts, ctx):
        f = DiscreteSignal.fromFile(opts['--input'])
        kind = check_kind(opts['--kind'])
        k = _parse_int(opts['--k'], '--k')
        u = _parse_bound(opts['--u'], '--u')
        if u < k:
            raise MxParameterError("--u must not be less than --k, got {0} < {1}".format(u, k))
        if opts['--window']:
            window = _parse_range(opts['--window'], '--window')
        else:
            supp = f.support()
            hi = u if u != math.inf else (supp[1] if supp else k)
            window = (min(k, supp[0]) if supp else k, max(hi, supp[1]) if supp else hi)
        p = maximal_profile(f, kind, window, ctx.threads)
        ks = kurka_sums(p, k, u)
        end = p.right_limit if u == math.inf else p.mf(u)
        rows = [{'name': 'S1', 'value': ks.s1}, {'name': 'S2', 'value': ks.s2},
                {'name': 'S1+S2', 'value': ks.s1 + ks.s2},
                {'name': 'Var(Mf) on range', 'value': p.variation(k, u)},
                {'name': '|Mf(k) - Mf(u)|', 'value': abs(p.mf(k) - end)}]
        return write_rows(rows, [('quantity', 'name'), ('value', 'value')])

class fracMaxCommand(_BaseCommand):

    command_name = 'frac-max'

    def do_exec(self, opts, ctx):
        f = _load_pwl(opts['--input'], ctx)
        op = _operator(f, opts['--beta'], ctx)
        if opts['--points']:
            points = _parse_points(opts['--points'])
        else:
            lo, hi = f.support() or (-1.0, 1.0)
            points = _parse_points("{0}:{1}:21".format(lo - 1, hi + 1))

        def one(x):
            row = {'x': x, 'value': op.eval_uncentered(x)}
            if not op.is_zero:
                ball = op.good_ball(x)
                row.update(a=ball.a, b=ball.b, derivative=op.derivative_at(x))
            else:
                row['derivative'] = 0.0
            if opts['--centered']:
                row['centered'] = op.eval_centered(x)
            return row

        rows = parallel_map(one, points, ctx.threads)
        cols = [('x', 'x'), ('value', 'value'), ('a', 'a'), ('b', 'b'), ('derivative', 'derivative')]
        if opts['--centered']:
            cols.append(('centered', 'centered'))
        return write_rows(rows, cols, opts['--out'])

class goodBallCommand(_BaseCommand):

    command_name = 'good-ball'

    def do_exec(self, opts, ctx):
        op = _operator(_load_pwl(opts['--input'], ctx), opts['--beta'], ctx)
        x = _parse_float(opts['--x'], '--x')
        ball = op.good_ball(x)
        rows = [{'x': x, 'a': ball.a, 'b': ball.b, 'radius': ball.radius, 'value': ball.value,
                 'derivative': op.derivative_at(x)}]
        return write_rows(rows, [(k, k) for k in ('x', 'a', 'b', 'radius', 'value', 'derivative')])

class derivLqCommand(_BaseCommand):

    command_name = 'deriv-lq'

    def do_exec(self, opts, ctx):
        f = _load_pwl(opts['--input'], ctx)
        params = BetaParams.fromConfig(opts['--beta'], ctx.config)
        tol_val = ctx.config.get_section('fractional').get('tol_val', 1e-9)
        grid = GridSpec.fromConfig(ctx.config)
        if opts['--step']:
            grid.step = _parse_float(opts['--step'], '--step')
        if opts['--tol']:
            grid.tail_tol = _parse_float(opts['--tol'], '--tol')
        grid = GridSpec(**{k: getattr(grid, k) for k in GridSpec._FIELDS})
        grid, res = with_refinement(lambda g: DerivativeQuadrature([f], params, g, ctx.threads, tol_val).norm(0), grid)
        rows = [{'q': params.q, 'value': res.value, 'truncation': res.truncation_error,
                 'quadrature': res.quadrature_error, 'step': grid.step}]
        return write_rows(rows, [('q', 'q'), ('||(Mf)\'||_q', 'value'), ('truncation error', 'truncation'),
                                 ('quadrature error', 'quadrature'), ('step', 'step')])


# continuity commands

def _report_output(report, opts):
    out = opts['--out']
    fmt = opts['--format']
    if out:
        if not fmt:
            fmt = 'json' if out.endswith('.json') else 'csv'
        lab.emit_report(report, fmt, out)
        text = "report written to {0}".format(out)
    else:
        cols = [(c, c) for c in report.columns]
        tf = TableFormatter(*cols)
        tf.add_rows(report.flat_rows())
        text = tf.get_formatted_data()
    checks = "\n".join("  {0:<22} {1}".format(k, "ok" if v else "FAILED") for k,v in report.checks.items())
    return ("{0}\n\nchecks:\n{1}".format(text, checks), 0 if report.passed else 1)

def _bump(opts, ctx, kind):
    spec = opts['--bump'] or ctx.config.get_section('lab').get('discrete_bump' if kind == lab.DISCRETE else 'pwl_bump')
    return lab.bump_from_spec(spec, kind, ctx.config.get_section('fractional').get('canonical_tol', CANONICAL_TOL))

class fracExperimentCommand(_BaseCommand):

    command_name = 'frac'

    def do_exec(self, opts, ctx):
        f = _load_pwl(opts['--input'], ctx)
        params = BetaParams.fromConfig(opts['--beta'], ctx.config)
        labconf = ctx.config.get_section('lab')
        grid = GridSpec.fromConfig(ctx.config)
        report = lab.run_fractional_experiment(
            f, opts['--family'], params, _parse_js(opts['--js'] or DEFAULT_FRAC_JS), grid,
            bump = _bump(opts, ctx, lab.FRACTIONAL), threads = ctx.threads,
            slack = labconf.get('slack', lab.DEFAULT_SLACK),
            holder_slack = labconf.get('holder_slack', lab.DEFAULT_HOLDER_SLACK),
            lemma1_ratio = labconf.get('lemma1_ratio', lab.DEFAULT_LEMMA1_RATIO),
            final_ratio = labconf.get('frac_final_ratio', lab.DEFAULT_FRAC_FINAL_RATIO),
            sup_samples = ctx.config.get_grid().get('sup_samples', 201),
            tol_val = ctx.config.get_section('fractional').get('tol_val'))
        return _report_output(report, opts)

class discExperimentCommand(_BaseCommand):

    command_name = 'disc'

    def do_exec(self, opts, ctx):
        f = DiscreteSignal.fromFile(opts['--input'])
        report = lab.run_discrete_experiment(
            f, opts['--family'], _parse_js(opts['--js'] or DEFAULT_DISC_JS), check_kind(opts['--operator']),
            bump = _bump(opts, ctx, lab.DISCRETE), threads = ctx.threads,
            final_ratio = ctx.config.get_section('lab').get('disc_final_ratio', lab.DEFAULT_DISC_FINAL_RATIO))
        return _report_output(report, opts)

class corpusCommand(_BaseCommand):

    command_name = 'corpus'

    _KINDS = {'disc': lab.DISCRETE, 'discrete': lab.DISCRETE, 'pwl': 'pwl', 'tent': lab.TENT}

    def do_exec(self, opts, ctx):
        kind = self._KINDS.get(opts['--kind'])
        if kind is None:
            raise MxParameterError("--kind must be disc, pwl or tent, not '{0}'".format(opts['--kind']))
        seed = _parse_int(opts['--seed'], '--seed')
        count = _parse_int(opts['--count'], '--count')
        items = lab.generate_corpus(seed, count, kind)
        text = ["{0} {1} items generated with seed {2}".format(len(items), kind, seed)]
        status = 0
        if opts['--out']:
            paths = lab.write_corpus(items, opts['--out'])
            text.append("written to {0}".format(os.path.dirname(paths[0]) if paths else opts['--out']))
        if opts['--verify']:
            if kind == lab.DISCRETE:
                counts = lab.verify_corpus_discrete(seed, count, threads = ctx.threads)
            else:
                counts = lab.verify_corpus_pwl(seed, count, threads = ctx.threads, kind = kind)
            rows = [{'check': k, 'checked': n, 'failed': bad} for k,(n,bad) in counts.items()]
            text.append(write_rows(rows, [('check', 'check'), ('checked', 'checked'), ('failed', 'failed')]))
            if any(bad for n,bad in counts.values()):
                status = 1
        return ("\n".join(text), status)


##
## Register all commands here
##

MAXOP_COMMANDS = (
    discMaxCommand(),
    discVarCommand(),
    lemma7ScanCommand(),
    kurkaCommand(),
    fracMaxCommand(),
    goodBallCommand(),
    derivLqCommand(),
)

CONTINUITY_COMMANDS = (
    fracExperimentCommand(),
    discExperimentCommand(),
    corpusCommand(),
)


def dispatch(command_doc, commands, argv, context):
    "Parses a subcommand line and runs the matching command.  Returns (output, status)."
    opts = docopt(command_doc, argv = argv, help = False)
    for c in commands:
        if c.match(opts):
            return c.exec(opts, context)
    raise MxParameterError("unrecognized command: {0}".format(" ".join(argv)))

def run_cli(main_doc, command_doc, commands, argv = None):
    """
    The shared body of the console scripts: global options (merged with MAXOP_OPTIONS), logging
    and configuration, then the subcommand.  Returns the process exit status.
    """
    options = docopt(main_doc, argv = argv, options_first = True, version = VERSION_MESSAGE)

    if not options['--no-defaults']:
        envopts = os.environ.get(ENV_OPTIONS)
        if envopts:
            try:
                defaults = docopt(main_doc, argv = shlex.split(envopts) + ['-'], options_first = True)
            except SystemExit:
                print("Error occurred in {0} environment variable: {1}".format(ENV_OPTIONS, envopts))
                raise
            # Replace any "false" option with the default version.
            options.update({k:defaults[k] for k in options.keys() if not options[k] and k.startswith('--')})

    if options['--debug']:
        options['--log-level'] = "DEBUG"

    try:
        if options['--log-level']:
            set_log_level(options['--log-level'])
        threads = _parse_int(options['--threads'], '--threads') if options['--threads'] else None
        config = Configuration.configFromCommandSpec(options['--config'], extra_settings = {
            'log_level': options['--log-level'], 'threads': threads})
        set_log_level(config.get_settings().get('log_level', 'WARNING'))
        if options['--debug']:
            config.dump()
        context = CommandContext(config)
        output, status = dispatch(command_doc, commands, [options['<command>']] + options['<args>'], context)
    except MxError as ex:
        error(ex, "{0}", ex)
        return get_errno_from_exception(ex) or 1

    if output:
        print(output)
    sys.stdout.flush()
    return status
