"""
Exact discrete and numerical fractional maximal operators

Usage:
    maxop [--config=<file_or_dir>] [--log-level=<level>] [--debug] [--threads=<n>]
          [--no-defaults] [--version]
          <command> [<args> ...]

Options:
    --config=<file_or_dir>   YAML configuration file, or a directory of .yaml/.conf files
    --debug                  Turn on debugging output (same as --log-level=DEBUG)
    --log-level=<level>      Log level filtering, such as INFO, DEBUG, etc.
    --no-defaults            Ignore default options in the MAXOP_OPTIONS environment variable
    --threads=<n>            Worker threads for independent evaluations (capped by MAXOP_THREADS)
    --version                Display version and exit

Commands:
    disc-max     --input=<file> [--kind=<kind>] [--window=<lo:hi>] [--out=<file>]
                 Mf (or the uncentered version) of a signal, with good windows.  --out writes
                 the exact profile as JSON.
    disc-var     --input=<file> [--kind=<kind>]
                 Exact Var(f), its BV norm and the exact Var(Mf) over all of Z.
    lemma7-scan  (--seed=<s> --count=<n> | --input=<file> [--window=<lo:hi>])
                 Finds and checks every local max / local min configuration of Mf, for
                 one signal or across a seeded corpus.
    kurka        --input=<file> --k=<k> [--u=<u>] [--kind=<kind>] [--window=<lo:hi>]
                 Rise and fall sums of Mf over [k, u]; u defaults to inf.
    frac-max     --input=<file> --beta=<b> [--points=<a:b:n>] [--centered] [--out=<file>]
                 The fractional maximal function of a piecewise-linear function, with good
                 balls and derivatives.
    good-ball    --input=<file> --beta=<b> --x=<x>
    deriv-lq     --input=<file> --beta=<b> [--tol=<t>] [--step=<h>]
                 The L^q norm of the derivative, q = 1/(1-beta), with error estimates.

Signals are JSON or YAML files with 'values' (integers, decimals or "p/q" strings) and
optional 'offset', 'tail_left' and 'tail_right'.  Piecewise-linear functions have
'breakpoints' and 'values', with zero values at both ends.
"""

import sys

from maxop.mcore.commands import run_cli, MAXOP_COMMAND_DOC, MAXOP_COMMANDS

def main_entry(argv = None):
    sys.exit(run_cli(__doc__, MAXOP_COMMAND_DOC, MAXOP_COMMANDS, argv))

if __name__ == '__main__':
    main_entry()
