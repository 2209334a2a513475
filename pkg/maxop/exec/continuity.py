"""
Convergence experiments for the maximal operators

Usage:
    continuity [--config=<file_or_dir>] [--log-level=<level>] [--debug] [--threads=<n>]
               [--no-defaults] [--version]
               <command> [<args> ...]

Options:
    --config=<file_or_dir>   YAML configuration file, or a directory of .yaml/.conf files
    --debug                  Turn on debugging output (same as --log-level=DEBUG)
    --log-level=<level>      Log level filtering, such as INFO, DEBUG, etc.
    --no-defaults            Ignore default options in the MAXOP_OPTIONS environment variable
    --threads=<n>            Worker threads for independent rows (capped by MAXOP_THREADS)
    --version                Display version and exit

Commands:
    frac    --input=<file> --beta=<b> [--family=<name>] [--js=<list>] [--bump=<file>]
            [--out=<file>] [--format=<fmt>]
            Fractional experiment; families scaling, additive, translate.  js default 1,4,16,64.
    disc    --input=<file> [--family=<name>] [--js=<list>] [--operator=<kind>] [--bump=<file>]
            [--out=<file>] [--format=<fmt>]
            Exact discrete experiment; families scaling, additive.  js default 1,2,4,...,256.
    corpus  --seed=<s> --count=<n> --kind=<disc|pwl|tent> [--out=<dir>] [--verify]
            Writes a seeded corpus and optionally sweeps it for invariant violations.

Reports go to CSV or JSON (--format, else from the --out suffix).  The exit status is 1
when any in-run check fails.
"""

import sys

from maxop.mcore.commands import run_cli, CONTINUITY_COMMAND_DOC, CONTINUITY_COMMANDS

def main_entry(argv = None):
    sys.exit(run_cli(__doc__, CONTINUITY_COMMAND_DOC, CONTINUITY_COMMANDS, argv))

if __name__ == '__main__':
    main_entry()
