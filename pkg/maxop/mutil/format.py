from fractions import Fraction
from numbers import Number

def fstr(s):
    "Text for one table or CSV cell: exact rationals as p/q, floats to 9 significant digits."
    if s is None:
        return '-'
    if isinstance(s, bool):
        return str(s).lower()
    if isinstance(s, float):
        return "{0:.9g}".format(s)
    return str(s)

def _numeric(v):
    return isinstance(v, (Number, Fraction)) and not isinstance(v, bool)


class TableFormatter(list):

    """
    Builds a table of result rows, then prints it with aligned columns under a heading line.
    Columns are given as keys or (heading, key) pairs.  Rows are dicts or objects with the
    keys as attributes.  Numeric columns are right-aligned so that exponents and fractions
    line up.
    """

    keys = None
    headings = None

    def __init__(self, *columns):
        self.keys = tuple(c[1] if isinstance(c, tuple) else c for c in columns)
        self.headings = tuple(c[0] if isinstance(c, tuple) else c for c in columns)
        self._width = [len(h) for h in self.headings]
        self._numeric = [True] * len(self.keys)

    @staticmethod
    def _lookup(row, key):
        return row.get(key) if isinstance(row, dict) else getattr(row, key, None)

    def add_rows(self, rows):
        for r in rows:
            cells = tuple(self._lookup(r, k) for k in self.keys)
            for i, c in enumerate(cells):
                self._width[i] = max(self._width[i], len(fstr(c)))
                if c is not None and not _numeric(c):
                    self._numeric[i] = False
            self.append(cells)

    def _cell(self, i, text):
        w = self._width[i]
        return text.rjust(w) if self._numeric[i] else text.ljust(w)

    def get_formatted_data(self):
        rule = ["-" * w for w in self._width]
        lines = ["  ".join(self._cell(i, h) for i,h in enumerate(self.headings)),
                 "  ".join(rule)]
        lines.extend("  ".join(self._cell(i, fstr(c)) for i,c in enumerate(row)) for row in self)
        return "\n".join(line.rstrip() for line in lines)
