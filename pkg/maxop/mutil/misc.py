import os
import re
import asyncio

from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor

from maxop.mutil.errors import MxParameterError

ENV_THREADS = 'MAXOP_THREADS'            # caps the number of worker threads used by parallel_map
ENV_OPTIONS = 'MAXOP_OPTIONS'            # default command line options, prepended to argv

class lazydict(dict):
    """
    The dict behind configuration sections.  get() accepts a callable default, evaluated only
    on a miss, and smart_update() layers one configuration file over another.
    """

    __slots__ = ()

    def __init__(self, *args):
        super().__init__()
        for a in args:
            self.update(a)

    def get(self, key, default = None):
        if key in self:
            return self[key]
        return default() if callable(default) else default

    def smart_update(self, key, theirs):
        """
        Merges section 'theirs' into our section 'key'.  Values replace ours, except that
        sub-mappings present on both sides are merged one level down.
        """
        ours = super().get(key)
        if ours is None:
            self[key] = theirs
            return

        for k,v in theirs.items():
            oursub = ours.get(k)
            if isinstance(oursub, dict) and isinstance(v, dict):
                oursub.update(v)
            else:
                ours[k] = v


# Rationals are accepted as ints, "p/q" strings, or plain decimal strings such as "0.125".  Floats
# are refused since they are almost never what the user meant for exact input.

_RE_RATIONAL = re.compile(r'^\s*[-+]?(?:\d+(?:/\d+)?|\d*\.\d+|\d+\.\d*)\s*$')

def parse_rational(val):
    "Converts an input value to an exact Fraction, raising MxParameterError on anything else."
    if isinstance(val, Fraction):
        return val
    if isinstance(val, bool):
        raise MxParameterError("boolean is not a rational value: '{0}'".format(val))
    if isinstance(val, int):
        return Fraction(val)
    if isinstance(val, str) and _RE_RATIONAL.match(val):
        try:
            return Fraction(val.strip())
        except ZeroDivisionError:
            raise MxParameterError("zero denominator in rational value: '{0}'".format(val))
    raise MxParameterError("invalid rational value: '{0}' (use an integer, a decimal string or 'p/q')".format(val))

def rational_str(val):
    "Exact string form used for reports and JSON, always 'p/q' or 'p'."
    return str(Fraction(val))


def thread_count(requested = None):
    """
    Returns the number of worker threads to use: the requested count (usually from the
    configuration) or the CPU count, capped by MAXOP_THREADS when it is set.
    """
    n = int(requested) if requested else (os.cpu_count() or 1)
    envval = os.environ.get(ENV_THREADS)
    if envval:
        try:
            cap = int(envval)
        except ValueError:
            raise MxParameterError("invalid {0} value: '{1}'".format(ENV_THREADS, envval))
        if cap < 1:
            raise MxParameterError("{0} must be at least 1, not {1}".format(ENV_THREADS, cap))
        n = min(n, cap)
    return max(n, 1)

async def _gather_in_executor(func, items, executor):
    loop = asyncio.get_running_loop()
    futures = [loop.run_in_executor(executor, func, item) for item in items]
    return await asyncio.gather(*futures)

def parallel_map(func, items, threads = None):
    """
    Applies func to every item, returning results in input order.  Work items are run
    on an asyncio loop backed by a thread pool; with a single thread (or a single item)
    everything runs inline so results and exceptions are identical either way.
    """
    items = list(items)
    nthreads = thread_count(threads)

    if nthreads <= 1 or len(items) <= 1:
        return [func(item) for item in items]

    loop = asyncio.new_event_loop()
    try:
        with ThreadPoolExecutor(max_workers = min(nthreads, len(items))) as executor:
            return list(loop.run_until_complete(_gather_in_executor(func, items, executor)))
    finally:
        loop.close()
