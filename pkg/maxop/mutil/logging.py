import logging
import traceback

from functools import partial

from maxop.mutil.errors import MxParameterError

logger = logging.getLogger('maxop')

_root_logger = logging.getLogger(None)
_stderr_handler = logging.StreamHandler()
_cur_level = logging.WARNING

_format = logging.Formatter('%(levelname)s %(message)s')
_stderr_handler.setFormatter(_format)

_root_logger.addHandler(_stderr_handler)
logger.setLevel(_cur_level)

_LEVEL_NAMES = {
    'debug': logging.DEBUG,
    'info': logging.INFO,
    'warn': logging.WARNING,
    'warning': logging.WARNING,
    'err': logging.ERROR,
    'error': logging.ERROR,
    'crit': logging.CRITICAL,
    'critical': logging.CRITICAL,
}


def level_from_name(lev):
    """
    Accepts either a numeric Python logging level or one of the names in _LEVEL_NAMES
    (case does not matter).
    """
    if isinstance(lev, int):
        return lev
    name = str(lev).strip().lower()
    if name.isdigit():
        return int(name)
    if name not in _LEVEL_NAMES:
        raise MxParameterError("not a valid log level: {0}".format(lev))
    return _LEVEL_NAMES[name]


def set_log_level(lev):
    global _cur_level

    _cur_level = level_from_name(lev)
    logger.setLevel(_cur_level)


def _versatile_logprint(delegate, fmt, *args, exceptions=False, **kwargs):
    """
    Logs through 'delegate' (a logger method) accepting three message styles:
    '{}' format strings filled with .format(*args), %-style strings handed to logging as is,
    and plain text, which gets repr() of any extra args appended.

    An exception may come first.  Its text is the message unless a format follows it, and the
    traceback is included when exceptions=True or the maxop logger is at DEBUG.
    """

    if isinstance(fmt, Exception):
        ex = fmt
        args = list(args)
        if len(args) == 0:
            fmt = str(ex)
        else:
            fmt = args.pop(0)
    else:
        ex = None

    if ex and (exceptions or logger.level == logging.DEBUG): # use python level here
        trace = "\n" + traceback.format_exc()
    else:
        trace = ""

    if not len(args):
        delegate(fmt + trace, **kwargs)
    elif '%' not in fmt:
        if '{' in fmt:
            delegate('%s', fmt.format(*args) + trace, **kwargs)
        else:
            delegate('%s', " ".join([fmt] + [repr(a) for a in args]) + trace, **kwargs)
    else:
        delegate(fmt, *args, **kwargs)

warn = partial(_versatile_logprint, logger.warning)
info = partial(_versatile_logprint, logger.info)
debug = partial(_versatile_logprint, logger.debug, exceptions=True)
error = partial(_versatile_logprint, logger.error)
