"""
Exceptions raised by maxop.  Each class carries the errno that the command line returns as
its exit status, so a bad option, a missing input file and a violated check can be told apart
by scripts driving the experiments.
"""

import errno

class MxError(Exception):

    """
    The base of all maxop errors.  'errno' mirrors OSError's attribute of the same name so that
    get_errno_from_exception() can read it from either.  Callers that know more about where a
    failure happened (which input file, which row of an experiment) add it with annotate().
    """

    errno = None
    annotation = None

    def annotate(self, text):
        if self.annotation:
            self.annotation += ' ' + text
        else:
            self.annotation = text

    def __str__(self):
        supmsg = super().__str__()
        if self.annotation:
            supmsg += ' ' + self.annotation
        return supmsg

    def __init__(self, message = None, errno = None):
        super().__init__(message)
        if errno is not None:
            self.errno = errno

class MxParameterError(MxError):
    "Malformed input: option values, signal or function files, configuration, beta out of range."
    errno = errno.EINVAL

class MxNotFoundError(MxError):
    "An input, configuration or report file does not exist."
    errno = errno.ENOENT

class MxDomainError(MxError):
    "The operation is undefined for this input, such as the exact Var(Mf) of a signal with nonzero tails."
    errno = errno.EDOM

class MxPreconditionError(MxDomainError):
    "A local max / local min configuration does not meet the witness preconditions."
    pass

class MxToleranceError(MxError):
    "A numerical estimate, such as the quadrature discrepancy, is outside its tolerance."
    errno = errno.ERANGE

class MxCheckError(MxError):

    "An exact or numerical invariant check failed.  'check' names it."

    check = None

    def __init__(self, message = None, errno = None, check = None):
        super().__init__(message, errno)
        if check is not None:
            self.check = check

def get_errno_from_exception(ex):
    "The exit status for an exception: its errno when it has one, else None."
    try:
        return ex.errno
    except AttributeError:
        return None
