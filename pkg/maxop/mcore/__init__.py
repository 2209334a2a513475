# Placeholder

from maxop.mcore.discrete_signal import DiscreteSignal
from maxop.mcore.pwl_function import PwlFunction
