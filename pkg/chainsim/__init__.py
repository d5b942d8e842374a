"""
ChainSim - Service function chain placement on FiWi edge networks

Load-balanced multipath deployment of service function chains (GBMP, KSMP)
compared against ECMP and single-path exact placement (ILPS) on a
tree-to-star fiber-wireless back-end with edge computing nodes.
"""

__version__ = "1.0.0"

from .network import *
from .chain import *
from .solvers import *
from .placement import *
from .simulator import *

__all__ = [
    "__version__",
]
