"""
succmin

Successive minima of lattices: reduction, exact enumeration, bounds and
monotonicity checks, and an IF C-RAN symmetric-rate solver built on them.
"""

__version__ = "0.1.0"

from succmin.config import SuccminConfig
from succmin.ifcran.instance import IfCranInstance, generate_instance
from succmin.ifcran.solver import solve_rate
from succmin.lattice.enumeration import solve_smp
from succmin.lattice.reduction import reduce_basis

__all__ = [
    "SuccminConfig",
    "IfCranInstance",
    "generate_instance",
    "solve_rate",
    "solve_smp",
    "reduce_basis",
]
