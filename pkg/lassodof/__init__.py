"""Lasso-type solvers, unbiased degrees-of-freedom estimates and their validation."""
from .dof import estimate_df
from .errors import LassoDofError
from .solver import make_fit_map, solve

__version__ = "1.0.0"
