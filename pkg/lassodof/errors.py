"""Exceptions raised by lassodof.

Every error carries the process exit code the CLI reports for it, the same
way an HTTP layer pairs a status code with a detail message.
"""
from typing import Optional


class LassoDofError(Exception):
    exit_code = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class InputError(LassoDofError):
    exit_code = 2


class ConvergenceError(LassoDofError):
    exit_code = 3

    def __init__(
        self,
        detail: str,
        iterations: int,
        primal_residual: float,
        dual_residual: float,
        singular_normal_matrix: bool = False,
    ):
        super().__init__(
            f"{detail} (iterations={iterations}, primal_residual={primal_residual:.3e}, "
            f"dual_residual={dual_residual:.3e})"
        )
        self.iterations = iterations
        self.primal_residual = primal_residual
        self.dual_residual = dual_residual
        self.singular_normal_matrix = singular_normal_matrix


class StatisticalGateError(LassoDofError):
    exit_code = 4


class InconsistencyError(LassoDofError):
    exit_code = 5


class HarnessError(LassoDofError):
    exit_code = 6
