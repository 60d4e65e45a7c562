"""Argument parsing, problem loading and report writing shared by the commands."""
import argparse
import json
import logging
import sys
from datetime import datetime, timezone
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .. import config
from ..data import read_matrix, read_vector
from ..dof import df_lasso_intercept, estimate_df
from ..errors import InputError
from ..penalties import penalty_from_spec
from ..schemas import (
    DfReport,
    ElasticNetProblem,
    GenLassoProblem,
    LassoProblem,
    McConfig,
    RankTolerance,
    RunConfig,
    SetTolerance,
    SignedIndexSet,
    Solution,
    SolverOptions,
)
from ..sets import (
    active_set_genlasso,
    active_set_lasso,
    boundary_set,
    check_tolerance_order,
    equicorrelation_set,
)
from ..solver import solve, solve_lasso_intercept

logger = logging.getLogger(__name__)

AnyProblem = Union[LassoProblem, GenLassoProblem, ElasticNetProblem]


def float_list(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def add_problem_arguments(parser: argparse.ArgumentParser, response: bool = True) -> None:
    parser.add_argument("--x", required=True, help="design matrix CSV")
    if response:
        parser.add_argument("--y", required=True, help="response vector CSV")
    parser.add_argument("--d", dest="penalty", help="identity | chain | graph:FILE | trend:K")
    parser.add_argument("--lambda2", type=float, help="ridge weight; switches to the elastic net")
    parser.add_argument("--intercept", action="store_true", help="fit an unpenalized intercept")
    parser.add_argument("--tol-set", type=float, help="set-membership tolerance")
    parser.add_argument("--tol-rank", type=float, help="relative singular-value cutoff")
    parser.add_argument("--max-iterations", type=int, help="solver iteration budget")
    parser.add_argument("--out", help="output path")


def add_monte_carlo_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--replications", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)


def run_config(args: argparse.Namespace) -> RunConfig:
    values = {
        key: value
        for key, value in vars(args).items()
        if key in RunConfig.model_fields and value is not None
    }
    if getattr(args, "tol_set", None) is not None:
        values["set_tolerance"] = SetTolerance(membership_tol=args.tol_set)
    if getattr(args, "tol_rank", None) is not None:
        values["rank_tolerance"] = RankTolerance(relative_cutoff=args.tol_rank)
    if getattr(args, "max_iterations", None) is not None:
        values["solver"] = SolverOptions(max_iterations=args.max_iterations)
    monte_carlo = {
        key: getattr(args, key)
        for key in ("replications", "seed")
        if getattr(args, key, None) is not None
    }
    if monte_carlo:
        values["monte_carlo"] = McConfig(**monte_carlo)
    cfg = RunConfig(**values)
    check_tolerance_order(cfg.set_tolerance, cfg.solver)
    return cfg


class ProblemRunner:
    """Builds the problem a RunConfig describes and solves it the matching way."""

    def __init__(self, cfg: RunConfig, y: Optional[np.ndarray] = None):
        self.cfg = cfg
        X = read_matrix(cfg.x)
        if y is None:
            y = read_vector(cfg.y)
        lam = cfg.lam if cfg.lam is not None else 0.0
        if cfg.penalty is not None:
            self.kind = "genlasso"
            self.problem: AnyProblem = GenLassoProblem(
                X=X, D=penalty_from_spec(cfg.penalty, X.shape[1]), y=y, lam=lam
            )
        elif cfg.lambda2 is not None:
            self.kind = "elastic_net"
            self.problem = ElasticNetProblem(X=X, y=y, lam1=lam, lam2=cfg.lambda2)
        else:
            self.kind = "intercept" if cfg.intercept else "lasso"
            self.problem = LassoProblem(X=X, y=y, lam=lam)

    def at(self, y) -> AnyProblem:
        return self.problem.with_response(y)

    def solve(self, prob: Optional[AnyProblem] = None) -> Solution:
        if prob is None:
            prob = self.problem
        if self.kind == "intercept":
            return solve_lasso_intercept(prob, self.cfg.solver)
        return solve(prob, self.cfg.solver)

    def df(self, prob: AnyProblem, sol: Solution) -> DfReport:
        if self.kind == "intercept":
            A = active_set_lasso(sol, self.cfg.set_tolerance)
            return df_lasso_intercept(prob.X, A, self.cfg.rank_tolerance)
        return estimate_df(prob, sol, self.cfg.set_tolerance, self.cfg.rank_tolerance)

    def fit_and_df(self, y) -> Tuple[np.ndarray, float]:
        prob = self.at(y)
        sol = self.solve(prob)
        return sol.fit, self.df(prob, sol).df_value

    def sets(self, prob: AnyProblem, sol: Solution) -> Dict[str, SignedIndexSet]:
        tol = self.cfg.set_tolerance
        if self.kind == "genlasso":
            return {"B": boundary_set(sol, tol), "A": active_set_genlasso(prob, sol, tol)}
        if self.kind == "elastic_net":
            return {"A": active_set_lasso(sol, tol)}
        return {"E": equicorrelation_set(prob, sol, tol), "A": active_set_lasso(sol, tol)}


def require_lambda(cfg: RunConfig) -> None:
    if cfg.lam is None:
        raise InputError(f"{cfg.command} needs --lambda")


def write_report(cfg: RunConfig, payload: dict) -> None:
    """JSON document with the schema tag and a timestamp, to --out or stdout."""
    document = {
        "schema": config.SCHEMA_VERSION,
        "command": cfg.command,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        **payload,
    }
    text = json.dumps(document, indent=2, sort_keys=True)
    if cfg.out is None:
        sys.stdout.write(text + "\n")
        return
    cfg.out.parent.mkdir(parents=True, exist_ok=True)
    cfg.out.write_text(text + "\n")
    logger.info("wrote %s", cfg.out)


def json_float(value: float):
    """JSON has no infinities; unbounded quantities are written as null."""
    return float(value) if np.isfinite(value) else None
