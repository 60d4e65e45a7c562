import logging

import pandas as pd

from ..errors import InputError
from ..schemas import RunConfig
from ..stein import select_lambda
from .common import ProblemRunner, add_problem_arguments, float_list, write_report

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("sure-path", help="SURE risk along a lambda grid")
    add_problem_arguments(parser)
    parser.add_argument("--lambda-grid", type=float_list, required=True, help="ascending, comma-separated")
    parser.add_argument("--sigma", type=float, default=1.0)
    parser.set_defaults(handler=run)


def run(cfg: RunConfig) -> int:
    runner = ProblemRunner(cfg)
    if runner.kind not in ("lasso", "genlasso"):
        raise InputError("sure-path supports the lasso and the generalized lasso")
    path = select_lambda(
        runner.problem,
        cfg.lambda_grid,
        cfg.sigma,
        cfg.solver,
        cfg.set_tolerance,
        cfg.rank_tolerance,
    )
    if cfg.out is not None:
        curve_path = cfg.out.with_suffix(".csv")
        curve_path.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(
            {"lambda": path.lambdas, "risk": path.risks, "df": path.dfs, "failed": path.failed}
        ).to_csv(curve_path, index=False, float_format="%.17g")
    logger.info("SURE selects lambda=%g (grid index %d)", path.best_lambda, path.best_index)
    write_report(cfg, {"problem": runner.kind, "sigma": cfg.sigma, "path": path.model_dump(mode="json")})
    return 0
