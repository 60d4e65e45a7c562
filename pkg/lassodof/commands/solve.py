import logging

from ..schemas import RunConfig
from ..sets import membership_margin
from ..solver import genlasso_objective, lasso_objective
from .common import (
    ProblemRunner,
    add_problem_arguments,
    json_float,
    require_lambda,
    write_report,
)

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("solve", help="solve one lasso-type problem")
    add_problem_arguments(parser)
    parser.add_argument("--lambda", dest="lam", type=float, required=True)
    parser.set_defaults(handler=run)


def run(cfg: RunConfig) -> int:
    require_lambda(cfg)
    runner = ProblemRunner(cfg)
    prob = runner.problem
    sol = runner.solve()

    payload = {
        "problem": runner.kind,
        "solution": sol.model_dump(mode="json"),
        "sets": {name: s.model_dump(mode="json") for name, s in runner.sets(prob, sol).items()},
    }
    if runner.kind == "genlasso":
        payload["objective"] = genlasso_objective(prob.X, prob.D, prob.y, prob.lam, sol.beta)
    elif runner.kind == "lasso":
        payload["objective"] = lasso_objective(prob.X, prob.y, prob.lam, sol.beta)
    if runner.kind != "elastic_net":
        payload["membership_margin"] = json_float(membership_margin(prob, sol, cfg.set_tolerance))
    logger.info("solved %s problem at lambda=%g in %d iterations", runner.kind, cfg.lam, sol.iterations)
    write_report(cfg, payload)
    return 0
