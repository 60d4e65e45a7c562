import logging

from ..dof import df_elastic_net, df_genlasso, df_lasso_active, df_lasso_equi, df_lasso_intercept
from ..errors import InconsistencyError
from ..schemas import RunConfig
from ..sets import membership_margin
from .common import (
    ProblemRunner,
    add_problem_arguments,
    json_float,
    require_lambda,
    write_report,
)

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("df", help="unbiased degrees-of-freedom estimates")
    add_problem_arguments(parser)
    parser.add_argument("--lambda", dest="lam", type=float, required=True)
    parser.set_defaults(handler=run)


def run(cfg: RunConfig) -> int:
    """Report the set-based estimates; exit 5 when the two disagree."""
    require_lambda(cfg)
    runner = ProblemRunner(cfg)
    prob = runner.problem
    sol = runner.solve()
    sets = runner.sets(prob, sol)
    rtol = cfg.rank_tolerance

    if runner.kind == "genlasso":
        estimates = {
            "boundary": df_genlasso(prob.X, prob.D, sets["B"], rtol, kind="boundary"),
            "active": df_genlasso(prob.X, prob.D, sets["A"], rtol, kind="active"),
        }
    elif runner.kind == "elastic_net":
        estimates = {"active": df_elastic_net(prob.X, sets["A"], prob.lam2)}
    elif runner.kind == "intercept":
        estimates = {
            "equicorrelation": df_lasso_intercept(prob.X, sets["E"], rtol),
            "active": df_lasso_intercept(prob.X, sets["A"], rtol),
        }
    else:
        estimates = {
            "equicorrelation": df_lasso_equi(prob.X, sets["E"], rtol),
            "active": df_lasso_active(prob.X, sets["A"], rtol),
        }

    values = [report.df_value for report in estimates.values()]
    agree = max(values) - min(values) <= 1e-9
    payload = {
        "problem": runner.kind,
        "lambda": cfg.lam,
        "df": values[-1],
        "agree": agree,
        "estimates": {name: report.model_dump(mode="json") for name, report in estimates.items()},
    }
    if runner.kind != "elastic_net":
        payload["membership_margin"] = json_float(membership_margin(prob, sol, cfg.set_tolerance))
    write_report(cfg, payload)
    if not agree:
        raise InconsistencyError(
            "set-based estimates disagree: "
            + ", ".join(f"{name}={report.df_value:g}" for name, report in estimates.items())
        )
    logger.info("df = %g at lambda=%g", values[-1], cfg.lam)
    return 0
