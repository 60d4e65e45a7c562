import logging

from ..data import DESIGN_FAMILIES, generate_dataset, read_matrix, write_dataset
from ..errors import InputError
from ..schemas import RunConfig

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("gen-data", help="write a seeded synthetic dataset")
    parser.add_argument("--family", choices=DESIGN_FAMILIES, default="gaussian")
    parser.add_argument("--n", type=int)
    parser.add_argument("--p", type=int)
    parser.add_argument("--x", help="design CSV for the custom family")
    parser.add_argument("--sparsity", type=int, default=5)
    parser.add_argument("--duplicates", type=int, default=1)
    parser.add_argument("--signal", type=float, default=1.0)
    parser.add_argument("--sigma", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", required=True, help="output directory")
    parser.set_defaults(handler=run)


def run(cfg: RunConfig) -> int:
    X = None
    if cfg.family == "custom":
        if cfg.x is None:
            raise InputError("the custom family needs --x")
        X = read_matrix(cfg.x)
    elif cfg.n is None or cfg.p is None:
        raise InputError(f"the {cfg.family} family needs --n and --p")
    data = generate_dataset(
        cfg.family,
        cfg.n or 0,
        cfg.p or 0,
        cfg.monte_carlo.seed,
        sparsity=cfg.sparsity,
        signal=cfg.signal,
        sigma=cfg.sigma,
        duplicates=cfg.duplicates,
        X=X,
    )
    write_dataset(cfg.out, data, cfg.family, cfg.monte_carlo.seed)
    return 0
