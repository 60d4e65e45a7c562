from .arrays import Matrix, Vector, as_matrix, as_vector
from .problems import (
    ElasticNetProblem,
    GaussianModel,
    GenLassoProblem,
    GraphEdges,
    LassoProblem,
    McConfig,
    SolverOptions,
)
from .results import (
    DfReport,
    DualSolution,
    McDfEstimate,
    MembershipVerdict,
    ProbeReport,
    SignedIndexSet,
    Solution,
    SurePath,
    ValidationSummary,
)
from .run import RunConfig
from .tolerances import RankTolerance, SetTolerance
