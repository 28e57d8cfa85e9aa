from enum import Enum


class LpStatusEnum(Enum):
    OPTIMAL = "optimal"
    PRIMAL_INFEASIBLE = "primal_infeasible"
    DUAL_INFEASIBLE = "dual_infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


class ConicStatusEnum(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    INACCURATE = "inaccurate"
    FAILED = "failed"


class ConeEnum(Enum):
    ZERO = "zero"
    FREE = "free"
    NONNEGATIVE = "nonnegative"
    SECOND_ORDER = "second_order"
    PSD = "psd"


class RowSenseEnum(Enum):
    LESS_EQUAL = "<="
    EQUAL = "="
    GREATER_EQUAL = ">="


class SenseEnum(Enum):
    BEST_CASE = "best"
    WORST_CASE = "worst"


class NormEnum(Enum):
    ONE = "one"
    TWO = "two"


class PerturbationTargetEnum(Enum):
    RHS = "b"
    OBJECTIVE = "c"


class ConversionStepEnum(Enum):
    SLACK = "slack"
    SPLIT = "split"
    LOWER_BOUND_ROW = "lower_bound_row"
    UPPER_BOUND_ROW = "upper_bound_row"


class ConstraintFamilyEnum(Enum):
    BASE_EQUALITY = "base_equality"
    DIAG_EZE = "diag_eze"
    RLT = "rlt"
    SOC_RLT = "soc_rlt"
    COMPLEMENTARITY = "complementarity"
    CONE_MEMBERSHIP = "cone_membership"
    MOMENT_ANCHOR = "moment_anchor"
    RESTRICTED_SET = "restricted_set"
    FIXED_BLOCK = "fixed_block"
    ELASTIC = "elastic"


class BoundSourceEnum(Enum):
    RELAXATION = "relaxation"
    CONVEX_EXACT = "convex_exact"


class ExpectationKindEnum(Enum):
    VALUE = "value"
    AT_MOST = "at_most"
    AT_LEAST = "at_least"
    QUORUM = "quorum"


class ExpectationSeverityEnum(Enum):
    ASSERT = "assert"
    RECORD = "record"


class ReportFormatEnum(Enum):
    TEXT = "text"
    KEYVALUE = "keyvalue"


class SettingEnum(Enum):
    FEAS_TOL = "feas_tol"
    GAP_TOL = "gap_tol"
    PSD_TOL = "psd_tol"
    SOLVER_FEAS_TOL = "solver_feas_tol"
    SOLVER_GAP_TOL = "solver_gap_tol"
    MAX_ITERATIONS = "max_iterations"
    RELAXATION_SIZE_CAP = "relaxation_size_cap"
    SAMPLES = "samples"
    IMPROVEMENT_ROUNDS = "improvement_rounds"
    JOBS = "jobs"
    BACKEND = "backend"
    CONIC_SOLVER = "conic_solver"
    VERBOSE = "verbose"


class BackendEnum(Enum):
    AUTO = "auto"
    HIGHS = "highs"
    CVXPY = "cvxpy"
