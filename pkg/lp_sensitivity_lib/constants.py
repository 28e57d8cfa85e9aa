# https://specifications.freedesktop.org/basedir-spec/basedir-spec-latest.html
# Save settings in XDG_CONFIG_HOME
# Save logs and trial logs in XDG_CACHE_HOME

import os

from xdg import BaseDirectory

from .enums import BackendEnum, SettingEnum

APP_VERSION = "0.4.0"
LOGGER_NAME = "lp_sensitivity"

ENV_DEBUG = "LP_SENSITIVITY_DEBUG"
ENV_DEBUG_CONSOLE = "LP_SENSITIVITY_DEBUG_CONSOLE"
ENV_BACKEND = "LP_SENSITIVITY_BACKEND"

# Numerical defaults
DEFAULT_FEAS_TOL = 1e-7
DEFAULT_GAP_TOL = 1e-6
DEFAULT_PSD_TOL = 1e-7
DEFAULT_SOLVER_FEAS_TOL = 1e-8
DEFAULT_SOLVER_GAP_TOL = 1e-8
DEFAULT_MAX_ITERATIONS = 200
DEFAULT_RELAXATION_SIZE_CAP = 400
DEFAULT_SAMPLES = 10000
DEFAULT_IMPROVEMENT_ROUNDS = 50
DEFAULT_CONIC_SOLVER = "CLARABEL"
# Tried in order after the configured solver when a solve fails or is
# inaccurate; solvers that are not installed are skipped.
CONIC_SOLVER_CHAIN = ("CLARABEL", "SCS", "CVXOPT")
SCS_MAX_ITERATIONS = 20000
# Reduced relaxation rows whose non-constant part falls below this
# relative size are treated as constant.
REDUCED_ROW_TOL = 1e-10

IMPROVEMENT_REL_TOL = 1e-9
SAMPLE_MAX_RETRIES = 3
SAMPLE_MAX_FAILURE_RATIO = 0.01
ORACLE_MAX_COMBINATIONS = 2 ** 20
ORACLE_VERTEX_DIGITS = 9
ORACLE_TIGHT_REL_TOL = 1e-4
CANONICAL_DIGITS = 12
DUMP_SIGNIFICANT_DIGITS = 17
# Solver-reported optimal points are accepted up to this multiple of the
# solver tolerance when residuals are recomputed.
RESIDUAL_ACCEPTANCE_FACTOR = 1e3

USER_SETTINGS_TEMPLATE = {
    SettingEnum.FEAS_TOL: DEFAULT_FEAS_TOL,
    SettingEnum.GAP_TOL: DEFAULT_GAP_TOL,
    SettingEnum.PSD_TOL: DEFAULT_PSD_TOL,
    SettingEnum.SOLVER_FEAS_TOL: DEFAULT_SOLVER_FEAS_TOL,
    SettingEnum.SOLVER_GAP_TOL: DEFAULT_SOLVER_GAP_TOL,
    SettingEnum.MAX_ITERATIONS: DEFAULT_MAX_ITERATIONS,
    SettingEnum.RELAXATION_SIZE_CAP: DEFAULT_RELAXATION_SIZE_CAP,
    SettingEnum.SAMPLES: DEFAULT_SAMPLES,
    SettingEnum.IMPROVEMENT_ROUNDS: DEFAULT_IMPROVEMENT_ROUNDS,
    SettingEnum.JOBS: 1,
    SettingEnum.BACKEND: BackendEnum.AUTO.value,
    SettingEnum.CONIC_SOLVER: DEFAULT_CONIC_SOLVER,
    SettingEnum.VERBOSE: False,
}

# Constant folders
XDG_CACHE_HOME = BaseDirectory.xdg_cache_home
XDG_CONFIG_HOME = BaseDirectory.xdg_config_home
PWD = os.path.dirname(os.path.abspath(__file__))
LP_SENSITIVITY_XDG_CACHE_HOME = os.path.join(XDG_CACHE_HOME, "lp_sensitivity")
LP_SENSITIVITY_XDG_CONFIG_HOME = os.path.join(XDG_CONFIG_HOME, "lp_sensitivity")
LP_SENSITIVITY_XDG_CACHE_HOME_LOGS = os.path.join(
    LP_SENSITIVITY_XDG_CACHE_HOME, "logs"
)
TEMPLATES = os.path.join(PWD, "templates")
INSTANCES = os.path.join(PWD, "instances")
EXPECTED_VALUES = os.path.join(INSTANCES, "expected")

# Constant filepaths
LOGFILE = os.path.join(LP_SENSITIVITY_XDG_CACHE_HOME_LOGS, "lp_sensitivity.log")
LOG_MAX_BYTES = 3 * 1024 * 1024
LOG_BACKUP_COUNT = 3
USER_SETTINGS_FILEPATH = os.path.join(
    LP_SENSITIVITY_XDG_CONFIG_HOME, "settings.json"
)

# Constant templates
REPORT_TEMPLATE = "analysis_report.j2"
COMPARISON_TEMPLATE = "comparison_table.j2"
CONIC_DUMP_TEMPLATE = "conic_dump.j2"

# Inventory data (four periods)
INVENTORY_PURCHASE_COSTS = (7, 1, 10, 6)
INVENTORY_HOLDING_COSTS = (2, 1, 1, 1)
INVENTORY_SHORTAGE_COSTS = (3, 4, 3, 3)
INVENTORY_DEMAND_INTERVALS = ((700, 900), (1300, 1600), (900, 1100), (500, 700))
INVENTORY_ORDER_BOUNDS = (1000, 1500)
INVENTORY_STOCK_CAP = 600

# Transportation network: supplier -> {customer: unit cost}
NETWORK_ARC_COSTS = {
    1: {5: 2, 7: 3, 9: 2},
    2: {1: 3, 2: 3, 3: 4, 8: 1, 9: 4},
    3: {2: 4, 3: 5, 4: 3},
    4: {1: 1, 2: 2, 4: 1, 5: 3, 6: 1, 9: 8, 10: 2},
    5: {1: 4, 4: 3, 7: 2, 8: 1, 9: 2, 10: 1},
}
# SYNTHETIC: the published supplies and demands are only shown graphically.
NETWORK_SYNTHETIC_SUPPLIES = (60, 80, 50, 70, 90)
NETWORK_SYNTHETIC_DEMANDS = (30, 25, 35, 20, 30, 25, 30, 35, 40, 30)

SYSRISK_BANKS = 5
SYSRISK_FACTORS = 3
SYSRISK_INSTANCES = 10
SYSRISK_REGENERATION_ATTEMPTS = 5
