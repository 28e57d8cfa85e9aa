import time
from contextlib import contextmanager

from ... import exceptions
from ...constants import ORACLE_TIGHT_REL_TOL
from ...enums import BoundSourceEnum, SenseEnum
from ...logger import logger
from ..bqp import build, convex_exact
from ..environment import ExecutionEnvironment
from ..heuristics import (BoundBundle, ablation_gap, alternating_improve,
                          gaps, oracle_vertices, round_from_relaxation,
                          sample_bounds, witness_from_parameters)
from ..lp import check_assumptions
from ..relaxation import RelaxationOptions, build_relaxation, extract_bound
from ..uncertainty import build_restricted
from .instance_loader import DEFAULT_OPTIONS
from .report import AnalysisReport

_SIDES = {SenseEnum.BEST_CASE: "minus", SenseEnum.WORST_CASE: "plus"}


@contextmanager
def _stage(report, name):
    start = time.perf_counter()
    try:
        yield
    finally:
        report.timings[name] = time.perf_counter() - start


def merge_options(instance_options, overrides=None):
    """Instance options updated by the non-None overrides."""
    options = dict(DEFAULT_OPTIONS)
    options.update(instance_options or {})
    for key, value in (overrides or {}).items():
        if key not in DEFAULT_OPTIONS:
            raise exceptions.InstanceSchemaError(
                "Unknown analysis option {}".format(key)
            )
        if value is not None:
            options[key] = value
    return options


def relaxation_options(options, use_complementarity=None):
    if use_complementarity is None:
        use_complementarity = options["complementarity"]
    return RelaxationOptions(
        use_complementarity=use_complementarity,
        rlt=options["rlt"], soc_rlt=options["soc_rlt"],
    )


def solve_relaxation(qp, relaxation):
    """Build and solve the relaxation of qp.

    Returns:
        ConicSolution

    Raises:
        NumericalFailureError: the solver returned no usable point
    """
    program = build_relaxation(qp, relaxation)
    solution = ExecutionEnvironment().conic_backend.solve(program)
    if not solution.is_usable:
        raise exceptions.NumericalFailureError(
            "Relaxation {} ended {}".format(
                program.name, solution.status.value
            ),
            solution.stage,
        )
    return solution


class _Analysis:
    def __init__(self, instance, options):
        self.instance = instance
        self.options = options
        self.lp = instance.lp
        self.uncertainty_set = instance.uncertainty_set
        self.report = AnalysisReport(instance, options)
        self.bundle = BoundBundle()
        self.report.bundle = self.bundle
        self.system = None
        self.qps = {}

    def qp(self, sense):
        if sense not in self.qps:
            self.qps[sense] = build(
                self.lp, self.uncertainty_set, sense, self.system
            )
        return self.qps[sense]

    def assumptions(self):
        with _stage(self.report, "assumptions"):
            assumptions = check_assumptions(self.lp)
        self.report.assumptions = assumptions
        self.report.nominal = assumptions.nominal_value
        if not assumptions.passed:
            logger.error("{}: {}".format(
                self.lp.name, assumptions.violated_clause
            ))
        assumptions.raise_for_violation()
        with _stage(self.report, "restricted"):
            self.system = build_restricted(self.uncertainty_set, self.lp)

    def exact(self, sense):
        """Convex-exact value of a side and its witness; False when the
        side is bilinear."""
        side = _SIDES[sense]
        report = self.report
        exact = convex_exact(
            self.lp, self.uncertainty_set, sense, self.system
        )
        if exact is None:
            return False
        source = BoundSourceEnum.CONVEX_EXACT.value
        setattr(report, "q_" + side, exact.value)
        setattr(report, "source_" + side, source)
        report.statuses[side] = source

        witness = witness_from_parameters(
            self.qp(sense), exact.theta, exact.w, source
        )
        if witness is None:
            logger.warning(
                "{} {}: no witness at the convex-exact optimum, "
                "r bound omitted".format(self.lp.name, sense.value)
            )
            return True
        self.bundle.witnesses["r_" + side] = witness
        setattr(self.bundle, "r_" + side, witness.value)
        return True

    def bound(self, sense):
        side = _SIDES[sense]
        report = self.report
        if not self.options["force_relaxation"] and self.exact(sense):
            return

        qp = self.qp(sense)
        solution = solve_relaxation(qp, relaxation_options(self.options))
        report.statuses[side] = solution.status.value
        setattr(report, "q_" + side, extract_bound(solution))
        setattr(report, "source_" + side, BoundSourceEnum.RELAXATION.value)

        witness, _ = round_from_relaxation(qp, solution)
        if witness is None:
            return
        witness = alternating_improve(
            qp, witness, self.options["improvement_rounds"]
        )
        self.bundle.witnesses["r_" + side] = witness
        setattr(self.bundle, "r_" + side, witness.value)

    def sampling(self):
        samples = self.options["samples"]
        run = sample_bounds(
            self.lp, self.uncertainty_set, T=samples,
            seed=self.options["seed"], jobs=self.options["jobs"],
            system=self.system,
        )
        self.report.sample_run = run
        self.bundle.trials = len(run.trials)
        self.bundle.v_minus, self.bundle.v_plus = run.v_minus, run.v_plus
        for key, sense in (("v_minus", SenseEnum.BEST_CASE),
                           ("v_plus", SenseEnum.WORST_CASE)):
            witness = run.witnesses.get(key)
            if witness is None:
                continue
            witness = alternating_improve(
                self.qp(sense), witness, self.options["improvement_rounds"]
            )
            self.bundle.witnesses[key] = witness
            better = min if sense == SenseEnum.BEST_CASE else max
            setattr(self.bundle, key, better(
                getattr(self.bundle, key), witness.value
            ))

    def oracle(self):
        if not self.uncertainty_set.is_polytopal:
            self.report.statuses["oracle"] = "not_polytopal"
            logger.warning("{}: oracle skipped, set is not polytopal".format(
                self.lp.name
            ))
            return
        try:
            minus, plus, exact = oracle_vertices(
                self.lp, self.uncertainty_set
            )
        except exceptions.VertexLimitExceededError as e:
            self.report.statuses["oracle"] = "vertex_limit"
            logger.warning(e.message)
            return
        self.report.oracle_minus = minus
        self.report.oracle_plus = plus
        self.report.oracle_exact = exact
        self.report.statuses["oracle"] = "exact" if exact else "partial"
        for label, relaxed, vertex in (
            ("q-", self.report.q_minus, minus),
            ("q+", self.report.q_plus, plus),
        ):
            if vertex is None or relaxed is None:
                continue
            if abs(relaxed - vertex) > ORACLE_TIGHT_REL_TOL * max(
                1.0, abs(vertex)
            ):
                logger.warning(
                    "{}: {}={} is not tight against the oracle {}".format(
                        self.lp.name, label, relaxed, vertex
                    )
                )

    def ablation(self):
        qp = self.qp(SenseEnum.WORST_CASE)
        solution = solve_relaxation(
            qp, relaxation_options(self.options, use_complementarity=False)
        )
        self.report.statuses["ablation"] = solution.status.value
        self.report.ablation_value = extract_bound(solution)
        self.report.ablation_gap = ablation_gap(
            self.report.ablation_value, self.report.q_plus
        )

    def run(self):
        report = self.report
        self.assumptions()
        for sense, side in _SIDES.items():
            with _stage(report, side):
                self.bound(sense)
        with _stage(report, "sampling"):
            self.sampling()
        report.gap_minus, report.gap_plus = gaps(
            self.bundle, report.q_minus, report.q_plus
        )
        if self.options["oracle"]:
            with _stage(report, "oracle"):
                self.oracle()
        if self.options["ablation"]:
            with _stage(report, "ablation"):
                self.ablation()

        violations = report.sandwich_violations()
        if violations:
            logger.warning("{}: sandwich violated: {}".format(
                self.lp.name, ", ".join(violations)
            ))
        logger.info("Analyzed {}".format(report))
        return report


def analyze(instance, options=None):
    """Run the full pipeline on an instance.

    Assumptions are checked first; each side then uses the exact convex
    value when the bilinear term vanishes and the conic relaxation
    otherwise. Rounding, sampling and alternating improvement supply
    the feasible bounds.

    Args:
        instance (Instance)
        options (dict): overrides of the instance options, None values
            are ignored

    Returns:
        AnalysisReport

    Raises:
        AssumptionError: naming the violated clause
    """
    options = merge_options(instance.options, options)
    logger.info("Analyzing {} with {}".format(instance.name, options))
    return _Analysis(instance, options).run()
