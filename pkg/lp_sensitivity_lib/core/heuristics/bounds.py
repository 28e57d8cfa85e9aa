import csv
import os
from collections import OrderedDict, namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import sparse

from ... import exceptions
from ...constants import IMPROVEMENT_REL_TOL, SAMPLE_MAX_FAILURE_RATIO
from ...enums import ConeEnum, ConstraintFamilyEnum, SenseEnum
from ...logger import logger
from ..environment import ExecutionEnvironment
from ..lp import solve_perturbed
from ..relaxation import extract_z
from ..uncertainty import ConstraintSystem, sample_extreme

Trial = namedtuple("Trial", ["index", "theta", "value"])


class Witness:
    """Feasible point (theta, w, x, y, s) of the bilinear program and its
    reported objective value."""

    def __init__(self, theta, w, x, y, s, value, source, improvement_iters=0):
        self.theta = np.asarray(theta, dtype=float)
        self.w = np.asarray(w, dtype=float)
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)
        self.s = np.asarray(s, dtype=float)
        self.value = float(value)
        self.source = source
        self.improvement_iters = improvement_iters

    def z(self, qp):
        return qp.embed(self.theta, self.w, self.x, self.y, self.s)

    def __repr__(self):
        return "Witness({}, value={}, rounds={})".format(
            self.source, self.value, self.improvement_iters
        )


class SampleRun:
    """Outcome of the extreme-point sampling loop."""

    def __init__(self, v_minus, v_plus, witnesses, trials, failures):
        self.v_minus = v_minus
        self.v_plus = v_plus
        self.witnesses = witnesses
        self.trials = trials
        self.failures = failures

    def running_extremes(self):
        """(min, max) over every prefix of the trials in index order."""
        values = np.array([trial.value for trial in self.trials])
        if not values.size:
            return np.zeros((0, 2))
        return np.column_stack([
            np.minimum.accumulate(values), np.maximum.accumulate(values)
        ])

    def __repr__(self):
        return "SampleRun(T={}, v-={}, v+={}, failures={})".format(
            len(self.trials), self.v_minus, self.v_plus, self.failures
        )


class BoundBundle:
    """Feasible bounds on both sides.

    r_minus/r_plus come from rounding relaxation solutions and
    v_minus/v_plus from sampling; a missing bound is None.
    """

    def __init__(self, r_minus=None, r_plus=None, v_minus=None, v_plus=None,
                 witnesses=None, trials=0):
        self.r_minus = r_minus
        self.r_plus = r_plus
        self.v_minus = v_minus
        self.v_plus = v_plus
        self.witnesses = witnesses if witnesses is not None else OrderedDict()
        self.trials = trials

    @property
    def best_minus(self):
        values = [v for v in (self.r_minus, self.v_minus) if v is not None]
        return min(values) if values else None

    @property
    def best_plus(self):
        values = [v for v in (self.r_plus, self.v_plus) if v is not None]
        return max(values) if values else None

    @property
    def improvement_iters(self):
        return OrderedDict(
            (key, witness.improvement_iters)
            for key, witness in self.witnesses.items()
        )

    def __repr__(self):
        return (
            "BoundBundle(r-={}, v-={}, r+={}, v+={}, T={})"
        ).format(
            self.r_minus, self.v_minus, self.r_plus, self.v_plus, self.trials
        )


def _polish(lp, uset, theta, w, source):
    """Witness with (x, y, s) optimal for the data at theta."""
    b, c = uset.perturbation(theta)
    solution = solve_perturbed(lp, b, c)
    if not solution.is_optimal:
        return None
    return Witness(
        theta, w, solution.x, solution.y, solution.s, solution.objective,
        source,
    )


def witness_from_parameters(qp, theta, w, source):
    """Witness at a given perturbation, polished with an exact LP solve.

    Returns:
        Witness|None: None when the LP at theta has no optimum or the
            polished point is infeasible for qp
    """
    witness = _polish(qp.lp, qp.uncertainty_set, theta, w, source)
    if witness is None:
        return None
    z = witness.z(qp)
    if not qp.is_feasible(z):
        logger.warning("{} {}: {} witness rejected ({})".format(
            qp.lp.name, qp.sense.value, source, qp.residuals(z)
        ))
        return None
    return witness


def _repair(qp, z):
    """Nearest point of the joint system to the block values of z."""
    system = qp.system
    builder, blocks = system.populate(
        "{}_{}_repair".format(qp.lp.name, qp.sense.value)
    )
    width = builder.n_columns
    target = np.concatenate([
        z[qp.index(block)] for block in
        ("theta_b", "theta_c", "w", "x", "y", "s")
    ])
    radius = builder.add_block("r", ConeEnum.NONNEGATIVE, 1)
    head = np.zeros((1, builder.n_columns))
    head[0, radius.offset] = 1.0
    tail = sparse.hstack([
        sparse.identity(width), sparse.csr_matrix((width, 1))
    ]).tocsr()
    builder.add_soc(head, 0.0, tail, -target, ConstraintFamilyEnum.ELASTIC)
    builder.set_objective([1.0], col_offset=radius.offset)
    solution = ExecutionEnvironment().conic_backend.solve(builder.build())
    if not solution.is_usable:
        return None
    return dict(
        (block, np.asarray(solution.value(block), dtype=float))
        for block in blocks
    )


def round_from_relaxation(qp, relaxation_solution):
    """Feasible bound from the z part of a relaxation solution.

    The z part is used as is when it is feasible for qp, otherwise it is
    replaced by its nearest point in the joint system. The resulting
    theta is then polished with an exact LP solve.

    Args:
        qp (GeneralQp)
        relaxation_solution (ConicSolution)

    Returns:
        tuple: (Witness, float), or (None, None) when no feasible point
            could be recovered
    """
    z = extract_z(relaxation_solution)
    t = z[qp.index("t")[0]]
    if abs(t) > 0.0:
        z = z / t

    source = "relaxation"
    if qp.is_feasible(z):
        parts = qp.split(z)
    else:
        logger.warning("{} {}: rounded point infeasible ({}), repairing".format(
            qp.lp.name, qp.sense.value, qp.residuals(z)
        ))
        parts = _repair(qp, z)
        source = "relaxation_repaired"
        if parts is None:
            logger.warning("{} {}: repair failed, bound omitted".format(
                qp.lp.name, qp.sense.value
            ))
            return None, None

    theta = np.concatenate([parts["theta_b"], parts["theta_c"]])
    witness = witness_from_parameters(qp, theta, parts["w"], source)
    if witness is None:
        logger.warning("{} {}: rounded witness rejected, bound omitted".format(
            qp.lp.name, qp.sense.value
        ))
        return None, None
    return witness, witness.value


def _sample_trial(system, seed, index):
    lp = system.lp
    theta, b, c = sample_extreme(system, [seed, index])
    solution = solve_perturbed(lp, b, c)
    if not solution.is_optimal:
        raise exceptions.NumericalFailureError(
            "Trial {} ended {}".format(index, solution.status.value),
            "sampling",
        )
    return Trial(index, theta, solution.objective)


def sample_bounds(lp, uncertainty_set, T=None, seed=0, jobs=None,
                  system=None):
    """Extreme-point sampling of the restricted set.

    Each trial minimizes a random direction over the restricted set and
    evaluates p at the minimizer. Trial k draws from the substream
    [seed, k], so results do not depend on the number of workers.

    Args:
        lp (LinearProgram)
        uncertainty_set (UncertaintySet)
        T (int): trial count, the samples setting by default
        seed (int)
        jobs (int): worker threads, the jobs setting by default
        system (ConstraintSystem): reused when given

    Returns:
        SampleRun

    Raises:
        SamplingAbortedError: more than 1% of the trials failed
    """
    settings = ExecutionEnvironment().settings
    T = int(T if T is not None else settings.samples)
    jobs = int(jobs if jobs is not None else settings.jobs)
    system = system or ConstraintSystem(lp, uncertainty_set)
    uset = system.uncertainty_set

    def run(index):
        try:
            return _sample_trial(system, seed, index)
        except exceptions.NumericalFailureError as e:
            logger.warning("Skipping trial {}: {}".format(index, e.message))
            return None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(run, range(T)))
    else:
        results = [run(index) for index in range(T)]

    trials = [trial for trial in results if trial is not None]
    failures = T - len(trials)
    if failures > SAMPLE_MAX_FAILURE_RATIO * T:
        raise exceptions.SamplingAbortedError(
            "{} of {} sampling trials failed on {}".format(
                failures, T, lp.name
            ),
            failures,
        )
    if not trials:
        return SampleRun(None, None, OrderedDict(), trials, failures)

    lowest = min(trials, key=lambda trial: (trial.value, trial.index))
    highest = max(trials, key=lambda trial: (trial.value, -trial.index))
    witnesses = OrderedDict()
    for key, trial in (("v_minus", lowest), ("v_plus", highest)):
        u = uset.lift(trial.theta)
        witness = _polish(lp, uset, trial.theta, u[uset.k:], "sampling")
        if witness is not None:
            witnesses[key] = witness

    run_result = SampleRun(
        lowest.value, highest.value, witnesses, trials, failures
    )
    logger.info("Sampled {}: {}".format(lp.name, run_result))
    return run_result


def write_trial_log(path, trials):
    """CSV with one row per trial: index, theta entries, p."""
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        os.makedirs(directory)
    width = max([len(trial.theta) for trial in trials] + [0])
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["trial"] + ["theta_{}".format(i) for i in range(width)] + ["p"]
        )
        for trial in sorted(trials, key=lambda trial: trial.index):
            writer.writerow(
                [trial.index]
                + [repr(float(v)) for v in trial.theta]
                + [repr(float(trial.value))]
            )
    logger.info("Wrote {} trials to {}".format(len(trials), path))


def _improvement_step(qp, witness):
    """Fix x (best case) or y (worst case), move theta, then re-solve."""
    lp, uset = qp.lp, qp.uncertainty_set
    if qp.sense == SenseEnum.BEST_CASE:
        objective = {"theta_c": uset.map_c.T.dot(witness.x)}
        fixed = {"x": witness.x}
    else:
        objective = {"theta_b": -uset.map_b.T.dot(witness.y)}
        fixed = {"y": witness.y}
    solution = qp.system.solve(
        objective=objective, fixed=fixed,
        name="{}_{}_improve".format(lp.name, qp.sense.value),
    )
    if not solution.is_usable:
        raise exceptions.NumericalFailureError(
            "Improvement step ended {}".format(solution.status.value),
            solution.stage,
        )
    point = qp.system.point(solution)
    theta = np.concatenate([point["theta_b"], point["theta_c"]])
    polished = _polish(lp, uset, theta, point["w"], witness.source)
    if polished is None:
        raise exceptions.NumericalFailureError(
            "Improvement polish failed", "polish"
        )
    return polished


def alternating_improve(qp, witness, max_rounds=None):
    """Alternate between the LP block and the perturbation block.

    Best case: theta_c is moved with x fixed, then x is re-optimized
    with theta fixed. Worst case: the same with theta_b and y. The
    objective never gets worse; a failed step keeps the best witness.

    Args:
        qp (GeneralQp)
        witness (Witness): feasible starting point
        max_rounds (int): the improvement_rounds setting by default

    Returns:
        Witness
    """
    if max_rounds is None:
        max_rounds = ExecutionEnvironment().settings.improvement_rounds
    sign = qp.sign
    best = witness
    rounds = 0
    while rounds < max_rounds:
        rounds += 1
        try:
            candidate = _improvement_step(qp, best)
        except exceptions.NumericalFailureError as e:
            logger.warning("Improvement stopped after {} rounds: {}".format(
                rounds - 1, e.message
            ))
            break
        gain = sign * (best.value - candidate.value)
        if gain > 0.0:
            best = candidate
        if gain < IMPROVEMENT_REL_TOL * max(1.0, abs(best.value)):
            break
    best.improvement_iters = rounds
    logger.info("{} {}: improved {} -> {} in {} rounds".format(
        qp.lp.name, qp.sense.value, witness.value, best.value, rounds
    ))
    return best


def _relative_gap(difference, reference):
    if difference is None or reference is None:
        return None
    return difference / max(abs(reference), 1.0) * 100.0


def gaps(bundle, q_sdp_minus, q_sdp_plus):
    """Relative gaps in percent between relaxation and feasible bounds.

    gap- = (best- - q-) / max(|best-|, 1), gap+ = (q+ - best+) / max(|best+|, 1)

    Returns:
        tuple: (gap_minus, gap_plus), None where a value is missing
    """
    best_minus, best_plus = bundle.best_minus, bundle.best_plus
    gap_minus = gap_plus = None
    if best_minus is not None and q_sdp_minus is not None:
        gap_minus = _relative_gap(best_minus - q_sdp_minus, best_minus)
    if best_plus is not None and q_sdp_plus is not None:
        gap_plus = _relative_gap(q_sdp_plus - best_plus, best_plus)
    return gap_minus, gap_plus


def ablation_gap(value_without, q_sdp_plus):
    """Percent by which dropping the complementarity rows loosens q+."""
    if value_without is None or q_sdp_plus is None:
        return None
    return _relative_gap(value_without - q_sdp_plus, q_sdp_plus)
