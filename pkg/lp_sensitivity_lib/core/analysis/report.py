from collections import OrderedDict

import jinja2
from jinja2 import Environment, FileSystemLoader

from ...constants import (APP_VERSION, DUMP_SIGNIFICANT_DIGITS,
                          REPORT_TEMPLATE, TEMPLATES)
from ...enums import ReportFormatEnum
from ...logger import logger
from ..environment import ExecutionEnvironment


def format_value(value):
    """Deterministic text form of a report value."""
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "{:.{}g}".format(value, DUMP_SIGNIFICANT_DIGITS)
    return str(value)


class AnalysisReport:
    """Outcome of one analysis run.

    q_minus/q_plus are the relaxation bounds, or the exact values when
    the polynomial case applied (source "convex_exact"). Statuses map a
    stage name to the final solver status of that stage.
    """

    def __init__(self, instance, options):
        self.instance = instance
        self.options = OrderedDict(sorted(options.items()))
        self.assumptions = None
        self.nominal = None
        self.q_minus = None
        self.q_plus = None
        self.source_minus = None
        self.source_plus = None
        self.bundle = None
        self.sample_run = None
        self.gap_minus = None
        self.gap_plus = None
        self.oracle_minus = None
        self.oracle_plus = None
        self.oracle_exact = None
        self.ablation_value = None
        self.ablation_gap = None
        self.timings = OrderedDict()
        self.statuses = OrderedDict()

    @property
    def name(self):
        return self.instance.name

    def sandwich_violations(self, tol=None):
        """Orderings that fail by more than tol times the value scale."""
        if tol is None:
            tol = ExecutionEnvironment().settings.gap_tol
        bundle = self.bundle
        chain = [
            ("q_minus <= best_minus", self.q_minus,
             bundle.best_minus if bundle else None),
            ("best_minus <= best_plus",
             bundle.best_minus if bundle else None,
             bundle.best_plus if bundle else None),
            ("best_plus <= q_plus",
             bundle.best_plus if bundle else None, self.q_plus),
            ("q_minus <= oracle_minus", self.q_minus, self.oracle_minus),
            ("oracle_plus <= q_plus", self.oracle_plus, self.q_plus),
        ]
        violations = []
        for label, low, high in chain:
            if low is None or high is None:
                continue
            scale = max(1.0, abs(low), abs(high))
            if low > high + tol * scale:
                violations.append(label)
        return violations

    @property
    def sandwich_ok(self):
        return not self.sandwich_violations()

    def flat(self, include_timings=False):
        """Flat key-value view; deterministic for a fixed seed.

        Args:
            include_timings (bool): wall times are left out by default

        Returns:
            OrderedDict: key -> formatted string
        """
        lp, uset = self.instance.lp, self.instance.uncertainty_set
        bundle = self.bundle
        items = [
            ("version", APP_VERSION),
            ("instance", self.name),
            ("m", lp.m),
            ("n", lp.n),
            ("k_b", uset.k_b),
            ("k_c", uset.k_c),
        ]
        items.extend(
            ("option.{}".format(key), value)
            for key, value in self.options.items()
        )
        if self.assumptions is not None:
            report = self.assumptions
            items.extend([
                ("assumption.primal_feasible", report.primal_feasible),
                ("assumption.dual_feasible", report.dual_feasible),
                ("assumption.primal_bounded", report.primal_bounded),
                ("assumption.dual_bounded", report.dual_bounded),
            ])
        items.extend([
            ("nominal", self.nominal),
            ("q_minus", self.q_minus),
            ("q_minus.source", self.source_minus),
            ("q_plus", self.q_plus),
            ("q_plus.source", self.source_plus),
            ("r_minus", bundle.r_minus if bundle else None),
            ("r_plus", bundle.r_plus if bundle else None),
            ("v_minus", bundle.v_minus if bundle else None),
            ("v_plus", bundle.v_plus if bundle else None),
            ("best_minus", bundle.best_minus if bundle else None),
            ("best_plus", bundle.best_plus if bundle else None),
            ("gap_minus", self.gap_minus),
            ("gap_plus", self.gap_plus),
            ("trials", bundle.trials if bundle else 0),
            ("failures", self.sample_run.failures if self.sample_run else 0),
        ])
        if bundle is not None:
            items.extend(
                ("improvement.{}".format(key), value)
                for key, value in bundle.improvement_iters.items()
            )
        items.extend([
            ("oracle_minus", self.oracle_minus),
            ("oracle_plus", self.oracle_plus),
            ("oracle_exact", self.oracle_exact),
            ("ablation_value", self.ablation_value),
            ("ablation_gap", self.ablation_gap),
        ])
        items.extend(
            ("status.{}".format(stage), status)
            for stage, status in self.statuses.items()
        )
        items.append(("sandwich", self.sandwich_ok))
        if include_timings:
            items.extend(
                ("time.{}".format(stage), seconds)
                for stage, seconds in self.timings.items()
            )
        return OrderedDict(
            (key, format_value(value)) for key, value in items
        )

    def __repr__(self):
        return "AnalysisReport({}, q-={}, q+={}, gap-={}, gap+={})".format(
            self.name, self.q_minus, self.q_plus, self.gap_minus,
            self.gap_plus,
        )


def render_keyvalue(report, include_timings=False):
    return "".join(
        "{}={}\n".format(key, value)
        for key, value in report.flat(include_timings).items()
    )


def _cell(value, digits=6):
    if value is None:
        return "-"
    return "{:.{}g}".format(value, digits)


def _percent(value):
    if value is None:
        return "-"
    return "{:.1f}%".format(value)


def render_text(report):
    bundle = report.bundle
    j2 = Environment(loader=FileSystemLoader(TEMPLATES))
    j2.filters["cell"] = _cell
    j2.filters["percent"] = _percent
    template = j2.get_template(REPORT_TEMPLATE)
    try:
        return template.render({
            "report": report,
            "bundle": bundle,
            "best_minus": bundle.best_minus if bundle else None,
            "best_plus": bundle.best_plus if bundle else None,
            "violations": report.sandwich_violations(),
        })
    except jinja2.exceptions.TemplateError as e:
        logger.exception("[!] jinja2.TemplateError: {}".format(e))
        raise


def render_report(report, fmt=ReportFormatEnum.TEXT, include_timings=None):
    """Render an AnalysisReport.

    Args:
        report (AnalysisReport)
        fmt (ReportFormatEnum): text table or flat key=value lines
        include_timings (bool): keyvalue only; timings are always shown
            in text

    Returns:
        string
    """
    fmt = ReportFormatEnum(fmt)
    if fmt == ReportFormatEnum.KEYVALUE:
        return render_keyvalue(report, bool(include_timings))
    return render_text(report)
