import json
import math
import os
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

import jinja2
from jinja2 import Environment, FileSystemLoader

from ... import exceptions
from ...constants import (COMPARISON_TEMPLATE, EXPECTED_VALUES,
                          SYSRISK_INSTANCES, SYSRISK_REGENERATION_ATTEMPTS,
                          TEMPLATES)
from ...enums import ExpectationKindEnum, ExpectationSeverityEnum
from ...logger import logger
from .generators import (NETWORK_FAMILIES, inventory_instance,
                         network_instance, systemic_risk_instance)
from .instance_loader import load_instance
from .pipeline import analyze

WILDCARD = "*"
NETWORK_GAMMAS = (0.01, 0.03, 0.05)


def _bundled(name):
    return lambda seed: load_instance(name)


def _sysrisk(index):
    return lambda seed: systemic_risk_instance(seed * 100 + index)


def _network(family, gamma):
    return lambda seed: network_instance(family, gamma)


CORPORA = OrderedDict([
    ("examples", OrderedDict([
        ("example_2_1", _bundled("example_2_1")),
        ("example_2_2", _bundled("example_2_2")),
    ])),
    ("wendell", OrderedDict([
        ("wendell_{}".format(i), _bundled("wendell_{}".format(i)))
        for i in (1, 2, 3)
    ])),
    ("inventory", OrderedDict([
        ("inventory_T4", lambda seed: inventory_instance(4)),
    ])),
    ("inventory_small", OrderedDict([
        ("inventory_T2", lambda seed: inventory_instance(2)),
    ])),
    ("sysrisk", OrderedDict([
        ("sysrisk_{}".format(i), _sysrisk(i))
        for i in range(1, SYSRISK_INSTANCES + 1)
    ])),
    ("network", OrderedDict([
        ("network_{}_{}".format(family, gamma), _network(family, gamma))
        for family in NETWORK_FAMILIES for gamma in NETWORK_GAMMAS
    ])),
    ("smoke", OrderedDict([
        ("smoke", _bundled("smoke")),
    ])),
])


class Expectation:
    """One stored expectation on a report key.

    kind value: |actual - expected| <= max(abs_tol, rel_tol |expected|);
    at_most / at_least: one-sided with abs_tol slack; quorum: at least
    `count` instances satisfy actual <= expected + abs_tol. The expected
    value may be another key of the same report (`reference`).
    """

    def __init__(self, instance, key, kind, value=None, abs_tol=0.0,
                 rel_tol=0.0, severity="assert", note="", reference=None,
                 count=None):
        self.instance = instance
        self.key = key
        self.kind = ExpectationKindEnum(kind)
        self.value = value
        self.abs_tol = float(abs_tol)
        self.rel_tol = float(rel_tol)
        self.severity = ExpectationSeverityEnum(severity)
        self.note = note
        self.reference = reference
        self.count = count

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def applies_to(self, instance):
        return self.instance in (WILDCARD, instance)

    def expected(self, flat):
        if self.reference is not None:
            return parse_value(flat.get(self.reference))
        return self.value

    def holds(self, actual, expected):
        if isinstance(expected, (bool, str)) or expected is None:
            return actual == expected
        if not isinstance(actual, float) or math.isnan(actual):
            return False
        if self.kind == ExpectationKindEnum.AT_MOST:
            return actual <= expected + self.abs_tol
        if self.kind == ExpectationKindEnum.AT_LEAST:
            return actual >= expected - self.abs_tol
        if self.kind == ExpectationKindEnum.QUORUM:
            return actual <= expected + self.abs_tol
        return abs(actual - expected) <= max(
            self.abs_tol, self.rel_tol * abs(expected)
        )

    def __repr__(self):
        return "Expectation({}, {}, {}, {})".format(
            self.instance, self.key, self.kind.value, self.value
        )


class Check:
    def __init__(self, instance, expectation, expected, actual, passed):
        self.instance = instance
        self.expectation = expectation
        self.expected = expected
        self.actual = actual
        self.passed = passed

    @property
    def key(self):
        return self.expectation.key

    @property
    def outcome(self):
        if self.expectation.severity == ExpectationSeverityEnum.RECORD:
            return "record"
        return "pass" if self.passed else "fail"

    @property
    def failed(self):
        return self.outcome == "fail"


class CorpusResult:
    def __init__(self, corpus, seed, reports, checks, failures):
        self.corpus = corpus
        self.seed = seed
        self.reports = reports
        self.checks = checks
        self.failures = failures

    @property
    def passed(self):
        return not self.failures and not any(
            check.failed for check in self.checks
        )

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def keyvalue(self):
        lines = [
            "corpus={}".format(self.corpus),
            "seed={}".format(self.seed),
        ]
        for check in self.checks:
            lines.append("check.{}.{}={}".format(
                check.instance, check.key, check.outcome
            ))
        for name, message in self.failures.items():
            lines.append("error.{}={}".format(name, message))
        lines.append("passed={}".format("true" if self.passed else "false"))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "CorpusResult({}, checks={}, passed={})".format(
            self.corpus, len(self.checks), self.passed
        )


def parse_value(text):
    """Inverse of report.format_value for comparisons."""
    if text is None or text == "none":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return float(text)
    except ValueError:
        return text


def corpus_names():
    return list(CORPORA)


def load_expectations(corpus):
    """Stored expectations and run settings of a corpus.

    Returns:
        tuple: (list of Expectation, dict of option overrides)
    """
    path = os.path.join(EXPECTED_VALUES, "{}.json".format(corpus))
    with open(path) as f:
        data = json.load(f)
    expectations = [
        Expectation.from_dict(entry) for entry in data.get("entries", [])
    ]
    return expectations, data.get("options", {})


def _analyze_entry(corpus, name, factory, seed, options):
    attempts = SYSRISK_REGENERATION_ATTEMPTS if corpus == "sysrisk" else 1
    last_error = None
    for attempt in range(attempts):
        try:
            instance = factory(seed + 1000 * attempt)
            instance.name = name
            return analyze(instance, options)
        except (exceptions.NumericalFailureError,
                exceptions.AssumptionError) as e:
            last_error = e
            if attempt + 1 < attempts:
                logger.warning(
                    "{}: {}; regenerating with the next seed".format(
                        name, e.message
                    )
                )
    raise last_error


def compare(expectations, reports):
    """Checks of every expectation against the reports."""
    flats = OrderedDict(
        (name, report.flat()) for name, report in reports.items()
    )
    checks = []
    for expectation in expectations:
        targets = [
            name for name in flats if expectation.applies_to(name)
        ]
        if expectation.kind == ExpectationKindEnum.QUORUM:
            hits = 0
            for name in targets:
                if expectation.holds(
                    parse_value(flats[name].get(expectation.key)),
                    expectation.expected(flats[name]),
                ):
                    hits += 1
            needed = expectation.count or len(targets)
            checks.append(Check(
                expectation.instance, expectation,
                "{} of {} <= {}".format(needed, len(targets),
                                        expectation.value),
                "{} of {}".format(hits, len(targets)), hits >= needed,
            ))
            continue
        for name in targets:
            expected = expectation.expected(flats[name])
            actual = parse_value(flats[name].get(expectation.key))
            checks.append(Check(
                name, expectation, expected, actual,
                expectation.holds(actual, expected),
            ))
    for check in checks:
        if check.failed:
            logger.warning("{} {}: expected {} got {}".format(
                check.instance, check.key, check.expected, check.actual
            ))
    return checks


def reproduce(corpus, seed=0, jobs=None, samples=None):
    """Run a named corpus and compare against its stored expectations.

    Args:
        corpus (string): one of corpus_names()
        seed (int)
        jobs (int): corpus entries analyzed in parallel
        samples (int): overrides the stored trial count

    Returns:
        CorpusResult

    Raises:
        UnknownCorpusError
    """
    if corpus not in CORPORA:
        raise exceptions.UnknownCorpusError(
            "Unknown corpus {}; available: {}".format(
                corpus, ", ".join(CORPORA)
            ),
            corpus,
        )
    expectations, options = load_expectations(corpus)
    options = dict(options)
    options["seed"] = seed
    if samples is not None:
        options["samples"] = samples
    jobs = int(jobs or 1)
    if jobs > 1:
        options["jobs"] = 1

    entries = list(CORPORA[corpus].items())
    failures = OrderedDict()

    def run(entry):
        name, factory = entry
        try:
            return name, _analyze_entry(corpus, name, factory, seed, options)
        except exceptions.LPSensitivityException as e:
            logger.exception("{} failed: {}".format(name, e.message))
            failures[name] = e.message
            return name, None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(run, entries))
    else:
        results = [run(entry) for entry in entries]

    reports = OrderedDict(
        (name, report) for name, report in results if report is not None
    )
    result = CorpusResult(
        corpus, seed, reports, compare(expectations, reports), failures
    )
    logger.info("Reproduced {}".format(result))
    return result


def _show(value):
    if isinstance(value, float):
        return "{:.6g}".format(value)
    if value is None:
        return "-"
    return str(value)


def render_comparison(result):
    """Human-readable pass/fail table of a CorpusResult."""
    j2 = Environment(loader=FileSystemLoader(TEMPLATES))
    j2.filters["show"] = _show
    template = j2.get_template(COMPARISON_TEMPLATE)
    try:
        return template.render({"result": result})
    except jinja2.exceptions.TemplateError as e:
        logger.exception("[!] jinja2.TemplateError: {}".format(e))
        raise
