import json
from collections import OrderedDict

import numpy as np
import pytest

from lp_sensitivity_lib import exceptions
from lp_sensitivity_lib.core.analysis import (CorpusResult, Expectation,
                                              analyze, build_instance,
                                              bundled_instances, compare,
                                              corpus_names, inventory_instance,
                                              load_instance, merge_options,
                                              network_instance,
                                              render_comparison, render_report,
                                              reproduce,
                                              systemic_risk_instance)
from lp_sensitivity_lib.core.analysis.corpus import (load_expectations,
                                                     parse_value)
from lp_sensitivity_lib.core.analysis.report import format_value
from lp_sensitivity_lib.core.bqp import build
from lp_sensitivity_lib.enums import (ExpectationSeverityEnum, ReportFormatEnum,
                                      SenseEnum)

UNKNOWN_ROW_DOCUMENT = """{
  "name": "broken",
  "variables": [{"name": "x1", "lower": 0}],
  "rows": [{"name": "R1", "coefficients": {"x1": 1}, "sense": "=", "rhs": 1}],
  "objective": {"coefficients": {"x1": 1}},
  "uncertainty": [
    {"type": "box", "rows": {"R99": [-1, 1]}}
  ]
}
"""


class _FakeReport:
    def __init__(self, values):
        self.values = values

    def flat(self):
        return OrderedDict(
            (key, format_value(value)) for key, value in self.values.items()
        )


def test_bundled_instances():
    names = bundled_instances()
    for name in ("example_2_1", "example_2_2", "smoke", "wendell_1",
                 "wendell_2", "wendell_3", "inventory_T4"):
        assert name in names


def test_load_wendell(wendell_1):
    general_lp, uset, options = wendell_1
    assert (wendell_1.lp.m, wendell_1.lp.n) == (2, 6)
    assert (uset.k_b, uset.k_c) == (0, 1)
    assert general_lp.row_names == ["R1", "R2"]
    assert options["oracle"] is True
    assert options["samples"] == 1000


def test_load_inventory_intervals():
    instance = load_instance("inventory_T4")
    assert instance.general_lp.row_names[:3] == [
        "balance1", "holding1", "shortage1"
    ]
    assert instance.uncertainty_set.k_b == 4
    np.testing.assert_array_almost_equal(
        instance.uncertainty_set.parameter_ranges,
        [[-100, 100], [-150, 150], [-100, 100], [-100, 100]],
    )


def test_unknown_target_names_the_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text(UNKNOWN_ROW_DOCUMENT)
    with pytest.raises(exceptions.UnknownTargetError) as e:
        load_instance(str(path))
    assert "R99" in e.value.message
    assert e.value.additional_context["line"] == 7
    assert e.value.additional_context["token"] == "R99"


def test_missing_section():
    with pytest.raises(exceptions.InstanceSchemaError) as e:
        build_instance({"variables": [], "rows": [], "objective": {}})
    assert "uncertainty" in e.value.message


def test_unknown_option():
    document = json.loads(UNKNOWN_ROW_DOCUMENT)
    document["uncertainty"] = [{"type": "box", "rows": {"R1": [-1, 1]}}]
    document["options"] = {"samplez": 10}
    with pytest.raises(exceptions.InstanceSchemaError):
        build_instance(document)


def test_invalid_json_reports_the_line(tmp_path):
    path = tmp_path / "invalid.json"
    path.write_text('{\n  "name": "x",\n  "rows": [,]\n}\n')
    with pytest.raises(exceptions.InstanceSchemaError) as e:
        load_instance(str(path))
    assert e.value.additional_context["line"] == 3


def test_missing_instance():
    with pytest.raises(exceptions.InstanceSchemaError):
        load_instance("no_such_instance")


def test_merge_options():
    options = merge_options({"samples": 20}, {"seed": 3, "oracle": None})
    assert options["samples"] == 20
    assert options["seed"] == 3
    assert options["oracle"] is False
    with pytest.raises(exceptions.InstanceSchemaError):
        merge_options({}, {"sample": 1})


@pytest.mark.parametrize("value, text", [
    (None, "none"),
    (True, "true"),
    (False, "false"),
    (3, "3"),
    (1.2, "1.2"),
    (-16000.0, "-16000"),
    ("convex_exact", "convex_exact"),
])
def test_format_value(value, text):
    assert format_value(value) == text


def test_parse_value_inverts_format():
    assert parse_value("none") is None
    assert parse_value("true") is True
    assert parse_value("1.2") == 1.2
    assert parse_value("relaxation") == "relaxation"


def test_smoke_collapses_to_nominal(smoke):
    report = analyze(smoke)
    flat = report.flat()
    for key in ("nominal", "q_minus", "q_plus", "r_minus", "r_plus",
                "v_minus", "v_plus"):
        assert float(flat[key]) == pytest.approx(1.2, abs=1e-7), key
    assert flat["q_minus.source"] == "convex_exact"
    assert flat["q_plus.source"] == "convex_exact"
    assert flat["trials"] == "20"
    assert flat["sandwich"] == "true"
    assert report.sandwich_ok


def test_report_is_deterministic(smoke):
    first = render_report(analyze(smoke), ReportFormatEnum.KEYVALUE)
    second = render_report(analyze(smoke), "keyvalue")
    assert first == second
    assert "time." not in first
    assert "time.sampling=" in render_report(
        analyze(smoke), ReportFormatEnum.KEYVALUE, include_timings=True
    )


def test_text_report(smoke):
    text = render_report(analyze(smoke))
    assert "smoke" in text
    assert "Sandwich: ok" in text


def test_wendell_objective_interval(wendell_1):
    report = analyze(wendell_1, {"samples": 50})
    assert report.q_minus == pytest.approx(-24000.0, abs=2.4)
    assert report.q_plus == pytest.approx(-16000.0, abs=1.6)
    assert report.source_plus == "convex_exact"
    assert report.source_minus == "relaxation"
    assert report.oracle_minus == pytest.approx(-24000.0, abs=1e-3)
    assert report.oracle_exact is True
    assert report.sandwich_ok


def test_convex_exact_bounds_carry_witnesses(smoke):
    report = analyze(smoke)
    for side, sense in (("minus", SenseEnum.BEST_CASE),
                        ("plus", SenseEnum.WORST_CASE)):
        witness = report.bundle.witnesses["r_" + side]
        assert witness.source == "convex_exact"
        qp = build(smoke.lp, smoke.uncertainty_set, sense)
        assert qp.is_feasible(witness.z(qp))
        assert witness.value == pytest.approx(getattr(report, "q_" + side))


def test_wendell_worst_case_witness(wendell_1):
    report = analyze(wendell_1, {"samples": 20})
    witness = report.bundle.witnesses["r_plus"]
    assert witness.source == "convex_exact"
    assert report.bundle.r_plus == pytest.approx(-16000.0, abs=1.6)
    qp = build(wendell_1.lp, wendell_1.uncertainty_set, SenseEnum.WORST_CASE)
    assert qp.residuals(witness.z(qp)).worst <= 1e-6 * 16000.0


def test_interval_example_with_oracle(example_2_1):
    report = analyze(example_2_1, {"samples": 100})
    assert report.oracle_minus == pytest.approx(0.5)
    assert report.oracle_plus == pytest.approx(3.0)
    assert report.q_minus <= 0.5 + 1e-6
    assert report.q_plus >= 3.0 - 1e-6
    assert report.bundle.v_minus == pytest.approx(0.5)
    assert report.bundle.v_plus == pytest.approx(3.0)
    assert report.gap_minus >= -1e-4
    assert report.gap_plus >= -1e-4
    assert report.sandwich_ok


def test_ablation_loosens_the_upper_bound(example_2_1):
    report = analyze(example_2_1, {"samples": 20, "ablation": True})
    assert report.ablation_value >= report.q_plus - 1e-4
    assert report.ablation_gap >= -1e-4


def test_inventory_generator_matches_bundled_file():
    generated = inventory_instance(4)
    bundled = load_instance("inventory_T4")
    assert generated.general_lp.row_names == bundled.general_lp.row_names
    np.testing.assert_array_almost_equal(generated.lp.b_hat, bundled.lp.b_hat)
    np.testing.assert_array_almost_equal(
        generated.uncertainty_set.parameter_ranges,
        bundled.uncertainty_set.parameter_ranges,
    )


def test_inventory_horizon_is_limited():
    with pytest.raises(ValueError):
        inventory_instance(9)


def test_network_families():
    poly = network_instance("POLY", 0.01)
    assert poly.uncertainty_set.is_polytopal
    assert poly.uncertainty_set.k_b == 15
    assert "SYNTHETIC" in poly.description
    assert not network_instance("SOC", 0.01).uncertainty_set.is_polytopal
    assert not network_instance("mix", 0.05).uncertainty_set.is_polytopal
    with pytest.raises(ValueError):
        network_instance("TREE")


def test_systemic_risk_instance_is_seeded():
    first = systemic_risk_instance(7)
    second = systemic_risk_instance(7)
    assert first.uncertainty_set.k_b == 3
    assert first.uncertainty_set.k_c == 0
    assert not first.uncertainty_set.is_polytopal
    np.testing.assert_array_equal(first.lp.A, second.lp.A)
    np.testing.assert_array_equal(first.lp.b_hat, second.lp.b_hat)


def test_compare_checks_values_and_references():
    reports = OrderedDict([
        ("a", _FakeReport({"nominal": 2.0, "q_minus": 2.0, "q_plus": 3.5})),
        ("b", _FakeReport({"nominal": 1.0, "q_minus": 0.5, "q_plus": 1.0})),
    ])
    expectations = [
        Expectation("a", "q_plus", "at_least", 3.0),
        Expectation("*", "q_minus", "value", reference="nominal",
                    abs_tol=1e-9),
        Expectation("b", "q_plus", "value", 7.0, severity="record"),
        Expectation("*", "q_plus", "quorum", 2.0, count=1),
    ]
    checks = compare(expectations, reports)
    outcomes = [(check.instance, check.key, check.outcome) for check in checks]
    assert outcomes == [
        ("a", "q_plus", "pass"),
        ("a", "q_minus", "pass"),
        ("b", "q_minus", "fail"),
        ("b", "q_plus", "record"),
        ("*", "q_plus", "pass"),
    ]

    result = CorpusResult("fake", 0, reports, checks, OrderedDict())
    assert not result.passed
    assert result.exit_code == 1
    lines = result.keyvalue().splitlines()
    assert lines[0] == "corpus=fake"
    assert "check.b.q_minus=fail" in lines
    assert lines[-1] == "passed=false"


def test_unknown_corpus():
    with pytest.raises(exceptions.UnknownCorpusError):
        reproduce("nope")


def test_corpus_names():
    assert corpus_names() == [
        "examples", "wendell", "inventory", "inventory_small", "sysrisk",
        "network", "smoke",
    ]


def test_reproduce_smoke():
    result = reproduce("smoke")
    assert result.passed
    assert result.exit_code == 0
    assert list(result.reports) == ["smoke"]
    assert "passed=true" in result.keyvalue()
    assert "smoke" in render_comparison(result)


@pytest.mark.slow
def test_reproduce_examples():
    result = reproduce("examples", samples=100)
    assert not result.failures
    assert result.passed, result.keyvalue()


@pytest.mark.slow
def test_reproduce_wendell():
    result = reproduce("wendell", samples=200, jobs=3)
    assert not result.failures
    assert result.passed, result.keyvalue()


@pytest.mark.parametrize("seed", range(20))
def test_random_instances_keep_the_sandwich(random_document, seed):
    instance = build_instance(random_document(seed))
    report = analyze(instance, {
        "samples": 10, "seed": seed, "improvement_rounds": 3,
    })
    bundle = report.bundle
    assert report.source_minus == report.source_plus == "relaxation"
    assert bundle.best_minus is not None and bundle.best_plus is not None

    scale = max(1.0, abs(report.q_minus), abs(report.q_plus))
    tol = 1e-5 * scale
    assert report.q_minus <= bundle.best_minus + tol
    assert bundle.best_minus <= bundle.best_plus + tol
    assert bundle.best_plus <= report.q_plus + tol
    for key in ("r_minus", "r_plus"):
        witness = bundle.witnesses.get(key)
        if witness is not None:
            assert getattr(bundle, key) == witness.value
    assert report.sandwich_violations(tol=1e-5) == []


@pytest.mark.parametrize("corpus, instance, key, value", [
    ("examples", "example_2_1", "q_minus", 0.5),
    ("examples", "example_2_1", "q_plus", 3.0),
    ("examples", "example_2_2", "q_plus", 3.0),
    ("wendell", "wendell_1", "ablation_value", -16000.0),
    ("wendell", "wendell_2", "ablation_value", -18667.0),
    ("wendell", "wendell_3", "ablation_value", -16000.0),
    ("inventory", "inventory_T4", "ablation_value", 453298.0),
])
def test_headline_values_are_asserted(corpus, instance, key, value):
    expectations, _ = load_expectations(corpus)
    asserted = [
        e for e in expectations
        if e.instance == instance and e.key == key and e.kind.value == "value"
        and e.severity == ExpectationSeverityEnum.ASSERT
    ]
    assert [e.value for e in asserted] == [value]


def test_wendell_ablation_equals_the_convex_upper_bound(wendell_1):
    report = analyze(wendell_1, {"samples": 20, "ablation": True})
    assert report.ablation_value == pytest.approx(report.q_plus, abs=1.6)
    assert report.ablation_gap == pytest.approx(0.0, abs=0.05)


@pytest.mark.slow
def test_reproduce_inventory():
    result = reproduce("inventory", samples=100)
    assert not result.failures
    assert result.passed, result.keyvalue()
