import json
import os

import numpy as np

from ... import exceptions
from ...constants import INSTANCES
from ...enums import NormEnum, PerturbationTargetEnum, RowSenseEnum
from ...logger import logger
from ..lp import GeneralFormLp, LpRow, LpVariable, standardize
from ..uncertainty import (SocBlock, UncertaintySet, box, intersect,
                           norm_ball, simplex_100pct)

REQUIRED_SECTIONS = ("variables", "rows", "objective", "uncertainty")
BLOCK_TYPES = (
    "box", "simplex", "ball_l1", "ball_l2", "affine_map", "rows",
)
DEFAULT_OPTIONS = {
    "samples": None,
    "seed": 0,
    "oracle": False,
    "complementarity": True,
    "rlt": True,
    "soc_rlt": True,
    "force_relaxation": False,
    "ablation": False,
    "improvement_rounds": None,
    "jobs": None,
}
_NORMS = {"l1": NormEnum.ONE, "l2": NormEnum.TWO}


class Instance:
    """A loaded instance: general-form LP, its standard form, the
    uncertainty set over the standard-form data and analysis options."""

    def __init__(self, name, general_lp, lp, uncertainty_set, options,
                 description="", path=None):
        self.name = name
        self.general_lp = general_lp
        self.lp = lp
        self.uncertainty_set = uncertainty_set
        self.options = options
        self.description = description
        self.path = path

    def __iter__(self):
        return iter((self.general_lp, self.uncertainty_set, self.options))

    def __repr__(self):
        return "Instance({}, m={}, n={}, {})".format(
            self.name, self.lp.m, self.lp.n, self.uncertainty_set
        )


class _Locator:
    """Best-effort line lookup of JSON tokens for error messages."""

    def __init__(self, text, source):
        self.lines = text.splitlines() if text else []
        self.source = source

    def line_of(self, token):
        needle = json.dumps(token)
        for number, line in enumerate(self.lines, start=1):
            if needle in line:
                return number
        return None

    def error(self, message, token=None, cls=exceptions.InstanceSchemaError):
        line = self.line_of(token) if token is not None else None
        where = self.source or "<instance>"
        if line is not None:
            where = "{}:{}".format(where, line)
        return cls(
            "{}: {}".format(where, message),
            {"source": self.source, "line": line, "token": token},
        )


def _number(value, locator, what):
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise locator.error("{} must be a number, got {!r}".format(
            what, value
        ), what)
    return float(value)


def _parse_lp(data, name, locator):
    variables = []
    for entry in data["variables"]:
        if "name" not in entry:
            raise locator.error("variable without a name", "variables")
        lower = entry.get("lower", 0.0)
        variables.append(LpVariable(
            entry["name"],
            None if lower is None else _number(lower, locator, entry["name"]),
            _number(entry.get("upper"), locator, entry["name"]),
        ))

    rows = []
    for entry in data["rows"]:
        for key in ("name", "coefficients", "sense", "rhs"):
            if key not in entry:
                raise locator.error(
                    "row {} misses '{}'".format(entry.get("name", "?"), key),
                    entry.get("name", "rows"),
                )
        try:
            sense = RowSenseEnum(entry["sense"])
        except ValueError:
            raise locator.error(
                "row {} has unknown sense {!r}".format(
                    entry["name"], entry["sense"]
                ),
                entry["name"],
            )
        rows.append(LpRow(
            entry["name"], entry["coefficients"], sense,
            _number(entry["rhs"], locator, entry["name"]),
        ))

    objective = data["objective"]
    try:
        return GeneralFormLp(
            variables, rows, objective.get("coefficients", {}),
            objective.get("constant", 0.0), name=name,
        )
    except exceptions.UnknownTargetError as e:
        token = e.additional_context[0] if e.additional_context else None
        raise locator.error(e.message, token, exceptions.UnknownTargetError)


class _Parameterization:
    """Shared coordinates: one parameter per targeted general row and per
    targeted general variable."""

    def __init__(self, general_lp, lp, b_names, c_names):
        self.general_lp = general_lp
        self.b_names = [
            name for name in general_lp.row_names if name in b_names
        ]
        self.c_names = [
            name for name in general_lp.variable_names if name in c_names
        ]
        self.map_b = lp.conversion.rhs_map(
            [general_lp.row_index(name) for name in self.b_names], lp.m
        )
        self.map_c = lp.conversion.objective_map(
            [general_lp.variable_index(name) for name in self.c_names], lp.n
        )

    @property
    def k_b(self):
        return len(self.b_names)

    @property
    def k_c(self):
        return len(self.c_names)

    def position(self, target, name):
        if target == PerturbationTargetEnum.RHS:
            return self.b_names.index(name)
        return self.k_b + self.c_names.index(name)

    def nominal(self, target, names):
        if target == PerturbationTargetEnum.RHS:
            values = self.general_lp.rhs()
            return np.array([
                values[self.general_lp.row_index(name)] for name in names
            ])
        values = self.general_lp.cost()
        return np.array([
            values[self.general_lp.variable_index(name)] for name in names
        ])


def _target(block, locator):
    try:
        return PerturbationTargetEnum(block.get("target"))
    except ValueError:
        raise locator.error(
            "block {} needs target 'b' or 'c'".format(block.get("type")),
            block.get("type"),
        )


def _block_names(block, target):
    key = "rows" if target == PerturbationTargetEnum.RHS else "objective"
    return list(block.get(key) or [])


def _collect_targets(blocks, general_lp, locator):
    row_names = set(general_lp.row_names)
    variable_names = set(general_lp.variable_names)
    b_names, c_names = set(), set()

    def add(name, target):
        known = row_names if target == PerturbationTargetEnum.RHS \
            else variable_names
        if name not in known:
            raise locator.error(
                "uncertainty targets unknown {} {}".format(
                    "row" if target == PerturbationTargetEnum.RHS
                    else "column", name
                ),
                name, exceptions.UnknownTargetError,
            )
        (b_names if target == PerturbationTargetEnum.RHS else c_names).add(
            name
        )

    for block in blocks:
        kind = block.get("type")
        if kind not in BLOCK_TYPES:
            raise locator.error(
                "unknown uncertainty block type {!r}".format(kind), kind
            )
        if kind in ("box", "simplex"):
            for name in block.get("rows") or {}:
                add(name, PerturbationTargetEnum.RHS)
            for name in block.get("objective") or {}:
                add(name, PerturbationTargetEnum.OBJECTIVE)
        elif kind == "rows":
            for constraint in block.get("constraints", []):
                for key in constraint.get("coefficients", {}):
                    side, _, name = key.partition(":")
                    if side not in ("b", "c") or not name:
                        raise locator.error(
                            "raw row coefficient {!r} must look like "
                            "'b:ROW' or 'c:VARIABLE'".format(key), key
                        )
                    add(name, PerturbationTargetEnum(side))
        else:
            target = _target(block, locator)
            names = _block_names(block, target)
            if not names:
                raise locator.error(
                    "block {} lists no targets".format(kind), kind
                )
            for name in names:
                add(name, target)
    return b_names, c_names


def _box_block(block, shared, name):
    intervals_b = [None] * shared.k_b
    intervals_c = [None] * shared.k_c
    for row, interval in (block.get("rows") or {}).items():
        intervals_b[shared.b_names.index(row)] = interval
    for column, interval in (block.get("objective") or {}).items():
        intervals_c[shared.c_names.index(column)] = interval
    return box(
        intervals_b, intervals_c, shared.map_b, shared.map_c,
        shared.b_names, shared.c_names, name=name, validate=False,
    )


def _simplex_block(block, shared, name):
    deltas_b = [None] * shared.k_b
    deltas_c = [None] * shared.k_c
    for row, delta in (block.get("rows") or {}).items():
        deltas_b[shared.b_names.index(row)] = delta
    for column, delta in (block.get("objective") or {}).items():
        deltas_c[shared.c_names.index(column)] = delta
    return simplex_100pct(
        deltas_b, deltas_c, shared.map_b, shared.map_c,
        shared.b_names, shared.c_names, name=name, validate=False,
    )


def _radius(block, shared, target, names, kind, locator):
    if "radius" in block:
        return _number(block["radius"], locator, "radius")
    if "gamma" in block:
        gamma = _number(block["gamma"], locator, "gamma")
        nominal = shared.nominal(target, names)
        order = 1 if kind == NormEnum.ONE else 2
        return gamma * float(np.linalg.norm(nominal, ord=order))
    raise locator.error(
        "ball block needs 'radius' or 'gamma'", block.get("type")
    )


def _ball_block(block, shared, name, locator):
    kind = NormEnum.ONE if block["type"] == "ball_l1" else NormEnum.TWO
    target = _target(block, locator)
    names = _block_names(block, target)
    radius = _radius(block, shared, target, names, kind, locator)
    first = 0 if target == PerturbationTargetEnum.RHS else shared.k_b
    coordinates = [shared.position(target, n) - first for n in names]
    try:
        return norm_ball(
            kind, radius, target, map_b=shared.map_b, map_c=shared.map_c,
            coordinates=coordinates, name=name, validate=False,
        )
    except exceptions.InvalidSetParameterError as e:
        raise locator.error(e.message, block["type"])


def _affine_block(block, shared, name, locator):
    """Targeted parameters equal Q v with v in a ball; v (and the 1-norm
    lifting of v) become auxiliary variables."""
    target = _target(block, locator)
    names = _block_names(block, target)
    Q = np.atleast_2d(np.asarray(block.get("matrix"), dtype=float))
    if Q.shape[0] != len(names):
        raise locator.error(
            "affine_map matrix has {} rows for {} targets".format(
                Q.shape[0], len(names)
            ),
            "matrix",
        )
    ball = block.get("ball") or {}
    kind = _NORMS.get(ball.get("kind", "l2"))
    radius = _number(ball.get("radius", 1.0), locator, "radius")
    if kind is None or radius is None or radius < 0.0:
        raise locator.error(
            "affine_map ball needs kind l1|l2 and a nonnegative radius",
            "ball",
        )

    k = shared.k_b + shared.k_c
    p = Q.shape[1]
    aux = p if kind == NormEnum.TWO else 2 * p
    dim = k + aux
    G_eq = np.zeros((len(names), dim))
    for r, target_name in enumerate(names):
        G_eq[r, shared.position(target, target_name)] = 1.0
        G_eq[r, k:k + p] = -Q[r]
    eq_labels = ["{}[{}] == Q v".format(target.value, n) for n in names]

    soc_blocks, rows, in_labels = [], [], []
    if kind == NormEnum.TWO:
        C = np.zeros((p, dim))
        C[np.arange(p), k + np.arange(p)] = 1.0
        soc_blocks.append(SocBlock(
            C, np.zeros(p), np.zeros(dim), radius,
            label="||v|| <= {}".format(radius),
        ))
    else:
        for j in range(p):
            for sign in (1.0, -1.0):
                row = np.zeros(dim)
                row[k + j] = sign
                row[k + p + j] = -1.0
                rows.append(row)
                in_labels.append("|v{0}| <= w{0}".format(j))
        budget = np.zeros(dim)
        budget[k + p:] = 1.0
        rows.append(budget)
        in_labels.append("||v||_1 <= {}".format(radius))

    return UncertaintySet(
        shared.map_b, shared.map_c, aux_count=aux,
        G_eq=G_eq, g_eq=np.zeros(len(names)),
        G_in=np.array(rows).reshape(-1, dim),
        g_in=[0.0] * (len(rows) - 1) + [radius] if rows else [],
        soc_blocks=soc_blocks, eq_labels=eq_labels, in_labels=in_labels,
        name=name, validate=False,
    )


def _raw_block(block, shared, name, locator):
    k = shared.k_b + shared.k_c
    eq_rows, eq_rhs, eq_labels = [], [], []
    in_rows, in_rhs, in_labels = [], [], []
    for i, constraint in enumerate(block.get("constraints", [])):
        row = np.zeros(k)
        for key, value in constraint.get("coefficients", {}).items():
            side, _, target_name = key.partition(":")
            row[shared.position(
                PerturbationTargetEnum(side), target_name
            )] += _number(value, locator, key)
        rhs = _number(constraint.get("rhs", 0.0), locator, "rhs")
        label = constraint.get("label", "{}[{}]".format(name, i))
        try:
            sense = RowSenseEnum(constraint.get("sense", "<="))
        except ValueError:
            raise locator.error(
                "raw row {} has unknown sense".format(label), label
            )
        if sense == RowSenseEnum.EQUAL:
            eq_rows.append(row)
            eq_rhs.append(rhs)
            eq_labels.append(label)
        elif sense == RowSenseEnum.LESS_EQUAL:
            in_rows.append(row)
            in_rhs.append(rhs)
            in_labels.append(label)
        else:
            in_rows.append(-row)
            in_rhs.append(-rhs)
            in_labels.append(label)
    return UncertaintySet(
        shared.map_b, shared.map_c,
        G_eq=np.array(eq_rows).reshape(-1, k), g_eq=eq_rhs,
        G_in=np.array(in_rows).reshape(-1, k), g_in=in_rhs,
        eq_labels=eq_labels, in_labels=in_labels, name=name,
        validate=False,
    )


def _build_uncertainty(blocks, general_lp, lp, locator):
    if not blocks:
        return UncertaintySet(
            np.zeros((lp.m, 0)), np.zeros((lp.n, 0)), name="zero"
        )
    b_names, c_names = _collect_targets(blocks, general_lp, locator)
    shared = _Parameterization(general_lp, lp, b_names, c_names)

    combined = None
    for index, block in enumerate(blocks):
        name = block.get("name", "{}_{}".format(block["type"], index))
        if block["type"] == "box":
            current = _box_block(block, shared, name)
        elif block["type"] == "simplex":
            current = _simplex_block(block, shared, name)
        elif block["type"] in ("ball_l1", "ball_l2"):
            current = _ball_block(block, shared, name, locator)
        elif block["type"] == "affine_map":
            current = _affine_block(block, shared, name, locator)
        else:
            current = _raw_block(block, shared, name, locator)
        combined = current if combined is None else intersect(
            combined, current, validate=False
        )

    combined = combined._replace(name="U", validate=False)
    combined.validate()
    return combined


def _options(data, locator):
    options = dict(DEFAULT_OPTIONS)
    given = data.get("options") or {}
    unknown = sorted(set(given) - set(DEFAULT_OPTIONS))
    if unknown:
        raise locator.error(
            "unknown options {}".format(unknown), unknown[0]
        )
    options.update(given)
    return options


def build_instance(data, name=None, source=None, text=None):
    """Build an Instance from a parsed instance document.

    Args:
        data (dict): instance document
        name (string): defaults to data["name"]
        source (string): file path used in error messages
        text (string): raw document used to locate error lines

    Returns:
        Instance
    """
    locator = _Locator(text, source)
    if not isinstance(data, dict):
        raise locator.error("instance document must be a JSON object")
    missing = [key for key in REQUIRED_SECTIONS if key not in data]
    if missing:
        raise locator.error("missing sections: {}".format(
            ", ".join(missing)
        ))
    name = name or data.get("name") or "instance"

    general_lp = _parse_lp(data, name, locator)
    lp = standardize(general_lp)
    uncertainty_set = _build_uncertainty(
        data["uncertainty"], general_lp, lp, locator
    )
    instance = Instance(
        name, general_lp, lp, uncertainty_set, _options(data, locator),
        description=data.get("description", ""), path=source,
    )
    logger.info("Loaded {}".format(instance))
    return instance


def resolve_instance_path(name_or_path):
    """Bundled instance name or filesystem path."""
    if os.path.isfile(name_or_path):
        return name_or_path
    bundled = os.path.join(INSTANCES, "{}.json".format(name_or_path))
    if os.path.isfile(bundled):
        return bundled
    raise exceptions.InstanceSchemaError(
        "No instance file or bundled instance named {}".format(name_or_path),
        {"source": name_or_path, "line": None, "token": None},
    )


def load_instance(path):
    """Load and validate an instance file.

    Args:
        path (string): file path or bundled instance name

    Returns:
        Instance: unpacks to (general_lp, uncertainty_set, options)
    """
    path = resolve_instance_path(path)
    with open(path) as f:
        text = f.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise exceptions.InstanceSchemaError(
            "{}:{}: {}".format(path, e.lineno, e.msg),
            {"source": path, "line": e.lineno, "token": None},
        )
    name = os.path.splitext(os.path.basename(path))[0]
    return build_instance(data, name=data.get("name", name), source=path,
                          text=text)


def bundled_instances():
    """Names of the bundled instance files."""
    if not os.path.isdir(INSTANCES):
        return []
    return sorted(
        os.path.splitext(entry)[0] for entry in os.listdir(INSTANCES)
        if entry.endswith(".json")
    )
