import numpy as np

from ...constants import (INVENTORY_DEMAND_INTERVALS, INVENTORY_HOLDING_COSTS,
                          INVENTORY_ORDER_BOUNDS, INVENTORY_PURCHASE_COSTS,
                          INVENTORY_SHORTAGE_COSTS, INVENTORY_STOCK_CAP,
                          NETWORK_ARC_COSTS, NETWORK_SYNTHETIC_DEMANDS,
                          NETWORK_SYNTHETIC_SUPPLIES, SYSRISK_BANKS,
                          SYSRISK_FACTORS)
from ...enums import NormEnum, PerturbationTargetEnum
from ...logger import logger
from ..lp import GeneralFormLp, LpRow, LpVariable, standardize
from ..uncertainty import affine_image, norm_ball
from .instance_loader import DEFAULT_OPTIONS, Instance, build_instance

NETWORK_FAMILIES = ("POLY", "SOC", "MIX")


def inventory_document(T=4, purchase_costs=INVENTORY_PURCHASE_COSTS,
                       holding_costs=INVENTORY_HOLDING_COSTS,
                       shortage_costs=INVENTORY_SHORTAGE_COSTS,
                       demand_intervals=INVENTORY_DEMAND_INTERVALS,
                       order_bounds=INVENTORY_ORDER_BOUNDS,
                       stock_cap=INVENTORY_STOCK_CAP):
    """Instance document of the multi-period ordering model.

    Stock s_k is free and capped, orders x_k are bounded and y_k carries
    the holding or shortage cost of period k. Demands sit at the interval
    midpoints; the uncertainty is the box of interval half-widths on the
    balance rows.
    """
    if T > len(demand_intervals):
        raise ValueError("Only {} periods of data".format(
            len(demand_intervals)
        ))
    lower, upper = order_bounds
    variables, rows, objective, intervals = [], [], {}, {}
    for k in range(1, T + 1):
        variables.append({"name": "x{}".format(k), "lower": lower,
                          "upper": upper})
        variables.append({"name": "s{}".format(k), "lower": None,
                          "upper": stock_cap})
        variables.append({"name": "y{}".format(k), "lower": 0})
        objective["x{}".format(k)] = purchase_costs[k - 1]
        objective["y{}".format(k)] = 1

    for k in range(1, T + 1):
        lo, hi = demand_intervals[k - 1]
        middle = (lo + hi) / 2.0
        balance = {"x{}".format(k): 1, "s{}".format(k): -1}
        if k > 1:
            balance["s{}".format(k - 1)] = 1
        rows.append({"name": "balance{}".format(k), "coefficients": balance,
                     "sense": "=", "rhs": middle})
        rows.append({
            "name": "holding{}".format(k),
            "coefficients": {"y{}".format(k): 1,
                             "s{}".format(k): -holding_costs[k - 1]},
            "sense": ">=", "rhs": 0,
        })
        rows.append({
            "name": "shortage{}".format(k),
            "coefficients": {"y{}".format(k): 1,
                             "s{}".format(k): shortage_costs[k - 1]},
            "sense": ">=", "rhs": 0,
        })
        intervals["balance{}".format(k)] = [lo - middle, hi - middle]

    return {
        "name": "inventory_T{}".format(T),
        "description": "interval demands on a {}-period ordering "
                       "model".format(T),
        "variables": variables,
        "rows": rows,
        "objective": {"coefficients": objective, "constant": 0},
        "uncertainty": [{"type": "box", "name": "demand", "rows": intervals}],
        "options": {},
    }


def inventory_instance(T=4, **kwargs):
    """Multi-period ordering model with interval demands.

    Args:
        T (int): horizon, at most the number of tabulated periods

    Returns:
        Instance
    """
    return build_instance(inventory_document(T, **kwargs))


def network_document(family="POLY", gamma=0.01):
    """Instance document of the bipartite transportation network.

    Supplier rows are capacities (<=), customer rows are demands (>=).
    Supplies and demands are synthetic placeholders. Perturbations of
    b and c are budgeted relative to the nominal norms: POLY uses
    1-norms on both sides, SOC 2-norms, MIX a 1-norm on b and a 2-norm
    on c.
    """
    family = family.upper()
    if family not in NETWORK_FAMILIES:
        raise ValueError("Unknown network family {}".format(family))
    variables, objective = [], {}
    for supplier, arcs in sorted(NETWORK_ARC_COSTS.items()):
        for customer, cost in sorted(arcs.items()):
            name = "f{}_{}".format(supplier, customer)
            variables.append({"name": name, "lower": 0})
            objective[name] = cost

    rows = []
    for supplier, supply in enumerate(NETWORK_SYNTHETIC_SUPPLIES, start=1):
        rows.append({
            "name": "supply{}".format(supplier),
            "coefficients": dict(
                ("f{}_{}".format(supplier, customer), 1)
                for customer in NETWORK_ARC_COSTS[supplier]
            ),
            "sense": "<=", "rhs": supply,
        })
    for customer, demand in enumerate(NETWORK_SYNTHETIC_DEMANDS, start=1):
        rows.append({
            "name": "demand{}".format(customer),
            "coefficients": dict(
                ("f{}_{}".format(supplier, customer), 1)
                for supplier, arcs in sorted(NETWORK_ARC_COSTS.items())
                if customer in arcs
            ),
            "sense": ">=", "rhs": demand,
        })

    kind_b = "ball_l2" if family == "SOC" else "ball_l1"
    kind_c = "ball_l1" if family == "POLY" else "ball_l2"
    return {
        "name": "network_{}_{}".format(family, gamma),
        "description": "SYNTHETIC supplies and demands",
        "variables": variables,
        "rows": rows,
        "objective": {"coefficients": objective, "constant": 0},
        "uncertainty": [
            {"type": kind_b, "name": "supply_demand", "target": "b",
             "rows": [row["name"] for row in rows], "gamma": gamma},
            {"type": kind_c, "name": "arc_costs", "target": "c",
             "objective": [v["name"] for v in variables], "gamma": gamma},
        ],
        "options": {},
    }


def network_instance(family="POLY", gamma=0.01):
    """Transportation network with a POLY, SOC or MIX budget."""
    return build_instance(network_document(family, gamma))


def _systemic_data(rng, banks, factors):
    liabilities = rng.uniform(0.0, 1.0, size=(banks, banks))
    np.fill_diagonal(liabilities, 0.0)
    cash_flows = rng.uniform(0.0, 1.0, size=banks)
    Q = rng.uniform(0.0, 1.0, size=(banks, factors))
    Q = Q / np.linalg.norm(Q, axis=0)
    return liabilities, cash_flows, Q


def systemic_risk_instance(seed, banks=SYSRISK_BANKS,
                           factors=SYSRISK_FACTORS):
    """Seeded interbank clearing instance.

    Minimizes the total failure ratio sum(1 - x_i) over payment ratios
    x in [0, 1] subject to limited liability; the exogenous cash flows
    move along Q v with v in the unit 2-norm ball.

    Args:
        seed (int)
        banks (int)
        factors (int): columns of Q

    Returns:
        Instance
    """
    rng = np.random.default_rng(seed)
    liabilities, cash_flows, Q = _systemic_data(rng, banks, factors)

    variables = [LpVariable("x{}".format(i), 0.0, 1.0) for i in range(banks)]
    rows = []
    for i in range(banks):
        coefficients = dict(
            ("x{}".format(j), -liabilities[j, i]) for j in range(banks)
            if j != i
        )
        coefficients["x{}".format(i)] = liabilities[i].sum()
        rows.append(LpRow("liability{}".format(i), coefficients, "<=",
                          cash_flows[i]))
    name = "sysrisk_{}".format(seed)
    general_lp = GeneralFormLp(
        variables, rows, dict((v.name, -1.0) for v in variables),
        objective_constant=float(banks), name=name,
    )
    lp = standardize(general_lp)

    ball = norm_ball(
        NormEnum.TWO, 1.0, PerturbationTargetEnum.RHS, size=factors,
        name="factors", validate=False,
    )
    placement = lp.conversion.rhs_map(range(banks), lp.m)
    uncertainty_set = affine_image(
        placement.dot(Q), ball, PerturbationTargetEnum.RHS, name="U"
    )
    logger.info("Generated {} with seed {}".format(name, seed))
    return Instance(
        name, general_lp, lp, uncertainty_set, dict(DEFAULT_OPTIONS),
        description="seeded {}x{} systemic-risk instance".format(
            factors, banks
        ),
    )
