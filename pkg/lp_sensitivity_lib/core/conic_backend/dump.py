import os

import jinja2
import numpy as np
from jinja2 import Environment, FileSystemLoader

from ...constants import (CONIC_DUMP_TEMPLATE, DUMP_SIGNIFICANT_DIGITS,
                          TEMPLATES)
from ...logger import logger


def _number(value):
    return "{:.{}g}".format(float(value), DUMP_SIGNIFICANT_DIGITS)


def render_conic(program):
    """Render a ConicProgram as the documented text dump.

    Layout: header, one BLOCK line per variable block, the sparse
    objective, then one ROW line per equality row listing
    `column:coefficient` pairs followed by `= rhs`.
    """
    A = program.A.tocsr()
    rows = []
    for index in range(program.n_rows):
        start, end = A.indptr[index], A.indptr[index + 1]
        rows.append({
            "index": index,
            "family": (
                program.row_families[index].value
                if index < len(program.row_families) else ""
            ),
            "terms": [
                (int(col), _number(val))
                for col, val in zip(A.indices[start:end], A.data[start:end])
            ],
            "rhs": _number(program.b[index]),
        })
    objective = [
        (int(col), _number(program.c[col]))
        for col in np.flatnonzero(program.c)
    ]

    j2 = Environment(loader=FileSystemLoader(TEMPLATES))
    j2.filters["num"] = _number
    template = j2.get_template(CONIC_DUMP_TEMPLATE)
    try:
        return template.render({
            "program": program,
            "blocks": program.blocks,
            "objective": objective,
            "constant": _number(program.objective_constant),
            "rows": rows,
        })
    except jinja2.exceptions.TemplateError as e:
        logger.exception("[!] jinja2.TemplateError: {}".format(e))
        raise


def dump_conic(program, path):
    """Write the text dump of a program to path."""
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        os.makedirs(directory)
    with open(path, "w") as f:
        f.write(render_conic(program))
    logger.info("Conic dump of {} written to {}".format(program.name, path))
    return path
