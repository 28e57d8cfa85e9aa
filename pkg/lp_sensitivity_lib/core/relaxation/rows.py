import numpy as np

from .forms import form_key, pair_form, sparse_vector


class LinearRow:
    """a.z >= 0 with a sparse over z."""

    def __init__(self, vector, label):
        self.vector = vector
        self.label = label

    def dense(self, N):
        row = np.zeros(N)
        row[self.vector[0]] = self.vector[1]
        return row

    def __repr__(self):
        return "LinearRow({})".format(self.label)


class SocRow:
    """|| C z || <= a.z with the tail C given row by row."""

    def __init__(self, head, tail, label):
        self.head = head
        self.tail = tail
        self.label = label

    def __repr__(self):
        return "SocRow({}, dim={})".format(self.label, 1 + len(self.tail))


class HomogeneousRows:
    def __init__(self, linear, soc):
        self.linear = linear
        self.soc = soc

    def __repr__(self):
        return "HomogeneousRows(linear={}, soc={})".format(
            len(self.linear), len(self.soc)
        )


class FormFamily:
    """Generated constraints of one family as sparse forms over svec(M).

    kind is "eq", "ge" or "soc". Linear kinds keep one form and rhs per
    row; soc rows keep a head form and tail forms. `generated` counts
    rows before deduplication.
    """

    def __init__(self, family, kind):
        self.family = family
        self.kind = kind
        self.forms = []
        self.rhs = []
        self.labels = []
        self.cones = []
        self.generated = 0
        self._keys = set()

    def add(self, form, rhs=0.0, label="", deduplicate=False):
        self.generated += 1
        if deduplicate:
            key = form_key(form, rhs)
            if key in self._keys or not key[0]:
                return False
            self._keys.add(key)
        self.forms.append(form)
        self.rhs.append(float(rhs))
        self.labels.append(label)
        return True

    def exclude(self, form, rhs=0.0):
        """Reject later deduplicated rows with the same canonical key."""
        self._keys.add(form_key(form, rhs))

    def add_cone(self, head, tail, label=""):
        self.generated += 1
        self.cones.append((head, list(tail)))
        self.labels.append(label)

    def __len__(self):
        if self.kind == "soc":
            return len(self.cones)
        return len(self.forms)

    def __repr__(self):
        return "FormFamily({}, {}, rows={})".format(
            self.family.value, self.kind, len(self)
        )


def collect_homogeneous_rows(qp):
    """Homogeneous rows describing R+ x K, equality rows excluded.

    Linear rows: t >= 0, x >= 0, s >= 0 and the homogenized inequality
    rows of the uncertainty set. SOC rows: the homogenized SOC blocks.

    Args:
        qp (GeneralQp)

    Returns:
        HomogeneousRows
    """
    linear = []
    t = qp.index("t")[0]
    linear.append(LinearRow((np.array([t]), np.array([1.0])), "t >= 0"))
    for i, p in enumerate(qp.index("x")):
        linear.append(LinearRow(
            (np.array([p]), np.array([1.0])),
            "{} >= 0".format(qp.lp.col_names[i]),
        ))
    for i, p in enumerate(qp.index("s")):
        linear.append(LinearRow(
            (np.array([p]), np.array([1.0])), "s[{}] >= 0".format(i)
        ))

    # (t, u) occupies z[0:1 + dim]
    for row, label in zip(qp.cone.linear_rows, qp.cone.linear_labels):
        linear.append(LinearRow(sparse_vector(row), label))

    soc = []
    for head, tail, label in qp.cone.soc_rows:
        soc.append(SocRow(
            sparse_vector(head), [sparse_vector(row) for row in tail], label
        ))
    return HomogeneousRows(linear, soc)


def gen_rlt(rows, family, implied=()):
    """a_i^T Z a_j >= 0 for every unordered pair, self-pairs included.

    Args:
        rows (HomogeneousRows)
        family (ConstraintFamilyEnum)
        implied (list): forms already fixed elsewhere, skipped

    Returns:
        FormFamily: deduplicated by canonical key
    """
    generated = FormFamily(family, "ge")
    for form in implied:
        generated.exclude(form)
    linear = rows.linear
    for i in range(len(linear)):
        for j in range(i, len(linear)):
            generated.add(
                pair_form(linear[i].vector, linear[j].vector), 0.0,
                "({})*({})".format(linear[i].label, linear[j].label),
                deduplicate=True,
            )
    return generated


def gen_soc_rlt(rows, family):
    """|| C_2 Z a_1 || <= a_2^T Z a_1 for each linear row a_1 and each
    SOC row (a_2, C_2)."""
    generated = FormFamily(family, "soc")
    for cone in rows.soc:
        for row in rows.linear:
            generated.add_cone(
                pair_form(cone.head, row.vector),
                [pair_form(tail, row.vector) for tail in cone.tail],
                "({})*({})".format(row.label, cone.label),
            )
    return generated
