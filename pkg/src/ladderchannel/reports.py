"""Worked examples: per-state tables and curve data for the CLI ``examples`` command.

Each builder returns ``(report, rows)`` where ``report`` is a JSON-ready dict
and ``rows`` is either ``None`` or ``(header, list_of_rows)`` for CSV output.
"""

import math

from .coupling import coupled_basis, product_labels
from .entropy import (
    binary_entropy,
    entanglement_entropy,
    holevo_chi,
    two_outcome_entropy,
    two_qubit_entropy_closed_form,
    von_neumann,
)
from .serialize import half_str, label_str
from .states import (
    TwoQubitParams,
    maximally_mixed,
    pure_coupled_state,
    qubit_qutrit_mix,
    reduce_a,
    reduce_b,
    two_qubit_state,
)

EXAMPLES = ("paraqubit", "qubit_qutrit", "dual_qutrit", "two_qubit_figure", "qutrit_qubit_degenerate")

FIGURE_D, FIGURE_R = 0.6, 0.9
PRINTED_HOLEVO_BITS = 3.88
PRINTED_SINGLE_CHANNEL_BITS = 4.755


def _vector_terms(basis, j, m):
    vec = basis.vector(j, m)
    return {f"{half_str(ms)}|{half_str(ml)}": float(c)
            for (ms, ml), c in zip(product_labels(basis.s, basis.l), vec) if abs(c) > 1e-14}


def _label_table(s, l):
    basis = coupled_basis(s, l)
    rows = []
    for j, m in basis.labels:
        state = pure_coupled_state(s, l, j, m)
        ra, rb = reduce_a(state), reduce_b(state)
        ent = entanglement_entropy(s, l, j, m)
        rows.append({
            "label": label_str(j, m),
            "vector": _vector_terms(basis, j, m),
            "entangled": ent > 1e-12,
            "entanglement_entropy": ent,
            "reduced_a": ra.probabilities.tolist(),
            "reduced_b": rb.probabilities.tolist(),
        })
    return rows


def _header(name, s, l):
    return {"schema": "1", "example": name, "s": half_str(s), "l": half_str(l)}


def paraqubit():
    rows = _label_table("1/2", "1/2")
    report = _header("paraqubit", "1/2", "1/2")
    report["states"] = rows
    report["n_product"] = sum(not r["entangled"] for r in rows)
    report["n_entangled"] = sum(r["entangled"] for r in rows)
    return report, None


def qubit_qutrit():
    report = _header("qubit_qutrit", "1/2", "1")
    report["states"] = _label_table("1/2", "1")
    report["n_product"] = sum(not r["entangled"] for r in report["states"])
    report["n_entangled"] = sum(r["entangled"] for r in report["states"])
    return report, None


def dual_qutrit():
    report = _header("dual_qutrit", "1", "1")
    report["states"] = _label_table(1, 1)
    uniform = maximally_mixed(1, 1)
    chi = holevo_chi(uniform)
    log3 = math.log2(3)
    printed_expr = math.log2(9) - (5 + 3 * log3 - 1 / 3) / 9
    report["uniform_state"] = {
        "s_total": chi.s_total,
        "mean_entanglement_entropy": chi.mean_entanglement,
        "holevo_chi": chi.chi,
        "holevo_bounds": dict(chi.bounds),
    }
    report["discrepancy"] = {
        "consistent": False,
        "recomputed_chi_bits": chi.chi,
        "printed_expression": "log2(9) - (5 + 3 log2(3) - 1/3)/9",
        "printed_expression_bits": printed_expr,
        "printed_value_bits": PRINTED_HOLEVO_BITS,
        "printed_single_channel_bits": PRINTED_SINGLE_CHANNEL_BITS,
        "log2_dim_bits": math.log2(9),
        "note": ("printed value exceeds log2(9), the maximum entropy of a 9-state "
                 "channel; the printed expression evaluates to neither 3.88 nor the "
                 "recomputed chi"),
    }
    return report, None


def two_qubit_figure():
    header = ["q", "s_pair_solid", "s_qubit_solid", "s_pair_dotted", "s_qubit_dotted"]
    rows = []
    dominated = True
    max_dev = 0.0
    for k in range(201):
        q = round(-1 + 0.01 * k, 10)
        solid = TwoQubitParams(FIGURE_D, FIGURE_R, q)
        dotted = TwoQubitParams(1.0, FIGURE_R, q)
        sp, sq = two_qubit_entropy_closed_form(solid)
        dp, dq = two_qubit_entropy_closed_form(dotted)
        for params, (cp, cq) in ((solid, (sp, sq)), (dotted, (dp, dq))):
            state = two_qubit_state(params)
            max_dev = max(max_dev, abs(von_neumann(state) - cp),
                          abs(von_neumann(reduce_a(state)) - cq))
        dominated &= dq >= dp - 1e-12
        rows.append([q, sp, sq, dp, dq])
    report = _header("two_qubit_figure", "1/2", "1/2")
    report["parameters"] = {"d_solid": FIGURE_D, "r": FIGURE_R, "d_dotted": 1.0,
                            "q_min": -1.0, "q_max": 1.0, "q_step": 0.01}
    report["checks"] = {
        "dotted_qubit_dominates_pair": bool(dominated),
        "max_closed_form_vs_eigen_deviation": max_dev,
        "singlet_edge": {"s_pair_dotted": rows[0][3], "s_qubit_dotted": rows[0][4]},
    }
    return report, (header, rows)


def qutrit_qubit_degenerate():
    header = ["d", "s_sys", "s_qubit", "s_qutrit", "s_sys_closed", "s_sub_closed"]
    rows = []
    max_dev = 0.0
    qubit_exceeds = True
    for k in range(201):
        d = round(-1 + 0.01 * k, 10)
        state = qubit_qutrit_mix(d)
        s_sys = von_neumann(state)
        s_a = von_neumann(reduce_a(state))
        s_b = von_neumann(reduce_b(state))
        closed_sys = two_outcome_entropy((1 + d) / 2)
        closed_sub = two_outcome_entropy((1 + d / 3) / 2)
        max_dev = max(max_dev, abs(s_sys - closed_sys), abs(s_a - closed_sub), abs(s_b - closed_sub))
        if d != 0:
            qubit_exceeds &= s_a > s_sys
        rows.append([d, s_sys, s_a, s_b, closed_sys, closed_sub])
    report = _header("qutrit_qubit_degenerate", "1/2", "1")
    report["family"] = "(1+d)/2 |3/2,1/2><3/2,1/2| + (1-d)/2 |1/2,1/2><1/2,1/2|"
    report["checks"] = {
        "max_closed_form_vs_eigen_deviation": max_dev,
        "qubit_exceeds_channel_for_nonzero_d": bool(qubit_exceeds),
        "equal_at_degeneracy": abs(rows[100][1] - rows[100][2]) < 1e-12,
        "h_of_d_over_3_matches": abs(rows[150][2] - binary_entropy(0.5 / 3)) < 1e-12,
    }
    return report, (header, rows)


BUILDERS = {
    "paraqubit": paraqubit,
    "qubit_qutrit": qubit_qutrit,
    "dual_qutrit": dual_qutrit,
    "two_qubit_figure": two_qubit_figure,
    "qutrit_qubit_degenerate": qutrit_qubit_degenerate,
}


def build(name):
    return BUILDERS[name]()


def format_csv(header, rows):
    """CSV text with ',' separators, LF endings and 12 significant digits."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format(float(x), ".12g") for x in row))
    return "\n".join(lines) + "\n"
