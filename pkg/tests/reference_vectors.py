"""Tabulated coupled-basis vectors, signs included.

Each entry is ``(group, s, l, j, m, terms)`` where ``terms`` maps
``(m_s, m_l)`` to the printed coefficient. The generic qubit block is
expanded for ``l = 1/2 .. 9/2``.
"""

from fractions import Fraction as F
from math import sqrt

H = F(1, 2)
R2, R3, R6 = sqrt(2), sqrt(3), sqrt(6)


def _dual():
    g = "dual l=1"
    return [
        (g, 1, 1, 0, 0, {(-1, 1): 1 / R3, (0, 0): -1 / R3, (1, -1): 1 / R3}),
        (g, 1, 1, 1, -1, {(-1, 0): 1 / R2, (0, -1): -1 / R2}),
        (g, 1, 1, 1, 0, {(-1, 1): 1 / R2, (1, -1): -1 / R2}),
        (g, 1, 1, 1, 1, {(1, 0): 1 / R2, (0, 1): -1 / R2}),
        (g, 1, 1, 2, -1, {(-1, 0): 1 / R2, (0, -1): 1 / R2}),
        (g, 1, 1, 2, 0, {(-1, 1): 1 / R6, (0, 0): 2 / R6, (1, -1): 1 / R6}),
        (g, 1, 1, 2, 1, {(1, 0): 1 / R2, (0, 1): 1 / R2}),
        (g, 1, 1, 2, -2, {(-1, -1): 1.0}),
        (g, 1, 1, 2, 2, {(1, 1): 1.0}),
    ]


def _two_qubits():
    g = "two qubits"
    return [
        (g, H, H, 1, 1, {(H, H): 1.0}),
        (g, H, H, 1, -1, {(-H, -H): 1.0}),
        (g, H, H, 1, 0, {(H, -H): 1 / R2, (-H, H): 1 / R2}),
        (g, H, H, 0, 0, {(H, -H): 1 / R2, (-H, H): -1 / R2}),
    ]


def _qubit_qutrit():
    g = "qubit-qutrit"
    return [
        (g, H, 1, 3 * H, 3 * H, {(H, 1): 1.0}),
        (g, H, 1, 3 * H, -3 * H, {(-H, -1): 1.0}),
        (g, H, 1, 3 * H, H, {(H, 0): sqrt(2 / 3), (-H, 1): sqrt(1 / 3)}),
        (g, H, 1, 3 * H, -H, {(H, -1): sqrt(1 / 3), (-H, 0): sqrt(2 / 3)}),
        (g, H, 1, H, H, {(H, 0): sqrt(1 / 3), (-H, 1): -sqrt(2 / 3)}),
        (g, H, 1, H, -H, {(H, -1): sqrt(2 / 3), (-H, 0): -sqrt(1 / 3)}),
    ]


def _qubit_general(l):
    g = f"qubit with l={l}"
    top = l + H
    width = float(2 * l + 1)
    out = [
        (g, H, l, top, top, {(H, l): 1.0}),
        (g, H, l, top, -top, {(-H, -l): 1.0}),
    ]
    m = -l + H
    while m <= l - H:
        plus = sqrt(float(l + H + m) / width)
        minus = sqrt(float(l + H - m) / width)
        out.append((g, H, l, top, m, {(H, m - H): plus, (-H, m + H): minus}))
        out.append((g, H, l, l - H, m, {(H, m - H): -minus, (-H, m + H): plus}))
        m += 1
    return out


def reference_vectors():
    rows = _dual() + _two_qubits() + _qubit_qutrit()
    for twice in range(1, 10):
        rows += _qubit_general(F(twice, 2))
    return rows
