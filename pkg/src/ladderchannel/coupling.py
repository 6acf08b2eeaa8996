"""Clebsch-Gordan coupling of two subchannels.

Subchannel A has rank ``s`` (dimension ``2s+1``), subchannel B has rank ``l``.
Product-basis vectors ``|m_s> (x) |m_l>`` are stored A-major: index
``(m_s + s) * (2l + 1) + (m_l + l)``. Half-integers are exact
:class:`~fractions.Fraction` values throughout.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import LabelError
from .serialize import half, half_str, label_str, matrix_to_json
from .spinops import build_ladder


def _hrange(lo, hi):
    """Half-integer range ``lo, lo+1, ..., hi`` inclusive."""
    out = []
    x = lo
    while x <= hi:
        out.append(x)
        x += 1
    return out


def _is_int(x):
    return Fraction(x).denominator == 1


def _raise_amp(j, mu):
    return math.sqrt(max(float((j - mu) * (j + mu + 1)), 0.0))


def _lower_amp(j, mu):
    return math.sqrt(max(float((j + mu) * (j - mu + 1)), 0.0))


def triangle_ok(s, l, j):
    return abs(l - s) <= j <= l + s and _is_int(s + l + j)


@lru_cache(maxsize=None)
def _cg_column(s, l, j, m):
    """Coefficients ``<s m_s; l m-m_s | j m>`` for every allowed ``m_s``.

    Solves the three-term recursion in ``m_s`` that follows from
    ``J^2 |j m> = j(j+1) |j m>`` with ``J^2 = S^2 + L^2 + 2 S3 L3 + S+ L- + S- L+``,
    seeded at the lowest ``m_s``. The result is normalized and the sign
    fixed so the coefficient at the largest ``m_s`` is positive
    (Condon-Shortley).
    """
    lo = max(-s, m - l)
    hi = min(s, m + l)
    ms_values = _hrange(lo, hi)
    base = j * (j + 1) - s * (s + 1) - l * (l + 1)
    coef = [1.0]
    prev = 0.0
    for ms in ms_values[:-1]:
        ml = m - ms
        diag = float(base - 2 * ms * ml)
        down = _raise_amp(s, ms - 1) * _lower_amp(l, ml + 1)
        up = _lower_amp(s, ms + 1) * _raise_amp(l, ml - 1)
        nxt = (diag * coef[-1] - down * prev) / up
        prev = coef[-1]
        coef.append(nxt)
    coef = np.array(coef)
    coef /= np.linalg.norm(coef)
    if coef[-1] < 0:
        coef = -coef
    return tuple(zip(ms_values, coef.tolist()))


def clebsch_gordan(s, l, j, m, m_s):
    """Clebsch-Gordan coefficient ``<s, m_s; l, m - m_s | j, m>``.

    Returns 0.0 for any argument combination outside the allowed ranges
    (triangle rule, projection bounds, half-integer parity).
    """
    s, l, j, m, m_s = (half(x) for x in (s, l, j, m, m_s))
    if not triangle_ok(s, l, j) or abs(m) > j or abs(m_s) > s or abs(m - m_s) > l:
        return 0.0
    if not (_is_int(j - m) and _is_int(s - m_s) and _is_int(l - (m - m_s))):
        return 0.0
    return dict(_cg_column(s, l, j, m)).get(m_s, 0.0)


def coupled_labels(s, l):
    """Coupled labels ordered by ``j`` descending, then ``m`` ascending."""
    s, l = half(s), half(l)
    return tuple((j, m) for j in reversed(_hrange(abs(l - s), l + s)) for m in _hrange(-j, j))


def product_labels(s, l):
    """``(m_s, m_l)`` pairs in product-basis (A-major) order."""
    s, l = half(s), half(l)
    return tuple((ms, ml) for ms in _hrange(-s, s) for ml in _hrange(-l, l))


def product_index(s, l, m_s, m_l):
    s, l, m_s, m_l = (half(x) for x in (s, l, m_s, m_l))
    return int((m_s + s) * (2 * l + 1) + (m_l + l))


@dataclass(frozen=True)
class CoupledBasis:
    """Unitary map from the coupled basis ``|j,m>`` to the product basis.

    Column ``i`` of ``unitary`` is the coupled vector ``labels[i]`` expressed
    over :func:`product_labels`. ``swapped`` records that the caller gave
    the larger rank first and the two subchannels were exchanged.
    """

    s: Fraction
    l: Fraction
    labels: tuple
    unitary: np.ndarray
    swapped: bool = False

    @property
    def dims(self):
        return int(2 * self.s + 1), int(2 * self.l + 1)

    @property
    def dim(self):
        a, b = self.dims
        return a * b

    def index(self, j, m):
        try:
            return self.labels.index((half(j), half(m)))
        except ValueError:
            raise LabelError(
                f"label ({half_str(j)}, {half_str(m)}) does not exist for "
                f"s={half_str(self.s)}, l={half_str(self.l)}") from None

    def vector(self, j, m):
        return self.unitary[:, self.index(j, m)]

    def cg(self, j, m, m_s):
        return clebsch_gordan(self.s, self.l, j, m, m_s)

    def to_json(self):
        return {
            "s": half_str(self.s),
            "l": half_str(self.l),
            "swapped": self.swapped,
            "labels": [label_str(j, m) for j, m in self.labels],
            "unitary": matrix_to_json(self.unitary),
        }


@lru_cache(maxsize=64)
def _coupled_basis(s, l):
    labels = coupled_labels(s, l)
    n_b = int(2 * l + 1)
    u = np.zeros((int(2 * s + 1) * n_b, len(labels)))
    for col, (j, m) in enumerate(labels):
        for ms, c in _cg_column(s, l, j, m):
            u[product_index(s, l, ms, m - ms), col] = c
    u.setflags(write=False)
    return labels, u


def coupled_basis(s, l):
    """Coupled basis of the ``(2s+1) x (2l+1)`` channel.

    The smaller subchannel is always A; when ``s > l`` the ranks are swapped
    and the result is tagged ``swapped=True``.
    """
    s, l = half(s), half(l)
    if s < 0 or l < 0:
        raise LabelError("ranks must be non-negative")
    swapped = s > l
    if swapped:
        s, l = l, s
    labels, u = _coupled_basis(s, l)
    return CoupledBasis(s, l, labels, u, swapped)


@dataclass(frozen=True)
class InducedLadderSet:
    """``J_a = S_a (x) I + I (x) L_a`` on the composite space."""

    s: Fraction
    l: Fraction
    j_plus: np.ndarray
    j_minus: np.ndarray
    j3: np.ndarray

    @property
    def dim(self):
        return self.j3.shape[0]

    def casimir(self):
        return self.j_plus @ self.j_minus + self.j3 @ self.j3 - self.j3


def induced_ladder(s, l):
    s, l = half(s), half(l)
    a = build_ladder(int(2 * s + 1))
    b = build_ladder(int(2 * l + 1))
    eye_a = np.eye(a.dim)
    eye_b = np.eye(b.dim)
    ops = []
    for x, y in ((a.j_plus, b.j_plus), (a.j_minus, b.j_minus), (a.j3, b.j3)):
        op = np.kron(x, eye_b) + np.kron(eye_a, y)
        op.setflags(write=False)
        ops.append(op)
    return InducedLadderSet(s, l, *ops)
