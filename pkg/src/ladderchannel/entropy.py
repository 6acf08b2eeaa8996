"""Entropies in bits: von Neumann, subchannel, entanglement and Holevo quantities."""

import math
from dataclasses import dataclass, field

import numpy as np

from .coupling import _cg_column, coupled_labels
from .errors import DomainError, LabelError
from .serialize import half, label_str
from .states import ChannelState, ReducedState, reduce_a, reduce_b

PROB_FLOOR = 1e-15


def shannon_bits(probs):
    """``-sum p log2 p`` with terms below :data:`PROB_FLOOR` dropped."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > PROB_FLOOR]
    return max(0.0, float(-np.sum(p * np.log2(p)))) if p.size else 0.0


def von_neumann(state):
    """Von Neumann entropy of a :class:`ChannelState`, :class:`ReducedState`
    or density matrix."""
    if isinstance(state, ChannelState):
        return shannon_bits(state.spectrum)
    if isinstance(state, ReducedState):
        return shannon_bits(state.eigs)
    rho = np.asarray(state, dtype=complex)
    return shannon_bits(np.linalg.eigvalsh((rho + rho.conj().T) / 2))


def subchannel_entropies(state):
    return von_neumann(reduce_a(state)), von_neumann(reduce_b(state))


def entanglement_entropy(s, l, j, m):
    """Entanglement entropy ``-sum C^2 log2 C^2`` of the pure state ``|j, m>``."""
    s, l, j, m = (half(x) for x in (s, l, j, m))
    if s > l:
        s, l = l, s
    if (j, m) not in set(coupled_labels(s, l)):
        raise LabelError(f"label {label_str(j, m)} does not exist")
    return shannon_bits([c * c for _, c in _cg_column(s, l, j, m)])


def binary_entropy(x):
    """``h(x)`` of the two-outcome distribution ``((1 + x)/2, (1 - x)/2)``."""
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"h(x) needs |x| <= 1, got {x}")
    return shannon_bits([(1 + x) / 2, (1 - x) / 2])


def two_outcome_entropy(x):
    """Shannon entropy of the distribution ``(x, 1 - x)``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"probability {x} outside [0, 1]")
    return shannon_bits([x, 1 - x])


def two_qubit_entropy_closed_form(params):
    """Closed-form (pair, single-qubit) entropies of the two-qubit family."""
    d, r, q = params.d, params.r, params.q
    s_pair = binary_entropy(d) + (1 - d) / 2 * binary_entropy(r) + (1 + d) / 2 * binary_entropy(q)
    s_qubit = binary_entropy((1 - d) / 2 * r)
    return s_pair, s_qubit


def degeneration_derivatives(p_m, d):
    """First and second derivative (bits) of the entropy with respect to the
    split ``d`` of two eigenvalues ``p_m + d`` and ``p_m - d``.

    The second derivative carries the ``1/ln 2`` factor of the base-2
    logarithm; multiplied by ``ln 2`` it is ``-2 p_m / (p_m^2 - d^2)``.
    """
    if p_m <= 0 or abs(d) >= p_m:
        raise DomainError(f"need 0 < p_m and |d| < p_m, got p_m={p_m}, d={d}")
    first = math.log2((p_m - d) / (p_m + d))
    second = -2 * p_m / ((p_m * p_m - d * d) * math.log(2))
    return first, second


@dataclass(frozen=True)
class HolevoReport:
    """Holevo quantity of a coupled-diagonal state plus coarse bounds.

    ``bounds`` holds the three measurement-scenario estimates:
    ``larger_only`` (``S_N - 2 log2 N_A``), ``independent``
    (``S_N - 2 sum p S_{j,m}``) and ``correlated`` (``S_N - log2 N_A``).
    """

    chi: float
    s_total: float
    mean_entanglement: float
    bounds: dict = field(default_factory=dict)


def holevo_chi(state):
    if state.form != "spectral":
        raise LabelError("holevo_chi needs a coupled-diagonal (spectral) state")
    s_total = von_neumann(state)
    mean_ent = sum(p * entanglement_entropy(state.s, state.l, j, m)
                   for (j, m), p in state.p.items() if p > 0)
    log_na = math.log2(state.dims[0])
    bounds = {
        "larger_only": s_total - 2 * log_na,
        "independent": s_total - 2 * mean_ent,
        "correlated": s_total - log_na,
    }
    return HolevoReport(s_total - mean_ent, s_total, mean_ent, bounds)


@dataclass(frozen=True)
class EntropyReport:
    s_total: float
    s_a: float
    s_b: float
    per_label_entanglement: dict
    holevo: HolevoReport | None = None

    def to_json(self):
        out = {
            "schema": "1",
            "s_total": self.s_total,
            "s_a": self.s_a,
            "s_b": self.s_b,
            "per_label_entanglement": {
                label_str(j, m): v for (j, m), v in self.per_label_entanglement.items()
            },
        }
        if self.holevo is not None:
            out["holevo_chi"] = self.holevo.chi
            out["holevo_bounds"] = dict(self.holevo.bounds)
        return out


def entropy_report(state):
    s_a, s_b = subchannel_entropies(state)
    per_label = {}
    holevo = None
    if state.form == "spectral":
        per_label = {lab: entanglement_entropy(state.s, state.l, *lab)
                     for lab in coupled_labels(state.s, state.l)}
        holevo = holevo_chi(state)
    return EntropyReport(von_neumann(state), s_a, s_b, per_label, holevo)

