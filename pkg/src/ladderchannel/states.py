"""States of the composite channel, their reductions and joint statistics."""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .coupling import (
    clebsch_gordan,
    coupled_basis,
    coupled_labels,
    _cg_column,
    _hrange,
)
from .errors import (
    DimensionError,
    LabelError,
    LadderChannelError,
    StateError,
    UndefinedConditionalError,
)
from .serialize import half, half_str, label_str, matrix_from_json, matrix_to_json, parse_label

NORM_TOL = 1e-10
CLIP_TOL = 1e-10
HERMITIAN_TOL = 1e-12


def _clip_probabilities(p, what="probability"):
    p = np.asarray(p, dtype=float)
    if np.any(p < -CLIP_TOL):
        raise StateError(f"negative {what} {p.min():.3g}")
    p = np.where(p < 0, 0.0, p)
    total = p.sum()
    if abs(total - 1.0) > NORM_TOL:
        raise StateError(f"{what} sum to {total!r}, not 1")
    return p / total


def _readonly(arr):
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ReducedState:
    """Density matrix of one subchannel.

    ``probabilities`` is the diagonal in ascending-``m`` order; ``eigs`` the
    spectrum sorted descending.
    """

    dim: int
    rho: np.ndarray
    eigs: np.ndarray

    @property
    def probabilities(self):
        return np.real(np.diag(self.rho)).copy()

    @property
    def rank(self):
        return int(np.sum(self.eigs > 1e-12))

    def is_diagonal(self, tol=1e-10):
        off = self.rho - np.diag(np.diag(self.rho))
        return bool(np.max(np.abs(off), initial=0.0) <= tol)


def _reduced(rho):
    rho = (rho + rho.conj().T) / 2
    eigs = np.clip(np.linalg.eigvalsh(rho)[::-1], 0.0, None)
    eigs = eigs / eigs.sum()
    return ReducedState(rho.shape[0], _readonly(rho), _readonly(eigs))


class ChannelState:
    """Density matrix of a bipartite channel.

    Stored either as a spectrum over coupled labels (``form == "spectral"``)
    or as a full matrix over the A-major product basis (``form == "matrix"``).
    The other representation is derived lazily. Instances are treated as
    immutable.
    """

    def __init__(self, s, l, *, p=None, rho=None):
        self.s = half(s)
        self.l = half(l)
        if (p is None) == (rho is None):
            raise LadderChannelError("give exactly one of p (spectral) or rho (matrix)")
        if p is not None:
            if self.s > self.l:
                raise LabelError("spectral states need s <= l (A is the smaller subchannel)")
            self._p = self._check_spectrum(p)
            self._rho = None
        else:
            self._p = None
            self._rho = self._check_matrix(rho)

    # -- validation -------------------------------------------------------

    def _check_spectrum(self, p):
        labels = coupled_labels(self.s, self.l)
        known = set(labels)
        clean = {}
        for key, value in p.items():
            if isinstance(key, str):
                key = parse_label(key)
            key = (half(key[0]), half(key[1]))
            if key not in known:
                raise LabelError(
                    f"label {label_str(*key)} does not exist for "
                    f"s={half_str(self.s)}, l={half_str(self.l)}")
            clean[key] = clean.get(key, 0.0) + float(value)
        vec = _clip_probabilities([clean.get(lab, 0.0) for lab in labels])
        return dict(zip(labels, vec.tolist()))

    def _check_matrix(self, rho):
        rho = np.asarray(rho, dtype=complex)
        n = self.dims[0] * self.dims[1]
        if rho.shape != (n, n):
            raise DimensionError(f"rho has shape {rho.shape}, expected {(n, n)}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-10:
            raise StateError("rho is not Hermitian")
        rho = (rho + rho.conj().T) / 2
        tr = np.trace(rho).real
        if abs(tr - 1.0) > NORM_TOL:
            raise StateError(f"trace of rho is {tr!r}, not 1")
        w = np.linalg.eigvalsh(rho)
        if w.min() < -CLIP_TOL:
            raise StateError(f"rho is not positive semidefinite (min eigenvalue {w.min():.3g})")
        return _readonly(rho)

    # -- accessors --------------------------------------------------------

    @property
    def form(self):
        return "spectral" if self._p is not None else "matrix"

    @property
    def basis_tag(self):
        return "coupled_diagonal" if self._p is not None else "general"

    @property
    def dims(self):
        return int(2 * self.s + 1), int(2 * self.l + 1)

    @property
    def dim(self):
        a, b = self.dims
        return a * b

    @property
    def p(self):
        """Probabilities over coupled labels; ``None`` for matrix-form states."""
        return None if self._p is None else dict(self._p)

    def prob(self, j, m):
        if self._p is None:
            raise LadderChannelError("matrix-form state has no coupled spectrum")
        return self._p.get((half(j), half(m)), 0.0)

    @cached_property
    def rho(self):
        if self._rho is not None:
            return self._rho
        basis = coupled_basis(self.s, self.l)
        p = np.array([self._p[lab] for lab in basis.labels])
        u = basis.unitary
        return _readonly((u * p) @ u.T)

    @cached_property
    def spectrum(self):
        """All eigenvalues, descending."""
        if self._p is not None:
            w = np.sort(np.array(list(self._p.values())))[::-1]
        else:
            w = np.clip(np.linalg.eigvalsh(self._rho)[::-1], 0.0, None)
        return _readonly(w)

    def coupled_spectrum(self):
        """Diagonal of rho in the coupled basis, keyed by label.

        Equals ``p`` for spectral states; for matrix states it is the
        coupled-basis diagonal (exactly the spectrum only when the state is
        coupled-diagonal). Requires ``s <= l``.
        """
        if self._p is not None:
            return dict(self._p)
        basis = coupled_basis(self.s, self.l)
        if basis.swapped:
            raise LabelError("coupled spectrum needs s <= l")
        u = basis.unitary
        diag = np.real(np.einsum("ij,ik,kj->j", u, self._rho, u))
        return dict(zip(basis.labels, diag.tolist()))

    def to_matrix_form(self):
        return ChannelState(self.s, self.l, rho=self.rho)

    def is_product_diagonal(self, tol=1e-10):
        rho = self.rho
        off = rho - np.diag(np.diag(rho))
        return bool(np.max(np.abs(off), initial=0.0) <= tol)

    # -- serialization -----------------------------------------------------

    def to_json(self):
        if self._p is not None:
            return {
                "s": half_str(self.s),
                "l": half_str(self.l),
                "form": "spectral",
                "p": {label_str(j, m): v for (j, m), v in self._p.items()},
            }
        return {"form": "matrix", "dims": list(self.dims), "rho": matrix_to_json(self._rho)}

    @classmethod
    def from_json(cls, obj):
        try:
            form = obj["form"]
            if form == "spectral":
                return cls(obj["s"], obj["l"], p=obj["p"])
            if form == "matrix":
                n_a, n_b = (int(x) for x in obj["dims"])
                if n_a < 1 or n_b < 1:
                    raise DimensionError("dims must be positive")
                return cls(Fraction(n_a - 1, 2), Fraction(n_b - 1, 2), rho=matrix_from_json(obj["rho"]))
        except (KeyError, TypeError) as exc:
            raise LadderChannelError(f"malformed state JSON: missing or bad field {exc}") from None
        raise LadderChannelError(f"unknown state form {form!r}")

    def __repr__(self):
        return f"ChannelState(s={half_str(self.s)}, l={half_str(self.l)}, form={self.form})"


def coupled_diagonal_state(s, l, p):
    """State diagonal in the coupled basis with weights ``p[(j, m)]``.

    Missing labels get probability zero.
    """
    return ChannelState(s, l, p=p)


def maximally_mixed(s, l):
    labels = coupled_labels(s, l)
    return ChannelState(s, l, p={lab: 1.0 / len(labels) for lab in labels})


def pure_coupled_state(s, l, j, m):
    return ChannelState(s, l, p={(half(j), half(m)): 1.0})


def matrix_state(rho, dims):
    n_a, n_b = dims
    return ChannelState(Fraction(n_a - 1, 2), Fraction(n_b - 1, 2), rho=rho)


def random_coupled_state(s, l, rng):
    """Coupled-diagonal state with a flat-Dirichlet spectrum."""
    labels = coupled_labels(s, l)
    w = rng.dirichlet(np.ones(len(labels)))
    return ChannelState(s, l, p=dict(zip(labels, w.tolist())))


def random_density_matrix(n, rng, rank=None):
    """Random density matrix from a complex Ginibre matrix (Hilbert-Schmidt measure)."""
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


# -- reductions ---------------------------------------------------------------


def partial_trace(rho, dims, keep):
    """Partial trace by direct index contraction.

    Args:
        rho: ``(N_A N_B) x (N_A N_B)`` matrix in A-major order.
        dims: ``(N_A, N_B)``.
        keep: ``"a"`` or ``"b"``, the subsystem to keep.
    """
    n_a, n_b = dims
    t = np.asarray(rho).reshape(n_a, n_b, n_a, n_b)
    if keep == "a":
        return np.einsum("ikjk->ij", t)
    if keep == "b":
        return np.einsum("kikj->ij", t)
    raise ValueError("keep must be 'a' or 'b'")


def _subchannel_probabilities(state, which):
    s, l = state.s, state.l
    if which == "a":
        out = np.zeros(int(2 * s + 1))
        for (j, m), pjm in state.p.items():
            if pjm:
                for ms, c in _cg_column(s, l, j, m):
                    out[int(ms + s)] += pjm * c * c
    else:
        out = np.zeros(int(2 * l + 1))
        for (j, m), pjm in state.p.items():
            if pjm:
                for ms, c in _cg_column(s, l, j, m):
                    out[int(m - ms + l)] += pjm * c * c
    return out


def reduce_a(state):
    """Reduced state of subchannel A.

    Spectral states use the squared Clebsch-Gordan weights directly (the
    reduction is diagonal); matrix states use the partial trace.
    """
    if state.form == "spectral":
        return _reduced(np.diag(_subchannel_probabilities(state, "a")).astype(complex))
    return _reduced(partial_trace(state.rho, state.dims, "a"))


def reduce_b(state):
    """Reduced state of subchannel B (see :func:`reduce_a`)."""
    if state.form == "spectral":
        return _reduced(np.diag(_subchannel_probabilities(state, "b")).astype(complex))
    return _reduced(partial_trace(state.rho, state.dims, "b"))


def pure_state_reduction(s, l, j, m):
    """Common reduction of a pure coupled state, over ``m_s`` of subchannel A.

    The diagonal holds ``C_{j,m;m_s}^2``; the B reduction has the same
    nonzero spectrum.
    """
    s, l, j, m = (half(x) for x in (s, l, j, m))
    if (j, m) not in set(coupled_labels(s, l)):
        raise LabelError(f"label {label_str(j, m)} does not exist")
    probs = np.zeros(int(2 * s + 1))
    for ms, c in _cg_column(s, l, j, m):
        probs[int(ms + s)] = c * c
    return _reduced(np.diag(probs).astype(complex))


# -- joint statistics ---------------------------------------------------------


def _check_projection(x, rank, name):
    x = half(x)
    if abs(x) > rank or (rank - x).denominator != 1:
        raise LabelError(f"{name}={half_str(x)} is not a projection of rank {half_str(rank)}")
    return x


def joint_probability(state, m_a, m_b):
    """Probability that A reads ``m_a`` and B reads ``m_b`` together.

    Spectral states use ``sum_j p_{j, m_a+m_b} C^2_{j, m_a+m_b; m_a}``; matrix
    states read the product-basis diagonal.
    """
    m_a = _check_projection(m_a, state.s, "m_a")
    m_b = _check_projection(m_b, state.l, "m_b")
    if state.form == "spectral":
        m = m_a + m_b
        total = 0.0
        for j in _hrange(abs(state.l - state.s), state.l + state.s):
            if abs(m) <= j:
                c = clebsch_gordan(state.s, state.l, j, m, m_a)
                total += state.prob(j, m) * c * c
        return total
    return joint_probability_trace(state, m_a, m_b)


def joint_probability_trace(state, m_a, m_b):
    """``Tr(rho P^A_{m_a} P^B_{m_b})`` by explicit projector products."""
    n_a, n_b = state.dims
    pa = np.zeros((n_a, n_a))
    pa[int(half(m_a) + state.s), int(half(m_a) + state.s)] = 1.0
    pb = np.zeros((n_b, n_b))
    pb[int(half(m_b) + state.l), int(half(m_b) + state.l)] = 1.0
    return float(np.real(np.trace(state.rho @ np.kron(pa, pb))))


def joint_table(state):
    """``(N_A, N_B)`` array of joint probabilities, rows ``m_a`` ascending."""
    rows = []
    for m_a in _hrange(-state.s, state.s):
        rows.append([joint_probability(state, m_a, m_b) for m_b in _hrange(-state.l, state.l)])
    return np.array(rows)


def conditional_probability(s, l, j, m, k, n):
    """``P(B = k | A = n)`` for the pure coupled state ``|j, m>``.

    The subchannels are perfectly correlated, so this is 1 when
    ``k == m - n`` and 0 otherwise.

    Raises:
        UndefinedConditionalError: if ``A = n`` has zero probability.
    """
    s, l, j, m, k, n = (half(x) for x in (s, l, j, m, k, n))
    if (j, m) not in set(coupled_labels(s, l)):
        raise LabelError(f"label {label_str(j, m)} does not exist")
    if abs(clebsch_gordan(s, l, j, m, n)) < 1e-14:
        raise UndefinedConditionalError(
            f"outcome m_s={half_str(n)} has zero probability in |{label_str(j, m)}>")
    return 1.0 if k == m - n else 0.0


# -- parametric families -----------------------------------------------------


@dataclass(frozen=True)
class TwoQubitParams:
    """Mixing parameters of the two-qubit family.

    ``d`` splits product vs entangled weight, ``r`` splits the two product
    states, ``q`` splits singlet vs entangled triplet.
    """

    d: float
    r: float
    q: float

    def __post_init__(self):
        for name in ("d", "r", "q"):
            v = getattr(self, name)
            if not -1.0 <= v <= 1.0:
                raise StateError(f"{name}={v} outside [-1, 1]")

    @property
    def p0(self):
        return (1 - self.d) / 2 * (1 - self.r) / 2

    @property
    def p1(self):
        return (1 - self.d) / 2 * (1 + self.r) / 2

    @property
    def pt(self):
        return (1 + self.d) / 2 * (1 - self.q) / 2

    @property
    def ps(self):
        return (1 + self.d) / 2 * (1 + self.q) / 2


def two_qubit_state(params):
    """Two-qubit state with weights ``p_1`` on ``|1,1>``, ``p_0`` on ``|1,-1>``,
    ``p_t`` on ``|1,0>`` and ``p_s`` on the singlet."""
    h = Fraction(1, 2)
    one = Fraction(1)
    return ChannelState(h, h, p={
        (one, one): params.p1,
        (one, -one): params.p0,
        (one, Fraction(0)): params.pt,
        (Fraction(0), Fraction(0)): params.ps,
    })


def qubit_qutrit_mix(d):
    """Mix of ``|3/2, 1/2>`` and ``|1/2, 1/2>`` with weights ``(1 + d)/2``, ``(1 - d)/2``."""
    if not -1.0 <= d <= 1.0:
        raise StateError(f"d={d} outside [-1, 1]")
    h = Fraction(1, 2)
    return ChannelState(h, 1, p={(Fraction(3, 2), h): (1 + d) / 2, (h, h): (1 - d) / 2})
