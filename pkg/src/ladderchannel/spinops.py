"""Ladder operators of an N-dimensional state space and observables built from them.

Basis index ``k = 1..N`` (0-based ``k - 1`` in arrays) carries the magnetic
number ``m = k - (N + 1)/2``, so every array in this module is ordered by
ascending ``m``.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DimensionError

AXIS_MODES = ("paper_literal", "phase_generalized")
ANGLE_SCHEMES = ("tomo", "pair")

# above this size equispaced Lagrange coefficients are not trustworthy
LAGRANGE_STABLE_MAX = 12


def _frozen(arr, dtype=complex):
    arr = np.array(arr, dtype=dtype)
    arr.setflags(write=False)
    return arr


def commutator(a, b):
    """Return ``a @ b - b @ a``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise DimensionError(f"commutator needs equal square shapes, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def magnetic_numbers(dim):
    """Eigenvalues of ``J3`` in basis order: ``k - (N+1)/2`` for ``k = 1..N``."""
    return np.arange(1, dim + 1) - (dim + 1) / 2


@dataclass(frozen=True)
class LadderSet:
    """Raising, lowering and diagonal operators for one dimension."""

    dim: int
    j_plus: np.ndarray
    j_minus: np.ndarray
    j3: np.ndarray

    @property
    def rank(self):
        return Fraction(self.dim - 1, 2)

    @property
    def jx(self):
        return (self.j_plus + self.j_minus) / 2

    @property
    def jy(self):
        return (self.j_plus - self.j_minus) / 2j

    def casimir(self):
        """``J+ J- + J3^2 - J3``, equal to ``j(j+1)`` times identity."""
        return self.j_plus @ self.j_minus + self.j3 @ self.j3 - self.j3


def build_ladder(dim):
    """Build the ladder set for a ``dim``-dimensional space.

    ``J+`` has ``sqrt((N-k) k)`` at row ``k+1``, column ``k`` (1-based);
    ``J-`` is its adjoint and ``J3`` is diagonal with the magnetic numbers.
    """
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise DimensionError(f"dimension must be a positive integer, got {dim!r}")
    dim = int(dim)
    k = np.arange(1, dim)
    jp = np.zeros((dim, dim), dtype=complex)
    jp[k, k - 1] = np.sqrt((dim - k) * k)
    return LadderSet(
        dim=dim,
        j_plus=_frozen(jp),
        j_minus=_frozen(jp.conj().T),
        j3=_frozen(np.diag(magnetic_numbers(dim))),
    )


def diagonal_observable(eigs, dim=None):
    """Observable diagonal in the working basis with the given eigenvalues."""
    eigs = np.asarray(eigs, dtype=float)
    if eigs.ndim != 1 or eigs.size == 0:
        raise DimensionError("eigenvalues must be a non-empty 1-d sequence")
    if dim is not None and eigs.size != dim:
        raise DimensionError(f"expected {dim} eigenvalues, got {eigs.size}")
    return np.diag(eigs).astype(complex)


@dataclass(frozen=True)
class LagrangeObservable:
    """Interpolating polynomial through ``(m_k, value_k)`` on the J3 spectrum.

    ``coefficients`` are in ascending powers and are ``None`` when the
    dimension exceeds :data:`LAGRANGE_STABLE_MAX` (``stable`` is then False and
    ``matrix`` falls back to the direct diagonal).
    """

    nodes: np.ndarray
    values: np.ndarray
    weights: np.ndarray
    coefficients: np.ndarray | None
    stable: bool
    matrix: np.ndarray

    @property
    def dim(self):
        return self.nodes.size

    def __call__(self, x):
        """Scalar evaluation with the second (true) barycentric formula."""
        x = float(x)
        diff = x - self.nodes
        hit = np.flatnonzero(diff == 0.0)
        if hit.size:
            return float(self.values[hit[0]])
        t = self.weights / diff
        return float(np.dot(t, self.values) / t.sum())

    def evaluate_matrix(self, mat):
        """Evaluate the polynomial at a square matrix.

        Uses the first barycentric form
        ``sum_k w_k v_k prod_{i != k} (A - x_i I)``.
        """
        mat = np.asarray(mat, dtype=complex)
        n = mat.shape[0]
        eye = np.eye(n)
        shifted = [mat - x * eye for x in self.nodes]
        out = np.zeros((n, n), dtype=complex)
        for k, (w, v) in enumerate(zip(self.weights, self.values)):
            if v == 0.0:
                continue
            term = eye.astype(complex)
            for i, s in enumerate(shifted):
                if i != k:
                    term = term @ s
            out += (w * v) * term
        return out


def _equispaced_weights(dim):
    # w_k = 1 / prod_{i != k}(x_k - x_i) for unit spacing
    fact = math.factorial(dim - 1)
    return np.array([(-1) ** (dim - 1 - k) * math.comb(dim - 1, k) / fact for k in range(dim)])


def lagrange_observable(values, dim=None):
    """Diagonal observable written as a polynomial in ``J3``."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise DimensionError("values must be a non-empty 1-d sequence")
    if dim is not None and values.size != dim:
        raise DimensionError(f"expected {dim} values, got {values.size}")
    n = values.size
    nodes = magnetic_numbers(n)
    weights = _equispaced_weights(n)
    stable = n <= LAGRANGE_STABLE_MAX
    coefficients = None
    if stable:
        coefficients = np.zeros(n)
        for k in range(n):
            others = np.delete(nodes, k)
            basis = np.polynomial.polynomial.polyfromroots(others) if n > 1 else np.ones(1)
            coefficients += weights[k] * values[k] * basis
        result = LagrangeObservable(nodes, values, weights, coefficients, True, None)
        matrix = result.evaluate_matrix(np.diag(nodes))
    else:
        matrix = diagonal_observable(values)
    for arr in (nodes, values, weights, coefficients, matrix):
        if arr is not None:
            arr.setflags(write=False)
    return LagrangeObservable(nodes, values, weights, coefficients, stable, matrix)


@dataclass(frozen=True)
class ObservableFamily:
    """Ordered set of rotated ``J3`` observables.

    Each member is ``cos(phi) J3 + sin(phi) (J+ e^{i theta} + J- e^{-i theta}) / 2``
    and ``angles`` holds the matching ``(phi, theta)`` pairs.
    """

    dim: int
    members: tuple
    angles: tuple
    axis_mode: str = "paper_literal"
    scheme: str = "tomo"

    def __len__(self):
        return len(self.members)


def polar_angles(dim, scheme="tomo"):
    """Polar angles for the ``dim + 1`` settings of a family.

    ``"tomo"`` gives ``m pi / (N + 1)``; ``"pair"`` gives ``m 2 pi / N``;
    both for ``m = 0..N``.
    """
    m = np.arange(dim + 1)
    if scheme == "tomo":
        return m * np.pi / (dim + 1)
    if scheme == "pair":
        return m * 2 * np.pi / dim
    raise ValueError(f"unknown angle scheme {scheme!r}; choose from {ANGLE_SCHEMES}")


def rotated_j3(ladder, phi, theta=0.0):
    jt = (ladder.j_plus * np.exp(1j * theta) + ladder.j_minus * np.exp(-1j * theta)) / 2
    return np.cos(phi) * ladder.j3 + np.sin(phi) * jt


def tomo_family(dim, axis_mode="paper_literal", scheme="tomo"):
    """Family of mutually non-commuting observables for tomography.

    ``paper_literal`` keeps ``theta = 0`` for every polar angle (N + 1
    members, all real symmetric). ``phase_generalized`` keeps the first
    member and repeats every other polar angle over the phase grid
    ``theta_k = k pi / N``, ``k = 0..N-1``, giving ``1 + N^2`` members.
    """
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise DimensionError(f"tomography needs dim >= 2, got {dim!r}")
    if axis_mode not in AXIS_MODES:
        raise ValueError(f"unknown axis mode {axis_mode!r}; choose from {AXIS_MODES}")
    ladder = build_ladder(int(dim))
    phis = polar_angles(dim, scheme)
    if axis_mode == "paper_literal":
        angles = [(float(p), 0.0) for p in phis]
    else:
        thetas = [k * np.pi / dim for k in range(dim)]
        angles = [(float(phis[0]), 0.0)]
        angles += [(float(p), float(t)) for p in phis[1:] for t in thetas]
    members = tuple(_frozen(rotated_j3(ladder, p, t)) for p, t in angles)
    return ObservableFamily(int(dim), members, tuple(angles), axis_mode, scheme)


@dataclass(frozen=True)
class NormalOrderDecomposition:
    """Coefficients of ``obs = sum c[a, b] J+^a J-^b`` with solve diagnostics."""

    coefficients: dict = field(repr=False)
    rank: int
    residual: float
    dim: int

    @property
    def full_rank(self):
        return self.rank == self.dim**2

    def reconstruct(self, ladder):
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for (a, b), c in self.coefficients.items():
            out += c * _monomial(ladder, a, b)
        return out


def _monomial(ladder, a, b):
    mp = np.linalg.matrix_power
    return mp(ladder.j_plus, a) @ mp(ladder.j_minus, b)


def normal_order_decompose(obs, ladder):
    """Expand ``obs`` over the normally ordered monomials ``J+^a J-^b``.

    The N^2 monomials with ``0 <= a, b <= N-1`` are vectorized and the
    coefficients found by least squares. ``rank`` is the numerical rank of
    the monomial set and ``residual`` the Frobenius norm of the misfit; a
    rank below N^2 means the monomials do not span the operator space.
    """
    obs = np.asarray(obs, dtype=complex)
    n = ladder.dim
    if obs.shape != (n, n):
        raise DimensionError(f"observable shape {obs.shape} does not match ladder dim {n}")
    keys = [(a, b) for a in range(n) for b in range(n)]
    design = np.column_stack([_monomial(ladder, a, b).ravel() for a, b in keys])
    coef, _, rank, _ = np.linalg.lstsq(design, obs.ravel(), rcond=None)
    residual = float(np.linalg.norm(design @ coef - obs.ravel()))
    coefficients = {key: complex(c) for key, c in zip(keys, coef)}
    return NormalOrderDecomposition(coefficients, int(rank), residual, n)
