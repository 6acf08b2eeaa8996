"""Entanglement indicators read off the coupled spectrum.

For a qubit coupled to a qunit (``s = 1/2``) the indicators are the
eigenvalue differences ``q_m = p_{l+1/2,m} - p_{l-1/2,m}``. For a dual
channel (``s = l``) the indicator is degeneracy of all ``p_{j,m}`` sharing
the same ``m``. Both are sufficient conditions for separability only; the
partial-transpose test supplies entanglement verdicts.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coupling import _hrange
from .errors import DimensionError, LabelError
from .serialize import half_str
from .states import ChannelState, partial_trace

ZERO_TOL = 1e-10
PPT_TOL = 1e-10
HALF = Fraction(1, 2)

# dimensions at which PPT is necessary and sufficient for separability
PPT_EXACT_DIMS = {(2, 2), (2, 3), (3, 2)}


def _require_qubit(state):
    if state.s != HALF:
        raise DimensionError(f"qubit rules need s = 1/2, got s = {half_str(state.s)}")
    if state.form != "spectral":
        raise LabelError("qubit rules need a coupled-diagonal (spectral) state")


def q_parameters(state):
    """``q_m`` for ``m = -l-1/2 .. l+1/2``.

    At the two edges the ``j = l - 1/2`` partner does not exist and is
    taken as zero, so ``q_{±(l+1/2)} = p_{l+1/2, ±(l+1/2)}``.
    """
    _require_qubit(state)
    l = state.l
    top, low = l + HALF, l - HALF
    out = {}
    for m in _hrange(-top, top):
        partner = state.prob(low, m) if abs(m) <= low else 0.0
        out[m] = state.prob(top, m) - partner
    return out


def interior_q(state):
    l = state.l
    q = q_parameters(state)
    return {m: v for m, v in q.items() if abs(m) < l + HALF}


@dataclass(frozen=True)
class Polarization:
    """Qubit deflection ``q`` with ``rho_A = I/2 + (q/2) sigma_z``.

    ``oracle`` comes from the partial trace, ``cg_formula`` from the
    ``q_m`` sum with unit edge weights, and ``half_edge_formula`` from the same
    sum with edge weights 1/2.
    """

    oracle: float
    cg_formula: float
    half_edge_formula: float


def qubit_polarization(state):
    _require_qubit(state)
    rho_a = partial_trace(state.rho, state.dims, "a")
    oracle = float(np.real(rho_a[1, 1] - rho_a[0, 0]))
    l = state.l
    top = l + HALF
    weighted = sum(2 * float(m) / float(2 * l + 1) * v for m, v in interior_q(state).items())
    edge = state.prob(top, top) - state.prob(top, -top)
    return Polarization(oracle, weighted + edge, weighted + edge / 2)


def larger_subchannel_spectrum(state):
    """Eigenvalues ``p_mu`` of the qunit from four neighbouring coupled
    eigenvalues, and the residuals ``dp_mu``.

    Returns ``(p_mu, dp_mu)``, both dicts over ``mu = -l..l``.
    """
    _require_qubit(state)
    l = state.l
    top = l + HALF
    q = q_parameters(state)
    width = float(2 * l + 1)
    p_mu, dp_mu = {}, {}
    for mu in _hrange(-l, l):
        neighbours = state.prob(top, mu + HALF) + state.prob(top, mu - HALF)
        dp = -(float(l - mu) * q[mu + HALF] + float(l + mu) * q[mu - HALF]) / width
        p_mu[mu] = neighbours + dp
        dp_mu[mu] = dp
    return p_mu, dp_mu


def partial_transpose(rho, dims):
    """Transpose over subsystem B of an A-major matrix."""
    n_a, n_b = dims
    t = np.asarray(rho).reshape(n_a, n_b, n_a, n_b)
    return t.transpose(0, 3, 2, 1).reshape(n_a * n_b, n_a * n_b)


@dataclass(frozen=True)
class PPTResult:
    verdict: str
    min_eigenvalue: float
    conclusive: bool


def ppt_check(state, dims=None):
    """Peres-Horodecki test.

    ``verdict`` is ``"ppt_pass"`` when the partial transpose has no
    eigenvalue below ``-1e-10``. ``conclusive`` is True when the verdict
    decides separability: always for a failure, and for a pass only at
    2x2 and 2x3.
    """
    if isinstance(state, ChannelState):
        rho, dims = state.rho, state.dims
    else:
        rho = np.asarray(state)
        if dims is None:
            raise DimensionError("dims are required for a bare matrix")
    if dims[0] == 1 or dims[1] == 1:
        w_min = float(np.linalg.eigvalsh(rho).min())
        return PPTResult("not_applicable", w_min, True)
    pt = partial_transpose(rho, dims)
    w_min = float(np.linalg.eigvalsh((pt + pt.conj().T) / 2).min())
    passed = w_min >= -PPT_TOL
    return PPTResult("ppt_pass" if passed else "ppt_fail", w_min,
                     (not passed) or tuple(dims) in PPT_EXACT_DIMS)


def _verdict(indicator_separable, ppt, product_diagonal):
    if indicator_separable:
        if not product_diagonal:
            raise AssertionError("vanishing indicators must give a product-diagonal matrix")
        return "separable"
    if ppt.verdict == "ppt_fail":
        return "entangled"
    return "separable" if ppt.conclusive else "undetermined"


@dataclass(frozen=True)
class WitnessReport:
    s: Fraction
    l: Fraction
    q_m: dict
    q: float
    q_cg_formula: float
    q_half_edge_formula: float
    p_mu: dict
    dp_mu: dict
    p_mu_oracle: dict
    interior_zero: bool
    product_diagonal: bool
    entangled_verdict: str
    ppt_verdict: str
    ppt_min_eigenvalue: float

    def to_json(self):
        return {
            "schema": "1",
            "kind": "qubit",
            "s": half_str(self.s),
            "l": half_str(self.l),
            "q_m": {half_str(m): v for m, v in self.q_m.items()},
            "q": self.q,
            "q_cg_formula": self.q_cg_formula,
            "q_half_edge_formula": self.q_half_edge_formula,
            "p_mu": {half_str(m): v for m, v in self.p_mu.items()},
            "dp_mu": {half_str(m): v for m, v in self.dp_mu.items()},
            "interior_q_zero": self.interior_zero,
            "product_diagonal": self.product_diagonal,
            "entangled_verdict": self.entangled_verdict,
            "ppt_verdict": self.ppt_verdict,
            "ppt_min_eigenvalue": self.ppt_min_eigenvalue,
        }

    def table(self):
        lines = [f"{'m':>8} {'q_m':>16}"]
        lines += [f"{half_str(m):>8} {v:>16.10f}" for m, v in self.q_m.items()]
        lines.append("")
        lines.append(f"{'mu':>8} {'p_mu':>16} {'dp_mu':>16}")
        lines += [f"{half_str(mu):>8} {self.p_mu[mu]:>16.10f} {self.dp_mu[mu]:>16.10f}"
                  for mu in self.p_mu]
        lines.append("")
        lines.append(f"q (partial trace)     = {self.q:.10f}")
        lines.append(f"q (edge weight 1/2)   = {self.q_half_edge_formula:.10f}")
        lines.append(f"verdict               = {self.entangled_verdict}")
        lines.append(f"ppt                   = {self.ppt_verdict} "
                     f"(min eigenvalue {self.ppt_min_eigenvalue:.3e})")
        return "\n".join(lines)


def witness_report(state):
    """All qubit-qunit indicators for a coupled-diagonal state with ``s = 1/2``."""
    _require_qubit(state)
    q_m = q_parameters(state)
    pol = qubit_polarization(state)
    p_mu, dp_mu = larger_subchannel_spectrum(state)
    rho_b = partial_trace(state.rho, state.dims, "b")
    oracle = {mu: float(np.real(rho_b[i, i])) for i, mu in enumerate(p_mu)}
    interior_zero = all(abs(v) <= ZERO_TOL for v in interior_q(state).values())
    product_diagonal = state.is_product_diagonal()
    ppt = ppt_check(state)
    return WitnessReport(
        s=state.s, l=state.l, q_m=q_m, q=pol.oracle, q_cg_formula=pol.cg_formula,
        q_half_edge_formula=pol.half_edge_formula, p_mu=p_mu, dp_mu=dp_mu, p_mu_oracle=oracle,
        interior_zero=interior_zero, product_diagonal=product_diagonal,
        entangled_verdict=_verdict(interior_zero, ppt, product_diagonal),
        ppt_verdict=ppt.verdict, ppt_min_eigenvalue=ppt.min_eigenvalue,
    )


@dataclass(frozen=True)
class DualReport:
    s: Fraction
    degenerate: bool
    spread: dict
    product_diagonal: bool
    entangled_verdict: str
    ppt_verdict: str
    ppt_min_eigenvalue: float

    def to_json(self):
        return {
            "schema": "1",
            "kind": "dual",
            "s": half_str(self.s),
            "l": half_str(self.s),
            "degenerate": self.degenerate,
            "spread": {half_str(m): v for m, v in self.spread.items()},
            "product_diagonal": self.product_diagonal,
            "entangled_verdict": self.entangled_verdict,
            "ppt_verdict": self.ppt_verdict,
            "ppt_min_eigenvalue": self.ppt_min_eigenvalue,
        }

    def table(self):
        lines = [f"{'m':>8} {'max-min p_jm':>16}"]
        lines += [f"{half_str(m):>8} {v:>16.10f}" for m, v in self.spread.items()]
        lines.append("")
        lines.append(f"degenerate            = {self.degenerate}")
        lines.append(f"verdict               = {self.entangled_verdict}")
        lines.append(f"ppt                   = {self.ppt_verdict} "
                     f"(min eigenvalue {self.ppt_min_eigenvalue:.3e})")
        return "\n".join(lines)


def dual_degeneracy_check(state):
    """Check whether ``p_{j,m}`` is independent of ``j`` for every ``m``."""
    if state.s != state.l:
        raise DimensionError("dual check needs s == l")
    if state.form != "spectral":
        raise LabelError("dual check needs a coupled-diagonal (spectral) state")
    top = 2 * state.l
    spread = {}
    for m in _hrange(-top, top):
        vals = [state.prob(j, m) for j in _hrange(abs(m), top)]
        spread[m] = max(vals) - min(vals)
    degenerate = all(v <= ZERO_TOL for v in spread.values())
    product_diagonal = state.is_product_diagonal()
    ppt = ppt_check(state)
    return DualReport(state.s, degenerate, spread, product_diagonal,
                      _verdict(degenerate, ppt, product_diagonal),
                      ppt.verdict, ppt.min_eigenvalue)
