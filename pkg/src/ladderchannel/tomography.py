"""Simulated measurement of single and paired channels, and linear-inversion
reconstruction.

Sampled records use PCG64 generators seeded with
``numpy.random.SeedSequence([seed, part_code, *setting])`` so every setting
draws from its own substream and results do not depend on evaluation order.
"""

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionError, LadderChannelError, UnderdeterminedError
from .spinops import tomo_family
from .states import ChannelState

EIG_GROUP_TOL = 1e-9
RANK_RTOL = 1e-10
PART_CODES = {"single": 0, "a": 1, "b": 2, "ab": 3}


def gell_mann_basis(n):
    """Orthonormal (Hilbert-Schmidt) basis of traceless Hermitian ``n x n`` matrices.

    Ordered as symmetric and antisymmetric off-diagonal pairs, then diagonal
    elements; shape ``(n*n - 1, n, n)``.
    """
    out = []
    r = 1 / np.sqrt(2)
    for i in range(n):
        for j in range(i + 1, n):
            sym = np.zeros((n, n), dtype=complex)
            sym[i, j] = sym[j, i] = r
            asym = np.zeros((n, n), dtype=complex)
            asym[i, j], asym[j, i] = -1j * r, 1j * r
            out += [sym, asym]
    for k in range(1, n):
        d = np.zeros(n)
        d[:k] = 1.0
        d[k] = -k
        out.append(np.diag(d / np.sqrt(k * (k + 1))).astype(complex))
    return np.array(out).reshape(-1, n, n)


def eigen_groups(op, tol=EIG_GROUP_TOL):
    """Spectral projectors of a Hermitian matrix, grouping eigenvalues within ``tol``.

    Returns a list of ``(eigenvalue, projector)`` in ascending order.
    """
    w, v = np.linalg.eigh(op)
    groups = []
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol:
            vecs = v[:, start:i]
            groups.append((float(np.mean(w[start:i])), vecs @ vecs.conj().T))
            start = i
    return groups


def trace_distance(a, b):
    diff = np.asarray(a) - np.asarray(b)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((diff + diff.conj().T) / 2))))


@dataclass(frozen=True)
class Setting:
    """One measurement setting: which part, its index, and its outcome projectors."""

    part: str
    index: tuple
    outcomes: tuple
    projectors: tuple


@dataclass(frozen=True)
class TomographyPlan:
    """Ordered measurement settings for a single or paired channel.

    For a paired plan, ``family_a`` acts on the smaller subchannel and
    ``family_b`` on the larger; joint setting ``(m, n)`` pairs B member ``m``
    with A member ``n``.
    """

    kind: str
    family_a: object
    family_b: object = None

    @property
    def axis_mode(self):
        return self.family_a.axis_mode

    @property
    def scheme(self):
        return self.family_a.scheme

    @property
    def dims(self):
        if self.kind == "single":
            return (self.family_a.dim,)
        return (self.family_a.dim, self.family_b.dim)

    @property
    def dim(self):
        return int(np.prod(self.dims))

    @property
    def n_params(self):
        return self.dim**2 - 1

    @cached_property
    def settings(self):
        out = []
        if self.kind == "single":
            for i, op in enumerate(self.family_a.members):
                groups = eigen_groups(op)
                out.append(Setting("single", (i,), tuple(e for e, _ in groups),
                                   tuple(p for _, p in groups)))
            return tuple(out)
        n_a, n_b = self.dims
        eye_a, eye_b = np.eye(n_a), np.eye(n_b)
        groups_a = [eigen_groups(op) for op in self.family_a.members]
        groups_b = [eigen_groups(op) for op in self.family_b.members]
        for n, groups in enumerate(groups_a):
            out.append(Setting("a", (n,), tuple(e for e, _ in groups),
                               tuple(np.kron(p, eye_b) for _, p in groups)))
        for m, groups in enumerate(groups_b):
            out.append(Setting("b", (m,), tuple(e for e, _ in groups),
                               tuple(np.kron(eye_a, p) for _, p in groups)))
        for m, gb in enumerate(groups_b):
            for n, ga in enumerate(groups_a):
                outcomes = tuple((ea, eb) for ea, _ in ga for eb, _ in gb)
                projs = tuple(np.kron(pa, pb) for _, pa in ga for _, pb in gb)
                out.append(Setting("ab", (m, n), outcomes, projs))
        return tuple(out)

    def setting(self, part, index):
        for st in self.settings:
            if st.part == part and st.index == tuple(index):
                return st
        raise LadderChannelError(f"plan has no setting {part} {list(index)}")


def single_plan(dim, axis_mode="paper_literal", scheme="tomo"):
    return TomographyPlan("single", tomo_family(dim, axis_mode, scheme))


def paired_plan(dims, axis_mode="paper_literal", scheme="tomo"):
    """Plan measuring both subchannel families plus every joint setting pair."""
    n_a, n_b = dims
    return TomographyPlan("paired", tomo_family(n_a, axis_mode, scheme),
                          tomo_family(n_b, axis_mode, scheme))


@dataclass(frozen=True)
class MeasurementRecord:
    """Outcome frequencies of one setting.

    Joint (``part == "ab"``) records also carry the product expectation
    ``<S^n (x) L^m>`` and the covariance ``Q_{m,n}`` implied by the frequencies.
    """

    part: str
    setting: tuple
    mode: str
    freqs: tuple
    outcomes: tuple
    shots: int | None = None
    seed: int | None = None
    product_expectation: float | None = None
    covariance: float | None = None

    def moments(self, order):
        """Moments ``<O^k>``, ``k = 1..order``, of a single-part record."""
        if self.part == "ab":
            raise LadderChannelError("moments are defined for single-part records")
        e = np.asarray(self.outcomes)
        f = np.asarray(self.freqs)
        return [float(np.dot(f, e**k)) for k in range(1, order + 1)]

    def to_json(self):
        out = {
            "part": self.part,
            "setting": list(self.setting),
            "mode": self.mode,
            "shots": self.shots,
            "seed": self.seed,
            "freqs": list(self.freqs),
            "outcomes": [list(o) if isinstance(o, tuple) else o for o in self.outcomes],
        }
        if self.part == "ab":
            out["product_expectation"] = self.product_expectation
            out["covariance"] = self.covariance
        return out

    @classmethod
    def from_json(cls, obj):
        try:
            outcomes = tuple(tuple(o) if isinstance(o, list) else o for o in obj["outcomes"])
            return cls(obj["part"], tuple(obj["setting"]), obj["mode"], tuple(obj["freqs"]),
                       outcomes, obj.get("shots"), obj.get("seed"),
                       obj.get("product_expectation"), obj.get("covariance"))
        except (KeyError, TypeError) as exc:
            raise LadderChannelError(f"malformed record: {exc}") from None


def records_to_jsonl(records):
    return "".join(json.dumps(r.to_json()) + "\n" for r in records)


def records_from_jsonl(text):
    return [MeasurementRecord.from_json(json.loads(line)) for line in text.splitlines() if line.strip()]


def _density(state):
    if isinstance(state, ChannelState):
        return state.rho
    return np.asarray(state, dtype=complex)


def _joint_stats(outcomes, freqs):
    f = np.asarray(freqs)
    ea = np.array([o[0] for o in outcomes])
    eb = np.array([o[1] for o in outcomes])
    prod = float(np.dot(f, ea * eb))
    return prod, prod - float(np.dot(f, ea)) * float(np.dot(f, eb))


def _born(rho, projectors):
    p = np.array([np.real(np.trace(rho @ pr)) for pr in projectors])
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def simulate(state, plan, mode="exact", shots=None, seed=None):
    """Measurement records for every setting in ``plan``.

    ``mode="exact"`` returns Born probabilities; ``mode="sampled"`` draws
    ``shots`` multinomial outcomes per setting from the seeded substream.
    """
    rho = _density(state)
    if rho.shape != (plan.dim, plan.dim):
        raise DimensionError(f"state dimension {rho.shape[0]} does not match plan dimension {plan.dim}")
    if mode not in ("exact", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "sampled":
        if not shots or shots <= 0:
            raise LadderChannelError("sampled mode needs shots > 0")
        if seed is None:
            raise LadderChannelError("sampled mode needs an explicit seed")
    records = []
    for st in plan.settings:
        probs = _born(rho, st.projectors)
        if mode == "sampled":
            seq = np.random.SeedSequence([int(seed), PART_CODES[st.part], *st.index])
            rng = np.random.Generator(np.random.PCG64(seq))
            freqs = rng.multinomial(int(shots), probs) / int(shots)
        else:
            freqs = probs
        extra = {}
        if st.part == "ab":
            prod, cov = _joint_stats(st.outcomes, freqs)
            extra = {"product_expectation": prod, "covariance": cov}
        records.append(MeasurementRecord(
            st.part, st.index, mode, tuple(float(x) for x in freqs), st.outcomes,
            int(shots) if mode == "sampled" else None,
            int(seed) if mode == "sampled" else None, **extra))
    return records


def covariance_entry(state, plan, m, n):
    """Exact ``Q_{m,n} = <S^n (x) L^m> - <S^n><L^m>`` for a paired plan."""
    if plan.kind != "paired":
        raise LadderChannelError("covariance needs a paired plan")
    rho = _density(state)
    s_op = plan.family_a.members[n]
    l_op = plan.family_b.members[m]
    n_a, n_b = plan.dims
    joint = np.real(np.trace(rho @ np.kron(s_op, l_op)))
    ea = np.real(np.trace(rho @ np.kron(s_op, np.eye(n_b))))
    eb = np.real(np.trace(rho @ np.kron(np.eye(n_a), l_op)))
    return float(joint - ea * eb)


def _design_rows(settings, n):
    basis = gell_mann_basis(n)
    rows, offsets = [], []
    for st in settings:
        for pr in st.projectors:
            rows.append(np.real(np.einsum("ab,kba->k", pr, basis)))
            offsets.append(np.real(np.trace(pr)) / n)
    return np.array(rows).reshape(-1, n * n - 1), np.array(offsets)


def _numerical_rank(mat):
    if mat.size == 0:
        return 0
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > RANK_RTOL * sv[0]))


def completeness_rank(plan, dims=None):
    """Rank of the linear map from traceless-Hermitian parameters to outcome
    probabilities over all settings of ``plan``."""
    if dims is not None and tuple(dims) != tuple(plan.dims):
        raise DimensionError(f"plan dims {plan.dims} differ from {tuple(dims)}")
    design, _ = _design_rows(plan.settings, plan.dim)
    return _numerical_rank(design)


def project_to_density(mat):
    """Clip negative eigenvalues and renormalize the trace."""
    mat = (mat + mat.conj().T) / 2
    w, v = np.linalg.eigh(mat)
    w = np.clip(w, 0.0, None)
    if w.sum() <= 0:
        return np.eye(mat.shape[0]) / mat.shape[0]
    w /= w.sum()
    return (v * w) @ v.conj().T


@dataclass(frozen=True)
class ReconstructionResult:
    rho_hat: np.ndarray
    rho_linear: np.ndarray
    residual_norm: float
    map_rank: int
    n_params: int
    dims: tuple
    trace_distance_to_truth: float | None = field(default=None, compare=False)

    @property
    def complete(self):
        return self.map_rank == self.n_params

    def with_truth(self, truth):
        return ReconstructionResult(self.rho_hat, self.rho_linear, self.residual_norm,
                                    self.map_rank, self.n_params, self.dims,
                                    trace_distance(self.rho_hat, _density(truth)))

    def to_state(self):
        dims = self.dims if len(self.dims) == 2 else (1, self.dims[0])
        return ChannelState((dims[0] - 1) / 2, (dims[1] - 1) / 2, rho=self.rho_hat)

    def diagnostics(self):
        out = {
            "map_rank": self.map_rank,
            "n_params": self.n_params,
            "complete": self.complete,
            "residual_norm": self.residual_norm,
        }
        if self.trace_distance_to_truth is not None:
            out["trace_distance_to_truth"] = self.trace_distance_to_truth
        return out


def reconstruct(records, plan):
    """Least-squares linear inversion followed by projection onto density matrices.

    Raises:
        UnderdeterminedError: if some setting of ``plan`` has no record.
    """
    by_key = {}
    for rec in records:
        by_key[(rec.part, tuple(rec.setting))] = rec
    used, freqs = [], []
    missing = []
    for st in plan.settings:
        rec = by_key.get((st.part, st.index))
        if rec is None:
            missing.append((st.part, st.index))
            continue
        if len(rec.freqs) != len(st.projectors):
            raise DimensionError(
                f"record {rec.part} {list(rec.setting)} has {len(rec.freqs)} outcomes, "
                f"plan expects {len(st.projectors)}")
        used.append(st)
        freqs.extend(rec.freqs)
    n = plan.dim
    design, offsets = _design_rows(used, n)
    rank = _numerical_rank(design)
    if missing:
        part, idx = missing[0]
        raise UnderdeterminedError(
            f"{len(missing)} plan settings have no record (first: {part} {list(idx)}); "
            f"map rank from supplied records is {rank}/{n * n - 1}", map_rank=rank)
    target = np.asarray(freqs) - offsets
    x, *_ = np.linalg.lstsq(design, target, rcond=RANK_RTOL)
    residual = float(np.linalg.norm(design @ x - target))
    rho_lin = np.eye(n) / n + np.einsum("k,kab->ab", x, gell_mann_basis(n))
    return ReconstructionResult(project_to_density(rho_lin), rho_lin, residual, rank,
                                n * n - 1, plan.dims)


def paired_reconstruct(marginal_records_a, marginal_records_b, covariance_records, plan):
    """Reconstruct from subchannel marginals plus the joint setting grid."""
    if plan.kind != "paired":
        raise LadderChannelError("paired reconstruction needs a paired plan")
    for name, recs, part in (("marginal A", marginal_records_a, "a"),
                             ("marginal B", marginal_records_b, "b"),
                             ("covariance", covariance_records, "ab")):
        bad = [r for r in recs if r.part != part]
        if bad:
            raise LadderChannelError(f"{name} records must have part {part!r}")
    return reconstruct(list(marginal_records_a) + list(marginal_records_b)
                       + list(covariance_records), plan)


def imaginary_sector_count(dims):
    """Number of product Gell-Mann directions (identity included) with at least one
    imaginary local factor; these are invisible to real-symmetric local settings."""
    total = 1
    real = 1
    for n in dims:
        total *= n * n
        real *= n * (n + 1) // 2
    return total - real

