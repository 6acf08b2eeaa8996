import math
from fractions import Fraction as F

import numpy as np
import pytest

from ladderchannel.coupling import coupled_labels
from ladderchannel.entropy import (
    binary_entropy,
    degeneration_derivatives,
    entanglement_entropy,
    entropy_report,
    holevo_chi,
    shannon_bits,
    subchannel_entropies,
    two_outcome_entropy,
    two_qubit_entropy_closed_form,
    von_neumann,
)
from ladderchannel.errors import DomainError, LabelError
from ladderchannel.states import (
    TwoQubitParams,
    coupled_diagonal_state,
    maximally_mixed,
    pure_coupled_state,
    random_coupled_state,
    reduce_a,
    two_qubit_state,
)

from oracles import entropy_by_eigh, partial_trace_loops

H = F(1, 2)
LOG3 = math.log2(3)


def test_von_neumann_basics():
    assert von_neumann(pure_coupled_state(1, 1, 0, 0)) == 0.0
    assert von_neumann(maximally_mixed(1, 1)) == pytest.approx(math.log2(9), abs=1e-12)
    assert shannon_bits([0.5, 0.25, 0.25]) == pytest.approx(1.5)
    assert von_neumann(np.diag([0.5, 0.25, 0.25])) == pytest.approx(1.5)
    assert shannon_bits([]) == 0.0


def test_subchannel_entropies():
    assert subchannel_entropies(pure_coupled_state(H, H, 0, 0)) == pytest.approx((1.0, 1.0))
    assert subchannel_entropies(pure_coupled_state(H, H, 1, 1)) == pytest.approx((0.0, 0.0))
    h13 = -(1 / 3) * math.log2(1 / 3) - (2 / 3) * math.log2(2 / 3)
    assert h13 == pytest.approx(0.918296, abs=1e-6)
    assert subchannel_entropies(pure_coupled_state(H, 1, 3 * H, H)) == pytest.approx((h13, h13))


def test_dual_qutrit_entanglement_entropies():
    assert entanglement_entropy(1, 1, 0, 0) == pytest.approx(LOG3, abs=1e-12)
    for m in (-1, 0, 1):
        assert entanglement_entropy(1, 1, 1, m) == pytest.approx(1.0, abs=1e-12)
    assert entanglement_entropy(1, 1, 2, 0) == pytest.approx(LOG3 - 1 / 3, abs=1e-12)
    assert entanglement_entropy(1, 1, 2, 1) == pytest.approx(1.0, abs=1e-12)
    assert entanglement_entropy(1, 1, 2, -2) == 0.0
    with pytest.raises(LabelError):
        entanglement_entropy(1, 1, 3, 0)


@pytest.mark.parametrize("s,l", [(H, 1), (1, 2), (3 * H, 5 * H)])
def test_entanglement_entropy_matches_reduced_matrix(s, l):
    for j, m in coupled_labels(s, l):
        st = pure_coupled_state(s, l, j, m)
        want = entropy_by_eigh(partial_trace_loops(st.rho, st.dims, "a"))
        assert entanglement_entropy(s, l, j, m) == pytest.approx(want, abs=1e-10)
        assert entanglement_entropy(l, s, j, m) == pytest.approx(want, abs=1e-10)


def test_binary_entropy():
    assert binary_entropy(0) == 1.0
    assert binary_entropy(1) == 0.0
    assert binary_entropy(0.5) == pytest.approx(2 - 0.75 * LOG3, abs=1e-12)
    assert binary_entropy(0.5) == pytest.approx(0.811278, abs=1e-6)
    assert two_outcome_entropy(0.5) == 1.0
    with pytest.raises(DomainError):
        binary_entropy(1.5)
    with pytest.raises(DomainError):
        two_outcome_entropy(-0.1)


def test_two_qubit_closed_form_examples():
    assert two_qubit_entropy_closed_form(TwoQubitParams(1, 0, 0)) == pytest.approx((1.0, 1.0))
    assert two_qubit_entropy_closed_form(TwoQubitParams(1, 0, 1)) == pytest.approx((0.0, 1.0))
    params = TwoQubitParams(0.6, 0.9, 0.0)
    st = two_qubit_state(params)
    s_pair, s_qubit = two_qubit_entropy_closed_form(params)
    assert s_pair == pytest.approx(entropy_by_eigh(st.rho), abs=1e-10)
    assert s_qubit == pytest.approx(entropy_by_eigh(partial_trace_loops(st.rho, (2, 2), "a")), abs=1e-10)


def test_degeneration_derivatives():
    first, second = degeneration_derivatives(0.25, 0.0)
    assert first == 0.0
    assert second < 0
    # in natural-log units the second derivative is -2 / p_m
    assert second * math.log(2) == pytest.approx(-2 / 0.25)
    assert degeneration_derivatives(0.25, 0.125)[0] == pytest.approx(-LOG3)
    a, b = degeneration_derivatives(0.3, 0.1), degeneration_derivatives(0.3, -0.1)
    assert a[0] == pytest.approx(-b[0]) and a[1] == pytest.approx(b[1])
    with pytest.raises(DomainError):
        degeneration_derivatives(0.2, 0.2)


@pytest.mark.parametrize("p_m,d", [(0.25, 0.0), (0.2, 0.07), (0.4, -0.3)])
def test_degeneration_derivatives_by_finite_difference(p_m, d):
    def pair_entropy(x):
        return shannon_bits([p_m + x, p_m - x])

    eps = 1e-4
    first, second = degeneration_derivatives(p_m, d)
    fd1 = (pair_entropy(d + eps) - pair_entropy(d - eps)) / (2 * eps)
    fd2 = (pair_entropy(d + eps) - 2 * pair_entropy(d) + pair_entropy(d - eps)) / eps**2
    assert first == pytest.approx(fd1, abs=1e-6)
    assert second == pytest.approx(fd2, abs=1e-4)


def test_holevo_uniform_dual_qutrit():
    rep = holevo_chi(maximally_mixed(1, 1))
    direct = math.log2(9) - (2 * LOG3 + 5 - 1 / 3) / 9
    assert rep.chi == pytest.approx(direct, abs=1e-12)
    assert rep.chi == pytest.approx(2.29919, abs=1e-5)
    assert set(rep.bounds) == {"larger_only", "independent", "correlated"}
    assert rep.bounds["correlated"] == pytest.approx(math.log2(9) - LOG3)


def test_holevo_special_cases():
    assert holevo_chi(pure_coupled_state(H, 1, 3 * H, 3 * H)).chi == 0.0
    st = coupled_diagonal_state(H, 1, {(3 * H, 3 * H): 0.3, (3 * H, -3 * H): 0.7})
    assert holevo_chi(st).chi == pytest.approx(von_neumann(st))
    with pytest.raises(LabelError):
        holevo_chi(maximally_mixed(H, H).to_matrix_form())


def test_entropy_report_json():
    rng = np.random.default_rng(9)
    st = random_coupled_state(H, 1, rng)
    rep = entropy_report(st)
    obj = rep.to_json()
    assert obj["schema"] == "1"
    assert obj["s_a"] == pytest.approx(entropy_by_eigh(reduce_a(st).rho))
    assert "3/2,1/2" in obj["per_label_entanglement"]
    assert "holevo_chi" in obj
    assert "holevo_chi" not in entropy_report(st.to_matrix_form()).to_json()


def test_entanglement_entropy_bounded_and_symmetric():
    for ts in range(1, 6):
        for tl in range(ts, 10):
            s, l = F(ts, 2), F(tl, 2)
            for j, m in coupled_labels(s, l):
                ent = entanglement_entropy(s, l, j, m)
                assert ent <= math.log2(2 * s + 1) + 1e-12
    for s, l in [(H, 1), (1, 3 * H), (3 * H, 2)]:
        for j, m in coupled_labels(s, l):
            st = pure_coupled_state(s, l, j, m)
            s_a = entropy_by_eigh(partial_trace_loops(st.rho, st.dims, "a"))
            s_b = entropy_by_eigh(partial_trace_loops(st.rho, st.dims, "b"))
            assert s_a == pytest.approx(s_b, abs=1e-10)


@pytest.mark.parametrize("p_m,d", [(0.25, 0.0), (0.3, 0.1), (0.45, -0.2)])
def test_degeneration_derivatives_small_step(p_m, d):
    def pair_entropy(x):
        return shannon_bits([p_m + x, p_m - x])

    eps = 1e-5
    first, second = degeneration_derivatives(p_m, d)
    fd1 = (pair_entropy(d + eps) - pair_entropy(d - eps)) / (2 * eps)
    fd2 = (pair_entropy(d + eps) - 2 * pair_entropy(d) + pair_entropy(d - eps)) / eps**2
    assert first == pytest.approx(fd1, abs=1e-6)
    assert second == pytest.approx(fd2, rel=1e-4)
