"""Ladder-operator tools for bipartite finite-dimensional quantum channels.

Subchannel ladder operators, Clebsch-Gordan coupling of two subchannels,
coupled-diagonal states and their reductions, entropies, separability
indicators, and simulated tomography with least-squares reconstruction.
"""

from .coupling import clebsch_gordan, coupled_basis, induced_ladder
from .entropy import entanglement_entropy, entropy_report, holevo_chi, von_neumann
from .errors import (
    DimensionError,
    DomainError,
    LabelError,
    LadderChannelError,
    StateError,
    UndefinedConditionalError,
    UnderdeterminedError,
)
from .spinops import build_ladder, lagrange_observable, normal_order_decompose, tomo_family
from .states import (
    ChannelState,
    coupled_diagonal_state,
    maximally_mixed,
    partial_trace,
    pure_coupled_state,
    reduce_a,
    reduce_b,
)
from .tomography import paired_plan, reconstruct, simulate, single_plan
from .witness import dual_degeneracy_check, ppt_check, witness_report

__version__ = "0.1.0"
