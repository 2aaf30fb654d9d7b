from .catalyst import CatalystSpec, CatalystVerdict, catalyst_no_go_check
from .clonability import (
    ClonabilityVerdict,
    ObstructionReport,
    Reason,
    is_clonable_set,
    schmidt_rank_obstruction,
)
from .equivalence import ClockShiftResult, clock_shift_equivalence
from .representation import NParametrization, apply_branch, derive_m_from_n
from .witness import WitnessReport, witness_search

__all__ = [
    "CatalystSpec",
    "CatalystVerdict",
    "ClockShiftResult",
    "ClonabilityVerdict",
    "NParametrization",
    "ObstructionReport",
    "Reason",
    "WitnessReport",
    "apply_branch",
    "catalyst_no_go_check",
    "clock_shift_equivalence",
    "derive_m_from_n",
    "is_clonable_set",
    "schmidt_rank_obstruction",
    "witness_search",
]
