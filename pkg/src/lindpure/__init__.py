"""Purification of Lindblad generators, non-selective Zeno projection and accessibility analysis."""
from .accessibility import (
    LieBasis,
    accessible_pair,
    closure_defect,
    commutation_identity_check,
    full_gkls_dim,
    lie_closure,
    purified_pair,
    quartet_span_check,
)
from .gkls import (
    ControlSchedule,
    GklsGenerator,
    ad_unitary,
    assemble,
    choi,
    dissipator_superop,
    generalized_dissipator,
    hamiltonian_superop,
    is_cptp,
    propagate_piecewise,
)
from .linalg import expm, kron, partial_trace_aux, real_span_rank, unvec, vec
from .purification import (
    PurifiedSet,
    Superprojector,
    fourier_mub,
    hamiltonian_zeno,
    purify_hamiltonian_pair,
    purify_lindbladians,
    superprojector_from_basis,
)
from .zeno import (
    ZenoResult,
    appendix_a_demo,
    projected_generator,
    projected_generator_closed_form,
    reduced_dynamics,
    zeno_limit,
    zeno_product,
)

__version__ = "0.1.0"
