"""Finite C*-dynamical systems made computable: Hilbert C^n-modules,
equivariant and cocycle representations, multipliers with positive
definiteness certificates, and reduced crossed products."""

from .core import (
    DEFAULT_TOL,
    FiniteGroup,
    FiniteSpace,
    GroupAction,
    System,
    act_on_algebra,
    cyclic_group,
    cyclic_shift_action,
    direct_product,
    is_psd,
    psd_certificate,
    symmetric_group,
    trivial_action,
)
from .hilbmod import (
    ModuleOperator,
    ModuleVector,
    NotAModuleError,
    SectionalModule,
    basis_vector,
    basis_vectors,
    canonical_rep,
    direct_sum,
    direct_sum_embed,
    inner_product,
    internal_tensor,
    module_action,
    module_norm,
    sectionalize,
    trivial_module,
    zero_vector,
)
from .equivrep import (
    CyclicVector,
    EquivariantRep,
    NotPositiveDefiniteError,
    direct_sum_reps,
    fell_absorption_unitary,
    gns_from_pd,
    is_cyclic,
    regular_rep,
    slot_embed,
    slot_restrict,
    tensor_rep,
    trivial_rep,
    unitarily_equivalent,
    verify_equivariant,
)
from .cocycle import (
    CocycleCompatibilityError,
    CocycleRep,
    EquivariantMap,
    GroupPart,
    NotBanachStoneError,
    banach_stone_extract,
    banach_stone_operator,
    cocycle_equivalent,
    cocycle_to_v,
    equivariant_maps,
    group_part,
    rho_from_sigma,
    v_to_cocycle,
    verify_cocycle,
)
from .multiplier import (
    TRACE_CONE_NOTE,
    Multiplier,
    NormBounds,
    PdCertificate,
    TraceSample,
    coefficient,
    from_group_function,
    is_positive_definite,
    multiplier_distance,
    multiply,
    norm_bounds,
    pd_sample_oracle,
    realize_via_regular,
    span_dimension,
    trace_image_sample,
    truncate_realization,
    unit_multiplier,
    zero_multiplier,
)
from .crossed import (
    CovariantRep,
    NotInAlgebraError,
    ReducedCrossedProduct,
    build_reduced,
    center_dimension,
    convolve,
    delta_function,
    fourier_coefficients,
    induced_map,
    integrated_form,
    involution,
    is_commutative,
    is_completely_positive,
    regular_covariant,
    verify_covariant,
)
from .cyclic_examples import (
    matrix_unit_family,
    matrix_unit_target,
    omega_example_rep,
    omega_system,
    sigma_example_rep,
    sigma_system,
    shift_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
