"""Exact-arithmetic n-Lie / n-Leibniz algebra toolkit."""

__version__ = "0.1.0"

from .tensor import (
    RationalTensor,
    ShapeError,
    SizeGuardError,
    SlotPermutation,
    add,
    antisymmetrize,
    contract,
    is_zero,
    kronecker_delta,
    levi_civita,
    permute,
    raise_lower,
    scale,
    symmetrize,
)
from .algebra import (
    AlgebraFileError,
    CheckReport,
    Metric,
    NaryAlgebra,
    check_cyclic,
    check_filippov,
    check_full_antisym_lowered,
    check_generalized_metric_l,
    check_metricity,
    check_skew,
    check_symmetry_property,
    cyclic_sum,
    direct_sum,
    filippov_residual,
    filippov_sampled,
    full_antisymmetrization,
    is_lie_nple,
    is_lie_triple,
    load,
    save,
    simple_filippov,
    zero_algebra,
)
from .adjoint import (
    FundamentalObject,
    LieClosure,
    ad_kernel,
    ad_matrix,
    ad_of_sum,
    basis_object,
    basis_vector,
    centre,
    compose,
    compose_sums,
    lie_closure,
)
from .forms import TraceForm, kasymov, mixed_trace, nondegenerate
from .construct import (
    ConstructionError,
    ConstructionInput,
    UnknownFixtureError,
    associated_leibniz,
    builtin,
    check_cs3,
    corollary_cs3,
    corollary_self,
    cs_so4,
    derivation_residual,
    epsilon_pair_form,
    schouten_residual,
    so_rotation_generators,
    trace_form,
    triple_from_lie,
)
from .young import (
    BudgetExceededError,
    SymmetricGroupCharacter,
    Tableau,
    YoungShape,
    character,
    classify_bracket,
    gl_dimension,
    is_lie_lple,
    isotypic_project,
    primitive_project,
)
