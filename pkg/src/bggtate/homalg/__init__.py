"""Free modules, complexes, resolutions and Hilbert data over S and the exterior algebra."""

from .complexes import (
    DoubleComplex,
    FreeComplex,
    WindowError,
    cone,
    dualize_complex,
    from_map,
    is_chain_map,
    pq_sign_isomorphism,
    single_term,
    total_complex,
    zero_complex,
)
from .free import (
    FreeModule,
    OpMatrix,
    ScalarRing,
    block_matrix,
    column_from_vector,
    hstack,
    map_from_columns,
    ring_kind,
    zero_free,
)
from .graded import (
    ModuleComplex,
    chain_map_space,
    find_isomorphism,
    free_complex_to_modules,
    free_complex_window,
)
from .hilbert import (
    HilbertData,
    ext_complex,
    ext_dims,
    ext_modules,
    hilbert_data,
    hilbert_from_resolution,
    homology,
    homology_module,
    krull_dimension,
)
from .modules import ModulePresentation, SModuleWindow, polynomial_window, random_presentation, residue_field_window
from .resolve import (
    cancel_at,
    free_to_lambda,
    image_generators,
    kernel_generators,
    lambda_cover,
    lambda_resolution,
    left_kernel_step,
    minimal_free_resolution,
    minimal_generators,
    minimal_presentation,
    minimize_complex,
    opmatrix_to_graded,
    resolve_as_given,
    resolve_kernel_leftwards,
    series_inverse,
)

__all__ = [name for name in dir() if not name.startswith("_")]
