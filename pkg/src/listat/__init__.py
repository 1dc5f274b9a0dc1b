"""Left-invariant statistical structures on Lie groups.

Connections, curvature and classification of (metric, cubic form) pairs
given by structure constants in an orthonormal frame, in exact rational or
floating arithmetic.
"""

__version__ = "0.1.0"

from .algebra import (FrameChange, LieAlgebra, UnsupportedError, ValidationError, bracket,
                      build_builtin, from_brackets, jacobi_defect, orthonormalize)
from .classify import (CSBasis, DiagonalSpectrum, FamilyDescriptor, IsotropyGenerators,
                       abelian_df_normal_form, canonicalize_v, cs_subspace, df_check,
                       df_solutions, invariance_defect, isotropy_generators)
from .connections import (ConnectionCoeffs, DifferenceTensor, difference_tensor, dual_connection,
                          levi_civita, metric_compat_cubic, nabla_cubic, nabla_K,
                          statistical_connection, torsion_defect)
from .curvature import (StructureReport, chc_constant, constant_curvature, cs_curvature,
                        curvature, is_conjugate_symmetric, is_flat, kk_bracket, sectional,
                        structure_report)
from .symtensor import (CubicForm, FourTensor, OrthogonalMap, act_isotropy, cubic_from_polynomial,
                        omega_coefficients, polynomial_from_cubic, total_symmetry_defect)

__all__ = [
    "__version__",
    "FrameChange",
    "LieAlgebra",
    "UnsupportedError",
    "ValidationError",
    "bracket",
    "build_builtin",
    "from_brackets",
    "jacobi_defect",
    "orthonormalize",
    "CSBasis",
    "DiagonalSpectrum",
    "FamilyDescriptor",
    "IsotropyGenerators",
    "abelian_df_normal_form",
    "canonicalize_v",
    "cs_subspace",
    "df_check",
    "df_solutions",
    "invariance_defect",
    "isotropy_generators",
    "ConnectionCoeffs",
    "DifferenceTensor",
    "difference_tensor",
    "dual_connection",
    "levi_civita",
    "metric_compat_cubic",
    "nabla_cubic",
    "nabla_K",
    "statistical_connection",
    "torsion_defect",
    "StructureReport",
    "chc_constant",
    "constant_curvature",
    "cs_curvature",
    "curvature",
    "is_conjugate_symmetric",
    "is_flat",
    "kk_bracket",
    "sectional",
    "structure_report",
    "CubicForm",
    "FourTensor",
    "OrthogonalMap",
    "act_isotropy",
    "cubic_from_polynomial",
    "omega_coefficients",
    "polynomial_from_cubic",
    "total_symmetry_defect",
]
