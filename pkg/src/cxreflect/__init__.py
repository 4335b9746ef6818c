"""Products of complex reflections (special elliptic isometries) in PU(2,1)."""

from .atlas import chambers, diag_chamber_full, e_sigma_segments, length2_test, sweep
from .decomposer import (Decomposition, SurfaceInstance, alpha_length, change_signs, decompose1,
                         decompose2, decompose3, decompose4, surface_solve)
from .hermitian import (ProjectivePoint, line_through, orthogonal_in_line, pair_with_tance, point,
                        tance, triple_from_gram)
from .isometry import (ClassKey, Isometry, Parameter, angle_pair, classify, conjugator,
                       is_regular, normalize_lift, special_elliptic)
from .trace_geometry import TangentLine, lines_through, tau_param
from .unfolded import TrianglePoint, unfolded_inverse, unfolded_trace, walls

__all__ = [
    "ClassKey", "Decomposition", "Isometry", "Parameter", "ProjectivePoint", "SurfaceInstance",
    "TangentLine", "TrianglePoint", "alpha_length", "angle_pair", "chambers", "change_signs",
    "classify", "conjugator", "decompose1", "decompose2", "decompose3", "decompose4",
    "diag_chamber_full", "e_sigma_segments", "is_regular", "length2_test", "line_through",
    "lines_through", "normalize_lift", "orthogonal_in_line", "pair_with_tance", "point",
    "special_elliptic", "surface_solve", "sweep", "tance", "tau_param", "triple_from_gram",
    "unfolded_inverse", "unfolded_trace", "walls",
]
