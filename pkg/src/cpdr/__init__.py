"""Contour-projected sufficient dimension reduction."""
from ._errors import (
    ConvergenceError,
    CPDRError,
    DegenerateSampleError,
    InputError,
    NumericalError,
    SingularScatterError,
)
from .evaluation import SubspacePair, delta_distance, projection_matrix
from .kernels import (
    KernelMatrix,
    SliceMoments,
    kernel_classical,
    kernel_cp_dr,
    kernel_cp_save,
    kernel_cp_sir,
    kernel_dr_pairwise,
    slice_moments,
)
from .pipeline import FitResult, fit_directions
from .projection import ProjectedSample, project
from .scatter import (
    ScatterEstimate,
    TylerConfig,
    coordinatewise_median,
    robust_scatter,
    symmetric_inverse_sqrt,
    tyler_scatter,
)
from .simulation import ModelSpec, run_benchmark, run_replication
from .slicing import SliceAssignment, slice_response
from .subspace import SubspaceEstimate, back_transform, merc, top_eigen

__version__ = "0.1.0"
