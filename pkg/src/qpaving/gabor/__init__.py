"""Gaussian time-frequency analysis over phase-space lattices."""

from .bounds import (METHODS, ROW_COLUMNS, FrameBounds, GramMatrix, TensorFrameCheck,
                     ambiguity_gauss, condition_a_upper, energy_lower_bound, frame_operator_bounds,
                     gram_entries, gram_matrix, gram_spectral_bounds, janssen_frame_bounds,
                     numeric_frame_check, relaxed_bounds, tensor_frame_check, tensor_lattices)
from .dual import (DualWindowResult, JanssenOperator, cg_budget, dual_window,
                   frame_operator_direct, solve_dual_window)
from .functions import (SampledFunction, gaussian, gaussian_func, hermite, hermite_func,
                        make_grid, modulate, stft_many, stft_quadrature, tf_shift,
                        tf_shifted_func, tf_shifted_gaussian, translate)
from .identities import (FigaResult, MoyalCheck, WignerGrid, default_wigner_grid, figa,
                         figa_residual, moyal_wigner_check, wigner)
