"""Exact lattice-zonotope toolkit: kernel lattices of directions, zonotope
widths and covering radii, view-obstruction thresholds and lonely runner gaps."""

from .covering import (CoveringResult, FlatnessConfig, certified_covering_bounds,
                       covering_radius, covering_radius_1d, covering_radius_2d_exact,
                       flatness_bound_chain, lgp_catalog, restricted_successive_minimum,
                       scan_conjecture_mu)
from .direction import (DirectionSystem, FormalReal, build_direction_system, dim_q,
                        e_alpha_contains, integer_direction_reduction, is_rationally_uniform,
                        zonotope_pair)
from .dynamics import (GapResult, MotionInstance, epsilon_explorer, equivalence_harness,
                       fold_position, lonely_runner_gap, obstruction_threshold_time_domain,
                       obstruction_threshold_zonotope, zonotopal_lrc_check)
from .linalg import (dual_basis, extend_to_unimodular, hermite_normal_form,
                     integer_kernel_basis, minor, vandermonde_generators)
from .zonotope import (LatticeZonotope, WidthResult, gauge, is_lgp, lattice_width,
                       parallelepiped_volume, width_in_direction)

__version__ = "0.1.0"
