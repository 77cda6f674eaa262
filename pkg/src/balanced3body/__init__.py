"""Balanced configurations and relative equilibria of three bodies in R^4."""

from .balance import (FamilyCurve, balance_determinant, balance_gradient, euler_points,
                      roots_on_a_segment, special_points, trace_families)
from .closed_forms import (ComplexStructureParams, IsoscelesParams, equilateral_embedding,
                           equilateral_family, isosceles_chi, isosceles_embedding, isosceles_hk,
                           lagrange_junction)
from .dynamics import (TrajectoryReport, collision_bound_check, forces, integrate,
                       stability_probe, syzygy_monitor)
from .energy_momentum import (LiftedFamily, detect_cusps, detect_k_quarter, lift_family,
                              slope_dk_dh)
from .equilibrium import (BalancedEquilibrium, EMPoint, angular_momentum, embed_R4, lift,
                          momentum_invariants, scaled_energy_momentum)
from .exceptions import (CollisionError, DegenerateAxisError, DomainError, NonphysicalShapeError,
                         NotBalancedError, ZeroMomentumError)
from .shape import MassTriple, PlanarConfig, Shape, planar_coordinates, squared_area
from .state import PhaseState, hamiltonian, jacobi

__version__ = "0.1.0"
