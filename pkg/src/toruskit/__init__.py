"""Exact toric geometry and heights for hypersurfaces in split tori.

Submodules, bottom up: ``lattice`` (Smith/Hermite forms, saturation),
``newton`` (Laurent polynomials, Newton polytopes, stabilizers), ``cones``
(Hilbert bases, saturation multiples), ``toricfan`` (normal fans, divisors,
ampleness), ``resolve`` (stellar subdivision, desingularization),
``sections`` (section counts, Kodaira dimensions), ``heights`` (Weil
functions, S-integral points) and ``cli``.
"""
from .cones import (HilbertBasis, RationalCone, face_cone, hilbert_basis, is_saturated_at_vertex,
                    lineality_subgroup, smallest_good_multiple, vertex_cone)
from .errors import *  # noqa: F401,F403
from .heights import (LogValue, PlaceSet, RationalTorusPoint, boundary_distance,
                      detect_coset_families, enumerate_integral_points, functoriality_bound, height,
                      height_decomposition_check, is_s_integral, weil_function)
from .lattice import (LatticeFrame, hermite_normal_form, is_unimodular_extension, kernel_basis,
                      saturate_sublattice, smith_normal_form)
from .newton import (Face, LatticePolytope, LaurentPolynomial, faces, lattice_points,
                     newton_polytope, quotient_by_stabilizer, ueno_stabilizer)
from .resolve import (Subdivision, log_canonical_boundary, pullback_divisor, resolve_to_smooth,
                      stellar_subdivision)
from .sections import KodairaReport, d_dimension, h0, is_big_double, log_kodaira_dimension
from .toricfan import (Fan, MonomialMap, TorusInvariantDivisor, apply_monomial_map, completion_fan,
                       divisor_closure, equivariant_projection, is_ample, orbit_avoidance,
                       orbit_table)

__version__ = "0.1.0"
