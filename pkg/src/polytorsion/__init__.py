"""Exact universal torsion, torsion polytopes and Thurston-norm checks in the commutative regime."""
from .errors import (CommutativeImageError, DomainError, NotAcyclicError, ParseError, PolytorsionError,
                     UnboundedDualError, UnsupportedRankError)
from .laurent import LaurentPoly, LMatrix
from .polytope_group import (IntegralPolytope, LatticeHom, Polytope, PolytopeClass, PolytopeGroupElement,
                             convex_hull, dual_polytope, minkowski_sum)
from .fox_calculus import (AbelianizationData, FreeWord, GroupRingElement, Presentation, abelianize,
                           fox_derivative, newton_polytope, one_relator_polytope, parse_presentation)
from .torsion import BasedChainComplex, TorsionClass, el, torsion
from .invariants import (l2_torsion_polytope, presentation_complex, thurston_data,
                         universal_torsion_commutative)

__version__ = "0.1.0"
