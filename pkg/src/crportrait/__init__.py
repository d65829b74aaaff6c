"""Phase portraits of holomorphic polynomial systems  z' = P(z),  deg P in {2, 3}.

Equilibria are classified from P'(z0), Darboux first integrals are built from
the linear and exponential invariants, separatrices are traced through the
Poincaré compactification, and the portrait is assigned one of eleven global
classes.
"""

from .compactify import equator_saddles, from_disk, to_disk
from .darboux import (
    Absent,
    DarbouxIntegral,
    RationalIntegral,
    build_integral,
    build_invariants,
    eval_integral,
    integral_residual,
    rational_integral,
    solve_exponents,
)
from .equilibria import EquilibriumReport, classify_all, classify_equilibrium, global_consistency
from .render import level_curves, render_portrait
from .system import HolomorphicSystem, eval_derivative, eval_field, from_roots, normalize, roots
from .tolerances import DEFAULT, Tolerances
from .topology import (
    TopologicalClass,
    center_region_type,
    classify_portrait,
    orbit_period,
    separatrix_configuration,
    trace_separatrix,
)

__version__ = "0.1.0"

__all__ = [
    "Absent",
    "DarbouxIntegral",
    "DEFAULT",
    "EquilibriumReport",
    "HolomorphicSystem",
    "RationalIntegral",
    "TopologicalClass",
    "Tolerances",
    "build_integral",
    "build_invariants",
    "center_region_type",
    "classify_all",
    "classify_equilibrium",
    "classify_portrait",
    "equator_saddles",
    "eval_derivative",
    "eval_field",
    "eval_integral",
    "from_disk",
    "from_roots",
    "global_consistency",
    "integral_residual",
    "level_curves",
    "normalize",
    "orbit_period",
    "rational_integral",
    "render_portrait",
    "roots",
    "separatrix_configuration",
    "solve_exponents",
    "to_disk",
    "trace_separatrix",
]
