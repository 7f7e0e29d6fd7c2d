"""geoham: exact Hamiltonian-structure toolkit for integrable systems.

Submodules:

* :mod:`geoham.expr` -- exact rational functions and the expression parser
* :mod:`geoham.geom` -- exterior calculus and structural verification
* :mod:`geoham.linfact` -- Poisson-times-symmetric factorization of linear systems
* :mod:`geoham.torus` -- resonance lattices and integrability classification
* :mod:`geoham.period` -- flow integration, periods, energy-period obstructions
* :mod:`geoham.catalog` -- built-in example systems
* :mod:`geoham.cli` -- the ``geoham`` command-line driver
"""

__version__ = "0.1.0"

from .expr import Chart, Polynomial, RationalFunction, parse_expression
from .geom import (
    DifferentialForm,
    Tensor11,
    VectorField,
    check_normal_form,
    differential,
    exterior_derivative,
    interior_product,
    is_hamiltonian_description,
    lie_bracket,
    lie_derivative,
    twisted_differential,
    twisted_two_form,
    validate_structures,
    wedge,
)
from .linfact import (
    ExactMatrix,
    Factorization,
    hamiltonian_factorize,
    is_canonical,
    noncanonical_symmetry,
    odd_trace_test,
    transform_description,
)
from .period import (
    FlowSystem,
    PeriodTable,
    dependence_test,
    detect_period,
    equivalence_obstruction,
    integrate,
    period_energy_scan,
)
from .torus import FrequencySpec, ResonanceLattice, classify, orbit_closure_dimension, resonance_lattice

__all__ = [
    "__version__",
    "Chart",
    "Polynomial",
    "RationalFunction",
    "parse_expression",
    "DifferentialForm",
    "Tensor11",
    "VectorField",
    "check_normal_form",
    "differential",
    "exterior_derivative",
    "interior_product",
    "is_hamiltonian_description",
    "lie_bracket",
    "lie_derivative",
    "twisted_differential",
    "twisted_two_form",
    "validate_structures",
    "wedge",
    "ExactMatrix",
    "Factorization",
    "hamiltonian_factorize",
    "is_canonical",
    "noncanonical_symmetry",
    "odd_trace_test",
    "transform_description",
    "FlowSystem",
    "PeriodTable",
    "dependence_test",
    "detect_period",
    "equivalence_obstruction",
    "integrate",
    "period_energy_scan",
    "FrequencySpec",
    "ResonanceLattice",
    "classify",
    "orbit_closure_dimension",
    "resonance_lattice",
]
