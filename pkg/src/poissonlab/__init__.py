"""Exact symbolic computations with polynomial Poisson structures on a chart."""
from .multivector import (
    DiffForm,
    Multivector,
    contract_form_with_multivector,
    contract_multivector_with_form,
    divergence,
    exterior_derivative,
    lie_derivative,
    power,
    schouten_bracket,
    wedge,
)
from .poisson import (
    JacobiFailure,
    PoissonStructure,
    StructureConstants,
    bracket,
    generic_rank,
    hamiltonian_vf,
    lie_poisson,
    make_poisson,
    modular_vf,
)
from .polyalg import IdealGB, Poly, VarContext
from .residues import LineModule, NotFlat, canonical_module, make_line_module, residue
from .strata import bondal_report, degeneracy_ideal, stratification

__version__ = "0.1.0"
