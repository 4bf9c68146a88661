"""Invertible Poisson modules on a chart and their residues.

A line module is represented by its connection vector field Z in a fixed
trivialization; changing the trivialization adds a hamiltonian field.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .multivector import Multivector, lie_derivative, power, wedge
from .poisson import PoissonStructure, hamiltonian_vf, modular_vf
from .polyalg import IdealGB, Poly, module_membership, solve_rational_system
from .strata import DegeneracyStratum, degeneracy_ideal


class NotFlat(ValueError):
    """The connection field is not Poisson; ``defect`` holds [Z, pi]."""

    def __init__(self, defect: Multivector):
        self.defect = defect
        super().__init__(f"connection field is not a Poisson vector field: [Z, pi] = {defect}")


@dataclass
class LineModule:
    structure: PoissonStructure
    connection_field: Multivector
    label: str = ""

    def gauge(self, f: Poly) -> "LineModule":
        """Same module in the trivialization changed by f: Z + X_f."""
        return LineModule(self.structure, self.connection_field + hamiltonian_vf(self.structure, f), self.label)


def make_line_module(P: PoissonStructure, Z: Multivector, label: str = "") -> LineModule:
    if Z.degree != 1:
        raise ValueError("connection field must be a vector field")
    defect = lie_derivative(Z, P.pi)
    if defect:
        raise NotFlat(defect)
    return LineModule(P, Z, label)


def canonical_module(P: PoissonStructure) -> LineModule:
    return LineModule(P, modular_vf(P), "canonical")


def reduce_multivector(m: Multivector, I: IdealGB) -> Multivector:
    return m.map_coefficients(I.normal_form)


@dataclass
class Residue:
    k: int
    value: Multivector
    stratum: DegeneracyStratum
    restrictions: Dict[str, Multivector] = field(default_factory=dict)


def raw_residue(L: LineModule, k: int) -> Multivector:
    """Z ^ pi^k before restriction."""
    return wedge(L.connection_field, power(L.structure.pi, k))


def restricted_residue(L: LineModule, k: int, subvariety: IdealGB) -> Multivector:
    """Z ^ pi^k restricted to a subvariety of D_2k.

    Works symbolically whenever the subvariety ideal is parameter-free.
    """
    stratum = degeneracy_ideal(L.structure, k)
    for g in stratum.generators:
        if not subvariety.contains(g):
            raise ValueError(f"subvariety {subvariety} is not contained in D_{2 * k}")
    return reduce_multivector(raw_residue(L, k), subvariety)


def residue(L: LineModule, k: int, specialization: Optional[Mapping] = None,
            restrict_to: Optional[Mapping[str, IdealGB]] = None) -> Residue:
    """(Z ^ pi^k) with coefficients in normal form modulo the D_2k ideal.

    ``restrict_to`` maps names to subvariety ideals; the residue is also
    reduced modulo each one that lies inside D_2k.
    """
    P, Z = L.structure, L.connection_field
    if specialization:
        P = P.specialize(specialization)
        Z = Z.specialize(specialization, strict=False)
        L = LineModule(P, Z, L.label)
    stratum = degeneracy_ideal(P, k, specialization)
    value = reduce_multivector(raw_residue(L, k), stratum.ideal)
    out = Residue(k, value, stratum)
    for name, ideal in (restrict_to or {}).items():
        if specialization and not ideal.specialization:
            ideal = IdealGB(ideal.generators, ctx=ideal.ctx, specialization=specialization)
        if all(ideal.contains(g) for g in stratum.generators):
            out.restrictions[name] = reduce_multivector(value, ideal)
    return out


def residue_gauge_check(L: LineModule, f: Poly, k: int, specialization: Optional[Mapping] = None) -> bool:
    """Every coefficient of X_f ^ pi^k reduces to zero modulo the D_2k ideal."""
    P = L.structure.specialize(specialization) if specialization else L.structure
    if specialization:
        f = f.specialize(specialization, strict=False)
    stratum = degeneracy_ideal(P, k, specialization)
    w = wedge(hamiltonian_vf(P, f), power(P.pi, k))
    return all(stratum.ideal.contains(c) for c in w.coefficients())


def in_symplectic_foliation(P: PoissonStructure, Z: Multivector,
                            specialization: Optional[Mapping] = None) -> Tuple[bool, Optional[List[Poly]]]:
    """Is Z an O-linear combination of the coordinate hamiltonian fields?

    Returns ``(True, coefficients)`` with ``Z == sum(coefficients[i] * X_{x_i})``.
    """
    if Z.ctx != P.ctx:
        raise ValueError("field and structure live in different contexts")
    if specialization:
        P = P.specialize(specialization)
        Z = Z.specialize(specialization, strict=False)
    if Z.degree != 1:
        raise ValueError("foliation membership is for vector fields")
    gens = [hamiltonian_vf(P, x).vector() for x in P.ctx.gens()]
    return module_membership(Z.vector(), gens)


@dataclass
class NoSolution:
    """Certificate that X_f = Z has no polynomial solution of degree <= max_degree."""

    max_degree: int
    unknowns: int
    equations: int
    rank: int
    augmented_rank: int


def _monomials_up_to(n: int, d: int):
    for deg in range(d + 1):
        for combo in combinations_with_replacement(range(n), deg):
            exp = [0] * n
            for i in combo:
                exp[i] += 1
            yield tuple(exp)


def hamiltonian_solve_bounded_degree(P: PoissonStructure, Z: Multivector, max_degree: int,
                                     specialization: Optional[Mapping] = None) -> Union[Poly, NoSolution]:
    """Look for f with deg f <= max_degree and X_f = Z by exact linear algebra."""
    if max_degree < 0:
        raise ValueError("max_degree must be non-negative")
    if specialization:
        P = P.specialize(specialization)
        Z = Z.specialize(specialization, strict=False)
    if P.has_params() or Z.has_params():
        raise ValueError("hamiltonian solve needs parameter-free data; supply a specialization")
    ctx, n = P.ctx, P.n
    monos = [ctx.monomial(e) for e in _monomials_up_to(n, max_degree)]
    columns = [hamiltonian_vf(P, m) for m in monos]
    rows_index: Dict[tuple, int] = {}

    def row(j, exp):
        key = (j, exp)
        if key not in rows_index:
            rows_index[key] = len(rows_index)
        return rows_index[key]

    entries = []
    for col, X in enumerate(columns):
        for (j,), c in X.components.items():
            for exp, a in c.terms.items():
                entries.append((row(j, exp), col, a))
    rhs_entries = []
    for (j,), c in Z.components.items():
        for exp, a in c.terms.items():
            rhs_entries.append((row(j, exp), a))
    m = len(rows_index)
    A = [[Fraction(0)] * len(monos) for _ in range(m)]
    b = [Fraction(0)] * m
    for r, c, a in entries:
        A[r][c] += a
    for r, a in rhs_entries:
        b[r] += a
    sol, rank_a, rank_ab = solve_rational_system(A, b)
    if sol is None:
        return NoSolution(max_degree, len(monos), m, rank_a, rank_ab)
    f = ctx.zero()
    for coeff, mono in zip(sol, monos):
        if coeff:
            f = f + mono * coeff
    if hamiltonian_vf(P, f) != Z:
        raise RuntimeError("linear solve returned a non-solution")
    return f
