"""Degeneracy loci D_2k = Zeros(pi^(k+1)) as ideals, and checks on them."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Mapping, Optional

from .multivector import Multivector, apply_vector_field, power
from .poisson import PoissonStructure, bracket, generic_rank
from .polyalg import IdealGB

PROXY_NOTE = (
    "dimension is the Krull dimension of the whole stratum, a proxy for the "
    "largest irreducible component"
)


@dataclass
class DegeneracyStratum:
    """The ideal generated by the coefficients of pi^(k+1)."""

    k: int
    ideal: IdealGB

    @property
    def generators(self):
        return self.ideal.generators

    @cached_property
    def dimension(self) -> int:
        return self.ideal.dimension()

    @property
    def is_empty(self) -> bool:
        return self.dimension == -1


def degeneracy_ideal(P: PoissonStructure, k: int, specialization: Optional[Mapping] = None) -> DegeneracyStratum:
    if k < 0:
        raise ValueError("k must be non-negative")
    top = power(P.pi, k + 1)
    gens = top.coefficients()
    return DegeneracyStratum(k, IdealGB(gens, ctx=P.ctx, specialization=specialization))


def stratification(P: PoissonStructure, specialization: Optional[Mapping] = None) -> List[DegeneracyStratum]:
    """Strata D_0, ..., D_{2r-2} for a structure of rank 2r.

    When every ideal can be computed, consecutive ideals are checked to be
    nested (I_{2k+2} inside I_{2k}).
    """
    r = generic_rank(P) // 2
    strata = [degeneracy_ideal(P, k, specialization) for k in range(r)]
    for lower, upper in zip(strata, strata[1:]):
        if lower.ideal.needs_specialization():
            continue
        if not lower.ideal.contains_ideal(upper.ideal):
            raise RuntimeError(f"degeneracy ideals not nested at k={lower.k}")
    return strata


def is_poisson_ideal(P: PoissonStructure, I: IdealGB) -> bool:
    """{I, O} inside I; by the Leibniz rule it suffices to bracket generators with coordinates."""
    for g in I.generators:
        for x in P.ctx.gens():
            if not I.contains(bracket(P, g, x)):
                return False
    return True


def is_tangent_vf(X: Multivector, I: IdealGB) -> bool:
    return all(I.contains(apply_vector_field(X, g)) for g in I.generators)


@dataclass
class BondalRow:
    k: int
    dimension: int
    bound: int
    verdict: str   # meets_bound | below_bound | empty


@dataclass
class BondalReport:
    rows: List[BondalRow] = field(default_factory=list)
    ambient_dimension: int = 0
    rank: int = 0
    note: str = PROXY_NOTE

    @property
    def ambient_bound_holds(self) -> bool:
        """dim X >= rank + 1, the bound forced by a non-hamiltonian connection field."""
        return self.rank == 0 or self.ambient_dimension >= self.rank + 1


def bondal_report(P: PoissonStructure, specialization: Optional[Mapping] = None) -> BondalReport:
    report = BondalReport(ambient_dimension=P.n, rank=generic_rank(P))
    for s in stratification(P, specialization):
        bound = 2 * s.k + 1
        dim = s.dimension
        if dim < 0:
            verdict = "empty"
        elif dim >= bound:
            verdict = "meets_bound"
        else:
            verdict = "below_bound"
        report.rows.append(BondalRow(s.k, dim, bound, verdict))
    return report
