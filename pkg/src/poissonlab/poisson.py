"""Poisson bivectors on a chart and the objects canonically attached to them."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Mapping, Optional, Sequence

from .multivector import (
    DiffForm,
    Multivector,
    apply_vector_field,
    contract_form_with_multivector,
    contract_multivector_with_form,
    differential,
    exterior_derivative,
    lie_derivative,
    power,
    schouten_bracket,
    volume_form,
    wedge,
)
from .polyalg import Poly, VarContext, squarefree_check


class JacobiFailure(ValueError):
    """The bivector does not satisfy [b, b] = 0; ``trivector`` holds [b, b]."""

    def __init__(self, trivector: Multivector, message: str = ""):
        self.trivector = trivector
        super().__init__(message or f"[pi, pi] = {trivector} is not zero")


class PoissonStructure:
    """A bivector whose Schouten square vanishes identically in the parameters."""

    __slots__ = ("pi", "jacobi_verified")

    def __init__(self, pi: Multivector, _verified: bool = False):
        if pi.degree != 2:
            raise ValueError(f"a Poisson structure is a bivector, got degree {pi.degree}")
        if not _verified:
            square = schouten_bracket(pi, pi)
            if square:
                raise JacobiFailure(square)
        self.pi = pi
        self.jacobi_verified = True

    @property
    def ctx(self) -> VarContext:
        return self.pi.ctx

    @property
    def n(self) -> int:
        return self.pi.ctx.nvars

    def entry(self, i: int, j: int) -> Poly:
        """Antisymmetric coefficient matrix entry pi_ij (1-based)."""
        return self.pi[i, j]

    def specialize(self, values: Mapping) -> "PoissonStructure":
        # substitution preserves [pi, pi] = 0
        return PoissonStructure(self.pi.specialize(values, strict=False), _verified=True)

    def has_params(self) -> bool:
        return self.pi.has_params()

    def __eq__(self, other):
        return isinstance(other, PoissonStructure) and self.pi == other.pi

    def __hash__(self):
        return hash(self.pi)

    def __repr__(self):
        return f"PoissonStructure({str(self.pi)!r})"


def make_poisson(b: Multivector) -> PoissonStructure:
    return PoissonStructure(b)


def jacobiator(b: Multivector, f: Poly, g: Poly, h: Poly) -> Poly:
    """Cyclic sum {f,{g,h}} + {g,{h,f}} + {h,{f,g}} for an arbitrary bivector."""
    def br(u, v):
        return _bracket(b, u, v)
    return br(f, br(g, h)) + br(g, br(h, f)) + br(h, br(f, g))


def _bracket(b: Multivector, f: Poly, g: Poly) -> Poly:
    total = f.ctx.zero()
    dfs = {i: f.diff(i) for i in range(1, b.ctx.nvars + 1)}
    dgs = {i: g.diff(i) for i in range(1, b.ctx.nvars + 1)}
    for (i, j), c in b.components.items():
        total = total + c * (dfs[i] * dgs[j] - dfs[j] * dgs[i])
    return total


def bracket(P: PoissonStructure, f: Poly, g: Poly) -> Poly:
    """{f, g} = pi(df ^ dg)."""
    return _bracket(P.pi, f, g)


def hamiltonian_vf(P: PoissonStructure, f: Poly) -> Multivector:
    """X_f = i_{df} pi, so that X_f(g) = {f, g}."""
    return contract_multivector_with_form(differential(f), P.pi)


def is_poisson_vf(P: PoissonStructure, X: Multivector) -> bool:
    return lie_derivative(X, P.pi).is_zero()


def is_casimir(P: PoissonStructure, f: Poly) -> bool:
    return hamiltonian_vf(P, f).is_zero()


def symplectic_foliation_generators(P: PoissonStructure) -> List[Multivector]:
    return [hamiltonian_vf(P, x) for x in P.ctx.gens()]


def modular_vf(P: PoissonStructure) -> Multivector:
    """Modular field with components Z^j = sum_i d_i(pi_ij)."""
    n = P.n
    comps = []
    for j in range(1, n + 1):
        total = P.ctx.zero()
        for i in range(1, n + 1):
            if i != j:
                total = total + P.entry(i, j).diff(i)
        comps.append(total)
    return Multivector.vector_field(comps)


def modular_vf_from_connection(P: PoissonStructure) -> Multivector:
    """Connection field of the canonical module on the trivialization vol.

    Solves -a ^ d(i_pi vol) = Z(a) vol for each coordinate 1-form a.
    """
    ctx = P.ctx
    vol = volume_form(ctx)
    dv = exterior_derivative(contract_form_with_multivector(P.pi, vol))
    top = tuple(range(1, ctx.nvars + 1))
    comps = []
    for x in ctx.gens():
        top_form = wedge(differential(x), dv)
        comps.append(-top_form.components.get(top, ctx.zero()))
    return Multivector.vector_field(comps)


@dataclass(frozen=True)
class StructureConstants:
    """Lie algebra structure constants: [e_i, e_j] = sum_k c[i][j][k] e_k (0-based)."""

    c: tuple

    def __init__(self, c):
        arr = tuple(tuple(tuple(Fraction(v) for v in row) for row in plane) for plane in c)
        d = len(arr)
        if any(len(plane) != d or any(len(row) != d for row in plane) for plane in arr):
            raise ValueError("structure constants must be a d x d x d array")
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    if arr[i][j][k] != -arr[j][i][k]:
                        raise ValueError(f"constants not antisymmetric at ({i}, {j}, {k})")
        object.__setattr__(self, "c", arr)

    @property
    def dim(self) -> int:
        return len(self.c)

    def jacobi_defects(self):
        """Nonzero entries of the Lie-Jacobi tensor, as ((i, j, k, l), value)."""
        c, d = self.c, self.dim
        out = []
        for i in range(d):
            for j in range(i + 1, d):
                for k in range(j + 1, d):
                    for l in range(d):
                        v = sum(c[i][j][m] * c[m][k][l] + c[j][k][m] * c[m][i][l] + c[k][i][m] * c[m][j][l]
                                for m in range(d))
                        if v:
                            out.append(((i, j, k, l), v))
        return out

    def satisfies_jacobi(self) -> bool:
        return not self.jacobi_defects()


def lie_poisson_bivector(sc: StructureConstants, ctx: Optional[VarContext] = None) -> Multivector:
    d = sc.dim
    if ctx is None:
        ctx = VarContext([f"x{i}" for i in range(1, d + 1)])
    if ctx.nvars != d:
        raise ValueError("context dimension differs from the Lie algebra dimension")
    xs = ctx.gens()
    comps = {}
    for i in range(d):
        for j in range(i + 1, d):
            f = ctx.zero()
            for k in range(d):
                if sc.c[i][j][k]:
                    f = f + xs[k] * sc.c[i][j][k]
            comps[(i + 1, j + 1)] = f
    return Multivector(ctx, 2, comps)


def lie_poisson(sc: StructureConstants, ctx: Optional[VarContext] = None) -> PoissonStructure:
    """Linear Poisson structure on the dual of the Lie algebra."""
    pi = lie_poisson_bivector(sc, ctx)
    square = schouten_bracket(pi, pi)
    lie_ok = sc.satisfies_jacobi()
    if lie_ok != square.is_zero():
        raise RuntimeError("Lie-Jacobi identity and [pi, pi] = 0 disagree")
    if not lie_ok:
        raise JacobiFailure(square, f"structure constants violate the Jacobi identity; [pi, pi] = {square}")
    return PoissonStructure(pi, _verified=True)


def generic_rank(P: PoissonStructure) -> int:
    r = 0
    current = Multivector.scalar(P.ctx.one())
    while True:
        current = wedge(current, P.pi)
        if current.is_zero():
            return 2 * r
        r += 1


def pfaffian_coefficient(P: PoissonStructure) -> Poly:
    """Top coefficient of pi^(n/2); a nonzero multiple of the Pfaffian."""
    n = P.n
    if n % 2:
        raise ValueError("Pfaffian needs an even-dimensional chart")
    top = power(P.pi, n // 2)
    return top.components.get(tuple(range(1, n + 1)), P.ctx.zero())


def is_generically_symplectic(P: PoissonStructure) -> bool:
    return P.n % 2 == 0 and generic_rank(P) == P.n


def is_log_symplectic(P: PoissonStructure) -> bool:
    """Generically symplectic with a nonempty reduced degeneracy divisor.

    A constant Pfaffian means the structure is symplectic and the divisor is
    empty; that case is reported as not log-symplectic.
    """
    if not is_generically_symplectic(P):
        return False
    pf = pfaffian_coefficient(P)
    if pf.is_constant():
        return False
    return squarefree_check(pf)


def symplectic_type(P: PoissonStructure) -> str:
    if not is_generically_symplectic(P):
        return "degenerate"
    pf = pfaffian_coefficient(P)
    if pf.is_constant():
        return "symplectic, empty divisor"
    if pf.has_params():
        return "generically symplectic"
    return "log-symplectic" if squarefree_check(pf) else "generically symplectic, non-reduced divisor"


def euler_field(ctx: VarContext) -> Multivector:
    return Multivector.vector_field(ctx.gens())


def bivector_to_twisted_oneform(b: Multivector) -> DiffForm:
    """alpha = i_b(i_E vol) for a homogeneous bivector on a 4-variable chart."""
    ctx = b.ctx
    if ctx.nvars != 4 or b.degree != 2:
        raise ValueError("twisted 1-form needs a bivector on a 4-variable chart")
    degrees = {c.total_degree() for c in b.components.values()}
    if len(degrees) > 1 or not all(c.is_homogeneous() for c in b.components.values()):
        raise ValueError("bivector coefficients must be homogeneous of one degree")
    vol = volume_form(ctx)
    return contract_form_with_multivector(b, contract_form_with_multivector(euler_field(ctx), vol))


def is_integrable(alpha: DiffForm) -> bool:
    """Frobenius condition alpha ^ d(alpha) = 0."""
    return wedge(alpha, exterior_derivative(alpha)).is_zero()


def descends_as_poisson(b: Multivector) -> bool:
    """E ^ [b, b] = 0: the Schouten square is a multiple of the Euler field."""
    return wedge(euler_field(b.ctx), schouten_bracket(b, b)).is_zero()
