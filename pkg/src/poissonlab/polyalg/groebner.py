"""Buchberger's algorithm over Q for ideals and submodules of free modules.

Internally a module element is a dict ``(position, exponent) -> Fraction``
with exponents over the chart variables only.  Terms are ordered
position-over-term: a lower position index is larger, ties are broken by
graded reverse lexicographic order with x1 > x2 > ... > xn.  An ideal is the
rank-one case.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .poly import MissingParameter, Poly, Scalar, VarContext

Term = Tuple[int, Tuple[int, ...]]
Elem = Dict[Term, Fraction]
RingPoly = Dict[Tuple[int, ...], Fraction]

ORDER = "degrevlex"


class UnspecializedParameters(MissingParameter):
    """Raised when a Groebner computation meets symbolic parameters."""


def term_key(term: Term):
    pos, exp = term
    return (-pos, sum(exp), tuple(-a for a in reversed(exp)))


def monomial_key(exp: Tuple[int, ...]):
    return (sum(exp), tuple(-a for a in reversed(exp)))


def _divides(a: Tuple[int, ...], b: Tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


class _Basis:
    """A Groebner basis element: monic terms, cached leading term, cofactors."""

    __slots__ = ("terms", "lead", "cof")

    def __init__(self, terms: Elem, cof: Optional[List[RingPoly]]):
        lead = max(terms, key=term_key)
        lc = terms[lead]
        if lc != 1:
            inv = 1 / lc
            terms = {t: c * inv for t, c in terms.items()}
            if cof is not None:
                cof = [{e: c * inv for e, c in q.items()} for q in cof]
        self.terms = terms
        self.lead = lead
        self.cof = cof


def _axpy(target: Dict, scale: Fraction, shift, source: Dict, positional: bool):
    """target -= scale * x^shift * source, in place."""
    for t, c in source.items():
        if positional:
            k = (t[0], _add(t[1], shift))
        else:
            k = _add(t, shift)
        v = target.get(k, 0) - scale * c
        if v:
            target[k] = v
        else:
            target.pop(k, None)


def _reduce(f: Elem, basis: Sequence[_Basis], cof: Optional[List[RingPoly]] = None):
    """Full multivariate division of ``f`` by ``basis``.

    When ``cof`` is given it is updated alongside the division so that
    ``remainder - sum(cof_i * gens_i)`` stays equal to its initial value.
    """
    p = dict(f)
    rem: Elem = {}
    cof = None if cof is None else [dict(q) for q in cof]
    while p:
        lt = max(p, key=term_key)
        c = p[lt]
        pos, exp = lt
        for g in basis:
            gpos, gexp = g.lead
            if gpos == pos and _divides(gexp, exp):
                shift = _sub(exp, gexp)
                _axpy(p, c, shift, g.terms, True)
                if cof is not None:
                    for q, gq in zip(cof, g.cof):
                        _axpy(q, c, shift, gq, False)
                break
        else:
            rem[lt] = c
            del p[lt]
    return rem, cof


def _spoly(g: _Basis, h: _Basis):
    (pos, ge), (_, he) = g.lead, h.lead
    l = _lcm(ge, he)
    sg, sh = _sub(l, ge), _sub(l, he)
    s: Elem = {}
    for t, c in g.terms.items():
        s[(t[0], _add(t[1], sg))] = c
    _axpy(s, Fraction(1), sh, h.terms, True)
    cof = None
    if g.cof is not None:
        cof = []
        for gq, hq in zip(g.cof, h.cof):
            q = {_add(e, sg): c for e, c in gq.items()}
            _axpy(q, Fraction(1), sh, hq, False)
            cof.append(q)
    return s, cof


def groebner_basis(gens: Sequence[Elem], rank: int, nvars: int, track: bool = False,
                   reduced: bool = True) -> List[_Basis]:
    """Buchberger's algorithm with the coprime-leads criterion (rank one only)."""
    m = len(gens)
    one = (0,) * nvars
    basis: List[_Basis] = []
    for i, g in enumerate(gens):
        if g:
            cof = [{one: Fraction(1)} if j == i else {} for j in range(m)] if track else None
            basis.append(_Basis(dict(g), cof))

    pairs = [(i, j) for i, j in combinations(range(len(basis)), 2) if basis[i].lead[0] == basis[j].lead[0]]
    while pairs:
        pairs.sort(key=lambda ij: sum(_lcm(basis[ij[0]].lead[1], basis[ij[1]].lead[1])), reverse=True)
        i, j = pairs.pop()
        gi, gj = basis[i], basis[j]
        if rank == 1 and all(a == 0 or b == 0 for a, b in zip(gi.lead[1], gj.lead[1])):
            continue
        s, cof = _spoly(gi, gj)
        r, cof = _reduce(s, basis, cof)
        if r:
            basis.append(_Basis(r, cof))
            k = len(basis) - 1
            pairs.extend((a, k) for a in range(k) if basis[a].lead[0] == basis[k].lead[0])

    if not reduced:
        return basis
    # drop elements whose leading term is divisible by another's
    minimal: List[_Basis] = []
    for i, g in enumerate(basis):
        gpos, gexp = g.lead
        redundant = False
        for j, h in enumerate(basis):
            if i == j or h.lead[0] != gpos or not _divides(h.lead[1], gexp):
                continue
            if h.lead != g.lead or j < i:
                redundant = True
                break
        if not redundant:
            minimal.append(g)
    # tail-reduce each element against the others
    out: List[_Basis] = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        r, cof = _reduce(g.terms, others, g.cof)
        out.append(_Basis(r, cof))
    out.sort(key=lambda b: term_key(b.lead), reverse=True)
    return out


def krull_dimension_of_leads(leads: Sequence[Tuple[int, ...]], nvars: int) -> int:
    """Largest set of variables containing the support of no leading monomial; -1 if none."""
    supports = [frozenset(i for i, a in enumerate(e) if a) for e in leads]
    best = -1
    for mask in range(1 << nvars):
        size = bin(mask).count("1")
        if size <= best:
            continue
        chosen = frozenset(i for i in range(nvars) if mask >> i & 1)
        if not any(s <= chosen for s in supports):
            best = size
    return best


# ---------------------------------------------------------------------------
# Poly-facing layer


def _to_ring(p: Poly) -> RingPoly:
    n = p.ctx.nvars
    out: RingPoly = {}
    for e, c in p.terms.items():
        if any(e[n:]):
            raise UnspecializedParameters(
                f"parameter(s) {', '.join(p.params_used())} must be specialized before a Groebner computation"
            )
        out[e[:n]] = c
    return out


def _from_ring(ctx: VarContext, r: RingPoly) -> Poly:
    pad = (0,) * ctx.nparams
    return Poly(ctx, {e + pad: c for e, c in r.items()})


class IdealGB:
    """A polynomial ideal with a lazily computed reduced Groebner basis.

    The basis is taken with respect to degrevlex over the chart variables.
    Generators may carry parameters as long as ``specialization`` covers them
    by the time the basis is needed.
    """

    order = ORDER

    def __init__(self, generators: Sequence[Poly], ctx: Optional[VarContext] = None,
                 specialization: Optional[Mapping[str, Scalar]] = None):
        generators = tuple(generators)
        if ctx is None:
            if not generators:
                raise ValueError("an ideal with no generators needs an explicit context")
            ctx = generators[0].ctx
        for g in generators:
            if g.ctx != ctx:
                raise ValueError("generators from different contexts")
        self.ctx = ctx
        self.generators = generators
        self.specialization = dict(specialization or {})

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"IdealGB([{gens}])"

    def specialized_generators(self) -> Tuple[Poly, ...]:
        if not self.specialization:
            return self.generators
        return tuple(g.specialize(self.specialization, strict=False) for g in self.generators)

    def needs_specialization(self) -> bool:
        return any(g.has_params() for g in self.specialized_generators())

    @cached_property
    def _basis(self) -> List[_Basis]:
        gens = [{(0, e): c for e, c in _to_ring(g).items()} for g in self.specialized_generators()]
        return groebner_basis(gens, rank=1, nvars=self.ctx.nvars)

    @property
    def basis(self) -> Tuple[Poly, ...]:
        """Reduced Groebner basis, monic, sorted by decreasing leading monomial."""
        return tuple(_from_ring(self.ctx, {t[1]: c for t, c in b.terms.items()}) for b in self._basis)

    def leading_monomials(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(b.lead[1] for b in self._basis)

    def normal_form(self, p: Poly) -> Poly:
        if p.ctx != self.ctx:
            raise ValueError("polynomial and ideal live in different contexts")
        if self.specialization:
            p = p.specialize(self.specialization, strict=False)
        basis = self._basis
        if not p.has_params():
            r, _ = _reduce({(0, e): c for e, c in _to_ring(p).items()}, basis)
            return _from_ring(self.ctx, {t[1]: c for t, c in r.items()})
        # parameters act as independent constants: reduce each parameter slice
        n = self.ctx.nvars
        out = {}
        for pexp, part in p.split_params().items():
            r, _ = _reduce({(0, e[:n]): c for e, c in part.terms.items()}, basis)
            for t, c in r.items():
                out[t[1] + pexp] = c
        return Poly(self.ctx, out)

    def contains(self, p: Poly) -> bool:
        return self.normal_form(p).is_zero()

    def contains_ideal(self, other: "IdealGB") -> bool:
        return all(self.contains(g) for g in other.generators)

    def is_unit(self) -> bool:
        return any(not any(e) for e in self.leading_monomials())

    def is_zero(self) -> bool:
        return not self._basis

    def dimension(self) -> int:
        return krull_dimension_of_leads(self.leading_monomials(), self.ctx.nvars)


def buchberger(ideal: IdealGB) -> Tuple[Poly, ...]:
    return ideal.basis


def normal_form(p: Poly, ideal: IdealGB) -> Poly:
    return ideal.normal_form(p)


def ideal_membership(p: Poly, ideal: IdealGB) -> bool:
    return ideal.contains(p)


def krull_dimension(ideal: IdealGB) -> int:
    return ideal.dimension()


def module_membership(v: Sequence[Poly], gens: Sequence[Sequence[Poly]]):
    """Decide whether ``v`` lies in the submodule of R^n generated by ``gens``.

    Returns ``(True, witness)`` with ``v == sum(w_i * gens[i])`` componentwise,
    or ``(False, None)``.
    """
    n = len(v)
    for g in gens:
        if len(g) != n:
            raise ValueError(f"vector length mismatch: {len(g)} != {n}")
    if not n:
        return True, [None] * len(gens)
    ctx = v[0].ctx

    def embed(vec):
        out: Elem = {}
        for pos, p in enumerate(vec):
            for e, c in _to_ring(p).items():
                out[(pos, e)] = c
        return out

    elems = [embed(g) for g in gens]
    m = len(elems)
    basis = groebner_basis(elems, rank=n, nvars=ctx.nvars, track=True, reduced=False)
    r, cof = _reduce(embed(v), basis, [{} for _ in range(m)])
    if r:
        return False, None
    # division keeps remainder - sum(cof_i * gens_i) == v, so v == -sum(cof_i * gens_i)
    witness = [-_from_ring(ctx, q) for q in cof]
    return True, witness
