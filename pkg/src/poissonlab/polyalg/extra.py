"""Squarefree test and exact linear solving, delegated to sympy."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .poly import Poly


def to_sympy(p: Poly) -> sympy.Poly:
    gens = sympy.symbols(p.ctx.names) if p.ctx.width else ()
    rep = {e: QQ(c.numerator, c.denominator) for e, c in p.terms.items()}
    if not rep:
        rep = {(0,) * p.ctx.width: QQ(0)}
    return sympy.Poly.from_dict(rep, *gens, domain=QQ)


def squarefree_check(p: Poly) -> bool:
    """True iff gcd(p, dp/dx1, ..., dp/dxn) is constant.

    For p = f1^e1 ... fr^er that gcd is f1^(e1-1) ... fr^(er-1) in
    characteristic zero. ``p`` must be parameter-free and nonzero.
    """
    if p.is_zero():
        raise ValueError("squarefree check of the zero polynomial")
    if p.has_params():
        raise ValueError("squarefree check needs a parameter-free polynomial")
    g = to_sympy(p)
    for i in range(1, p.ctx.nvars + 1):
        dp = p.diff(i)
        if not dp.is_zero():
            g = sympy.gcd(g, to_sympy(dp))
    return g.total_degree() == 0


def solve_rational_system(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve ``A x = b`` exactly.

    Returns ``(solution, rank_A, rank_Ab)``; ``solution`` is None when the
    system is inconsistent, otherwise the particular solution with every free
    unknown set to zero.
    """
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    aug = [[QQ(c.numerator, c.denominator) for c in row] + [QQ(b.numerator, b.denominator)]
           for row, b in zip(rows, rhs)]
    if m == 0:
        return [Fraction(0)] * ncols, 0, 0
    mat = DomainMatrix(aug, (m, ncols + 1), QQ)
    rref, pivots = mat.rref()
    rank_ab = len(pivots)
    rank_a = sum(1 for p in pivots if p < ncols)
    if rank_a != rank_ab:
        return None, rank_a, rank_ab
    dense = rref.to_Matrix()
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        v = dense[r, ncols]
        x[col] = Fraction(int(v.p), int(v.q))
    return x, rank_a, rank_ab
