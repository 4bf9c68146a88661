"""Canonical text for polynomials and multivectors.

Output is accepted by :mod:`poissonlab.parser`, and printing a parsed value
gives back the same string for canonical input.
"""
from __future__ import annotations

from fractions import Fraction


def format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _term_order(n):
    # chart monomial first (degree, then lex), parameters second
    def key(exp):
        v, q = exp[:n], exp[n:]
        return (-sum(v), tuple(-a for a in v), -sum(q), tuple(-a for a in q))
    return key


def _monomial(ctx, exp) -> str:
    """Parameters are written before chart variables."""
    n = ctx.nvars
    names = ctx.params + ctx.vars
    exp = tuple(exp[n:]) + tuple(exp[:n])
    parts = []
    for name, a in zip(names, exp):
        if a == 1:
            parts.append(name)
        elif a:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def _signed_terms(p):
    """Yield (negative, body) pairs in canonical order."""
    for exp in sorted(p.terms, key=_term_order(p.ctx.nvars)):
        c = p.terms[exp]
        mono = _monomial(p.ctx, exp)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        yield c < 0, body


def _join(pieces) -> str:
    out = []
    for i, (neg, body) in enumerate(pieces):
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) if out else "0"


def format_poly(p) -> str:
    return _join(list(_signed_terms(p)))


def format_alternating(obj) -> str:
    symbol = getattr(obj, "_symbol", "d")
    if obj.degree == 0:
        return format_poly(obj.to_poly())
    pieces = []
    for idx in sorted(obj.components):
        c = obj.components[idx]
        basis = "^".join(f"{symbol}{i}" for i in idx)
        terms = list(_signed_terms(c))
        if len(terms) == 1:
            neg, body = terms[0]
            if body == "1":
                pieces.append((neg, basis))
            else:
                pieces.append((neg, f"{body}*{basis}"))
        else:
            split = c.coefficient_vector()
            if len(split) == 1:
                # one chart monomial with a parametric coefficient
                (mono_exp, pc), = split.items()
                mono = _monomial(c.ctx, mono_exp + (0,) * c.ctx.nparams)
                body = f"({_join(list(_signed_terms(pc)))})"
                pieces.append((False, f"{body}*{mono}*{basis}" if mono else f"{body}*{basis}"))
            else:
                pieces.append((False, f"({_join(terms)})*{basis}"))
    return _join(pieces)
