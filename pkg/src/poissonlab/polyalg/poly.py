"""Sparse multivariate polynomials over the rationals.

A :class:`Poly` lives in a :class:`VarContext`: an ordered list of chart
variables followed by an ordered list of symbolic parameters.  Exponent
vectors carry one slot per variable and one per parameter.  Parameters are
constants for differentiation and are never ordered by the Groebner engine.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]


class ContextMismatch(ValueError):
    """Raised when two objects from different variable contexts are combined."""


class MissingParameter(ValueError):
    """Raised when a specialization does not cover a parameter that occurs."""


class VarContext:
    """Ordered chart variables plus symbolic parameters."""

    __slots__ = ("vars", "params", "_index")

    def __init__(self, vars: Sequence[str], params: Sequence[str] = ()):
        self.vars = tuple(vars)
        self.params = tuple(params)
        names = self.vars + self.params
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate symbol names in {names}")
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def nparams(self) -> int:
        return len(self.params)

    @property
    def width(self) -> int:
        return len(self.vars) + len(self.params)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.vars + self.params

    def index(self, name: str) -> int:
        return self._index[name]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, VarContext):
            return NotImplemented
        return self.vars == other.vars and self.params == other.params

    def __hash__(self):
        return hash((self.vars, self.params))

    def __repr__(self):
        return f"VarContext(vars={list(self.vars)}, params={list(self.params)})"

    # constructors -----------------------------------------------------
    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: Scalar) -> "Poly":
        return Poly(self, {(0,) * self.width: Fraction(c)})

    def symbol(self, name: str) -> "Poly":
        exp = [0] * self.width
        exp[self._index[name]] = 1
        return Poly(self, {tuple(exp): Fraction(1)})

    def var(self, i: int) -> "Poly":
        """The i-th chart variable, 1-based."""
        if not 1 <= i <= self.nvars:
            raise IndexError(f"chart variable index {i} out of range 1..{self.nvars}")
        return self.symbol(self.vars[i - 1])

    def param(self, name: str) -> "Poly":
        if name not in self.params:
            raise KeyError(name)
        return self.symbol(name)

    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.var(i) for i in range(1, self.nvars + 1))

    def monomial(self, exp: Sequence[int], coeff: Scalar = 1) -> "Poly":
        exp = tuple(exp)
        if len(exp) == self.nvars:
            exp = exp + (0,) * self.nparams
        if len(exp) != self.width:
            raise ValueError("exponent vector has wrong length")
        return Poly(self, {exp: Fraction(coeff)})


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"inexact or unsupported coefficient {c!r}")


class Poly:
    """Immutable sparse polynomial; ``terms`` maps exponent vectors to nonzero Fractions."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: VarContext, terms: Mapping[Exponent, Scalar]):
        self.ctx = ctx
        clean = {}
        for exp, c in terms.items():
            c = _as_fraction(c)
            if c:
                clean[tuple(exp)] = c
        self.terms: Dict[Exponent, Fraction] = clean
        self._hash = None

    # basic protocol ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ctx.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        from ..printer import format_poly
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        from ..printer import format_poly
        return format_poly(self)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get((0,) * self.ctx.width, Fraction(0))

    def total_degree(self) -> int:
        """Degree in the chart variables; -1 for zero."""
        n = self.ctx.nvars
        return max((sum(e[:n]) for e in self.terms), default=-1)

    def has_params(self) -> bool:
        n = self.ctx.nvars
        return any(any(e[n:]) for e in self.terms)

    def params_used(self) -> Tuple[str, ...]:
        n = self.ctx.nvars
        used = set()
        for e in self.terms:
            for j, a in enumerate(e[n:]):
                if a:
                    used.add(j)
        return tuple(self.ctx.params[j] for j in sorted(used))

    def is_homogeneous(self) -> bool:
        n = self.ctx.nvars
        return len({sum(e[:n]) for e in self.terms}) <= 1

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.const(other)
        raise TypeError(f"cannot combine Poly with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Poly(self.ctx, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return Poly(self.ctx, {e: a * c for e, a in self.terms.items()})
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms: Dict[Exponent, Fraction] = {}
        for e1, a in self.terms.items():
            for e2, b in other.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                terms[e] = terms.get(e, 0) + a * b
        return Poly(self.ctx, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # calculus and substitution ---------------------------------------
    def diff(self, i: int) -> "Poly":
        """Partial derivative in chart variable ``i`` (1-based)."""
        if not 1 <= i <= self.ctx.nvars:
            raise IndexError(f"chart variable index {i} out of range 1..{self.ctx.nvars}")
        k = i - 1
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                terms[tuple(ne)] = c * e[k]
        return Poly(self.ctx, terms)

    def specialize(self, values: Mapping[str, Scalar], strict: bool = True) -> "Poly":
        """Substitute rational values for parameters.

        With ``strict`` every parameter occurring in the polynomial must be
        covered; otherwise uncovered parameters are left symbolic.
        """
        n = self.ctx.nvars
        slots = {}
        for name, v in values.items():
            if name not in self.ctx.params:
                raise KeyError(f"{name!r} is not a parameter of {self.ctx!r}")
            slots[self.ctx.index(name)] = _as_fraction(v)
        if strict:
            missing = [p for p in self.params_used() if self.ctx.index(p) not in slots]
            if missing:
                raise MissingParameter(f"no value supplied for parameter(s) {', '.join(missing)}")
        terms: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            ne = list(e)
            for j in range(n, len(e)):
                if e[j] and j in slots:
                    c = c * slots[j] ** e[j]
                    ne[j] = 0
            ne = tuple(ne)
            terms[ne] = terms.get(ne, 0) + c
        return Poly(self.ctx, terms)

    def evaluate(self, point: Mapping[str, Scalar]) -> "Poly":
        """Substitute values for any symbols (variables or parameters)."""
        slots = {self.ctx.index(k): _as_fraction(v) for k, v in point.items()}
        terms: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            ne = list(e)
            for j, v in slots.items():
                if e[j]:
                    c = c * v ** e[j]
                    ne[j] = 0
            ne = tuple(ne)
            terms[ne] = terms.get(ne, 0) + c
        return Poly(self.ctx, terms)

    def split_params(self) -> Dict[Exponent, "Poly"]:
        """Write ``self`` as a sum of parameter monomials times parameter-free polys.

        Returns a map from parameter exponent vector to the parameter-free part.
        """
        n = self.ctx.nvars
        zeros = (0,) * self.ctx.nparams
        parts: Dict[Exponent, Dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            parts.setdefault(e[n:], {})[e[:n] + zeros] = c
        return {pe: Poly(self.ctx, t) for pe, t in parts.items()}

    def coefficient_vector(self) -> Dict[Exponent, "Poly"]:
        """Map chart-variable monomial -> parameter polynomial coefficient."""
        n = self.ctx.nvars
        out: Dict[Exponent, Dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            out.setdefault(e[:n], {})[(0,) * n + e[n:]] = c
        return {m: Poly(self.ctx, t) for m, t in out.items()}

    def with_context(self, ctx: VarContext) -> "Poly":
        """Re-embed into a context that contains every symbol of this one."""
        if ctx == self.ctx:
            return self
        pos = [ctx.index(name) for name in self.ctx.names]
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * ctx.width
            for j, a in zip(pos, e):
                ne[j] = a
            terms[tuple(ne)] = c
        return Poly(ctx, terms)


def poly_arith(a: Poly, b: Poly, which: str) -> Poly:
    if a.ctx != b.ctx:
        raise ContextMismatch(f"{a.ctx!r} vs {b.ctx!r}")
    if which == "add":
        return a + b
    if which == "sub":
        return a - b
    if which == "mul":
        return a * b
    raise ValueError(f"unknown operation {which!r}")


def partial_derivative(p: Poly, i: int) -> Poly:
    return p.diff(i)


def specialize(p: Poly, values: Mapping[str, Scalar]) -> Poly:
    return p.specialize(values)


def poly_sum(polys: Iterable[Poly], ctx: Optional[VarContext] = None) -> Poly:
    total = None
    for p in polys:
        total = p if total is None else total + p
    if total is None:
        if ctx is None:
            raise ValueError("empty sum needs a context")
        return ctx.zero()
    return total
