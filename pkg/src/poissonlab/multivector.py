"""Multivector fields and differential forms on a polynomial chart.

Both are stored as maps from strictly increasing index tuples (1-based
chart indices) to :class:`Poly` coefficients.  Degree-zero objects have the
single key ``()``.

Sign conventions, fixed once for the whole package:

* wedge: the coefficient of a merged tuple carries the sign of the
  permutation sorting the concatenation.
* multivector into form: ``i_{X1^...^Xp} w = w(X1, ..., Xp, -)``, i.e. the
  multivector fills the first ``p`` slots in order.
* form into multivector: ``i_{dx_i}(d_i ^ d_j) = d_j`` (first slot), so that
  ``i_{df}(pi)`` gives the hamiltonian field with ``X_f(g) = {f, g}``.
* Schouten bracket, in odd variables xi_i standing for d_i::

      [P, Q] = sum_i (P <d/dxi_i) * dQ/dx_i - (-1)**((p-1)*(q-1)) (Q <d/dxi_i) * dP/dx_i

  with right odd derivatives.  Then ``[X, f] = X(f)`` and ``[X, Y]`` is the
  Lie bracket of vector fields.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

from .polyalg import ContextMismatch, Poly, VarContext

Index = Tuple[int, ...]


def merge_sign(a: Index, b: Index) -> Tuple[Optional[Index], int]:
    """Sorted union of two increasing tuples and the sign of the sorting permutation.

    Returns ``(None, 0)`` when the tuples overlap.
    """
    if set(a) & set(b):
        return None, 0
    # inversions between the two already-sorted blocks
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return tuple(sorted(a + b)), (-1 if inversions % 2 else 1)


def permutation_sign(seq: Iterable[int]) -> int:
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class _Alternating:
    __slots__ = ("ctx", "degree", "components", "_hash")
    _symbol = "?"

    def __init__(self, ctx: VarContext, degree: int, components: Mapping[Index, Poly] = ()):
        if not 0 <= degree:
            raise ValueError("negative degree")
        self.ctx = ctx
        self.degree = degree
        comps: Dict[Index, Poly] = {}
        for idx, c in dict(components).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index {idx} does not have length {degree}")
            if any(b <= a for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not strictly increasing")
            if any(not 1 <= i <= ctx.nvars for i in idx):
                raise IndexError(f"index {idx} out of chart range 1..{ctx.nvars}")
            if isinstance(c, (int, Fraction)):
                c = ctx.const(c)
            if c.ctx != ctx:
                raise ContextMismatch("coefficient from a different context")
            if c:
                comps[idx] = c
        self.components = comps
        self._hash = None

    @classmethod
    def zero(cls, ctx: VarContext, degree: int):
        return cls(ctx, degree, {})

    @classmethod
    def scalar(cls, f: Poly):
        return cls(f.ctx, 0, {(): f})

    @classmethod
    def basis(cls, ctx: VarContext, *idx: int, coeff=1):
        """Signed basis element for an arbitrary index sequence (repeats give zero)."""
        sign = permutation_sign(idx)
        if sign == 0:
            return cls.zero(ctx, len(idx))
        c = coeff if isinstance(coeff, Poly) else ctx.const(coeff)
        return cls(ctx, len(idx), {tuple(sorted(idx)): c * sign})

    def _same(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ContextMismatch("objects live in different contexts")

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.ctx == other.ctx and self.degree == other.degree and self.components == other.components

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.ctx, self.degree, frozenset(self.components.items())))
        return self._hash

    def __bool__(self):
        return bool(self.components)

    def is_zero(self) -> bool:
        return not self.components

    def __add__(self, other):
        self._same(other)
        if other.degree != self.degree and self and other:
            raise ValueError("adding objects of different degree")
        degree = self.degree if self else other.degree
        comps = dict(self.components)
        for k, c in other.components.items():
            comps[k] = comps[k] + c if k in comps else c
        return type(self)(self.ctx, degree, comps)

    def __neg__(self):
        return type(self)(self.ctx, self.degree, {k: -c for k, c in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, f):
        """Multiplication by a function or a rational scalar."""
        if isinstance(f, (int, Fraction)):
            f = self.ctx.const(f)
        if not isinstance(f, Poly):
            return NotImplemented
        return type(self)(self.ctx, self.degree, {k: c * f for k, c in self.components.items()})

    __rmul__ = __mul__

    def __getitem__(self, idx) -> Poly:
        if isinstance(idx, int):
            idx = (idx,)
        sign = permutation_sign(idx)
        if sign == 0:
            return self.ctx.zero()
        c = self.components.get(tuple(sorted(idx)))
        return self.ctx.zero() if c is None else c * sign

    def coefficients(self) -> Tuple[Poly, ...]:
        """Nonzero coefficients in increasing index order."""
        return tuple(self.components[k] for k in sorted(self.components))

    def to_poly(self) -> Poly:
        if self.degree != 0:
            raise ValueError(f"degree {self.degree} object is not a function")
        return self.components.get((), self.ctx.zero())

    def specialize(self, values, strict: bool = True):
        return type(self)(self.ctx, self.degree,
                          {k: c.specialize(values, strict=strict) for k, c in self.components.items()})

    def has_params(self) -> bool:
        return any(c.has_params() for c in self.components.values())

    def map_coefficients(self, fn):
        return type(self)(self.ctx, self.degree, {k: fn(c) for k, c in self.components.items()})

    def diff(self, i: int):
        return self.map_coefficients(lambda c: c.diff(i))

    def __repr__(self):
        from .printer import format_alternating
        return f"{type(self).__name__}({format_alternating(self)!r})"

    def __str__(self):
        from .printer import format_alternating
        return format_alternating(self)


class Multivector(_Alternating):
    """Alternating multiderivation; degree 1 is a vector field."""
    __slots__ = ()
    _symbol = "d"

    @classmethod
    def vector_field(cls, components: Iterable[Poly]):
        components = list(components)
        if not components:
            raise ValueError("empty component list")
        ctx = components[0].ctx
        if len(components) != ctx.nvars:
            raise ValueError("a vector field needs one component per chart variable")
        return cls(ctx, 1, {(i + 1,): c for i, c in enumerate(components)})

    def vector(self) -> Tuple[Poly, ...]:
        if self.degree != 1:
            raise ValueError("not a vector field")
        return tuple(self[i] for i in range(1, self.ctx.nvars + 1))


class DiffForm(_Alternating):
    """Polynomial differential form."""
    __slots__ = ()
    _symbol = "dx"


def _lift(obj, cls=Multivector):
    if isinstance(obj, Poly):
        return cls.scalar(obj)
    return obj


def wedge(a, b):
    if isinstance(a, Poly):
        a = _lift(a, type(b) if isinstance(b, _Alternating) else Multivector)
    if isinstance(b, Poly):
        b = _lift(b, type(a))
    a._same(b)
    degree = a.degree + b.degree
    cls = type(a)
    if degree > a.ctx.nvars:
        return cls.zero(a.ctx, degree)
    comps: Dict[Index, Poly] = {}
    for ia, ca in a.components.items():
        for ib, cb in b.components.items():
            idx, sign = merge_sign(ia, ib)
            if idx is None:
                continue
            term = ca * cb if sign > 0 else -(ca * cb)
            comps[idx] = comps[idx] + term if idx in comps else term
    return cls(a.ctx, degree, comps)


def power(p: Multivector, k: int) -> Multivector:
    """k-fold wedge power; ``power(p, 0)`` is the constant 1."""
    if k < 0:
        raise ValueError("negative power")
    result = Multivector.scalar(p.ctx.one())
    for _ in range(k):
        result = wedge(result, p)
        if result.is_zero():
            return Multivector.zero(p.ctx, p.degree * k)
    return result


def contract_form_with_multivector(p, w: DiffForm) -> DiffForm:
    """Interior product ``i_P w``: P fills the first ``deg P`` slots of ``w``."""
    p = _lift(p)
    if p.ctx != w.ctx:
        raise ContextMismatch("objects live in different contexts")
    if w.degree < p.degree:
        raise ValueError(f"cannot contract a degree {p.degree} multivector into a {w.degree}-form")
    comps: Dict[Index, Poly] = {}
    for ip, cp in p.components.items():
        sp = set(ip)
        for iw, cw in w.components.items():
            if not sp <= set(iw):
                continue
            rest = tuple(i for i in iw if i not in sp)
            _, sign = merge_sign(ip, rest)
            term = cp * cw if sign > 0 else -(cp * cw)
            comps[rest] = comps[rest] + term if rest in comps else term
    return DiffForm(w.ctx, w.degree - p.degree, comps)


def contract_multivector_with_form(a, p: Multivector) -> Multivector:
    """Interior product ``i_a P`` of a form into a multivector (first slots)."""
    a = _lift(a, DiffForm)
    if p.ctx != a.ctx:
        raise ContextMismatch("objects live in different contexts")
    if p.degree < a.degree:
        raise ValueError(f"cannot contract a {a.degree}-form into a degree {p.degree} multivector")
    comps: Dict[Index, Poly] = {}
    for ia, ca in a.components.items():
        sa = set(ia)
        for ip, cp in p.components.items():
            if not sa <= set(ip):
                continue
            rest = tuple(i for i in ip if i not in sa)
            _, sign = merge_sign(ia, rest)
            term = ca * cp if sign > 0 else -(ca * cp)
            comps[rest] = comps[rest] + term if rest in comps else term
    return Multivector(p.ctx, p.degree - a.degree, comps)


def exterior_derivative(w) -> DiffForm:
    w = _lift(w, DiffForm)
    n = w.ctx.nvars
    cls = DiffForm
    if w.degree >= n:
        return cls.zero(w.ctx, w.degree + 1)
    comps: Dict[Index, Poly] = {}
    for idx, c in w.components.items():
        for i in range(1, n + 1):
            if i in idx:
                continue
            dc = c.diff(i)
            if dc.is_zero():
                continue
            new, sign = merge_sign((i,), idx)
            term = dc if sign > 0 else -dc
            comps[new] = comps[new] + term if new in comps else term
    return cls(w.ctx, w.degree + 1, comps)


def differential(f: Poly) -> DiffForm:
    return exterior_derivative(DiffForm.scalar(f))


def volume_form(ctx: VarContext) -> DiffForm:
    return DiffForm(ctx, ctx.nvars, {tuple(range(1, ctx.nvars + 1)): ctx.one()})


def _right_odd_derivative(p: Multivector, i: int) -> Multivector:
    """Right derivative with respect to the odd variable standing for d_i."""
    comps: Dict[Index, Poly] = {}
    k = p.degree
    for idx, c in p.components.items():
        if i not in idx:
            continue
        m = idx.index(i)
        rest = idx[:m] + idx[m + 1:]
        comps[rest] = c if (k - 1 - m) % 2 == 0 else -c
    return Multivector(p.ctx, k - 1, comps)


def schouten_bracket(p, q) -> Multivector:
    p, q = _lift(p), _lift(q)
    p._same(q)
    dp, dq = p.degree, q.degree
    degree = dp + dq - 1
    if degree < 0:
        return Multivector.zero(p.ctx, 0)
    result = Multivector.zero(p.ctx, degree)
    sign = -1 if ((dp - 1) * (dq - 1)) % 2 == 0 else 1
    for i in range(1, p.ctx.nvars + 1):
        if dp:
            a = _right_odd_derivative(p, i)
            if a:
                result = result + wedge(a, q.diff(i))
        if dq:
            b = _right_odd_derivative(q, i)
            if b:
                t = wedge(b, p.diff(i))
                result = result + (t if sign > 0 else -t)
    return Multivector(p.ctx, degree, result.components)


def lie_derivative(x: Multivector, p) -> Multivector:
    if x.degree != 1:
        raise ValueError("Lie derivative along a non-vector field")
    return schouten_bracket(x, p)


def apply_vector_field(x: Multivector, f: Poly) -> Poly:
    """X(f) = sum_i X^i df/dx_i."""
    total = f.ctx.zero()
    for (i,), c in x.components.items():
        total = total + c * f.diff(i)
    return total


def divergence(x: Multivector) -> Poly:
    """Divergence with respect to dx1 ^ ... ^ dxn."""
    if x.degree != 1:
        raise ValueError("divergence of a non-vector field")
    total = x.ctx.zero()
    for (i,), c in x.components.items():
        total = total + c.diff(i)
    return total


def index_tuples(n: int, k: int):
    return combinations(range(1, n + 1), k)
