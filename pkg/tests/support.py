"""Shared builders and hypothesis strategies for the test suite."""
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from hypothesis import strategies as st

from poissonlab.multivector import Multivector
from poissonlab.parser import parse_multivector, parse_poly
from poissonlab.polyalg import Poly, VarContext

AXES_CTX = VarContext(["x1", "x2", "x3"], ["c12", "c13", "c23"])
AXES_PI_TEXT = "c12*x1*x2 * d1^d2 + c13*x1*x3 * d1^d3 + c23*x2*x3 * d2^d3"
AXES_VALUES = {"c12": Fraction(1), "c13": Fraction(2), "c23": Fraction(3)}


def axes_pi():
    return parse_multivector(AXES_PI_TEXT, AXES_CTX, degree=2)


def P(text, ctx=AXES_CTX):
    return parse_poly(text, ctx)


def M(text, ctx=AXES_CTX, degree=None):
    return parse_multivector(text, ctx, degree=degree)


def monomial_exponents(n, max_degree):
    for deg in range(max_degree + 1):
        for combo in combinations_with_replacement(range(n), deg):
            exp = [0] * n
            for i in combo:
                exp[i] += 1
            yield tuple(exp)


small_rationals = st.builds(
    Fraction, st.integers(-5, 5), st.integers(1, 4)
)


@st.composite
def polys(draw, ctx, max_degree=2, max_terms=4, rationals=small_rationals, with_params=False):
    """Random Poly in ``ctx`` over chart monomials of bounded total degree."""
    chart = list(monomial_exponents(ctx.nvars, max_degree))
    tail = (0,) * ctx.nparams
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = draw(st.sampled_from(chart))
        if with_params and ctx.nparams:
            tail = tuple(draw(st.integers(0, 1)) for _ in range(ctx.nparams))
        terms[exp + tail] = draw(rationals)
    return Poly(ctx, terms)


@st.composite
def multivectors(draw, ctx, degree, max_degree=2, max_terms=3):
    comps = {}
    for idx in combinations(range(1, ctx.nvars + 1), degree):
        if draw(st.booleans()):
            comps[idx] = draw(polys(ctx, max_degree, max_terms))
    if degree == 0:
        return Multivector.scalar(draw(polys(ctx, max_degree, max_terms)))
    return Multivector(ctx, degree, comps)


@st.composite
def graded_multivectors(draw, ctx, max_rank=2, max_degree=2):
    degree = draw(st.integers(0, max_rank))
    return draw(multivectors(ctx, degree, max_degree))


def rand_poly(rng, ctx, max_degree=2, max_terms=3, with_params=False):
    chart = list(monomial_exponents(ctx.nvars, max_degree))
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        tail = tuple(rng.randint(0, 1) for _ in range(ctx.nparams)) if with_params else (0,) * ctx.nparams
        terms[rng.choice(chart) + tail] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return Poly(ctx, terms)


def rand_multivector(rng, ctx, degree, max_degree=2, max_terms=2):
    if degree == 0:
        return Multivector.scalar(rand_poly(rng, ctx, max_degree, max_terms))
    comps = {idx: rand_poly(rng, ctx, max_degree, max_terms)
             for idx in combinations(range(1, ctx.nvars + 1), degree) if rng.random() < 0.7}
    return Multivector(ctx, degree, comps)
