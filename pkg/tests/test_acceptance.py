"""Acceptance criteria, one test per criterion.

Each criterion is timed against its budget and reported as a PASS/FAIL
line, both in the pytest terminal summary and when the file is run
directly with ``python tests/test_acceptance.py``.
"""
import json
import random
import subprocess
import sys
import time
from importlib import resources
from itertools import combinations
from pathlib import Path

import pytest

from poissonlab.multivector import (
    Multivector,
    apply_vector_field,
    contract_form_with_multivector,
    power,
    schouten_bracket,
    wedge,
)
from poissonlab.parser import parse_poly
from poissonlab.poisson import (
    JacobiFailure,
    StructureConstants,
    bivector_to_twisted_oneform,
    euler_field,
    hamiltonian_vf,
    is_casimir,
    is_integrable,
    jacobiator,
    lie_poisson,
    lie_poisson_bivector,
    make_poisson,
    modular_vf,
    symplectic_foliation_generators,
)
from poissonlab.polyalg import IdealGB, VarContext, module_membership
from poissonlab.residues import (
    NoSolution,
    canonical_module,
    hamiltonian_solve_bounded_degree,
    in_symplectic_foliation,
    raw_residue,
    residue,
    residue_gauge_check,
    restricted_residue,
)
from poissonlab.strata import bondal_report, degeneracy_ideal, is_poisson_ideal, is_tangent_vf
from support import (
    AXES_CTX,
    AXES_VALUES,
    M,
    P,
    axes_pi,
    rand_multivector,
    rand_poly,
)

RESULTS = {}
DATA = resources.files("poissonlab") / "data"
GOLDEN = Path(__file__).parent / "golden" / "three_axes_report.json"
X3 = VarContext(["x1", "x2", "x3"])
X4 = VarContext(["x1", "x2", "x3", "x4"])


def criterion(number, title, budget):
    """Run the decorated check, time it and record a PASS/FAIL line."""
    def wrap(fn):
        def test():
            start = time.perf_counter()
            try:
                fn()
            except BaseException as exc:
                RESULTS[number] = (False, title, time.perf_counter() - start, budget, repr(exc))
                raise
            elapsed = time.perf_counter() - start
            ok = elapsed < budget
            RESULTS[number] = (ok, title, elapsed, budget, "" if ok else "over time budget")
            assert ok, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"
        test.__name__ = fn.__name__
        test.__doc__ = title
        return test
    return wrap


def summary_lines():
    lines = []
    for number in sorted(RESULTS):
        ok, title, elapsed, budget, why = RESULTS[number]
        tag = "PASS" if ok else "FAIL"
        tail = f" ({why})" if why else ""
        lines.append(f"{tag} criterion {number:2d}: {title} [{elapsed:.2f}s < {budget}s]{tail}")
    return lines


@criterion(1, "example modular field and foliation generators, symbolic", 1)
def test_criterion_01_modular_field():
    P_ = make_poisson(axes_pi())
    assert modular_vf(P_) == M("-(c12 + c13)*x1*d1 + (c12 - c23)*x2*d2 + (c13 + c23)*x3*d3")
    assert symplectic_foliation_generators(P_) == [
        M("x1*(c12*x2*d2 + c13*x3*d3)"),
        M("x2*(-c12*x1*d1 + c23*x3*d3)"),
        M("x3*(-c13*x1*d1 - c23*x2*d2)"),
    ]


@criterion(2, "residues of the canonical module on the three axes", 5)
def test_criterion_02_residues():
    P_ = make_poisson(axes_pi())
    L = canonical_module(P_)
    lines = {
        "L12": IdealGB([P("x1"), P("x2")]),
        "L13": IdealGB([P("x1"), P("x3")]),
        "L23": IdealGB([P("x2"), P("x3")]),
    }
    symbolic = {name: restricted_residue(L, 0, I) for name, I in lines.items()}
    assert symbolic == {
        "L12": M("(c13 + c23)*x3*d3"),
        "L13": M("(c12 - c23)*x2*d2"),
        "L23": M("-(c12 + c13)*x1*d1"),
    }
    res = residue(L, 0, AXES_VALUES, restrict_to=lines)
    assert res.restrictions == {"L12": M("5*x3*d3"), "L13": M("-2*x2*d2"), "L23": M("-3*x1*d1")}
    assert raw_residue(L, 1).is_zero()


@criterion(3, "D0 of the example: dimension, Poisson ideal, tangency, bound", 5)
def test_criterion_03_degeneracy():
    P_ = make_poisson(axes_pi())
    spec = P_.specialize(AXES_VALUES)
    s = degeneracy_ideal(P_, 0, AXES_VALUES)
    assert s.dimension == 1
    assert is_poisson_ideal(spec, s.ideal)
    assert is_tangent_vf(modular_vf(spec), s.ideal)
    rows = bondal_report(P_, AXES_VALUES).rows
    assert [(r.k, r.dimension, r.bound, r.verdict) for r in rows] == [(0, 1, 1, "meets_bound")]


def _random_constants(rng, d):
    c = [[[0] * d for _ in range(d)] for _ in range(d)]
    for i, j in combinations(range(d), 2):
        for k in range(d):
            v = rng.randint(-2, 2) if rng.random() < 0.4 else 0
            c[i][j][k], c[j][i][k] = v, -v
    return StructureConstants(c)


@criterion(4, "linear structures: Lie-Jacobi iff [pi,pi] = 0; sl(2)", 10)
def test_criterion_04_lie_poisson():
    rng = random.Random(11)
    outcomes = set()
    for _ in range(30):
        sc = _random_constants(rng, rng.choice([2, 3, 4]))
        lie_ok = sc.satisfies_jacobi()
        outcomes.add(lie_ok)
        try:
            P_ = lie_poisson(sc)
            built = True
        except JacobiFailure:
            built = False
        pi = lie_poisson_bivector(sc)
        assert built == lie_ok == schouten_bracket(pi, pi).is_zero()
    assert outcomes == {True, False}
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i, j, k, v in ((0, 1, 2, 1), (2, 0, 0, 2), (2, 1, 1, -2)):
        c[i][j][k], c[j][i][k] = v, -v
    sl2 = lie_poisson(StructureConstants(c))
    assert modular_vf(sl2).is_zero()
    assert is_casimir(sl2, P("x3^2 + 4*x1*x2", X3))


@criterion(5, "Schouten bracket: antisymmetry, Leibniz, Jacobi, Lie calibration", 30)
def test_criterion_05_schouten():
    rng = random.Random(5)

    def same(a, b):
        return (a - b).is_zero()

    def s(e):
        return -1 if e % 2 else 1

    family = [rand_multivector(rng, X3, rng.randint(0, 2)) for _ in range(60)]
    for _ in range(60):
        A, B, C = rng.choice(family), rng.choice(family), rng.choice(family)
        p, q, r = A.degree, B.degree, C.degree
        assert same(schouten_bracket(A, B), schouten_bracket(B, A) * -s((p - 1) * (q - 1)))
        assert same(
            schouten_bracket(A, wedge(B, C)),
            wedge(schouten_bracket(A, B), C) + wedge(B, schouten_bracket(A, C)) * s((p - 1) * q),
        )
        jac = (schouten_bracket(A, schouten_bracket(B, C)) * s((p - 1) * (r - 1))
               + schouten_bracket(B, schouten_bracket(C, A)) * s((q - 1) * (p - 1))
               + schouten_bracket(C, schouten_bracket(A, B)) * s((r - 1) * (q - 1)))
        assert jac.is_zero()
    for _ in range(20):
        X, Y = rand_multivector(rng, X3, 1), rand_multivector(rng, X3, 1)
        lie = Multivector.vector_field([
            apply_vector_field(X, Y[(j,)]) - apply_vector_field(Y, X[(j,)]) for j in (1, 2, 3)
        ])
        assert schouten_bracket(X, Y) == lie


@criterion(6, "residue gauge invariance under Z -> Z + X_f", 10)
def test_criterion_06_gauge():
    rng = random.Random(6)
    P_ = make_poisson(axes_pi())
    L = canonical_module(P_)
    base = {k: residue(L, k, AXES_VALUES).value for k in (0, 1)}
    for _ in range(12):
        f = rand_poly(rng, AXES_CTX, max_degree=3, max_terms=3, with_params=True)
        for k in (0, 1):
            assert residue(L.gauge(f), k, AXES_VALUES).value == base[k]
            assert residue_gauge_check(L, f, k, AXES_VALUES)


@criterion(7, "modular field is not hamiltonian; hamiltonian control is", 30)
def test_criterion_07_non_hamiltonian():
    P_ = make_poisson(axes_pi())
    spec = P_.specialize(AXES_VALUES)
    Z = modular_vf(spec)
    assert in_symplectic_foliation(spec, Z) == (False, None)
    assert isinstance(hamiltonian_solve_bounded_degree(spec, Z, 4), NoSolution)
    control = hamiltonian_vf(spec, P("x1^2"))
    ok, witness = in_symplectic_foliation(spec, control)
    assert ok
    rebuilt = Multivector.zero(AXES_CTX, 1)
    for w, x in zip(witness, AXES_CTX.gens()):
        rebuilt = rebuilt + hamiltonian_vf(spec, x) * w
    assert rebuilt == control
    f = hamiltonian_solve_bounded_degree(spec, control, 4)
    assert hamiltonian_vf(spec, f) == control


@criterion(8, "Groebner engine: uniqueness, idempotence, membership, witnesses", 30)
def test_criterion_08_groebner():
    rng = random.Random(8)
    for _ in range(25):
        gens = [rand_poly(rng, X3, 2, 3) for _ in range(rng.randint(2, 3))]
        shuffled = gens[:]
        rng.shuffle(shuffled)
        I = IdealGB(gens)
        assert I.basis == IdealGB(shuffled).basis
        p = rand_poly(rng, X3, 3, 4)
        assert I.normal_form(I.normal_form(p)) == I.normal_form(p)
    for _ in range(40):
        exps = [tuple(rng.randint(0, 2) for _ in range(4)) for _ in range(rng.randint(1, 5))]
        exps = [e for e in exps if 0 < sum(e) <= 4] or [(1, 0, 0, 0)]
        I = IdealGB([X4.monomial(e) for e in exps])
        p = rand_poly(rng, X4, 4, 4)
        brute = all(any(all(a >= b for a, b in zip(t, g)) for g in exps) for t in p.terms)
        assert I.contains(p) == brute
    for _ in range(15):
        gens = [[rand_poly(rng, X3, 2, 2) for _ in range(2)] for _ in range(rng.randint(1, 3))]
        coeffs = [rand_poly(rng, X3, 1, 2) for _ in gens]
        v = [sum((c * g[j] for c, g in zip(coeffs, gens)), X3.zero()) for j in range(2)]
        ok, witness = module_membership(v, gens)
        assert ok
        assert [sum((w * g[j] for w, g in zip(witness, gens)), X3.zero()) for j in range(2)] == v


@criterion(9, "twisted 1-form: integrable for d1^d2, not for a non-Jacobi quadratic", 5)
def test_criterion_09_twisted_form():
    alpha = bivector_to_twisted_oneform(M("d1^d2", X4))
    assert str(alpha) == "-x4*dx3 + x3*dx4"
    assert is_integrable(alpha)
    assert contract_form_with_multivector(euler_field(X4), alpha).is_zero()
    b = M("x1*x2*d1^d3 + x3^2*d2^d4", X4)
    x1, x2, x3, _ = X4.gens()
    assert jacobiator(b, x1, x2, X4.var(4)) == x1 * x2 * x3 * 2
    assert not schouten_bracket(b, b).is_zero()
    assert not is_integrable(bivector_to_twisted_oneform(b))


def _run_report(name, *extra):
    proc = subprocess.run(
        [sys.executable, "-m", "poissonlab.cli", "report", "--input", str(DATA / name), *extra],
        capture_output=True, timeout=60,
    )
    return proc.returncode, proc.stdout


def _exit_code(name):
    return _run_report(name)[0]


@criterion(10, "CLI: golden report, parser round trip, negative exit codes", 10)
def test_criterion_10_cli():
    code, out = _run_report("three_axes.poisson", "--format", "json")
    assert code == 0
    assert out == GOLDEN.read_bytes()
    rng = random.Random(10)
    for _ in range(120):
        p = rand_poly(rng, AXES_CTX, max_degree=3, max_terms=5, with_params=True)
        assert parse_poly(str(p), AXES_CTX) == p
    assert _exit_code("negative_nonjacobi.poisson") == 1
    assert _exit_code("negative_repeated_index.poisson") == 2
    assert _exit_code("negative_not_flat.poisson") == 1


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
