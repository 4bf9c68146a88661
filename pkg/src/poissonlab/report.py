"""Command execution and report serialization for problem files."""
from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Union

from .multivector import Multivector
from .parser import ProblemFile, parse_poly
from .poisson import (
    JacobiFailure,
    PoissonStructure,
    bivector_to_twisted_oneform,
    bracket,
    descends_as_poisson,
    generic_rank,
    hamiltonian_vf,
    is_integrable,
    make_poisson,
    modular_vf,
    symplectic_type,
)
from .polyalg import IdealGB, UnspecializedParameters
from .printer import format_poly, format_rational
from .residues import (
    LineModule,
    NoSolution,
    NotFlat,
    canonical_module,
    hamiltonian_solve_bounded_degree,
    in_symplectic_foliation,
    make_line_module,
    residue,
)
from .strata import PROXY_NOTE, bondal_report, is_poisson_ideal, is_tangent_vf, stratification

SCHEMA = "poissonlab-report/1"
CONVENTIONS = "poissonlab-conventions/1"
GENERIC_POOL = tuple(p for p in range(2, 98) if all(p % q for q in range(2, p)))

COMMANDS = ("verify", "bracket", "hamiltonian", "modular", "rank", "strata", "residues",
            "foliation-check", "ham-solve", "report")


class InputError(ValueError):
    """Bad input: missing specialization, unknown name, wrong arguments."""


@dataclass
class Report:
    command: List[str]
    input_sha256: str
    specialization: Dict[str, object]
    results: Dict[str, object] = field(default_factory=dict)
    status: str = "ok"      # ok | jacobi_failure | not_flat

    def to_dict(self) -> Dict[str, object]:
        return {
            "schema": SCHEMA,
            "conventions": CONVENTIONS,
            "command": self.command,
            "input_sha256": self.input_sha256,
            "specialization": self.specialization,
            "status": self.status,
            "results": self.results,
        }

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "ok" else 1


def generic_specialization(params: Sequence[str], seed: int) -> Dict[str, Fraction]:
    rng = random.Random(seed)
    primes = rng.sample(GENERIC_POOL, len(params))
    return {p: Fraction(v) for p, v in zip(params, primes)}


def _resolve_specialization(pf: ProblemFile, specialize, seed: Optional[int]):
    source = "cli"
    if specialize is None:
        specialize, source = pf.specialize, "file"
    if specialize is None:
        return {}, {"mode": "none", "seed": None, "values": {}}
    if specialize == "generic":
        seed = 0 if seed is None else seed
        values = generic_specialization(pf.params, seed)
        return values, {"mode": "generic", "seed": seed, "values": _fmt_values(values)}
    for name in specialize:
        if name not in pf.params:
            raise InputError(f"{name!r} is not a declared parameter")
    values = dict(specialize)
    return values, {"mode": source, "seed": None, "values": _fmt_values(values)}


def _fmt_values(values: Mapping[str, Fraction]) -> Dict[str, str]:
    return {k: format_rational(Fraction(v)) for k, v in values.items()}


def _require(pf: ProblemFile, values: Mapping, what: str):
    missing = [p for p in pf.params if p not in values]
    if missing:
        raise InputError(
            f"{what} needs values for parameter(s) {', '.join(missing)}; "
            f"pass --specialize {' '.join(p + '=VALUE' for p in missing)} or --specialize generic"
        )


def _field(pf: ProblemFile, P: PoissonStructure, name: str) -> Multivector:
    if name in ("modular", "canonical"):
        return modular_vf(P)
    if name not in pf.fields:
        known = ", ".join(["modular"] + sorted(pf.fields))
        raise InputError(f"unknown field {name!r}; known fields: {known}")
    return pf.fields[name]


def _subvarieties(pf: ProblemFile) -> Dict[str, IdealGB]:
    return {name: IdealGB(gens, ctx=pf.ctx) for name, gens in pf.ideals.items()}


def _residue_rows(pf, P, module: LineModule, values, ks) -> List[Dict[str, object]]:
    rows = []
    subs = _subvarieties(pf)
    for k in ks:
        res = residue(module, k, values, subs)
        rows.append({
            "module": module.label,
            "k": k,
            "value": str(res.value),
            "restrictions": {name: str(v) for name, v in res.restrictions.items()},
        })
    return rows


def _strata_rows(P, values) -> List[Dict[str, object]]:
    rows = []
    Zs = modular_vf(P).specialize(values, strict=False) if values else modular_vf(P)
    for s in stratification(P, values):
        rows.append({
            "k": s.k,
            "generators": [format_poly(g) for g in s.ideal.specialized_generators()],
            "dimension": s.dimension,
            "poisson_ideal": is_poisson_ideal(P, s.ideal),
            "modular_field_tangent": is_tangent_vf(Zs, s.ideal),
        })
    return rows


def _bondal(P, values) -> Dict[str, object]:
    b = bondal_report(P, values)
    return {
        "note": PROXY_NOTE,
        "ambient_dimension": b.ambient_dimension,
        "rank": b.rank,
        "ambient_bound_holds": b.ambient_bound_holds,
        "rows": [{"k": r.k, "dimension": r.dimension, "bound": r.bound, "verdict": r.verdict} for r in b.rows],
    }


def run_command(pf: ProblemFile, command: str, args: Sequence[str] = (), *, input_text: str = "",
                specialize: Union[None, str, Mapping[str, Fraction]] = None, seed: Optional[int] = None,
                max_degree: int = 4, module: Optional[str] = None, k: Optional[int] = None) -> Report:
    if command not in COMMANDS:
        raise InputError(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    values, spec_record = _resolve_specialization(pf, specialize, seed)
    echo = [command, *args]
    if module is not None:
        echo += ["--module", module]
    if k is not None:
        echo += ["--k", str(k)]
    if command == "ham-solve":
        echo += ["--max-degree", str(max_degree)]
    report = Report(echo, hashlib.sha256(input_text.encode("utf-8")).hexdigest(), spec_record)
    out = report.results

    try:
        P = make_poisson(pf.pi)
    except JacobiFailure as exc:
        out["jacobi"] = {"verified": False, "schouten_square": str(exc.trivector)}
        report.status = "jacobi_failure"
        return report
    out["jacobi"] = {"verified": True}

    try:
        _dispatch(pf, P, command, list(args), out, values, max_degree, module, k)
    except NotFlat as exc:
        out["flatness"] = {"flat": False, "defect": str(exc.defect)}
        report.status = "not_flat"
    except UnspecializedParameters as exc:
        raise InputError(f"{exc}; pass --specialize NAME=VALUE ... or --specialize generic") from exc
    return report


def _dispatch(pf, P, command, args, out, values, max_degree, module, k):
    ctx = pf.ctx

    def expect(n):
        if len(args) != n:
            raise InputError(f"'{command}' takes {n} argument(s), got {len(args)}")

    if command == "verify":
        expect(0)
        return
    if command == "bracket":
        expect(2)
        f, g = (parse_poly(a, ctx) for a in args)
        out["bracket"] = format_poly(bracket(P, f, g))
        return
    if command == "hamiltonian":
        expect(1)
        out["hamiltonian"] = str(hamiltonian_vf(P, parse_poly(args[0], ctx)))
        return
    if command == "modular":
        expect(0)
        out["modular_field"] = str(modular_vf(P))
        return
    if command == "rank":
        expect(0)
        Ps = P.specialize(values) if values else P
        out["rank"] = generic_rank(P)
        out["symplectic_type"] = symplectic_type(Ps)
        return
    if command == "strata":
        expect(0)
        _require(pf, values, "strata")
        out["strata"] = _strata_rows(P, values)
        return
    if command == "residues":
        expect(0)
        name = module or "canonical"
        if name == "canonical":
            L = canonical_module(P)
        else:
            L = make_line_module(P, _field(pf, P, name), name)
        r = generic_rank(P) // 2
        ks = [k] if k is not None else list(range(r + 1))
        if any(kk < 0 for kk in ks):
            raise InputError("--k must be non-negative")
        if pf.params and not values:
            _require(pf, values, "residues")
        out["residues"] = _residue_rows(pf, P, L, values, ks)
        return
    if command == "foliation-check":
        expect(1)
        _require(pf, values, "foliation-check")
        Z = _field(pf, P, args[0])
        ok, witness = in_symplectic_foliation(P, Z, values)
        out["foliation"] = {
            "field": args[0],
            "in_foliation": ok,
            "witness": None if witness is None else [format_poly(w) for w in witness],
        }
        return
    if command == "ham-solve":
        expect(1)
        _require(pf, values, "ham-solve")
        Z = _field(pf, P, args[0])
        res = hamiltonian_solve_bounded_degree(P, Z, max_degree, values)
        if isinstance(res, NoSolution):
            out["ham_solve"] = {"field": args[0], "max_degree": max_degree, "solution": None,
                                "unknowns": res.unknowns, "equations": res.equations,
                                "rank": res.rank, "augmented_rank": res.augmented_rank}
        else:
            out["ham_solve"] = {"field": args[0], "max_degree": max_degree, "solution": format_poly(res)}
        return
    # full pipeline
    expect(0)
    _require(pf, values, "report")
    Ps = P.specialize(values) if values else P
    rank = generic_rank(P)
    out["rank"] = rank
    out["symplectic_type"] = symplectic_type(Ps)
    Z = modular_vf(P)
    out["modular_field"] = {"symbolic": str(Z), "specialized": str(Z.specialize(values, strict=False))}
    out["strata"] = _strata_rows(P, values)
    ks = list(range(rank // 2 + 1))
    rows = _residue_rows(pf, P, canonical_module(P), values, ks)
    for name in sorted(pf.fields):
        rows += _residue_rows(pf, P, make_line_module(P, pf.fields[name], name), values, ks)
    out["residues"] = rows
    out["bondal"] = _bondal(P, values)
    if pf.homogeneous and ctx.nvars == 4:
        alpha = bivector_to_twisted_oneform(P.pi)
        out["twisted_one_form"] = {"alpha": str(alpha), "integrable": is_integrable(alpha),
                                   "descends_as_poisson": descends_as_poisson(P.pi)}


def emit_report(report: Report, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "text":
        return _text(report).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def _text(report: Report) -> str:
    lines = [f"command: {' '.join(report.command)}", f"input sha256: {report.input_sha256}"]
    spec = report.specialization
    if spec["mode"] == "none":
        lines.append("specialization: none")
    else:
        vals = ", ".join(f"{k}={v}" for k, v in spec["values"].items())
        seed = f", seed {spec['seed']}" if spec["seed"] is not None else ""
        lines.append(f"specialization: {vals} ({spec['mode']}{seed})")
    lines.append(f"status: {report.status}")
    r = report.results
    jac = r.get("jacobi", {})
    if jac.get("verified"):
        lines.append("jacobi: verified")
    elif jac:
        lines.append("jacobi: FAILED")
        lines.append(f"  [pi, pi] = {jac['schouten_square']}")
    if "flatness" in r:
        lines.append("flatness: FAILED")
        lines.append(f"  [Z, pi] = {r['flatness']['defect']}")
    for key in ("bracket", "hamiltonian"):
        if key in r:
            lines.append(f"{key}: {r[key]}")
    if "rank" in r:
        lines.append(f"rank: {r['rank']} ({r['symplectic_type']})")
    mf = r.get("modular_field")
    if isinstance(mf, dict):
        lines.append(f"modular field: {mf['symbolic']}")
        lines.append(f"modular field (specialized): {mf['specialized']}")
    elif mf is not None:
        lines.append(f"modular field: {mf}")
    if "strata" in r:
        lines.append(f"strata: {len(r['strata'])} row(s)")
        lines.append("  k  dim  poisson_ideal  modular_tangent  generators")
        for s in r["strata"]:
            gens = ", ".join(s["generators"]) or "0"
            lines.append(f"  {s['k']}  {s['dimension']}  {str(s['poisson_ideal']).lower()}  "
                         f"{str(s['modular_field_tangent']).lower()}  {gens}")
    if "residues" in r:
        lines.append(f"residues: {len(r['residues'])} row(s)")
        for row in r["residues"]:
            lines.append(f"  Res{row['k']}[{row['module']}] = {row['value']}")
            for name, v in row["restrictions"].items():
                lines.append(f"    on {name}: {v}")
    if "foliation" in r:
        f = r["foliation"]
        lines.append(f"foliation membership of {f['field']}: {str(f['in_foliation']).lower()}")
        if f["witness"] is not None:
            lines.append(f"  coefficients on X_x1..X_xn: {', '.join(f['witness'])}")
    if "ham_solve" in r:
        h = r["ham_solve"]
        if h["solution"] is None:
            lines.append(f"ham-solve {h['field']}: no solution with degree <= {h['max_degree']} "
                         f"(rank {h['rank']}, augmented rank {h['augmented_rank']}, {h['unknowns']} unknowns)")
        else:
            lines.append(f"ham-solve {h['field']}: f = {h['solution']}")
    if "bondal" in r:
        b = r["bondal"]
        lines.append(f"bondal bounds ({b['note']}): {len(b['rows'])} row(s)")
        for row in b["rows"]:
            lines.append(f"  k={row['k']} dim={row['dimension']} bound={row['bound']} {row['verdict']}")
        lines.append(f"  ambient dimension {b['ambient_dimension']} >= rank + 1: "
                     f"{str(b['ambient_bound_holds']).lower()}")
    if "twisted_one_form" in r:
        t = r["twisted_one_form"]
        lines.append(f"twisted 1-form: {t['alpha']}")
        lines.append(f"  integrable: {str(t['integrable']).lower()}, "
                     f"descends as Poisson: {str(t['descends_as_poisson']).lower()}")
    return "\n".join(lines) + "\n"
