"""Command-line surface: membership queries, distance reports, geodesic
evaluation/verification/solving, verification campaigns, and grid sweeps.

Reports are deterministic: the same invocation (with the same ``--seed``)
produces byte-identical output.  Every numeric payload carries its scale
label (``m_scale`` / ``p_scale`` / ``raw``).

Exit codes: 0 ok (or Interior for ``member``), 1 Boundary, 2 Exterior,
64 usage error, 65 invariant violation, 70 verification failure, 74 I/O
error.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import json
import math
import os
import sys
from typing import Dict, List, Optional, Sequence

from . import __version__
from .domains import (DEFAULT_BOUNDARY_TOL, G2Point, Location, TetraPoint,
                      g2_membership, psi_sup, tetra_membership)
from .errors import DomainError
from .extremals import (ExtremalFamily, caratheodory_lower_bound, magic_f,
                        mobius_m, p_e)
from .geodesics import (DiscVerdict, G2GeodesicParams, GeneralDiscParams,
                        OriginGeodesicParams, disc_search_upper_bound,
                        certified_left_inverse, eval_origin_geodesic,
                        g2_geodesic_disc, g2_origin_geodesic, general_disc,
                        lempert_special, origin_geodesic_disc,
                        solve_origin_geodesic_through, verify_disc)
from .extremals import G2FMap
from .hyperbolic import BlaschkeMap, HyperbolicDistance
from .verify import ALL_SUITES, run_suites

EXIT_OK = 0
EXIT_BOUNDARY = 1
EXIT_EXTERIOR = 2
EXIT_USAGE = 64
EXIT_INVARIANT = 65
EXIT_VERIFICATION = 70
EXIT_IO = 74

SCHEMA_VERSION = 1


class _UsageExit(Exception):
    def __init__(self, message: str):
        super().__init__(message)


class Parser(argparse.ArgumentParser):
    """argparse with the usage-error exit code pinned to 64."""

    def error(self, message):
        raise _UsageExit(message)


# ---------------------------------------------------------------------------
# parsing and serialization helpers
# ---------------------------------------------------------------------------


def parse_complex(text: str) -> complex:
    """Parse 'a', 'a+bi', 'bi', 'i' (also with 'j') into a complex number."""
    cleaned = text.strip().replace(" ", "").replace("i", "j").replace("I", "j")
    if not cleaned:
        raise _UsageExit("empty complex literal")
    try:
        return complex(cleaned)
    except ValueError:
        raise _UsageExit(f"cannot parse complex literal {text!r}")


def parse_point(text: str, n: int) -> tuple:
    parts = text.split(",")
    if len(parts) != n:
        raise _UsageExit(f"expected {n} comma-separated components, got {text!r}")
    return tuple(parse_complex(p) for p in parts)


def parse_phi(text: str) -> BlaschkeMap:
    """Self-map spec: 'id', 'const:c', 'auto:a[,omega]' or
    'blaschke:omega|scale|z1;z2;...'."""
    if text == "id":
        return BlaschkeMap.identity()
    if text.startswith("const:"):
        return BlaschkeMap.constant(parse_complex(text[6:]))
    if text.startswith("auto:"):
        parts = text[5:].split(",")
        zero = parse_complex(parts[0])
        omega = parse_complex(parts[1]) if len(parts) > 1 else 1.0
        return BlaschkeMap(omega, (zero,), 1.0)
    if text.startswith("blaschke:"):
        parts = text[9:].split("|")
        if len(parts) != 3:
            raise _UsageExit("blaschke spec needs omega|scale|zeros")
        omega = parse_complex(parts[0])
        scale = float(parts[1])
        zeros = tuple(parse_complex(p) for p in parts[2].split(";") if p)
        return BlaschkeMap(omega, zeros, scale)
    raise _UsageExit(f"cannot parse self-map spec {text!r}")


def raw(value: float) -> Dict[str, object]:
    return {"scale": "raw", "value": float(value)}


def cnum(value: complex) -> Dict[str, object]:
    value = complex(value)
    return {"scale": "raw", "re": value.real, "im": value.imag}


def dist(value: HyperbolicDistance) -> Dict[str, float]:
    return {"m_scale": value.m_scale, "p_scale": value.p_scale}


def envelope(command: str, inputs: Dict, results: Dict, diagnostics: Dict) -> Dict:
    return {"schema_version": SCHEMA_VERSION, "command": command,
            "inputs": inputs, "results": results, "diagnostics": diagnostics}


def emit(env: Dict, as_json: bool, human_lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(env, sort_keys=True, indent=2))
    else:
        for line in human_lines:
            print(line)


def default_tol() -> float:
    text = os.environ.get("TETRA_DEFAULT_TOL")
    if text is None:
        return DEFAULT_BOUNDARY_TOL
    try:
        value = float(text)
    except ValueError:
        raise _UsageExit(f"TETRA_DEFAULT_TOL is not a number: {text!r}")
    if value <= 0:
        raise _UsageExit("TETRA_DEFAULT_TOL must be positive")
    return value


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


_LOCATION_EXIT = {Location.INTERIOR: EXIT_OK, Location.BOUNDARY: EXIT_BOUNDARY,
                  Location.EXTERIOR: EXIT_EXTERIOR}


def cmd_member(args) -> int:
    tol = args.tol if args.tol is not None else default_tol()
    if tol <= 0:
        raise DomainError("tol must be positive")
    if args.domain == "tetrablock":
        if len(args.components) != 3:
            raise _UsageExit("tetrablock needs 3 components")
        point = TetraPoint(*(parse_complex(c) for c in args.components))
        report = tetra_membership(point, tol)
        sup = psi_sup(point) if abs(point.z1) < 1.0 else None
        results = {"location": report.location.value, "e_value": raw(report.e_value),
                   "psi_sup": raw(sup) if sup is not None else None}
        human = [f"location: {report.location.value}",
                 f"e_value (raw): {report.e_value!r}"]
        if sup is not None:
            human.append(f"psi_sup (raw): {sup!r}")
        inputs = {"domain": "tetrablock", "point": [cnum(c) for c in point]}
        location = report.location
    else:
        if len(args.components) != 2:
            raise _UsageExit("g2 needs 2 components")
        point = G2Point(*(parse_complex(c) for c in args.components))
        report = g2_membership(point, tol)
        results = {"location": report.location.value,
                   "max_root_modulus": raw(report.max_root_modulus),
                   "roots": [cnum(r) for r in report.roots]}
        human = [f"location: {report.location.value}",
                 f"max_root_modulus (raw): {report.max_root_modulus!r}"]
        inputs = {"domain": "g2", "point": [cnum(c) for c in point]}
        location = report.location
    env = envelope("member", inputs, results,
                   {"tolerance": tol, "version": __version__})
    emit(env, args.json, human)
    return _LOCATION_EXIT[location]


def _axis_pair_closed_form(w: TetraPoint, z: TetraPoint) -> Optional[HyperbolicDistance]:
    for a, b in ((w, z), (z, w)):
        if (abs(a.z1) < 1e-13 and abs(a.z2) < 1e-13 and abs(b.z1) < 1e-13
                and abs(b.z3 - a.z3) < 1e-12 and abs(b.z2) + abs(a.z3) < 1.0):
            return lempert_special(b.z2, a.z3)
    return None


def cmd_distance(args) -> int:
    w = TetraPoint(*parse_point(args.w, 3))
    z = TetraPoint(*parse_point(args.z, 3))
    families = [ExtremalFamily(name) for name in args.lower_families.split(",")]
    p_val = p_e(w, z)
    c_val = caratheodory_lower_bound(w, z, families)
    search = None
    for upper in args.upper_families.split(","):
        candidate = disc_search_upper_bound(w, z, family=upper, budget=args.budget)
        if search is None or (candidate.found and (not search.found
                              or candidate.bound.m_scale < search.bound.m_scale)):
            search = candidate
    closed = _axis_pair_closed_form(w, z)
    sandwich_ok = (not search.found) or c_val.m_scale <= search.bound.m_scale + 1e-9
    results = {
        "p_e": dist(p_val),
        "c_lower": dist(c_val),
        "k_upper": dist(search.bound) if search.found else None,
        "k_upper_family": search.family,
        "k_upper_residual": raw(search.residual) if search.found else None,
        "closed_form": dist(closed) if closed is not None else None,
        "sandwich_ok": sandwich_ok,
    }
    human = [f"p_e: m_scale {p_val.m_scale!r}, p_scale {p_val.p_scale!r}",
             f"c_lower: m_scale {c_val.m_scale!r}, p_scale {c_val.p_scale!r}"]
    if search.found:
        human.append(f"k_upper: m_scale {search.bound.m_scale!r} (family {search.family})")
    else:
        human.append("k_upper: not found within budget")
    if closed is not None:
        human.append(f"closed_form: m_scale {closed.m_scale!r}")
    human.append(f"sandwich_ok: {sandwich_ok}")
    env = envelope("distance",
                   {"w": [cnum(c) for c in w], "z": [cnum(c) for c in z],
                    "lower_families": args.lower_families,
                    "upper_families": args.upper_families},
                   results,
                   {"budget": args.budget, "tolerance": DEFAULT_BOUNDARY_TOL,
                    "version": __version__})
    emit(env, args.json, human)
    return EXIT_OK if sandwich_ok else EXIT_VERIFICATION


def _build_tetra_params(args):
    phi = parse_phi(args.phi)
    if args.psi is not None:
        return GeneralDiscParams(args.C, parse_complex(args.omega1),
                                 parse_complex(args.omega2), phi, parse_phi(args.psi))
    return OriginGeodesicParams(args.C, parse_complex(args.omega1),
                                parse_complex(args.omega2), phi)


def cmd_geodesic(args) -> int:
    if args.action == "eval":
        lam = parse_complex(args.lam)
        if args.domain == "g2":
            params = G2GeodesicParams(args.C, parse_complex(args.omega))
            point = g2_origin_geodesic(params, lam)
            results = {"point": [cnum(c) for c in point]}
            human = [f"f(lambda) = ({point.s!r}, {point.p!r})"]
            inputs = {"domain": "g2", "C": args.C, "omega": cnum(params.omega),
                      "lambda": cnum(lam)}
        else:
            params = _build_tetra_params(args)
            if isinstance(params, GeneralDiscParams):
                point = general_disc(params)(lam)
            else:
                point = eval_origin_geodesic(params, lam)
            results = {"point": [cnum(c) for c in point]}
            human = [f"f(lambda) = ({point.z1!r}, {point.z2!r}, {point.z3!r})"]
            inputs = {"domain": "tetrablock", "C": args.C, "phi": args.phi,
                      "psi": args.psi, "lambda": cnum(lam)}
        env = envelope("geodesic-eval", inputs, results,
                       {"version": __version__})
        emit(env, args.json, human)
        return EXIT_OK

    if args.action == "verify":
        if args.domain == "g2":
            params = G2GeodesicParams(args.C, parse_complex(args.omega))
            report = verify_disc(g2_geodesic_disc(params), G2FMap(params.omega),
                                 domain="g2", n_angles=args.samples)
            inputs = {"domain": "g2", "C": args.C, "omega": cnum(params.omega)}
        else:
            params = _build_tetra_params(args)
            if isinstance(params, GeneralDiscParams):
                report = verify_disc(general_disc(params), None, n_angles=args.samples)
            else:
                report = verify_disc(origin_geodesic_disc(params),
                                     certified_left_inverse(params),
                                     n_angles=args.samples)
            inputs = {"domain": "tetrablock", "C": args.C, "phi": args.phi,
                      "psi": args.psi}
        results = {"verdict": report.verdict.value,
                   "max_e_value": raw(report.max_e_value),
                   "left_inverse_residual": raw(report.left_inverse_residual),
                   "samples": report.samples}
        human = [f"verdict: {report.verdict.value}",
                 f"max in-domain functional (raw): {report.max_e_value!r}",
                 f"left-inverse residual (raw): {report.left_inverse_residual!r}"]
        env = envelope("geodesic-verify", inputs, results,
                       {"samples": report.samples, "version": __version__})
        emit(env, args.json, human)
        return EXIT_OK if report.verdict is not DiscVerdict.FAILED else EXIT_VERIFICATION

    # solve
    z = TetraPoint(*parse_point(args.point, 3))
    lam0 = parse_complex(args.lambda0)
    solution = solve_origin_geodesic_through(z, lam0, phi_degree=args.phi_degree,
                                             budget=args.budget)
    if solution is None:
        env = envelope("geodesic-solve",
                       {"point": [cnum(c) for c in z], "lambda0": cnum(lam0)},
                       {"found": False},
                       {"budget": args.budget, "version": __version__})
        emit(env, args.json, ["not found"])
        return EXIT_VERIFICATION
    phi = solution.params.phi
    results = {
        "found": True,
        "C": raw(solution.params.C),
        "omega1": cnum(solution.params.omega1),
        "omega2": cnum(solution.params.omega2),
        "phi": {"unimodular_factor": cnum(phi.unimodular_factor),
                "zeros": [cnum(a) for a in phi.zeros],
                "scale": raw(phi.scale),
                "constant_offset": cnum(phi.constant_offset) if phi.is_constant else None},
        "swapped": solution.swapped,
        "residual": raw(solution.residual),
        "lempert_m": raw(abs(solution.lam0)),
    }
    human = [f"C = {solution.params.C!r}",
             f"omega1 = {solution.params.omega1!r}",
             f"omega2 = {solution.params.omega2!r}",
             f"phi degree = {phi.degree}, swapped = {solution.swapped}",
             f"residual (raw) = {solution.residual!r}"]
    env = envelope("geodesic-solve",
                   {"point": [cnum(c) for c in z], "lambda0": cnum(lam0),
                    "phi_degree": args.phi_degree},
                   results, {"budget": args.budget, "version": __version__})
    emit(env, args.json, human)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(ALL_SUITES) if "all" in args.suite else args.suite
    results = run_suites(names, seed=args.seed)
    payload = []
    human = []
    for res in results:
        payload.append({"suite": res.name, "passed": res.passed,
                        "details": {k: v for k, v in sorted(res.details.items())}})
        human.append(f"{'PASS' if res.passed else 'FAIL'} {res.summary()}")
    all_passed = all(r.passed for r in results)
    env = envelope("verify", {"suites": names, "seed": args.seed},
                   {"suites": payload, "all_passed": all_passed},
                   {"seed": args.seed, "version": __version__})
    emit(env, args.json, human)
    return EXIT_OK if all_passed else EXIT_VERIFICATION


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _write_rows(path: str, rows: List[Dict[str, object]], fmt: str,
                columns: List[str]) -> None:
    with open(path, "w", newline="") as handle:
        if fmt == "csv":
            writer = csv.writer(handle, quoting=csv.QUOTE_MINIMAL)
            writer.writerow(columns)
            for row in rows:
                writer.writerow([_format_cell(row[c]) for c in columns])
        else:
            for row in rows:
                handle.write(json.dumps({c: row[c] for c in columns},
                                        sort_keys=True) + "\n")


def cmd_sweep(args) -> int:
    rows: List[Dict[str, object]] = []
    if args.quantity == "separation":
        n_steps = int(round((args.c_max - args.c_min) / args.c_step)) + 1
        lam = args.lam
        for k in range(max(n_steps, 0)):
            C = args.c_min + k * args.c_step
            if C <= 0.0 or C >= 1.0 or C > args.c_max + 1e-12:
                continue
            w = TetraPoint(0.0, 0.0, -C)
            z = TetraPoint(0.0, lam * (1.0 - C), -C)
            p_val = p_e(w, z).m_scale
            c_val = caratheodory_lower_bound(w, z).m_scale
            magic = mobius_m(magic_f(w), magic_f(z))
            rows.append({"C": C, "c_lower_m": c_val, "lam_modulus": lam,
                         "magic_lower_m": magic, "p_e_m": p_val,
                         "separated": c_val > p_val + 1e-12})
        columns = ["C", "c_lower_m", "lam_modulus", "magic_lower_m", "p_e_m",
                   "separated"]
    else:  # lempert
        n = args.grid_n
        for k in range(n):
            z = (0.05 + 0.5 * k / max(n - 1, 1)) * cmath.exp(2j * math.pi * k / n)
            for j in range(n):
                w = (0.04 + 0.35 * j / max(n - 1, 1)) * cmath.exp(-2j * math.pi * j / n)
                if abs(z) + abs(w) >= 0.95:
                    continue
                closed = lempert_special(z, w).m_scale
                search = disc_search_upper_bound(TetraPoint(0, 0, w),
                                                 TetraPoint(0, z, w))
                k_upper = search.bound.m_scale if search.found else math.nan
                rows.append({"closed_form_m": closed,
                             "equal_within_tol": bool(search.found
                                                      and abs(k_upper - closed) < 1e-6),
                             "k_upper_m": k_upper,
                             "w_im": w.imag, "w_re": w.real,
                             "z_im": z.imag, "z_re": z.real})
        columns = ["closed_form_m", "equal_within_tol", "k_upper_m", "w_im",
                   "w_re", "z_im", "z_re"]
    _write_rows(args.out, rows, args.format, columns)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring
# ---------------------------------------------------------------------------


def build_parser() -> Parser:
    parser = Parser(prog="tetrablock",
                    description="Invariant distances and complex geodesics on "
                                "the tetrablock and the symmetrized bidisc.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)

    p_member = sub.add_parser("member", help="membership classification")
    p_member.add_argument("domain", choices=["tetrablock", "g2"])
    p_member.add_argument("components", nargs="+",
                          help="complex components, e.g. 0 0.3+0.1i 0.5")
    p_member.add_argument("--tol", type=float, default=None)
    p_member.add_argument("--json", action="store_true")
    p_member.set_defaults(func=cmd_member)

    p_dist = sub.add_parser("distance", help="invariant-distance report for a pair")
    p_dist.add_argument("w", help="comma-separated triple, e.g. 0,0,-0.5")
    p_dist.add_argument("z")
    p_dist.add_argument("--lower-families",
                        default="psi-omega,psi-omega-sigma,magic-f")
    p_dist.add_argument("--upper-families", default="auto",
                        help="comma list of search families, or auto")
    p_dist.add_argument("--budget", type=int, default=100000)
    p_dist.add_argument("--json", action="store_true")
    p_dist.set_defaults(func=cmd_distance)

    p_geo = sub.add_parser("geodesic", help="evaluate / verify / solve discs")
    p_geo.add_argument("action", choices=["eval", "verify", "solve"])
    p_geo.add_argument("--domain", choices=["tetrablock", "g2"], default="tetrablock")
    p_geo.add_argument("--C", type=float, default=0.0)
    p_geo.add_argument("--phi", default="id", help="id | const:c | auto:a[,w] | "
                                                   "blaschke:w|s|z1;z2")
    p_geo.add_argument("--psi", default=None,
                       help="optional second self-map (general disc family)")
    p_geo.add_argument("--omega1", default="1")
    p_geo.add_argument("--omega2", default="1")
    p_geo.add_argument("--omega", default="1", help="g2 family parameter")
    p_geo.add_argument("--lambda", dest="lam", default="0",
                       help="disc parameter for eval")
    p_geo.add_argument("--samples", type=int, default=16,
                       help="angles per radius in verification sweeps")
    p_geo.add_argument("--point", default=None, help="solve target z1,z2,z3")
    p_geo.add_argument("--lambda0", default=None, help="solve preimage")
    p_geo.add_argument("--phi-degree", type=int, default=1)
    p_geo.add_argument("--budget", type=int, default=100000)
    p_geo.add_argument("--json", action="store_true")
    p_geo.set_defaults(func=cmd_geodesic)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("--suite", action="append",
                          choices=sorted(ALL_SUITES) + ["all"], default=None)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="write a CSV/JSONL grid sweep")
    p_sweep.add_argument("quantity", choices=["separation", "lempert"])
    p_sweep.add_argument("--c-min", type=float, default=0.05)
    p_sweep.add_argument("--c-max", type=float, default=0.95)
    p_sweep.add_argument("--c-step", type=float, default=0.05)
    p_sweep.add_argument("--lam", type=float, default=0.1)
    p_sweep.add_argument("--grid-n", type=int, default=10)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify" and args.suite is None:
            args.suite = ["all"]
        if args.command == "geodesic" and args.action == "solve":
            if args.point is None or args.lambda0 is None:
                raise _UsageExit("solve needs --point and --lambda0")
        return args.func(args)
    except _UsageExit as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
