"""Command-line front-end: parse, solve, report.

Subcommands::

    puiseux algebraic --bound 9/2 "y^2 - y + x = 0"
    puiseux ode --bound 4 "dy/dx = y/x + x"
    puiseux wfactor --levels 3 --mu0 -1 "P=y^2; Q=1"
    puiseux verify --ode "dy/dx = x^(-2)*y^2" --alpha "1/(1-x)" \\
            --roots "x; x/(1-x)" --k "1,-1" --ghosts

All bounds are exact rationals (``--bound 9/2``); ``--json`` switches to a
deterministic machine-readable report (identical input gives identical
bytes).  Exit codes: 0 success, 2 parse error, 3 classification error,
4 unresolved branches present, 5 verification failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebraic import solve_algebraic
from .coefficients import UnsupportedSymbolic
from .first_integrals import (
    FirstIntegralCandidate,
    ghost_roots,
    solve_w,
    verify_constant,
)
from .liouville import LiouvilleError, Tower, parse_sexpr
from .ode import (
    ClassificationError,
    FREE,
    MonomialODE,
    RationalODE,
    expand_rational,
    solve_all,
    verify_branch,
)
from .parsing import (
    ParseError,
    parse_algebraic_equation,
    parse_integral_factor_problem,
    parse_ode,
)
from .series import INF, PuiseuxSeries, SeriesError, format_series

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CLASSIFY = 3
EXIT_UNRESOLVED = 4
EXIT_VERIFY = 5

JSON_SCHEMA_VERSION = "1"


def _q(text):
    return Fraction(text)


def _num(value):
    if value is None:
        return None
    if value == INF:
        return "inf"
    if value == -INF:
        return "-inf"
    return str(value)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="puiseux",
        description="Exact Puiseux-series solving of algebraic and first-order "
        "differential equations.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)

    p_alg = sub.add_parser("algebraic", help="solve w(y) = 0 over Puiseux series")
    p_alg.add_argument("equation")
    p_alg.add_argument("--bound", type=_q, default=Fraction(4))
    p_alg.add_argument("--roots", choices=["rational", "algebraic"],
                       default="rational", dest="root_mode")
    p_alg.add_argument("--json", action="store_true")

    p_ode = sub.add_parser("ode", help="all series branches of dy/dx = f(x, y)")
    p_ode.add_argument("equation")
    p_ode.add_argument("--bound", type=_q, default=Fraction(4))
    p_ode.add_argument("--resonance", default="symbolic",
                       help="'symbolic' or values=v1,v2,...")
    p_ode.add_argument("--y-order", type=int, default=6,
                       help="expansion order for rational right-hand sides")
    p_ode.add_argument("--center", type=_q, default=None,
                       help="expansion center y0 for rational right-hand "
                       "sides; branches describe y - y0")
    p_ode.add_argument("--roots", choices=["rational", "algebraic"],
                       default="rational", dest="root_mode")
    p_ode.add_argument("--json", action="store_true")

    p_w = sub.add_parser("wfactor", help="first-integral series coefficients")
    p_w.add_argument("problem", help="'P=...; Q=...'")
    p_w.add_argument("--levels", type=int, default=3)
    p_w.add_argument("--mu0", type=int, default=None)
    p_w.add_argument("--w0", default=None, help="case-B seed (infix in x)")
    p_w.add_argument("--json", action="store_true")

    p_v = sub.add_parser("verify", help="first-integral candidate verification")
    p_v.add_argument("--ode", required=True, dest="equation")
    p_v.add_argument("--alpha", required=True)
    p_v.add_argument("--roots", required=True, help="';'-separated expressions")
    p_v.add_argument("--k", required=True, help="comma-separated integers")
    p_v.add_argument("--ghosts", action="store_true")
    p_v.add_argument("--bound", type=_q, default=Fraction(4))
    p_v.add_argument("--json", action="store_true")

    args = parser.parse_args(argv)
    try:
        if args.mode == "algebraic":
            return _run_algebraic(args)
        if args.mode == "ode":
            return _run_ode(args)
        if args.mode == "wfactor":
            return _run_wfactor(args)
        return _run_verify(args)
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (ClassificationError, UnsupportedSymbolic) as err:
        print(f"classification error: {err}", file=sys.stderr)
        return EXIT_CLASSIFY
    except (SeriesError, LiouvilleError, ValueError, ZeroDivisionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CLASSIFY


def _emit(args, payload, human):
    if args.json:
        payload["schema"] = JSON_SCHEMA_VERSION
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(human.rstrip())


def _run_algebraic(args):
    poly = parse_algebraic_equation(args.equation)
    result = solve_algebraic(poly, args.bound, mode=args.root_mode)
    branches = [
        {
            "series": format_series(b.series),
            "multiplicity": b.multiplicity,
            "residual_bound": _num(b.residual_bound),
        }
        for b in result.branches
    ]
    unresolved = [
        {
            "prefix": format_series(u.prefix),
            "at_exponent": _num(u.at_exponent),
            "vertex_poly": [str(c) for c in u.vertex_poly],
            "multiplicity": u.multiplicity,
        }
        for u in result.unresolved
    ]
    payload = {
        "mode": "algebraic",
        "equation": args.equation,
        "bound": _num(args.bound),
        "branches": branches,
        "unresolved": unresolved,
    }
    lines = [f"{len(branches)} branch(es), total multiplicity "
             f"{result.total_multiplicity} (degree {poly.degree})"]
    for b in branches:
        lines.append(
            f"  y = {b['series']}   [mult {b['multiplicity']}, residual "
            f">= {b['residual_bound']}]"
        )
    for u in unresolved:
        lines.append(
            f"  unresolved at x^{u['at_exponent']}: vertex polynomial "
            f"{u['vertex_poly']} (prefix {u['prefix']})"
        )
    _emit(args, payload, "\n".join(lines))
    return EXIT_UNRESOLVED if unresolved else EXIT_OK


def _run_ode(args):
    eq = parse_ode(args.equation)
    if isinstance(eq, RationalODE):
        if args.center is not None:
            eq = RationalODE(eq.numer, eq.denom,
                             center=PuiseuxSeries.constant(args.center))
        eq = expand_rational(eq, args.y_order)
    elif args.center is not None:
        raise ParseError("--center applies to rational right-hand sides")
    resonance = args.resonance
    if resonance != "symbolic":
        if not resonance.startswith("values="):
            raise ParseError("--resonance takes 'symbolic' or values=v1,v2,...")
        resonance = [Fraction(v) for v in resonance[len("values="):].split(",")]
    report = solve_all(eq, args.bound, resonance=resonance, mode=args.root_mode)
    branches = []
    for b in report.branches:
        entry = {
            "series": format_series(b.series),
            "status": b.status,
            "kind": b.kind,
            "residual_guarantee": _num(b.residual_guarantee),
            "mu0": _num(b.initial.exponent) if b.initial else "inf",
            "c0": "FREE" if (b.initial and b.initial.coefficient is FREE)
            else (_coef(b.initial.coefficient) if b.initial else "0"),
            "case": b.initial.case if b.initial else None,
            "mu_r": _num(b.resonant_index),
            "free_constant": _coef(b.free_constant),
            "obstruction": _coef(b.obstruction),
            "iterations": b.iterations,
            "coincidence_orders": [_num(c) for c in b.coincidence_orders],
            "note": b.note,
        }
        check = verify_branch(eq, b)
        entry["verified"] = check.meets(b.residual_guarantee)
        branches.append(entry)
    unresolved = [
        {
            "at_exponent": _num(u.exponent),
            "vertex_poly": [str(c) for c in u.vertex_poly],
        }
        for u in report.unresolved
    ]
    payload = {
        "mode": "ode",
        "equation": args.equation,
        "bound": _num(args.bound),
        "branches": branches,
        "unresolved": unresolved,
        "notes": report.notes,
    }
    lines = [f"{len(branches)} branch(es)"]
    for b in branches:
        head = f"  y = {b['series']}"
        tail = (
            f"[{b['kind']}/{b['status']}, mu0={b['mu0']}, case={b['case']}, "
            f"mu_r={b['mu_r']}, residual >= {b['residual_guarantee']}, "
            f"verified={b['verified']}]"
        )
        lines.append(f"{head}   {tail}")
        if b["note"]:
            lines.append(f"      note: {b['note']}")
    for n in report.notes:
        lines.append(f"  note: {n}")
    for u in unresolved:
        lines.append(f"  unresolved initial term at x^{u['at_exponent']}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_UNRESOLVED if unresolved else EXIT_OK


def _coef(c):
    if c is None:
        return None
    return str(c)


def _run_wfactor(args):
    problem = parse_integral_factor_problem(args.problem)
    mu0 = args.mu0
    if mu0 is None:
        mu0 = -1 if problem.case == "A" else 0
    tower = Tower()
    w0 = None
    if args.w0 is not None:
        w0 = _tower_operand(args.w0, tower)
    series = solve_w(problem, mu0, args.levels, w0=w0, tower=tower)
    payload = {
        "mode": "wfactor",
        "problem": args.problem,
        "case": series.case,
        "mu0": series.mu0,
        "coefficients": [c.to_sexpr() for c in series.coefficients],
        "first_integral": series.as_text(),
        "verified_levels": series.verified_levels,
        "new_generators_after_seed": series.new_generators_after_seed,
    }
    lines = [
        f"case {series.case}, mu0 = {series.mu0}",
        f"w = {series.as_text()}",
        f"levels verified by symbolic differentiation: "
        f"{all(series.verified_levels)}",
    ]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _run_verify(args):
    eq = parse_ode(args.equation)
    tower = Tower()
    alpha = _tower_operand(args.alpha, tower)
    roots = [_tower_operand(r, tower) for r in args.roots.split(";")]
    ks = [int(k) for k in args.k.split(",")]
    P, Q = _ode_as_polynomials(eq, tower)
    cand = FirstIntegralCandidate(alpha, roots, ks)
    verdict = verify_constant(cand, P, Q)
    payload = {
        "mode": "verify",
        "equation": args.equation,
        "verdict": verdict.verdict,
        "assumptions": verdict.assumptions,
    }
    lines = [f"verdict: {verdict.verdict}"]
    if verdict.assumptions:
        lines.append(
            "  (assumes independence of: " + ", ".join(verdict.assumptions) + ")"
        )
    if args.ghosts:
        series_roots = [_root_as_series(r, args.bound) for r in roots]
        gs = ghost_roots(series_roots, ks, ode=eq if isinstance(eq, MonomialODE) else None,
                         bound=args.bound)
        payload["ghosts"] = [
            {
                "root": format_series(rec.root),
                "residual_valuation": _num(rec.residual_valuation),
                "is_ghost": rec.is_ghost,
            }
            for rec in gs.records
        ]
        for rec in gs.records:
            lines.append(
                f"  level-set root y = {format_series(rec.root)}: "
                f"{'ghost' if rec.is_ghost else 'solution'} "
                f"(residual valuation {_num(rec.residual_valuation)})"
            )
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if verdict.is_constant else EXIT_VERIFY


def _tower_operand(text, tower):
    text = text.strip()
    if text.startswith("("):
        return parse_sexpr(text, tower)
    if "O(" in text:
        raise ParseError(
            "tower operands are exact: infix rational functions or s-expressions"
        )
    from .parsing import _eval

    value = _eval(text)
    if set(value.num) - {Fraction(0)}:
        raise ParseError("tower operands cannot contain y")
    num = value.num.get(Fraction(0), PuiseuxSeries.zero())
    den = value.den.get(Fraction(0), PuiseuxSeries.one())
    return tower.rational(_series_to_rat(num)) / tower.rational(
        _series_to_rat(den)
    )


def _series_to_rat(series):
    from .parsing import _series_to_ratfunc

    return _series_to_ratfunc(series, "operand")


def _root_as_series(elem, bound):
    r = elem.rational_value()
    if r is None:
        raise ParseError("ghost analysis needs rational-function roots")
    num = PuiseuxSeries(( (Fraction(i), c) for i, c in enumerate(r.num) ))
    den = PuiseuxSeries(( (Fraction(i), c) for i, c in enumerate(r.den) ))
    exact = len(den.terms) == 1
    return num * den.invert(prec=None if exact else Fraction(bound) + 2)


def _ode_as_polynomials(eq, tower):
    if isinstance(eq, RationalODE):
        P = [_series_elem(tower, c) for c in eq.numer]
        Q = [_series_elem(tower, c) for c in eq.denom]
        return P, Q
    degrees = [m.y_exp for m in eq.monomials]
    if any(d < 0 or d.denominator != 1 for d in degrees):
        raise ParseError("verification needs a polynomial right-hand side")
    n = int(max(degrees))
    P = [tower.zero() for _ in range(n + 1)]
    for m in eq.monomials:
        P[int(m.y_exp)] = P[int(m.y_exp)] + _monomial_elem(tower, m)
    return P, [tower.one()]


def _series_elem(tower, series):
    return tower.rational(_series_to_rat(series))


def _monomial_elem(tower, m):
    if m.x_exp.denominator != 1:
        raise ParseError("verification needs integer powers of x")
    if not isinstance(m.coefficient, Fraction):
        raise ParseError("verification needs rational coefficients")
    x = tower.x()
    return tower.rational(m.coefficient) * x ** int(m.x_exp)


if __name__ == "__main__":
    sys.exit(main())
