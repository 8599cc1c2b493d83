"""Command-line front end.

Exit codes: 0 success, 2 parse or configuration error, 3 the complexity
search did not stabilize, 4 a rotation has no numeric realization.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import dynamics as dyn
from . import recurrence as rec
from .polynomial import IntegralityError, PolynomialSyntaxError, parse_poly, parse_rational_poly, split_top_level
from .realization import DEFAULT_BITS, NAMED_CONSTANTS, MissingRealization, realize
from .weyl import (
    NotEssentiallyDistinct,
    NotStabilized,
    PolyFamily,
    complexity_with_trace,
    contains_poly,
    default_k_max,
    scheme_compare,
    weyl_polynomials,
    weyl_space,
)

SCHEMA = "weylkit/1"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NOT_STABILIZED = 3
EXIT_MISSING_REALIZATION = 4


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _positive_int(text: str) -> int:
    v = int(float(text)) if "e" in text.lower() else int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _positive_fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _realizations(args) -> dict[str, Fraction]:
    out = {}
    for item in args.realize or []:
        sym, sep, spec = item.partition("=")
        if not sep or not sym.strip():
            raise ConfigError(f"--realize expects SYMBOL=SPEC, got {item!r}")
        out[sym.strip()] = realize(spec, args.precision)
    return out


def _resolve(sym: str, table: dict[str, Fraction], bits: int) -> Fraction:
    if sym in table:
        return table[sym]
    if sym in NAMED_CONSTANTS:
        return realize(sym, bits)
    try:
        return realize(sym, bits)
    except MissingRealization:
        raise MissingRealization(f"rotation {sym!r} has no numeric realization; use --realize {sym}=<spec>") from None


def _system(text: str, args) -> dyn.StandardWeylSystem:
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    else:
        text = text.replace(";", "\n")
        if text.strip().isdigit():
            text = f"factor d={text.strip()} alpha=alpha"
    return dyn.StandardWeylSystem.parse(text, _realization_specs(args), args.precision)


def _realization_specs(args) -> dict[str, str]:
    out = {}
    for item in args.realize or []:
        sym, _, spec = item.partition("=")
        out[sym.strip()] = spec.strip()
    return out


def _chars(text: str) -> list[tuple[int, ...]]:
    return [tuple(int(x) for x in chunk.split(",")) for chunk in text.split(";") if chunk.strip()]


def _n_range(text: str) -> range:
    lo, sep, hi = text.partition(":")
    if not sep:
        return range(int(lo), int(lo) + 1)
    return range(int(lo), int(hi) + 1)


def _emit(args, payload: dict, text: str):
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA, "command": args.command, **payload}, indent=2))
    else:
        print(text)


# ---------------------------------------------------------------------------
# sequence expressions for `average`
# ---------------------------------------------------------------------------

def _split_top(text: str, seps: str) -> list[tuple[str, str]]:
    """Split on characters in ``seps`` outside parentheses; keep the separator."""
    parts, depth, cur, lead = [], 0, [], "+"
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in seps and "".join(cur).strip():
            parts.append((lead, "".join(cur).strip()))
            cur, lead = [], ch
            continue
        if depth == 0 and ch in seps:
            lead = ch if ch != "+" else lead
            continue
        cur.append(ch)
    if "".join(cur).strip():
        parts.append((lead, "".join(cur).strip()))
    return parts


def parse_sequence(text: str, table: dict[str, Fraction], bits: int) -> dyn.PhaseSequence:
    """Sums of products of ``e(<poly>*<symbol>)`` factors and rational constants.

    ``"e(n^3*alpha)*e((n-n^2)*alpha)"``, ``"1"``, ``"e(n^2*sqrt2) + 1/2"``.
    """
    total = None
    for sign, term in _split_top(text, "+-"):
        seq = dyn.PhaseSequence.one() * (-1 if sign == "-" else 1)
        for _, factor in _split_top(term, "*"):
            if factor.startswith("e(") and factor.endswith(")"):
                inner = factor[2:-1]
                pieces = _split_top(inner, "*")
                if len(pieces) < 2:
                    raise ConfigError(f"expected e(<poly>*<symbol>), got {factor!r}")
                sym = pieces[-1][1]
                poly_txt = inner[: inner.rfind("*")]
                q = parse_rational_poly(poly_txt)
                seq = seq * dyn.PhaseSequence.phase(q, _resolve(sym, table, bits))
            else:
                try:
                    c = Fraction(factor)
                except ValueError:
                    raise ConfigError(f"cannot read sequence factor {factor!r}") from None
                seq = seq * float(c)
        total = seq if total is None else total + seq
    if total is None:
        raise ConfigError("empty sequence expression")
    return total


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_complexity(args) -> int:
    P = PolyFamily.parse(args.family)
    k_max = args.k_max or default_k_max(P)
    W, trace = complexity_with_trace(P, k_max)
    _emit(args, {"family": [str(p) for p in P], "W": W, "trace": trace, "k_max": k_max},
          f"W(P) = {W}\ndim span(Lambda_k), k=1..{W}: {trace}")
    return EXIT_OK


def cmd_weyl_basis(args) -> int:
    P = PolyFamily.parse(args.family)
    if args.k is not None:
        space, k = weyl_space(P, args.k), args.k
    else:
        k = complexity_with_trace(P, args.k_max or default_k_max(P))[0]
        space = weyl_polynomials(P, args.k_max)
    basis = [str(p) for p in sorted(space.integral_basis, key=lambda p: p.degree)]
    rref_rows = [str(p) for p in space.basis_polynomials]
    _emit(args, {"family": [str(p) for p in P], "k": k, "integral_basis": basis,
                 "rref_basis": rref_rows, "dim": space.dim},
          f"WP_{k}(P) = {space.to_text()}\nRREF basis: {{{', '.join(rref_rows)}}}")
    return EXIT_OK


def cmd_compare(args) -> int:
    cmp = scheme_compare(args.P, args.Q, args.k_max)
    certs = {
        "in_WP_P_not_WP_Q": str(cmp.p_not_in_q) if cmp.p_not_in_q is not None else None,
        "in_WP_Q_not_WP_P": str(cmp.q_not_in_p) if cmp.q_not_in_p is not None else None,
    }
    text = [f"relation: {cmp.relation.value}",
            f"WP(P) = {cmp.wp_p}", f"WP(Q) = {cmp.wp_q}"]
    for k, v in certs.items():
        if v is not None:
            text.append(f"certificate {k}: {v}")
    _emit(args, {"relation": cmp.relation.value, "WP_P": cmp.wp_p.to_text(),
                 "WP_Q": cmp.wp_q.to_text(), "certificates": certs}, "\n".join(text))
    return EXIT_OK


def cmd_membership(args) -> int:
    P = PolyFamily.parse(args.family)
    space = weyl_space(P, args.k) if args.k is not None else weyl_polynomials(P, args.k_max)
    h = parse_rational_poly(args.h)
    inside = contains_poly(space, h)
    _emit(args, {"family": [str(p) for p in P], "h": str(h), "member": inside,
                 "space": space.to_text()},
          f"{h} {'in' if inside else 'not in'} {space.to_text()}")
    return EXIT_OK


def _phase_text(ph, system) -> str:
    if ph == 0:
        return "0"
    terms = [f"{m}*{f.symbol}" for m, f in zip(ph.multipliers, system.factors)]
    return "e(" + " + ".join(terms) + ")"


def cmd_correlate(args) -> int:
    system = _system(args.system, args)
    P = PolyFamily.parse(args.family)
    chars = _chars(args.chars)
    cf = dyn.correlate_closed_form(system, chars, P)
    rows = []
    for n in _n_range(args.n):
        exact = dyn.correlate_exact(system, chars, P, n)
        closed = cf.value_at(n)
        rows.append({"n": n, "exact": _phase_text(exact, system),
                     "closed_form": _phase_text(closed, system), "agree": exact == closed})
    closed_desc = {"kind": cf.kind, "polys": [str(q) for q in cf.polys],
                   "exceptional_set": list(cf.exceptional_set)}
    lines = [f"closed form: {cf.kind}"
             + (f" e({' + '.join(f'({q})*{f.symbol}' for q, f in zip(cf.polys, system.factors))})"
                if cf.kind == "phase" else f", exceptional set {list(cf.exceptional_set)}"),
             f"{'n':>6}  {'exact':<28} closed form"]
    lines += [f"{r['n']:>6}  {r['exact']:<28} {r['closed_form']}" for r in rows]
    _emit(args, {"closed_form": closed_desc, "table": rows}, "\n".join(lines))
    return EXIT_OK


def cmd_expand(args) -> int:
    system = _system(args.system, args)
    P = PolyFamily.parse(args.family)
    fs = [dyn.CharacterSum.parse(t) for t in args.f]
    exp = dyn.expansion(system, fs, P)
    terms = [{"coeff": str(t.coeff), "polys": [str(q) for q in t.polys],
              "chars": [list(c) for c in t.chars]} for t in exp.terms]
    l2, bound = exp.l2_squared(), exp.l2_bound_squared()
    lines = [f"{len(terms)} terms"]
    lines += [f"  {t['coeff']:>10} * e({', '.join(t['polys'])})" for t in terms]
    lines.append(f"sum |c|^2 = {l2} <= prod ||f||^2 = {bound}")
    if exp.exceptional_set:
        lines.append(f"exceptional n: {list(exp.exceptional_set)}")
    _emit(args, {"terms": terms, "l2_squared": str(l2), "bound_squared": str(bound),
                 "bound_holds": l2 <= bound, "exceptional_set": list(exp.exceptional_set)},
          "\n".join(lines))
    return EXIT_OK


def _set_spec(text: str, horizon: int, table, bits) -> rec.RecurrenceSetSpec:
    """``full``, ``list:5,7`` or ``threshold:q=n^3,alpha=sqrt2[,t=1/4]``."""
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "full":
        return rec.FullRange(horizon)
    if kind == "list":
        return rec.ExplicitList(tuple(int(x) for x in rest.split(",") if x.strip()), horizon)
    if kind == "threshold":
        opts = {}
        for item in split_top_level(rest):
            k, sep, v = item.partition("=")
            if not sep:
                raise ConfigError(f"threshold option {item!r} is not key=value")
            opts[k.strip()] = v.strip()
        if "q" not in opts or "alpha" not in opts:
            raise ConfigError("threshold sets need q=... and alpha=...")
        return rec.ThresholdSet.far_from_zero(
            parse_poly(opts["q"]), _resolve(opts["alpha"], table, bits),
            Fraction(opts.get("t", "1/4")), horizon, symbol=opts["alpha"])
    raise ConfigError(f"unknown set kind {kind!r}")


def cmd_probe(args) -> int:
    table = _realizations(args)
    spec = _set_spec(args.set, args.horizon, table, args.precision)
    if args.topological:
        if not args.system or not args.family:
            raise ConfigError("--topological needs --system and --family")
        report = rec.probe_topological(spec, _system(args.system, args), args.family,
                                       args.epsilon, args.horizon)
    else:
        if args.basis:
            W = [parse_poly(q) for q in split_top_level(args.basis.strip().strip("{}"))]
        elif args.family:
            W = weyl_polynomials(args.family, args.k_max)
        else:
            raise ConfigError("give --basis or --family")
        beta = [_resolve(b, table, args.precision) for b in (args.beta or ["sqrt2"])]
        report = rec.probe_kronecker(spec, W, beta, args.epsilon, args.horizon)
    if args.format == "json":
        print(report.to_json())
    else:
        lines = [f"{report.kind} probe: {report.verdict.value} (epsilon={report.epsilon}, horizon={report.horizon})"]
        for w in report.witnesses:
            lines.append(f"  witness n={w.n} residuals={list(w.residuals)}")
        if report.near_miss and not report.witnesses:
            lines.append(f"  nearest n={report.near_miss.n} residuals={list(report.near_miss.residuals)}")
        if report.certificate:
            lines.append(f"  certificate: {report.certificate}")
        print("\n".join(lines))
    return EXIT_OK


def cmd_average(args) -> int:
    table = _realizations(args)
    seq = parse_sequence(args.sequence, table, args.precision)
    N = args.N
    checkpoints = sorted({max(1, N * i // 10) for i in range(1, 11)})
    avg, partial = dyn.running_averages(seq, N, checkpoints, shards=args.shards)
    rows = [{"N": c, "re": partial[c].real, "im": partial[c].imag, "abs": abs(partial[c])}
            for c in checkpoints]
    lines = [f"{'N':>10}  {'|avg|':>12}  avg"]
    lines += [f"{r['N']:>10}  {r['abs']:>12.6g}  {complex(r['re'], r['im']):.6g}" for r in rows]
    _emit(args, {"sequence": args.sequence, "N": N, "average": {"re": avg.real, "im": avg.imag},
                 "abs": abs(avg), "checkpoints": rows}, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--k-max", type=_positive_int, default=None,
                        help="largest k tried for the complexity (default 2(rD+1))")
    common.add_argument("--epsilon", type=_positive_fraction, default=Fraction(1, 10))
    common.add_argument("--horizon", type=_positive_int, default=10**4)
    common.add_argument("--N", type=_positive_int, default=10**5)
    common.add_argument("--precision", type=_positive_int, default=DEFAULT_BITS,
                        help="bits of the rotation realizations")
    common.add_argument("--realize", action="append", metavar="SYM=SPEC",
                        help="sqrt2, golden, e, sqrt3, NAME@DEPTH or p/q")
    common.add_argument("--shards", type=_positive_int, default=1)

    p = argparse.ArgumentParser(prog="weylkit", description="Weyl polynomials and polynomial recurrence.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("complexity", parents=[common], help="Weyl complexity and dimension trace")
    s.add_argument("family")
    s.set_defaults(func=cmd_complexity)

    s = sub.add_parser("weyl-basis", parents=[common], help="integral basis of WP_k(P) or WP(P)")
    s.add_argument("family")
    s.add_argument("--k", type=int, default=None)
    s.set_defaults(func=cmd_weyl_basis)

    s = sub.add_parser("compare", parents=[common], help="compare two recurrence schemes")
    s.add_argument("P")
    s.add_argument("Q")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("membership", parents=[common], help="is h in WP(P)?")
    s.add_argument("family")
    s.add_argument("h")
    s.add_argument("--k", type=int, default=None)
    s.set_defaults(func=cmd_membership)

    s = sub.add_parser("correlate", parents=[common], help="character multicorrelation table")
    s.add_argument("family")
    s.add_argument("--system", required=True, help="file, inline factor lines (';'-separated) or d")
    s.add_argument("--chars", required=True, help="v0;v1;...;vr, each comma-separated")
    s.add_argument("--n", default="1:10", help="n or lo:hi")
    s.set_defaults(func=cmd_correlate)

    s = sub.add_parser("expand", parents=[common], help="polynomial Fourier expansion")
    s.add_argument("family")
    s.add_argument("--system", required=True)
    s.add_argument("--f", action="append", required=True,
                   help="character sum 'c:v;c:v', once per function f_0..f_r")
    s.set_defaults(func=cmd_expand)

    s = sub.add_parser("probe", parents=[common], help="search recurrence witnesses")
    s.add_argument("set", help="full | list:5,7 | threshold:q=n^3,alpha=sqrt2[,t=1/4]")
    s.add_argument("--basis", help="explicit polynomial basis")
    s.add_argument("--family", help="family P; the basis is that of WP(P)")
    s.add_argument("--beta", action="append", help="rotation(s) for the Kronecker probe")
    s.add_argument("--topological", action="store_true")
    s.add_argument("--system")
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("average", parents=[common], help="Cesaro average of a phase sequence")
    s.add_argument("sequence", help="e.g. 'e(n^3*alpha)*e((n-n^2)*alpha)'")
    s.set_defaults(func=cmd_average)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotStabilized as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.format == "json":
            print(json.dumps({"schema": SCHEMA, "command": args.command, "error": "NotStabilized",
                              "k_max": exc.k_max, "trace": exc.trace}))
        return EXIT_NOT_STABILIZED
    except MissingRealization as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING_REALIZATION
    except (PolynomialSyntaxError, IntegralityError, NotEssentiallyDistinct, ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
