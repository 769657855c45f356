"""Command-line front end.

Exit codes: 0 success, 1 validation failure or failed check, 2 parse error,
3 unsupported operation.
"""
from __future__ import annotations

import argparse
import os
import re
import sys

from .category import nerve
from .coeff import CONTRAVARIANT, COVARIANT, CoeffError, Constant, validate_system
from .gz import GZError, gz_cohomology, gz_homology, opposite_duality_check
from .homalg import parse_ring
from .homalg.spectral import SSPage
from .homalg.rings import RingError
from .io import ParseError, dumps, load_category, load_map, load_sset, load_system
from .leray import (
    LerayError,
    fibers,
    _fiber_functors,
    is_locally_cohomologically_constant,
    is_locally_cohomologically_trivial,
    leray_e2_via_fibers,
    leray_pages,
    leray_pages_homology,
    pullback_induces_iso,
)
from .report import Report
from .sset import cell_label, validate

RING_ENV = "GZCOHOM_RING"

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_UNSUPPORTED = 0, 1, 2, 3


class Invalid(Exception):
    def __init__(self, report: Report):
        super().__init__(report.summary())
        self.report = report


def parse_degrees(text: str) -> list[int]:
    """'0..2', '3', '0,2,4' or '1..3,5'."""
    out = set()
    for part in str(text).split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\s*\.\.\s*(\d+)", part)
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            if a > b:
                raise ParseError(f"empty range {part}", "--degrees")
            out.update(range(a, b + 1))
        elif part.isdigit():
            out.add(int(part))
        else:
            raise ParseError(f"cannot read degrees from {text!r}", "--degrees")
    return sorted(out)


def _ring(args):
    text = args.ring or os.environ.get(RING_ENV) or "Z"
    try:
        return parse_ring(text)
    except (RingError, ValueError) as exc:
        raise ParseError(str(exc), "--ring") from exc


def _checked_space(ref):
    X = load_sset(ref)
    rep = validate(X)
    if not rep.ok:
        raise Invalid(rep)
    return X


def _checked_map(ref):
    f = load_map(ref)
    for X in (f.source, f.target):
        rep = validate(X)
        if not rep.ok:
            raise Invalid(rep)
    rep = f.validate()
    if not rep.ok:
        raise Invalid(rep)
    return f


def _checked_system(ref, X, ring, variance):
    T = load_system(ref or "constant", X, ring, variance)
    if T.variance != variance:
        T = T.invert() if not isinstance(T, Constant) else Constant(T.base, T.module, variance)
    if not isinstance(T, Constant):
        rep = validate_system(T, 2)
        if not rep.ok:
            raise Invalid(rep)
    return T


# -- rendering ------------------------------------------------------------------------------


def render_grid(page, p_range=None, q_range=None, label=None) -> list[str]:
    p0, p1 = p_range or page.p_range()
    q0, q1 = q_range or (max(page.q_range()[0], 0), page.q_range()[1])
    rows = page.grid((p0, p1), (q0, q1))
    width = max([len(str(v)) for row in rows for v in row] + [len(str(p1)), len(str(p0))])
    head = f"E_{label if label is not None else page.r}"
    lines = [head, "  q\\p " + " ".join(str(p).rjust(width) for p in range(p0, p1 + 1))]
    for q, row in zip(range(q1, q0 - 1, -1), rows):
        lines.append(f"  {str(q).rjust(3)} " + " ".join(str(v).rjust(width) for v in row))
    return lines


def _report_dict(rep: Report) -> dict:
    return {"name": rep.name, "ok": rep.ok, "violations": [
        {"kind": v.kind, "where": _plain(v.where), "message": v.message} for v in rep.violations]}


def _plain(x):
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (int, str)) or x is None:
        return x
    return cell_label(x)


def _status(rep: Report) -> str:
    return "PASS" if rep.ok else "FAIL"


# -- commands ------------------------------------------------------------------------------


def cmd_cohomology(args, homology=False):
    ring = _ring(args)
    X = _checked_space(args.space)
    T = _checked_system(args.coeff, X, ring, CONTRAVARIANT if homology else COVARIANT)
    degs = parse_degrees(args.degrees)
    res = (gz_homology if homology else gz_cohomology)(X, T, degs)
    data = {"space": X.name, "coefficients": args.coeff or "constant", "result": res.to_dict()}
    return EXIT_OK, res.render(), data


def cmd_thomason(args):
    ring = _ring(args)
    C = load_category(args.category)
    rep = C.validate()
    if not rep.ok:
        raise Invalid(rep)
    degs = parse_degrees(args.degrees)
    variance = CONTRAVARIANT if args.homology else COVARIANT
    X = nerve(C, max(degs) + 1)
    T = _checked_system(args.coeff, X, ring, variance)
    res = gz_homology(X, T, degs) if args.homology else gz_cohomology(X, T, degs)
    data = {"category": C.name, "nerve_cells": X.counts(), "result": res.to_dict()}
    return EXIT_OK, res.render(), data


def _map_system(args, on_target=False):
    ring = _ring(args)
    f = _checked_map(args.map)
    variance = CONTRAVARIANT if getattr(args, "homology", False) else COVARIANT
    T = _checked_system(args.coeff, f.target if on_target else f.source, ring, variance)
    return f, T, ring


def cmd_fibers(args):
    f, T, _ = _map_system(args)
    data = fibers(f, T)
    funcs = _fiber_functors(data, list(range(args.qmax + 1)))
    lines, out = [], []
    for y in f.target.all_cells():
        W = data.fiber(y)
        groups = {q: funcs[q].values[y] for q in funcs}
        sym = "H_" if not T.covariant else "H^"
        text = "; ".join(f"{sym}{q}: {groups[q]}" for q in sorted(groups))
        lines.append(f"{cell_label(y)}: fiber cells {W.counts()}; {text}")
        out.append({"cell": cell_label(y), "fiber_cells": W.counts(),
                    "groups": {str(q): groups[q].to_dict() for q in sorted(groups)}})
    return EXIT_OK, "\n".join(lines), {"map": f.name, "fibers": out}


def cmd_leray(args):
    f, T, ring = _map_system(args)
    run = leray_pages_homology if args.homology else leray_pages
    res = run(f, T, ring, args.rmax, args.top)
    ss = res.ss
    lines = []
    for P in ss.pages:
        if P.r < 2:
            continue
        lines += render_grid(P)
        nz = P.nonzero_differentials()
        if nz:
            lines.append("  nonzero d_%d at %s" % (P.r, ", ".join(f"({p},{q})" for p, q in nz)))
    lines += render_grid(ss.e_inf, label="inf")
    tot = ss.totals()
    lines.append("totals: " + "; ".join(f"{n}: {tot[n]}" for n in sorted(tot)))
    lines.append(f"direct: {res.direct.render()}")
    lines.append(f"abutment check: {_status(res.convergence)}")
    lines.append(f"coherence check: {_status(res.coherence)}")
    lines.append(f"complex size: {res.size}")
    data = {"map": f.name, "result": ss.to_dict(), "direct": res.direct.to_dict(),
            "abutment": _report_dict(res.convergence), "coherence": _report_dict(res.coherence),
            "complex_size": res.size}
    code = EXIT_OK if res.convergence.ok and res.coherence.ok else EXIT_INVALID
    for v in res.convergence.violations + res.coherence.violations:
        lines.append(f"  {v}")
    return code, "\n".join(lines), data


def cmd_leray_e2(args):
    f, T, ring = _map_system(args)
    table = leray_e2_via_fibers(f, T, ring, args.pmax, args.qmax)
    page = SSPage(2, "cohomology", table)
    lines = render_grid(page, (0, args.pmax), (0, args.qmax))
    data = {"map": f.name, "e2": [[p, q, d] for (p, q), d in sorted(table.items())]}
    return EXIT_OK, "\n".join(lines), data


def cmd_check_constant(args):
    f, T, _ = _map_system(args)
    rep = is_locally_cohomologically_constant(f, T, args.qmax)
    text = f"locally cohomologically constant (q <= {args.qmax}): {_status(rep)}"
    text += "".join(f"\n  {v}" for v in rep.violations)
    return (EXIT_OK if rep.ok else EXIT_INVALID), text, _report_dict(rep)


def cmd_check_trivial(args):
    f, T, _ = _map_system(args, on_target=True)
    rep = is_locally_cohomologically_trivial(f, T, args.qmax)
    lines = [f"locally cohomologically trivial (q <= {args.qmax}): {_status(rep)}"]
    lines += [f"  {v}" for v in rep.violations]
    data = {"trivial": _report_dict(rep)}
    if rep.ok:
        iso = pullback_induces_iso(f, T, args.qmax)
        lines.append(f"pullback induces isomorphisms: {_status(iso)}")
        lines += [f"  {v}" for v in iso.violations]
        data["pullback_iso"] = _report_dict(iso)
    return (EXIT_OK if rep.ok else EXIT_INVALID), "\n".join(lines), data


def cmd_duality(args):
    ring = _ring(args)
    X = _checked_space(args.space)
    variance = CONTRAVARIANT if args.homology else COVARIANT
    T = _checked_system(args.coeff, X, ring, variance)
    rep = opposite_duality_check(X, T, parse_degrees(args.degrees))
    direct, opp = rep.info["direct"], rep.info["opposite"]
    lines = [f"direct:   {direct.render()}", f"opposite: {opp.render()}", f"duality check: {_status(rep)}"]
    lines += [f"  {v}" for v in rep.violations]
    data = {"direct": direct.to_dict(), "opposite": opp.to_dict(), "check": _report_dict(rep)}
    return (EXIT_OK if rep.ok else EXIT_INVALID), "\n".join(lines), data


def cmd_validate(args):
    if not (args.space or args.map):
        raise ParseError("validate needs --space or --map", "validate")
    reports = []
    X = None
    if args.space:
        X = load_sset(args.space)
        reports.append(validate(X))
    if args.map:
        f = load_map(args.map)
        reports += [validate(f.source), validate(f.target)]
        if all(r.ok for r in reports):
            reports.append(f.validate())
        X = X or f.source
    if args.coeff and all(r.ok for r in reports):
        ring = _ring(args)
        T = load_system(args.coeff, X, ring, CONTRAVARIANT if args.homology else COVARIANT)
        reports.append(validate_system(T, args.cap))
    ok = all(r.ok for r in reports)
    text = "\n".join(r.summary() for r in reports)
    return (EXIT_OK if ok else EXIT_INVALID), text, {"ok": ok, "reports": [_report_dict(r) for r in reports]}


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help=f"Z, Q or Fp(p) such as F2 (default: ${RING_ENV} or Z)")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--coeff", default=None,
                        help="(default constant) constant, constant-<ring>, constant(<module>), monodromy(c) or a system file")
    common.add_argument("--homology", action="store_true", help="use contravariant coefficients and homology")

    p = argparse.ArgumentParser(prog="gzcohom", description="Gabriel-Zisman (co)homology and Leray spectral sequences")
    sub = p.add_subparsers(dest="command", required=True)

    for name in ("cohomology", "homology"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--space", required=True)
        s.add_argument("--degrees", default="0..2")

    s = sub.add_parser("thomason", parents=[common])
    s.add_argument("--category", required=True, help="terminal, cyclic(k), linear(n), discrete(k), fact:<name> or a file")
    s.add_argument("--degrees", default="0..2")

    s = sub.add_parser("fibers", parents=[common])
    s.add_argument("--map", required=True)
    s.add_argument("--qmax", type=int, default=1)

    s = sub.add_parser("leray", parents=[common])
    s.add_argument("--map", required=True)
    s.add_argument("--rmax", type=int, default=3)
    s.add_argument("--top", type=int, default=2, help="highest total degree")

    s = sub.add_parser("leray-e2", parents=[common])
    s.add_argument("--map", required=True)
    s.add_argument("--pmax", type=int, default=2)
    s.add_argument("--qmax", type=int, default=2)

    for name in ("check-constant", "check-trivial"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--map", required=True)
        s.add_argument("--qmax", type=int, default=2)

    s = sub.add_parser("duality-check", parents=[common])
    s.add_argument("--space", required=True)
    s.add_argument("--degrees", default="0..2")

    s = sub.add_parser("validate", parents=[common])
    s.add_argument("--space")
    s.add_argument("--map")
    s.add_argument("--cap", type=int, default=2, help="degree cap for checking the functor laws")
    return p


COMMANDS = {
    "cohomology": cmd_cohomology,
    "homology": lambda a: cmd_cohomology(a, homology=True),
    "thomason": cmd_thomason,
    "fibers": cmd_fibers,
    "leray": cmd_leray,
    "leray-e2": cmd_leray_e2,
    "check-constant": cmd_check_constant,
    "check-trivial": cmd_check_trivial,
    "duality-check": cmd_duality,
    "validate": cmd_validate,
}


def run(argv=None) -> tuple[int, str]:
    """Run one job; returns (exit code, rendered output)."""
    args = build_parser().parse_args(argv)
    try:
        code, text, data = COMMANDS[args.command](args)
    except ParseError as exc:
        return EXIT_PARSE, f"parse error: {exc}"
    except Invalid as exc:
        if args.format == "json":
            return EXIT_INVALID, dumps({"command": args.command, "ok": False, "report": _report_dict(exc.report)})
        return EXIT_INVALID, exc.report.summary()
    except (LerayError, CoeffError, GZError, RingError) as exc:
        msg = str(exc)
        if isinstance(exc, LerayError) and "not locally cohomologically constant" in msg:
            return EXIT_INVALID, f"check failed: {msg}"
        return EXIT_UNSUPPORTED, f"unsupported: {msg}"
    if args.format == "json":
        return code, dumps({"command": args.command, **data})
    return code, text


def main(argv=None) -> int:
    code, out = run(argv)
    stream = sys.stdout if code in (EXIT_OK, EXIT_INVALID) else sys.stderr
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
