"""Command-line interface: ``kdonaldson <subcommand> ...``.

Exit codes: 0 success, 1 identity failure, 2 usage error.  Output is
deterministic for identical flags (random mode records its seed).
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from typing import Dict, List, Optional, Sequence, Tuple

__all__ = ["main", "parse_class", "parse_range", "build_parser"]


class UsageError(ValueError):
    pass


def parse_range(text: str) -> List[int]:
    """``"5"`` or ``"5..13"`` (inclusive)."""
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:\.\.\s*(-?\d+)\s*)?", text)
    if not m:
        raise UsageError(f"bad range {text!r}; use N or LO..HI")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def parse_window(text: str) -> Tuple[int, int]:
    """``"[lo,hi]"`` or ``"lo,hi"``."""
    m = re.fullmatch(r"\s*\[?\s*(-?\d+)\s*,\s*(-?\d+)\s*\]?\s*", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise UsageError(f"bad p-window {text!r}; use [lo,hi]")
    return int(m.group(1)), int(m.group(2))


def parse_class(text: str, names: Sequence[str] = ("H", "E")) -> Dict[str, int]:
    """A divisor class such as ``"2H-3E"``, ``"-H"`` or ``"0"`` as ``{name: coeff}``."""
    s = text.replace(" ", "")
    if s in ("0", ""):
        return {n: 0 for n in names}
    if not re.fullmatch(r"([+-]?\d*[A-Za-z])+", s):
        raise UsageError(f"bad class {text!r}")
    out = {n: 0 for n in names}
    for sign, num, name in re.findall(r"([+-]?)(\d*)([A-Za-z])", s):
        if name not in out:
            raise UsageError(f"unknown class name {name!r} in {text!r}")
        c = int(num) if num else 1
        out[name] += -c if sign == "-" else c
    return out


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _table(rows: List[List[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


# ---------------------------------------------------------------- subcommands
def cmd_zinst(args) -> int:
    from .instanton import InstantonParams, TorusSetup, zinst
    from .torus import PointAlgebra, random_point

    try:
        params = InstantonParams(args.rank, args.cs, args.n_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    setup = TorusSetup.standard(args.rank)
    out = {"rank": args.rank, "cs_level": args.cs, "n_max": args.n_max, "eval": args.eval}
    if args.eval == "random":
        point = random_point(setup.nvars, random.Random(args.seed))
        series = zinst(params, setup, PointAlgebra(point, setup.D))
        out["seed"] = args.seed
        out["point"] = [f"{p.numerator}/{p.denominator}" for p in point]
    else:
        series = zinst(params, setup)
    out.update(series.to_json())
    _emit(out)
    return 0


def cmd_blowup_check(args) -> int:
    from .blowup import BlowupParams, blowup_identity_check

    ds = parse_range(args.d)
    try:
        for d in ds:
            BlowupParams(args.rank, args.cs, args.k, d)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [["r", "m", "k", "d", "order", "target", "verdict"]]
    for d in ds:
        res = blowup_identity_check(args.rank, args.cs, args.k, d, args.order, mode=args.eval, seed=args.seed)
        verdict = (f"holds through Λ^{args.order}" if res["holds"]
                   else f"FAILS at Λ^{res['first_failing_order']}")
        rows.append([str(args.rank), str(args.cs), str(args.k), str(d), str(args.order), res["target"], verdict])
    print(_table(rows))
    return 0


def cmd_sw(args) -> int:
    from .theta import SWSeries, check_U1, contact_check

    L = args.lambda_order
    lo, hi = parse_window(args.p_window) if args.p_window else (-(L + 8), 16)
    if args.emit == "contact":
        res = contact_check(L, hi)
        res["U1"] = check_U1(L, hi)
        out = {"lambda_order": L, "p_window": [lo, hi]}
        ok = True
        for name, s in res.items():
            zero = s.is_zero()
            ok &= zero
            out[name] = "0" if zero else s.to_json((lo, hi))
        _emit(out)
        return 0 if ok else 1
    sw = SWSeries(L, hi + L)
    series = {"u": sw.u, "h": sw.h, "d2f": sw.d2F(), "dadq": sw.dadq}[args.emit]
    out = {"quantity": args.emit, "p_window": [lo, hi]}
    out.update(series.to_json((lo, hi)))
    _emit(out)
    return 0


def cmd_wallcross(args) -> int:
    from .toric import blowup_p2
    from .wallcross import (ToricWallData, degree_window, delta_localization, delta_modular,
                            vanishing_and_degree_check)

    if args.surface != "blowup-p2":
        raise UsageError("only --surface blowup-p2 is shipped")
    X = blowup_p2()
    xi = X.divisor(parse_class(args.xi))
    L = X.divisor(parse_class(args.L))
    c1 = parse_class(args.c1)
    v1 = tuple(-args.n * x for x in L)
    td = ToricWallData(X, xi, v1)
    w = td.wall_input
    lo, hi = degree_window(w)
    out = {"surface": args.surface, "xi": args.xi, "c1": args.c1, "L": args.L, "n": args.n,
           "xi_sq": w.xi_sq, "xi_K": w.xi_K, "xi_w": w.xi_w, "w_sq": w.w_sq, "parity": w.parity_class,
           "window": [lo, hi]}
    # the wall condition xi = c1 mod 2
    out["wall_parity_ok"] = all((a - b) % 2 == 0 for a, b in zip(xi, X.divisor(c1)))
    ok = True
    if args.side in ("modular", "both"):
        mod = delta_modular(w, args.d_max)
        out["modular"] = {str(d): c for d, c in sorted(mod.items())}
        check = vanishing_and_degree_check(w, mod)
        out["window_ok"] = check["ok"]
        ok &= check["ok"]
    if args.side in ("localization", "both"):
        l_max = max((args.d_max + w.xi_sq + 3) // 4, 0)
        l_max = min(l_max, args.l_max)
        loc = delta_localization(td, l_max).degrees
        out["localization"] = {str(d): c for d, c in sorted(loc.items()) if d <= args.d_max}
    if args.side == "both":
        agree = all(out["modular"].get(k, 0) == v for k, v in out["localization"].items())
        out["agree"] = agree
        ok &= agree
    _emit(out)
    return 0 if ok else 1


def cmd_p2_hilbert(args) -> int:
    from .surfaces import admissible_degree, hilbert_numerator

    ds = [d for d in parse_range(args.d) if admissible_degree(args.c1, d)]
    if not ds:
        raise UsageError(f"no admissible d in {args.d!r} (c1=0 needs d = 1 mod 4, c1=H needs d = 0 mod 4)")
    results = [hilbert_numerator(args.c1, d) for d in ds]
    if args.emit == "json":
        _emit([r.to_json() for r in results])
    else:
        print("\n".join(r.label() for r in results))
    return 0


def cmd_verify_all(args) -> int:
    from .acceptance import run_all

    results = run_all(stretch=args.stretch)
    rows = [["criterion", "verdict", "detail"]]
    for r in results:
        rows.append([f"{r.number} {r.title}", "PASS" if r.ok else "FAIL", r.detail])
        for k, v in r.extra.items():
            rows.append([f"  stretch {k}", "", v])
    print(_table(rows))
    bad = [r for r in results if not r.ok]
    if bad:
        print(f"first failure: criterion {bad[0].number}: {bad[0].detail}")
        return 1
    return 0


# ---------------------------------------------------------------- parser
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kdonaldson", description="Exact K-theoretic instanton and Donaldson invariant engine.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    z = sub.add_parser("zinst", help="instanton partition function coefficients as JSON")
    z.add_argument("--rank", type=int, default=2)
    z.add_argument("--cs", type=int, default=0)
    z.add_argument("--n-max", type=int, default=2)
    z.add_argument("--eval", choices=("exact", "random"), default="exact")
    z.add_argument("--seed", type=int, default=0)
    z.set_defaults(fn=cmd_zinst)

    b = sub.add_parser("blowup-check", help="blowup identity verdicts")
    b.add_argument("--rank", type=int, default=2)
    b.add_argument("--cs", type=int, default=0)
    b.add_argument("--k", type=int, default=0)
    b.add_argument("--d", default="0")
    b.add_argument("--order", type=int, default=8)
    b.add_argument("--eval", choices=("exact", "random"), default="exact")
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(fn=cmd_blowup_check)

    s = sub.add_parser("sw", help="Seiberg-Witten side series as JSON")
    s.add_argument("--emit", choices=("u", "h", "d2f", "dadq", "contact"), required=True)
    s.add_argument("--lambda-order", type=int, default=8)
    s.add_argument("--p-window", default=None)
    s.set_defaults(fn=cmd_sw)

    w = sub.add_parser("wallcross", help="wallcrossing terms on the blown-up plane")
    w.add_argument("--surface", default="blowup-p2")
    w.add_argument("--xi", required=True)
    w.add_argument("--c1", default="E")
    w.add_argument("--L", default="H")
    w.add_argument("--n", type=int, default=1)
    w.add_argument("--d-max", type=int, default=8)
    w.add_argument("--side", choices=("modular", "localization", "both"), default="both")
    w.add_argument("--l-max", type=int, default=1, help="largest l = n + m on the localization side")
    w.set_defaults(fn=cmd_wallcross)

    h = sub.add_parser("p2-hilbert", help="Hilbert-series numerators P_d (c1 = 0) and Q_d (c1 = H)")
    h.add_argument("--c1", choices=("0", "H"), required=True)
    h.add_argument("--d", required=True)
    h.add_argument("--emit", choices=("table", "json"), default="table")
    h.set_defaults(fn=cmd_p2_hilbert)

    v = sub.add_parser("verify-all", help="run the acceptance suite and print a pass/fail matrix")
    v.add_argument("--stretch", action="store_true", help="also compare the best-effort table rows")
    v.set_defaults(fn=cmd_verify_all)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("n_max", "order", "lambda_order", "d_max"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            parser.error(f"--{name.replace('_', '-')} must be >= 0")
    try:
        return args.fn(args)
    except UsageError as exc:
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
