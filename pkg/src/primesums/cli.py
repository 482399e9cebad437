"""Command-line interface: ``primesums <subcommand> ...``.

Exit codes: 0 the claim is reproduced on the window (or the command
succeeded), 1 a discrepancy was found, 2 an execution error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__, bounds, coeffs, primes, verify
from .analytic import li, li_square
from .errors import DomainError, ResourceError, UnknownInequalityError

DESK_MAX_N = 2 * 10**6
DESK_MAX_X = 10**8
FULL_MAX_N = 66_775_030
FULL_MAX_X = 1_332_450_001 + 10**6

EXPRESSIONS = ("li", "li2", "rho", "kappa", "theta", "omega", "S", "B", "pn", "pi")


@dataclass
class CliConfig:
    subcommand: str
    precision_mode: str = "dd"
    threads: int = 1
    report_path: str | None = None
    checkpoint_path: str | None = None
    json: bool = False
    options: dict = field(default_factory=dict)


def _catalog_epilog() -> str:
    ids = bounds.CATALOG_IDS
    lines, line = [], "  "
    for ident in ids:
        if len(line) + len(ident) + 2 > 78:
            lines.append(line.rstrip())
            line = "  "
        line += ident + ", "
    lines.append(line.rstrip(", "))
    return "inequality catalog ids:\n" + "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.RawDescriptionHelpFormatter
    p = argparse.ArgumentParser(prog="primesums", formatter_class=fmt,
                                description="Asymptotic-expansion polynomials for prime sums and range "
                                            "verification of explicit inequalities.",
                                epilog=_catalog_epilog())
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--json", action="store_true", help="Machine-readable JSON output (default: text).")
    sub = p.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def common(sp):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="Machine-readable JSON output (default: text).")
        return sp

    sp = common(sub.add_parser("polys", help="Exact polynomials R_s, T_s or V_s."))
    sp.add_argument("--family", choices=["R", "T", "V"], required=True, help="Polynomial family.")
    sp.add_argument("--m", type=int, default=2, help="Order (default: 2).")
    sp.add_argument("--table", default=None,
                    help="JSON file with a(i,s) (default: built-in second-order table).")

    sp = common(sub.add_parser("coeff", help="Raw b_{s,i,j,r} lookup."))
    for name in ("s", "i", "j", "r"):
        sp.add_argument(f"--{name}", type=int, required=True)

    sp = common(sub.add_parser("verify", help="Verify a catalog inequality on a window.",
                               formatter_class=fmt, epilog=_catalog_epilog()))
    sp.add_argument("--ineq", required=True, help="Catalog id (see list).")
    sp.add_argument("--from", dest="start", type=int, default=None,
                    help="First point (default: smallest point where the entry is defined).")
    sp.add_argument("--to", dest="stop", type=int, default=None,
                    help=f"Last point (default: {DESK_MAX_N} for n-entries, {DESK_MAX_X} otherwise).")
    sp.add_argument("--full-scale", action="store_true",
                    help=f"Allow windows up to n = {FULL_MAX_N} / x = {FULL_MAX_X}.")
    sp.add_argument("--precision", choices=["dd", "bigfloat"], default="dd",
                    help="dd: float64 screen escalating to double-double then big floats; "
                         "bigfloat: big floats throughout (default: dd).")
    sp.add_argument("--threads", type=int, default=1, help="Worker processes (default: 1).")
    sp.add_argument("--report", default=None, help="Write the JSON report here.")
    sp.add_argument("--csv", default=None, help="Write failures as CSV here.")
    sp.add_argument("--eps", default=None, help="Epsilon for eq_6_3_family (default: 1/2).")

    sp = common(sub.add_parser("crossover", help="Find the onset of an inequality on a window.",
                               formatter_class=fmt, epilog=_catalog_epilog()))
    sp.add_argument("--ineq", required=True, help="Catalog id.")
    sp.add_argument("--max", dest="search_max", type=int, required=True, help="Top of the search window.")
    sp.add_argument("--min", dest="search_min", type=int, default=None,
                    help="Bottom of the search window (default: domain start).")
    sp.add_argument("--precision", choices=["dd", "bigfloat"], default="dd")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--eps", default=None, help="Epsilon for eq_6_3_family.")

    sp = common(sub.add_parser("eval", help="Evaluate a single quantity."))
    sp.add_argument("--expr", choices=EXPRESSIONS, required=True,
                    help="li, li2 = li(x^2), rho/kappa/theta/omega at n, S(x), B_n, p_n, pi(x).")
    sp.add_argument("--at", required=True, help="Point (integer, decimal or fraction).")
    sp.add_argument("--precision", choices=["dd", "bigfloat"], default="dd")

    sp = common(sub.add_parser("residuals", help="Scaled expansion residuals vs T_m / V_m."))
    sp.add_argument("--family", choices=["T", "V"], required=True)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--n", type=int, nargs="+", default=[10**3, 10**4, 10**5, 10**6],
                    help="Grid of indices (default: 1e3 1e4 1e5 1e6).")

    common(sub.add_parser("list", help="List the inequality catalog."))

    sp = common(sub.add_parser("sieve", help="Sieve and export / re-check a checkpoint file."))
    sp.add_argument("--limit", type=int, default=None, help="Sieve all primes <= limit.")
    sp.add_argument("--checkpoint", default=None, help="JSON-lines checkpoint file to write (or read with --load).")
    sp.add_argument("--every", type=int, default=primes.DEFAULT_CHECKPOINT_EVERY,
                    help=f"Primes between checkpoints (default: {primes.DEFAULT_CHECKPOINT_EVERY}).")
    sp.add_argument("--load", action="store_true", help="Read --checkpoint and validate it instead of sieving.")
    return p


def parse_args(argv=None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    opts = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "json", "precision", "threads",
                                                          "report", "checkpoint")}
    return CliConfig(subcommand=ns.subcommand, precision_mode=getattr(ns, "precision", "dd"),
                     threads=getattr(ns, "threads", 1), report_path=getattr(ns, "report", None),
                     checkpoint_path=getattr(ns, "checkpoint", None), json=ns.json, options=opts)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _emit(cfg: CliConfig, doc, text: str) -> None:
    print(json.dumps(doc, indent=2) if cfg.json else text)


def cmd_polys(cfg: CliConfig) -> int:
    o = cfg.options
    table = coeffs.CipollaTable.load(o["table"]) if o["table"] else coeffs.CIPOLLA_M2
    m, fam = o["m"], o["family"]
    if fam == "R":
        if m > table.m:
            raise DomainError(f"R_{m} needs a Cipolla table of order {m}; the table has order {table.m}")
        family = coeffs.assemble_R(table)
        keep = range(1, m + 1)
    elif fam == "T":
        family = coeffs.assemble_T(table, m=m)
        keep = range(1, m + 1)
    else:
        family = coeffs.assemble_V(table, m=m)
        keep = range(2, m + 1)
    rows = [r for r in family.to_json() if r["s"] in keep]
    _emit(cfg, rows, "\n".join(f"{fam}_{s}(x) = {family[s]}" for s in keep))
    return 0


def cmd_coeff(cfg: CliConfig) -> int:
    o = cfg.options
    v = coeffs.b_coefficient(o["s"], o["i"], o["j"], o["r"])
    _emit(cfg, {"s": o["s"], "i": o["i"], "j": o["j"], "r": o["r"], "b": v},
          f"b({o['s']},{o['i']},{o['j']},{o['r']}) = {v}")
    return 0


def _params(o) -> dict:
    return {"eps": o["eps"]} if o.get("eps") is not None else {}


def cmd_verify(cfg: CliConfig) -> int:
    o = cfg.options
    params = _params(o)
    entry = bounds.get_entry(o["ineq"], **params)
    desk = DESK_MAX_N if entry.variable == "n" else DESK_MAX_X
    full = FULL_MAX_N if entry.variable == "n" else FULL_MAX_X
    start = o["start"] if o["start"] is not None else verify.verification_floor(entry)
    stop = o["stop"] if o["stop"] is not None else max(desk, start)
    if entry.full_scale_only and not o["full_scale"]:
        raise DomainError(f"{entry.id} is only checked at full scale; pass --full-scale")
    if stop > desk and not o["full_scale"]:
        raise DomainError(f"window end {stop} exceeds the desk-scale limit {desk}; pass --full-scale")
    if stop > full:
        raise DomainError(f"window end {stop} exceeds the full-scale limit {full}")
    rep = verify.verify_range(entry.id, start, stop, precision=cfg.precision_mode, threads=cfg.threads,
                              report_path=cfg.report_path, csv_path=o["csv"], params=params)
    ok = rep.reproduces_claim
    doc = rep.to_json(include_elapsed=False)
    doc["reproduces_claim"] = ok
    _emit(cfg, doc, rep.summary() + ("\n  claim reproduced on window" if ok else "\n  DISCREPANCY"))
    return 0 if ok else 1


def cmd_crossover(cfg: CliConfig) -> int:
    o = cfg.options
    c = verify.find_crossover(o["ineq"], o["search_max"], o["search_min"], precision=cfg.precision_mode,
                              threads=cfg.threads, params=_params(o))
    doc = c.to_json()
    doc["report"] = c.report.to_json(include_elapsed=False)
    text = f"{c.inequality_id}: onset {c.onset} (claimed {c.claimed_threshold}); {c.label}"
    if c.status_before:
        text += f"\n  {c.onset - 1}: {c.status_before}"
    _emit(cfg, doc, text)
    return 0 if c.onset is not None else 1


def _point(s: str) -> Fraction:
    return Fraction(s)


def cmd_eval(cfg: CliConfig) -> int:
    o = cfg.options
    expr, at, mode = o["expr"], _point(o["at"]), cfg.precision_mode
    if expr in ("li", "li2"):
        v = (li if expr == "li" else li_square)(at, mode=mode)
        _emit(cfg, {"expr": expr, "at": str(at), "value": str(v), "float": float(v), "err": v.err},
              f"{expr}({at}) = {v}")
        return 0
    if at.denominator != 1:
        raise DomainError(f"{expr} takes an integer argument")
    k = int(at)
    if expr in ("S", "pi"):
        if k < 0:
            raise DomainError(f"{expr} needs x >= 0")
        st = primes.state_at_x(k)
        v = st.sum if expr == "S" else st.n
        _emit(cfg, {"expr": expr, "at": k, "value": v}, f"{expr}({k}) = {v}")
        return 0
    if k < 1:
        raise DomainError(f"{expr} needs n >= 1")
    if expr == "pn":
        v = primes.nth_prime(k)
        _emit(cfg, {"expr": expr, "at": k, "value": v}, f"p_{k} = {v}")
        return 0
    if expr == "B":
        r = primes.mandl_residual(k)
        _emit(cfg, {"expr": expr, "at": k, "twoB": r.twoB, "value": str(r.B)},
              f"B_{k} = {r.B} (twoB={r.twoB})")
        return 0
    p = primes.nth_prime(k)
    if expr in ("rho", "kappa"):
        v = bounds.rho_kappa(k, p, expr, mode)
    else:
        v = bounds.theta_omega(k, p, expr, mode)
    _emit(cfg, {"expr": expr, "at": k, "value": str(v), "float": float(v), "err": v.err}, f"{expr}({k}) = {v}")
    return 0


def cmd_residuals(cfg: CliConfig) -> int:
    o = cfg.options
    rows = verify.residual_table(o["m"], o["family"], o["n"])
    doc = [{"n": r.n, "residual": r.residual, "prediction": r.prediction, "gap": r.gap} for r in rows]
    head = f"{o['family']}_{o['m']}(LL)"
    lines = [f"{'n':>12} {'residual':>14} {head:>14} {'gap':>12}"]
    lines += [f"{r.n:>12} {r.residual:>14.6f} {r.prediction:>14.6f} {r.gap:>12.6f}" for r in rows]
    _emit(cfg, doc, "\n".join(lines))
    return 0


def cmd_list(cfg: CliConfig) -> int:
    doc = bounds.catalog_json()
    lines = []
    for e in bounds.CATALOG.values():
        thr = "-" if e.claimed_threshold is None else str(e.claimed_threshold)
        flag = " [refuted]" if e.refuted else (" [full scale]" if e.full_scale_only else "")
        lines.append(f"{e.id:<18} {e.variable:<4} {e.sense:<2} from {thr:<11} {e.statement}{flag}")
    _emit(cfg, doc, "\n".join(lines))
    return 0


def cmd_sieve(cfg: CliConfig) -> int:
    o = cfg.options
    path = cfg.checkpoint_path
    if o["load"]:
        if not path:
            raise DomainError("--load needs --checkpoint")
        stream = primes.PrimeCheckpointStream.from_jsonl(path)
        stream.validate()
    else:
        if o["limit"] is None:
            raise DomainError("sieve needs --limit")
        stream = primes.sieve_stream(o["limit"], checkpoint_every=o["every"])
        if path:
            stream.to_jsonl(path)
    fin = stream.final
    doc = {"limit": stream.limit, "pi": fin.n, "largest_prime": fin.p_n, "sum": fin.sum,
           "checkpoints": len(stream.checkpoints)}
    _emit(cfg, doc, f"pi({stream.limit}) = {fin.n}, largest prime {fin.p_n}, sum {fin.sum}, "
                    f"{len(stream.checkpoints)} checkpoints" + (f" -> {path}" if path and not o["load"] else ""))
    return 0


COMMANDS = {
    "polys": cmd_polys,
    "coeff": cmd_coeff,
    "verify": cmd_verify,
    "crossover": cmd_crossover,
    "eval": cmd_eval,
    "residuals": cmd_residuals,
    "list": cmd_list,
    "sieve": cmd_sieve,
}


def main(argv=None) -> int:
    try:
        cfg = parse_args(argv)
    except SystemExit as e:  # argparse usage errors exit with 2 already
        return int(e.code or 0)
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except UnknownInequalityError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DomainError, ResourceError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
