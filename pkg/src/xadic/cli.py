"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 horizon or size budget
exceeded, 4 falsification (a computed fact contradicting a structural claim).
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from dataclasses import dataclass
from pathlib import Path

from .algebra import GF, Poly, is_prime
from .boxcount import FalsificationError, block_length, build_gamma, choose_u, deficit, solve_nbar
from .digital import (NetSpec, admissibility_check, default_depth, digital_point, hankel_of,
                      kronecker_coord, points_csv, radical_inverse, sequence_t_check, unit,
                      vdck_net)
from .discrepancy import BudgetError, growth_sweep
from .hankel import brute_inf_search, deficiency_scan, regular_sizes
from .laurent import (DEFAULT_HORIZON, PAPERFOLDING_HORIZON, HorizonError, LaurentSeries,
                      continued_fraction, convergents, from_rational, paperfolding_theta)

OK, CONFIG_ERROR, BUDGET_ERROR, FALSIFIED = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


class Falsified(Exception):
    """Raised by a command after its report is written, to set exit code 4."""


_TERM = re.compile(r"^([+-]?)(\d*)(?:\*?([Xx])(?:\^(\d+))?)?$")


def parse_poly(text: str, p: int) -> Poly:
    """Parse sums of terms like ``2X^3``, ``X``, ``-1`` into a polynomial over F_p."""
    src = text.replace(" ", "")
    if not src:
        raise ConfigError("empty polynomial")
    terms = re.findall(r"[+-]?[^+-]+", src)
    coeffs: dict[int, int] = {}
    for t in terms:
        m = _TERM.match(t)
        if not m or (not m.group(2) and not m.group(3)):
            raise ConfigError(f"cannot parse polynomial term {t!r} in {text!r}")
        sign, c, x, e = m.groups()
        c = int(c) if c else 1
        k = (int(e) if e else 1) if x else 0
        coeffs[k] = coeffs.get(k, 0) + (-c if sign == "-" else c)
    top = max(coeffs)
    return Poly(p, [coeffs.get(k, 0) for k in range(top + 1)])


@dataclass
class RunConfig:
    command: str
    p: int
    theta: str
    horizon: int
    depth: int | None
    out: Path
    fmt: str
    seed: int
    threads: int
    extra: dict

    def as_dict(self) -> dict:
        d = {"command": self.command, "p": self.p, "theta": self.theta, "horizon": self.horizon,
             "depth": "auto" if self.depth is None else self.depth, "out": str(self.out),
             "format": self.fmt, "seed": self.seed, "threads": self.threads}
        d.update(self.extra)
        return {f"config.{k}": v for k, v in d.items()}


def load_theta(cfg: RunConfig) -> LaurentSeries:
    src, p, K = cfg.theta, cfg.p, cfg.horizon
    if src == "paperfolding":
        if p != 3:
            raise ConfigError("the paperfolding series is defined over F_3; use --p 3")
        return paperfolding_theta(K)
    if src.startswith("rational:"):
        body = src[len("rational:"):]
        if ",/," not in body:
            raise ConfigError("rational theta must look like rational:P,/,Q")
        num, den = body.split(",/,", 1)
        P, Q = parse_poly(num, p), parse_poly(den, p)
        if Q.is_zero():
            raise ConfigError("denominator polynomial is zero")
        return from_rational(P, Q, K)
    path = Path(src[len("file:"):] if src.startswith("file:") else src)
    if not path.is_file():
        raise ConfigError(f"unknown theta source {src!r} (paperfolding, rational:P,/,Q or a file)")
    theta = LaurentSeries.from_text(path.read_text())
    if theta.p != p:
        raise ConfigError(f"series file is over F_{theta.p} but --p is {p}")
    return theta.truncate(min(K, theta.horizon))


def emit(cfg: RunConfig, name: str, report: dict, files: dict[str, str] | None = None) -> None:
    cfg.out.mkdir(parents=True, exist_ok=True)
    full = {**cfg.as_dict(), **report}
    if cfg.fmt == "json":
        text = json.dumps({k: v if isinstance(v, (int, float, bool)) or v is None else str(v)
                           for k, v in full.items()}, indent=1) + "\n"
        (cfg.out / f"{name}.json").write_text(text)
    else:
        text = "".join(f"{k}: {v}\n" for k, v in full.items())
        (cfg.out / f"{name}.txt").write_text(text)
    for fname, body in (files or {}).items():
        (cfg.out / fname).write_text(body)
    sys.stdout.write(text)


def cmd_gen(cfg: RunConfig, args) -> None:
    theta = load_theta(cfg)
    p, N = cfg.p, args.N
    if N < 0:
        raise ConfigError("--N must be nonnegative")
    if args.dim == 3:
        if args.m is None:
            raise ConfigError("--dim 3 needs --m (the net has p^m points)")
        m = args.m
        if N > p ** m:
            raise ConfigError(f"--N {N} exceeds the {p}^{m} net points")
        spec = vdck_net(theta, m, cfg.depth or default_depth(m, 0))
    else:
        m = 1
        while p ** m < N:
            m += 1
        spec = NetSpec(p, m, (unit(p), hankel_of(theta)), cfg.depth or m + 16)
    body = points_csv(spec, range(N), with_digits=args.digits)
    emit(cfg, "gen", {"points": N, "dimension": spec.s, "m": spec.m, "R": spec.R,
                      "csv": "points.csv"}, {"points.csv": body})


def _verify_deficiency(cfg, args, theta):
    rep = deficiency_scan(theta, args.r_max, bound=args.bound, workers=cfg.threads)
    out = rep.as_dict()
    ok = rep.passed
    if args.degq_max is not None:
        e, r, q = brute_inf_search(theta, args.brute_r_max, args.degq_max)
        out["brute_inf_exponent"] = e
        out["brute_inf_witness"] = f"r={r} Q={list(q)}"
        out["brute_inf_scope"] = f"r <= {args.brute_r_max}, deg Q <= {args.degq_max}"
        if args.bound is not None and not (e >= -args.bound):
            ok = False
    out["status"] = "PASS" if ok else "FAIL"
    return out, ok, {}


def _verify_tvalue(cfg, args, theta):
    res = sequence_t_check(unit(cfg.p), hankel_of(theta), range(1, args.m_max + 1), args.t)
    out = {"t": args.t, "m_max": args.m_max}
    for m, (ok, w) in res.items():
        out[f"m={m}"] = "ok" if ok else f"FAIL witness={w}"
    ok = all(v[0] for v in res.values())
    out["status"] = "PASS" if ok else "FAIL"
    return out, ok, {}


def _verify_admissible(cfg, args, theta):
    m = args.m
    spec = vdck_net(theta, m, cfg.depth or default_depth(m, args.d))
    res = admissibility_check(spec, args.d, mode=args.mode)
    out = {"m": m, "d": args.d, "mode": res.mode, "min_norm_exponent": res.min_norm_exponent,
           "threshold_exponent": m + args.d, "witness": res.witness,
           "status": "PASS" if res.ok else "FAIL"}
    return out, res.ok, {}


def _verify_hankel(cfg, args, theta):
    reg = regular_sizes(theta, args.m_max)
    cf = continued_fraction(theta)
    ds = {c.d for c in convergents(cf) if 1 <= c.d <= args.m_max}
    ok = reg == ds
    out = {"m_max": args.m_max, "regular_sizes": sorted(reg), "convergent_degrees": sorted(ds),
           "status": "PASS" if ok else "FAIL"}
    return out, ok, {}


def _verify_correspondence(cfg, args, theta):
    p = cfg.p
    m = args.m
    R = cfg.depth or m + 16
    spec = NetSpec(p, m, (unit(p), hankel_of(theta)), R)
    rng = random.Random(cfg.seed)
    ns = list(range(min(p ** m, p ** args.exhaustive_m)))
    ns += [rng.randrange(p ** m) for _ in range(args.random)]
    bad = []
    for n in ns:
        x = digital_point(spec, n)
        want = (radical_inverse(p, n), kronecker_coord(theta, n, R))
        if x.values != want:
            bad.append(n)
    out = {"checked": len(ns), "m": m, "R": R, "mismatches": len(bad),
           "first_mismatch": bad[0] if bad else "none", "status": "FAIL" if bad else "PASS"}
    return out, not bad, {}


VERIFIERS = {
    "deficiency": _verify_deficiency,
    "tvalue": _verify_tvalue,
    "admissible": _verify_admissible,
    "hankel": _verify_hankel,
    "correspondence": _verify_correspondence,
}


def cmd_verify(cfg: RunConfig, args) -> None:
    theta = load_theta(cfg)
    out, ok, files = VERIFIERS[args.which](cfg, args, theta)
    emit(cfg, f"verify_{args.which}", out, files)
    if not ok:
        raise Falsified(args.which)


def cmd_lowerbound(cfg: RunConfig, args) -> None:
    m = args.m
    if m <= 0 or m % 8:
        raise ConfigError(f"--m {m} must be a positive multiple of 8v")
    theta = load_theta(cfg)
    if args.D is not None:
        D, source = args.D, "given"
    else:
        D = deficiency_scan(theta, args.r_max, workers=cfg.threads).D_hat
        source = f"scanned r <= {args.r_max}"
    v = block_length(D)
    if m % (8 * v):
        raise ConfigError(f"--m {m} is not a multiple of 8v = {8 * v} (D = {D})")
    spec = vdck_net(theta, m, cfg.depth or default_depth(m, D))
    try:
        u = choose_u(theta, m, D)
        _, nbar, g = solve_nbar(spec, build_gamma(m, v, u, cfg.p))
    except FalsificationError as exc:
        emit(cfg, "lowerbound", {"D": D, "D_source": source, "status": "FALSIFIED",
                                 "reason": str(exc)})
        raise Falsified(str(exc))
    rep = deficit(spec, g, D, nbar=nbar)
    out = {"D_source": source, **rep.as_dict()}
    emit(cfg, "lowerbound", out, {"intervals.csv": rep.intervals_csv()})
    if not rep.passed:
        raise Falsified("deficit report failed")


def cmd_growth(cfg: RunConfig, args) -> None:
    theta = load_theta(cfg)
    if args.k_max < args.k_min or args.k_min < 1:
        raise ConfigError("need 1 <= --k-min <= --k-max")
    table = growth_sweep(theta, args.k_max, k_min=args.k_min, R=cfg.depth)
    report = {"rows": len(table.rows)}
    for k, N, D in table.rows:
        report[f"NDstar[k={k}]"] = N * D
    report.update(table.fits)
    report["log2_fit_better"] = table.log2_fit_better
    report["NDstar_nondecreasing"] = table.nondecreasing
    emit(cfg, "growth", report,
         {"growth.csv": table.to_csv(), "growth_fit.txt": table.fit_summary()})


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="field characteristic (prime)")
    common.add_argument("--theta", default="paperfolding",
                        help="paperfolding | rational:P,/,Q | path to a series file")
    common.add_argument("--horizon", type=int, default=None,
                        help=f"known coefficients of theta (default {PAPERFOLDING_HORIZON} "
                             f"for paperfolding, {DEFAULT_HORIZON} otherwise)")
    common.add_argument("--depth", type=int, default=None, help="digit depth R of points")
    common.add_argument("--out", default="out", help="output directory (created if missing)")
    common.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1)

    ap = argparse.ArgumentParser(prog="xadic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write the first N points as CSV")
    g.add_argument("--N", type=int, default=81)
    g.add_argument("--dim", type=int, choices=[2, 3], default=2)
    g.add_argument("--m", type=int, default=None, help="net size exponent for --dim 3")
    g.add_argument("--digits", action="store_true", help="also write digit strings")

    v = sub.add_parser("verify", parents=[common], help="run a structural check")
    v.add_argument("which", choices=sorted(VERIFIERS))
    v.add_argument("--r-max", type=int, default=512)
    v.add_argument("--bound", type=int, default=None, help="claimed maximal quotient degree")
    v.add_argument("--brute-r-max", type=int, default=64)
    v.add_argument("--degq-max", type=int, default=None, help="enable brute-force inf search")
    v.add_argument("--m-max", type=int, default=20)
    v.add_argument("--t", type=int, default=3)
    v.add_argument("--m", type=int, default=6)
    v.add_argument("--d", type=int, default=6)
    v.add_argument("--mode", choices=["zero-shortcut", "exhaustive"], default="zero-shortcut")
    v.add_argument("--exhaustive-m", type=int, default=6)
    v.add_argument("--random", type=int, default=0, help="extra random indices below p^m")

    lb = sub.add_parser("lowerbound", parents=[common], help="exact box-count deficit")
    lb.add_argument("--m", type=int, required=True)
    lb.add_argument("--D", type=int, default=None, help="deficiency (default: scanned)")
    lb.add_argument("--r-max", type=int, default=64, help="shifts scanned when --D is absent")

    gr = sub.add_parser("growth", parents=[common], help="exact N D*_N for N = p^k")
    gr.add_argument("--k-max", type=int, required=True)
    gr.add_argument("--k-min", type=int, default=1)
    return ap


COMMANDS = {"gen": cmd_gen, "verify": cmd_verify, "lowerbound": cmd_lowerbound,
            "growth": cmd_growth}


def make_config(args) -> RunConfig:
    if not is_prime(args.p):
        raise ConfigError(f"--p {args.p} is not prime")
    GF(args.p)
    if args.threads < 1:
        raise ConfigError("--threads must be at least 1")
    horizon = args.horizon
    if horizon is None:
        horizon = PAPERFOLDING_HORIZON if args.theta == "paperfolding" else DEFAULT_HORIZON
    if horizon < 1:
        raise ConfigError("--horizon must be positive")
    skip = {"command", "p", "theta", "horizon", "depth", "out", "fmt", "seed", "threads"}
    extra = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return RunConfig(args.command, args.p, args.theta, horizon, args.depth, Path(args.out),
                     args.fmt, args.seed, args.threads, extra)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        COMMANDS[args.command](cfg, args)
    except (ConfigError, ValueError) as exc:
        if isinstance(exc, HorizonError):
            print(f"error: {exc}", file=sys.stderr)
            return BUDGET_ERROR
        print(f"config error: {exc}", file=sys.stderr)
        return CONFIG_ERROR
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET_ERROR
    except Falsified as exc:
        print(f"FALSIFIED: {exc}", file=sys.stderr)
        return FALSIFIED
    return OK


if __name__ == "__main__":
    sys.exit(main())
