"""Command-line front end.

Subcommands: sieve, gaps, theta, expsum, weights, hecke, kloosterman, moments.
Exit codes: 0 success; 1 usage/validation error; 2 resource budget exceeded;
3 inconclusive precision (kloosterman scans only).

All output is deterministic given (options, config, --seed): reruns are
byte-identical.  Rationals are serialized "num/den"; JSON carries a schema
version field; CSV is comma-separated UTF-8 with a header row.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bfree, expsum, hecke, kloosterman, sieveweights
from .arith import primes_in
from .config import Config, format_rational, load_config, parse_rational
from .errors import ConstraintError, InconclusiveError, ResourceBudgetError
from .exponents import ExponentPair, format_theta, optimize_theta

Q = Fraction

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract here is exit 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit_Usage(message)


class SystemExit_Usage(Exception):
    pass


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    # the global flags are accepted both before and after the subcommand;
    # SUPPRESS keeps the subparser copy from clobbering a value given up front
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON config file")
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output path (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"),
                        default=argparse.SUPPRESS,
                        help="output format (default depends on subcommand)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="RNG seed override for seeded coefficient draws")

    p = _Parser(prog="gapsieve", parents=[common],
                description="B-free interval sieves, Hecke/Kloosterman "
                            "nonvanishing scans, and exponent tables.")
    # no set_defaults here: it would mutate the shared parent actions and
    # let the subparser clobber flags given before the subcommand; unset
    # globals are resolved with getattr in main()
    sub = p.add_subparsers(dest="command", required=True,
                           parser_class=_Parser)

    s = sub.add_parser("sieve", parents=[common],
                       help="B-free positions in (x, x+y]")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--y", type=int, required=True)
    s.add_argument("--rule", choices=("squarefree", "generated", "explicit"),
                   default="squarefree")
    s.add_argument("--primes", type=_int_list, default=[],
                   help="P for the generated rule, e.g. 2,3,5")
    s.add_argument("--members", type=_int_list, default=[],
                   help="explicit pairwise-coprime members")

    g = sub.add_parser("gaps", parents=[common], help="zero-coefficient gap table")
    g.add_argument("--source", choices=("tau", "elliptic"), default="tau")
    g.add_argument("--a4", type=int, default=0)
    g.add_argument("--a6", type=int, default=1)
    g.add_argument("--limit", type=int, required=True)

    t = sub.add_parser("theta", parents=[common], help="theta(rho) table over a rho grid")
    t.add_argument("--step", default="1/100", help='grid step, "num/den"')
    t.add_argument("--depth", type=int, default=6, help="A/B hull depth")

    e = sub.add_parser("expsum", parents=[common], help="exponential-sum benchmark CSV")
    e.add_argument("--formula", choices=("prop5", "cor8_59", "cor8_510",
                                         "rs39"), default="prop5")
    e.add_argument("--X", type=float, default=1000.0)
    e.add_argument("--M", type=int, default=32)
    e.add_argument("--N", type=int, default=32)
    e.add_argument("--H", type=int, default=4)
    e.add_argument("--alpha", type=float, default=0.5)
    e.add_argument("--beta", type=float, default=0.5)
    e.add_argument("--trials", type=int, default=5)
    e.add_argument("--C", type=float, default=1.0)
    e.add_argument("--pair", default=None, help='exponent pair "k1/k2,l1/l2"')

    w = sub.add_parser("weights", parents=[common], help="weighted decomposition report")
    w.add_argument("--rho", default="1/1")
    w.add_argument("--eps", default=None, help="default: config epsilon")
    w.add_argument("--variant", choices=("two-factor", "one-factor",
                                         "prime-only"), default="two-factor")
    w.add_argument("--x", type=int, default=10**4)
    w.add_argument("--y", type=int, default=2000)
    w.add_argument("--ell", type=int, default=3)
    w.add_argument("--primes", type=_int_list, default=[],
                   help="P for the B-set (default squarefree)")

    h = sub.add_parser("hecke", parents=[common], help="coefficient dump / vanishing scan")
    h.add_argument("--source", choices=("tau", "elliptic"), default="tau")
    h.add_argument("--a4", type=int, default=0)
    h.add_argument("--a6", type=int, default=1)
    h.add_argument("--limit", type=int, default=100,
                   help="dump coefficients for n <= limit")
    h.add_argument("--scan-primes", type=int, default=None,
                   help="instead scan vanishing prime powers, p <= this")
    h.add_argument("--nu-max", type=int, default=50)

    k = sub.add_parser("kloosterman", parents=[common], help="normalized-margin scan")
    k.add_argument("--p-max", type=int, default=50)
    k.add_argument("--nu-max", type=int, default=10)
    k.add_argument("--tolerance", type=float, default=1e-6)

    m = sub.add_parser("moments", parents=[common], help="partial-sum convergence table")
    m.add_argument("--source", choices=("tau", "elliptic"), default="tau")
    m.add_argument("--a4", type=int, default=0)
    m.add_argument("--a6", type=int, default=1)
    m.add_argument("--r", type=int, default=2)
    m.add_argument("--x-max", type=int, default=1000)
    m.add_argument("--points", type=int, default=10)
    return p


# ---------------------------------------------------------------------------
# subcommand bodies (each returns (payload, exit_code); payload is a dict for
# json or a list of CSV lines including the header)
# ---------------------------------------------------------------------------

def _form_from(args) -> hecke.HeckeForm:
    if args.source == "tau":
        return hecke.delta_form()
    return hecke.elliptic_form(args.a4, args.a6)


def _cmd_sieve(args, cfg: Config):
    if args.rule == "squarefree":
        B = bfree.squarefree_bset()
    elif args.rule == "generated":
        B = bfree.generated_bset(frozenset(args.primes))
    else:
        B = bfree.explicit_bset(args.members)
    rep = bfree.sieve_interval(args.x, args.y, B, cfg.memory_budget_mb)
    return rep.to_json_dict(), EXIT_OK


def _cmd_gaps(args, cfg: Config):
    form = _form_from(args)
    if args.source == "tau":
        series = hecke.tau_series(args.limit)  # series[n-1] = tau(n)
        nonzero = lambda n: series[n - 1] != 0  # noqa: E731
    else:
        nonzero = lambda n: hecke.coeff(form, n) != 0  # noqa: E731
    rows = ["start,length"]
    max_gap, run_start, cur = 0, None, 0
    for n in range(1, args.limit + 1):
        if nonzero(n):
            if cur:
                rows.append(f"{run_start},{cur}")
            cur, run_start = 0, None
        else:
            if run_start is None:
                run_start = n
            cur += 1
            max_gap = max(max_gap, cur)
    if cur:
        rows.append(f"{run_start},{cur}")
    rows.append(f"max_gap,{max_gap}")
    return rows, EXIT_OK


def _cmd_theta(args, cfg: Config):
    step = parse_rational(args.step)
    if not (0 < step <= 1):
        raise ValueError("step must lie in (0, 1]")
    rows = ["rho,theta,winner"]
    r = Q(0)
    while r <= 1:
        theta, witness = optimize_theta(r, depth=args.depth)
        if isinstance(witness, tuple):
            q = witness[1]
            label = (f"prop7_69({q.kappa.numerator}/{q.kappa.denominator},"
                     f"{q.lam.numerator}/{q.lam.denominator})")
        else:
            label = witness
        rows.append(f"{format_rational(r)},{format_rational(theta)},{label}")
        r += step
    return rows, EXIT_OK


def _cmd_expsum(args, cfg: Config, seed: int):
    pair = None
    if args.pair:
        k, l = args.pair.split(",")
        pair = ExponentPair(parse_rational(k), parse_rational(l))
    specs = []
    for t in range(args.trials):
        s = seed + 1000 * t
        spec = expsum.SumSpec(X=args.X, M=args.M, N=args.N, H=args.H,
                              alpha=args.alpha, beta=args.beta,
                              phi=("seeded", s), psi=("seeded", s + 500),
                              xi=("seeded", s + 900))
        specs.append((args.formula, spec, s))
    rows = [expsum.BENCH_HEADER]
    rows += expsum.benchmark_rows(specs, eps=float(cfg.default_epsilon),
                                  C=args.C, pair=pair)
    return rows, EXIT_OK


def _cmd_weights(args, cfg: Config):
    eps = parse_rational(args.eps) if args.eps else cfg.default_epsilon
    W = sieveweights.choose_parameters(parse_rational(args.rho), eps,
                                       args.variant, x=args.x, ell=args.ell)
    B = bfree.generated_bset(frozenset(args.primes))
    rep = sieveweights.decomposition_A(args.x, args.y, B, W)
    out = rep.to_json_dict()
    out["parameters"] = {
        "variant": W.variant,
        "theta": format_theta(W.theta, plus_eps=False),
        "rho": format_rational(W.rho),
        "eps": format_rational(W.eps),
        "z": str(W.z), "Q": str(W.Q),
        "n_quasi_primes": len(W.quasi_primes),
        "n_window_primes": len(W.prime_window),
    }
    return out, EXIT_OK


def _cmd_hecke(args, cfg: Config):
    form = _form_from(args)
    if args.scan_primes is not None:
        reports = []
        for p in primes_in(2, args.scan_primes):
            if p in form.bad_primes():
                continue
            rep = hecke.vanishing_scan(form, p, args.nu_max)
            reports.append({
                "p": str(p), "nu_max": str(rep.nu_max),
                "vanishing_orders": [str(v) for v in rep.vanishing_orders],
                "all_nonzero": rep.all_nonzero,
                "approximate": rep.approximate,
            })
        return {"schema": "gapsieve-vanishing v1",
                "source": args.source, "reports": reports}, EXIT_OK
    rows = ["n,coeff"]
    if args.source == "tau":
        series = hecke.tau_series(args.limit)
        rows += [f"{n},{series[n - 1]}" for n in range(1, args.limit + 1)]
    else:
        rows += [f"{n},{hecke.coeff(form, n)}"
                 for n in range(1, args.limit + 1)]
    return rows, EXIT_OK


def _cmd_kloosterman(args, cfg: Config):
    rep = kloosterman.verify_prop4(args.p_max, args.nu_max,
                                   cfg.precision_bits, args.tolerance)
    payload = {
        "schema": "gapsieve-kloosterman v1",
        "p_max": str(rep.p_max), "nu_max": str(rep.nu_max),
        "precision_bits": str(rep.precision_bits),
        "tolerance": repr(rep.tolerance),
        "min_margin": repr(rep.min_margin),
        "argmin": [str(rep.argmin[0]), str(rep.argmin[1])],
        "near_zeros": [[str(p), str(nu), repr(m)]
                       for p, nu, m in rep.near_zeros],
        "inconclusive": rep.inconclusive,
        "label": "report",
    }
    return payload, EXIT_INCONCLUSIVE if rep.inconclusive else EXIT_OK


def _cmd_moments(args, cfg: Config):
    form = _form_from(args)
    if args.points < 1 or args.x_max < args.points:
        raise ValueError("need 1 <= points <= x_max")
    rows = ["x,total,ratio"]
    for i in range(1, args.points + 1):
        x = args.x_max * i // args.points
        rep = hecke.moment_sum(form, x, args.r)
        tot = (format_rational(rep.total) if isinstance(rep.total, Fraction)
               else repr(rep.total))
        rat = (format_rational(rep.ratio) if isinstance(rep.ratio, Fraction)
               else repr(rep.ratio))
        rows.append(f"{x},{tot},{rat}")
    return rows, EXIT_OK


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def _emit(payload, fmt: str | None, out_path: str | None) -> None:
    if isinstance(payload, dict):
        if fmt == "csv":  # flatten to key,value rows
            text = "key,value\n" + "\n".join(
                f"{k},{json.dumps(v, sort_keys=True)}"
                for k, v in payload.items()) + "\n"
        else:
            text = json.dumps(payload, indent=2) + "\n"
    else:
        if fmt == "json":
            header, *body = payload
            cols = header.split(",")
            text = json.dumps(
                {"schema": "gapsieve-table v1", "columns": cols,
                 "rows": [r.split(",", len(cols) - 1) for r in body]},
                indent=2) + "\n"
        else:
            text = "\n".join(payload) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_BODIES = {"sieve": _cmd_sieve, "gaps": _cmd_gaps, "theta": _cmd_theta,
           "weights": _cmd_weights, "hecke": _cmd_hecke,
           "kloosterman": _cmd_kloosterman, "moments": _cmd_moments}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        config_path = getattr(args, "config", None)
        cfg = load_config(config_path) if config_path else Config()
        seed = getattr(args, "seed", None)
        if seed is None:
            seed = cfg.rng_seed
        if args.command == "expsum":
            payload, code = _cmd_expsum(args, cfg, seed)
        else:
            payload, code = _BODIES[args.command](args, cfg)
        _emit(payload, getattr(args, "format", None),
              getattr(args, "out", None))
        return code
    except SystemExit_Usage as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ConstraintError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InconclusiveError as exc:
        print(f"inconclusive at configured precision: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
