"""Command line entry point: ``wecken <command> ...``.

Exit codes: 0 success, 2 invalid input or configuration, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction

from . import census, formulas
from .classify import classify, fixed_point_partition, nielsen_lower_bound
from .freegroup import format_word
from .wagner import Endomorphism, tail_equalities, wagner_tails

EXIT_INVALID = 2
EXIT_BUDGET = 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    rank: int | None = None
    max_p: int | None = None
    samples: int = 10**5
    seed: int = 0
    shards: int = 1
    budget: int = census.DEFAULT_BUDGET
    fmt: str = "csv"
    precision: int = 12
    header: bool = True

    def validate(self) -> "RunConfig":
        if self.rank is not None and self.rank < 1:
            raise ConfigError("--rank must be >= 1")
        if self.max_p is not None and self.max_p < 0:
            raise ConfigError("--max-p must be >= 0")
        if self.samples < 1:
            raise ConfigError("--samples must be >= 1")
        if self.shards < 1:
            raise ConfigError("--shards must be >= 1")
        if self.budget < 1:
            raise ConfigError("--budget must be >= 1")
        if not 1 <= self.precision <= 60:
            raise ConfigError("--precision must be in 1..60")
        if self.fmt not in ("csv", "json", "text"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        return self


def _config(args) -> RunConfig:
    shards = getattr(args, "shards", None)
    budget = getattr(args, "budget", None)
    return RunConfig(
        command=args.command,
        rank=getattr(args, "rank", None),
        max_p=getattr(args, "max_p", None),
        samples=getattr(args, "samples", 10**5),
        seed=getattr(args, "seed", 0),
        shards=census.default_shards() if shards is None else shards,
        budget=census.default_budget() if budget is None else budget,
        fmt=args.format,
        precision=args.precision,
        header=not args.no_header,
    ).validate()


def _float(x: float, precision: int) -> str:
    return f"{x:.{precision}g}"


def _cell(x, precision: int):
    if isinstance(x, float):
        return _float(x, precision)
    if isinstance(x, dict):
        return json.dumps(x, separators=(",", ":"))
    return x


def _emit_csv(cfg: RunConfig, fields: list[str], rows: list[list], out) -> None:
    if cfg.header:
        stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
        out.write(f"# wecken {cfg.command} generated {stamp}\n")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_cell(x, cfg.precision) for x in row])
    out.write(buf.getvalue())


def _emit(cfg: RunConfig, fields: list[str], rows: list[list], out, extra: dict | None = None) -> None:
    if cfg.fmt == "json":
        doc = {"command": cfg.command, "rows": [dict(zip(fields, r)) for r in rows]}
        if extra:
            doc.update(extra)
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        _emit_csv(cfg, fields, rows, out)


def _endomorphism(args) -> Endomorphism:
    if args.json is not None:
        text = sys.stdin.read() if args.json == "-" else args.json
        if not text.lstrip().startswith("{"):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        return Endomorphism.from_json(text)
    if not args.images:
        raise ConfigError("give --images or --json")
    if args.alpha and (args.rank or len(args.images)) > 26:
        raise ConfigError("--alpha needs rank <= 26")
    return Endomorphism.from_text(args.images, args.rank, alpha=args.alpha)


def cmd_tails(args, out) -> int:
    phi = _endomorphism(args)
    style = "alpha" if args.alpha else "int"
    tails = wagner_tails(phi)
    eqs = tail_equalities(tails)
    if args.format == "json":
        doc = {
            "endomorphism": phi.to_dict(),
            "tails": [
                {
                    "slot": t.slot,
                    "w": format_word(t.w, style),
                    "w_bar": format_word(t.w_bar, style),
                    "location": t.location,
                    "position": t.position,
                    "sign": t.sign,
                }
                for t in tails
            ],
            "equalities": [
                {"first": list(e.first), "second": list(e.second), "length": e.length} for e in eqs
            ],
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return 0
    out.write("slot\tlocation\tposition\tsign\tw\tw_bar\n")
    for t in tails:
        out.write(
            f"{t.slot}\t{t.location}\t{t.position}\t{t.sign:+d}\t"
            f"{format_word(t.w, style)}\t{format_word(t.w_bar, style)}\n"
        )
    out.write(f"equalities: {len(eqs)}\n")
    for e in eqs:
        out.write(f"  W[{e.first[0]}].{e.first[1]} = W[{e.second[0]}].{e.second[1]}  length {e.length}\n")
    return 0


def cmd_classify(args, out) -> int:
    phi = _endomorphism(args)
    doc = classify(phi).to_dict()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        doc["nielsen_lower_bound"] = nielsen_lower_bound(phi)
    if args.partition:
        doc["partition"] = [list(p) for p in fixed_point_partition(wagner_tails(phi)).parts]
    out.write(json.dumps(doc) + "\n")
    return 0


EXACT_FIELDS = [
    "n", "p", "total", "remnant", "vprime", "v", "a0", "b",
    "ak_json", "wecken_certified", "xp_num", "xp_den",
]  # fmt: skip


def _exact_row(r: census.CensusResult) -> list:
    xp = r.xp
    return [
        r.n, r.p, r.total, r.remnant, r.vprime, r.v, r.a0, r.b,
        r.ak_json(), r.wecken_certified,
        xp.numerator, xp.denominator,
    ]  # fmt: skip


def cmd_census(args, out) -> int:
    cfg = _config(args)
    r = census.exact_census(cfg.rank, cfg.max_p, cfg.budget, cfg.shards)
    _emit(cfg, EXACT_FIELDS, [_exact_row(r)], out)
    return 0


def cmd_xp(args, out) -> int:
    cfg = _config(args)
    seq = census.xp_sequence(cfg.rank, cfg.max_p, cfg.budget, cfg.shards)
    rows = [
        [p, x.numerator, x.denominator, formulas.render_decimal(x, cfg.precision)]
        for p, x in enumerate(seq.values, 1)
    ]
    _emit(cfg, ["p", "xp_num", "xp_den", "xp_decimal"], rows, out, {"n": cfg.rank})
    if not seq.complete:
        print(f"wecken: {seq.notice}", file=sys.stderr)
        return EXIT_BUDGET
    return 0


MC_FIELDS = ["n", "p", "samples", "seed", "shards", "category", "fraction", "ci_low", "ci_high"]


def cmd_mc(args, out) -> int:
    cfg = _config(args)
    mc = census.mc_census(cfg.rank, cfg.max_p, cfg.samples, cfg.seed, cfg.shards)
    rows = [
        [cfg.rank, cfg.max_p, e.samples, e.seed, mc.shards, e.category, e.fraction, e.ci_low, e.ci_high]
        for e in mc.estimates
    ]  # fmt: skip
    _emit(cfg, MC_FIELDS, rows, out, {"rng_id": census.RNG_ID})
    return 0


def _n_range(text: str) -> list[int]:
    a, sep, b = text.partition("..")
    try:
        lo, hi = int(a), int(b if sep else a)
    except ValueError:
        raise ConfigError(f"bad range {text!r}, expected like 2..100") from None
    if lo < 2 or hi < lo:
        raise ConfigError(f"bad range {text!r}: need 2 <= start <= end")
    return list(range(lo, hi + 1))


def cmd_bounds(args, out) -> int:
    cfg = _config(args)
    if args.n is not None:
        ranks = [args.n]
    else:
        ranks = _n_range(args.n_range)
    if any(n < 2 for n in ranks):
        raise ConfigError("bounds need n >= 2")
    dec = lambda x: formulas.render_decimal(x, cfg.precision)  # noqa: E731
    if args.per_k:
        rows = []
        for n in ranks:
            for k in range(1, args.k_max + 1):
                b = formulas.lemma1_bound(n, k)
                rows.append([n, k, b.numerator, b.denominator, dec(b)])
        _emit(cfg, ["n", "k", "bound_num", "bound_den", "bound_decimal"], rows, out)
        return 0
    rows = []
    for n in ranks:
        b = formulas.wecken_lower_bound(n)
        rows.append([n, b.numerator, b.denominator, dec(b)])
    thresholds = {}
    for level in ("0.9", "0.99"):
        hits = [n for n in ranks if formulas.wecken_lower_bound(n) > Fraction(level)]
        thresholds[level] = hits[0] if hits else None
    _emit(cfg, ["n", "lower_bound_num", "lower_bound_den", "decimal"], rows, out, {"thresholds": thresholds})
    return 0


TREND_FIELDS = MC_FIELDS + [
    "wecken_lower_bound", "dev_wecken_bound", "dev_inv_e", "dev_two_over_e", "dev_one_minus_inv_e",
]  # fmt: skip


def cmd_trend(args, out) -> int:
    cfg = _config(args)
    rows = []
    prec = cfg.precision
    p_rule = cfg.max_p if cfg.max_p is not None else None
    for t in census.density_trend(args.ranks, p_rule, cfg.samples, cfg.seed, cfg.shards):
        e = t.estimate
        rows.append([
            t.n, t.p, e.samples, e.seed, t.shards, e.category,
            e.fraction, e.ci_low, e.ci_high,
            formulas.render_decimal(t.wecken_lower_bound, prec), t.dev_wecken_bound,
            t.dev_inv_e, t.dev_two_over_e, t.dev_one_minus_inv_e,
        ])  # fmt: skip
    _emit(cfg, TREND_FIELDS, rows, out, {"rng_id": census.RNG_ID})
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json", "text"], default=None)
    common.add_argument("--precision", type=int, default=12, help="significant digits for decimals")
    common.add_argument("--no-header", action="store_true", help="omit the timestamp line in CSV output")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--shards", type=int, default=None, help="parallel shards (default: available CPUs)")
    run.add_argument("--budget", type=int, default=None, help="max exact classifications (env WECKEN_BUDGET)")

    mapping = argparse.ArgumentParser(add_help=False)
    mapping.add_argument("--rank", type=int, default=None)
    mapping.add_argument("--images", nargs="+", metavar="WORD", help='image words, e.g. "1 2" "-2 1"; "e" is empty')
    mapping.add_argument("--json", default=None, help="endomorphism JSON text, file path, or - for stdin")
    mapping.add_argument("--alpha", action="store_true", help="words in letter format (abA...), rank <= 26")

    parser = argparse.ArgumentParser(prog="wecken", description="Wagner tails and Wecken densities of free-group endomorphisms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tails", parents=[common, mapping], help="list Wagner tails and their equalities")
    p.set_defaults(func=cmd_tails, default_format="text")

    p = sub.add_parser("classify", parents=[common, mapping], help="classify one endomorphism")
    p.add_argument("--partition", action="store_true", help="include the fixed point partition")
    p.set_defaults(func=cmd_classify, default_format="json")

    p = sub.add_parser("census", parents=[common, run], help="exact census over (G_p)^n")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--max-p", type=int, required=True)
    p.set_defaults(func=cmd_census, default_format="csv")

    p = sub.add_parser("xp", parents=[common, run], help="exact x_1..x_p sequence")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--max-p", type=int, required=True)
    p.set_defaults(func=cmd_xp, default_format="csv")

    p = sub.add_parser("mc", parents=[common, run], help="Monte Carlo census")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--max-p", type=int, required=True)
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_mc, default_format="csv")

    p = sub.add_parser("bounds", parents=[common], help="Wecken lower bounds or per-k A_k bounds")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--n-range", help="inclusive range like 2..100")
    p.add_argument("--per-k", action="store_true", help="emit per-k bounds on A_k instead")
    p.add_argument("--k-max", type=int, default=10)
    p.set_defaults(func=cmd_bounds, default_format="csv")

    p = sub.add_parser("trend", parents=[common, run], help="density estimates across ranks")
    p.add_argument("--ranks", type=int, nargs="+", required=True)
    p.add_argument("--max-p", type=int, default=None, help="fixed p for all ranks (default max(50, 4n))")
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_trend, default_format="csv")
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args, out)
    except (ValueError, OSError) as exc:
        print(f"wecken: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except census.BudgetExceeded as exc:
        print(f"wecken: budget exceeded: required budget {exc.required}, current budget {exc.budget}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
