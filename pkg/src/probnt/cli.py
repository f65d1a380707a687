"""Command-line front end: ``probnt <command> [options]``.

Exit codes: 0 success, 2 usage error, 3 hypothesis violation, 4 capacity error.
The thread budget (``--threads`` or ``$PROBNT_THREADS``) is an execution
setting and is not echoed into reports, so output does not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, fields
from decimal import Decimal, InvalidOperation
from pathlib import Path

from . import additive, clt, density, lln, models
from .errors import ProbNTError, UsageError
from .sieve import DEFAULT_BLOCK_SIZE, default_workers

EXIT_OK, EXIT_USAGE, EXIT_HYPOTHESIS, EXIT_CAPACITY = 0, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int | None = None
    grid: tuple[int, ...] = ()
    spec: str | None = None
    model: str | None = None
    epsilon: float = lln.DEFAULT_EPSILON
    K: int = 6
    samples: int | None = None
    seed: int | None = None
    norm: str = clt.EMPIRICAL
    format: str = "csv"
    output: str | None = None
    block_size: int = DEFAULT_BLOCK_SIZE

    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = list(self.grid)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        kw = dict(d)
        kw["grid"] = tuple(kw.get("grid", ()))
        return cls(**kw)

    def validate(self) -> None:
        if self.format not in ("csv", "json"):
            raise UsageError(f"--format must be csv or json, got {self.format!r}")
        if self.block_size < 1:
            raise UsageError("--block-size must be >= 1")
        if self.K < 2:
            raise UsageError("--K must be >= 2")
        if self.epsilon < 0:
            raise UsageError("--epsilon must be >= 0")
        if any(b < a for a, b in zip(self.grid, self.grid[1:])):
            raise UsageError(f"grid must be ascending, got {list(self.grid)}")
        if any(n < 1 for n in self.grid) or (self.n is not None and self.n < 1):
            raise UsageError("n and grid values must be >= 1")
        if self.command == "model":
            if self.samples is None or self.seed is None:
                raise UsageError("model needs --samples and --seed")
            if self.samples < models.MIN_SAMPLES:
                raise UsageError(f"--samples must be >= {models.MIN_SAMPLES}")


def parse_int(text: str) -> int:
    """Integer that may be written in scientific notation (``1e6``)."""
    try:
        value = Decimal(text.strip())
    except InvalidOperation:
        raise UsageError(f"not a number: {text!r}") from None
    if value != value.to_integral_value():
        raise UsageError(f"not an integer: {text!r}")
    return int(value)


def parse_grid(text: str) -> tuple[int, ...]:
    items = [t for t in text.split(",") if t.strip()]
    if not items:
        raise UsageError("empty grid")
    return tuple(parse_int(t) for t in items)


def _spec(config: RunConfig) -> additive.AdditiveFunctionSpec:
    if not config.spec:
        raise UsageError("--spec is required")
    path = Path(config.spec)
    if config.spec.endswith((".spec", ".txt")) and path.is_file():
        return additive.parse_spec(path.read_text(encoding="utf-8"))
    return additive.parse_spec(config.spec)


def _grid(config: RunConfig) -> list[int]:
    if config.grid:
        return list(config.grid)
    if config.n is not None:
        return [config.n]
    raise UsageError("give --grid or --n")


def _single_n(config: RunConfig) -> int:
    if config.n is not None:
        return config.n
    if len(config.grid) == 1:
        return config.grid[0]
    raise UsageError("give --n")


def run(config: RunConfig, workers: int | None = None) -> tuple[tuple[str, ...], list[dict]]:
    """Execute a config and return (csv columns, rows)."""
    config.validate()
    cmd = config.command
    if cmd == "density":
        return density.CSV_COLUMNS, [r.row() for r in density.density_scan(_grid(config))]
    if cmd == "lln":
        checks = lln.lln_scan(_spec(config), _grid(config), config.epsilon, workers)
        return lln.CSV_COLUMNS, [c.row() for c in checks]
    if cmd == "hr":
        cols = lln.CSV_COLUMNS + ("center", "threshold", "stated_rate_bound")
        rows = []
        for n in _grid(config):
            c = lln.hardy_ramanujan_check(n, config.epsilon, workers=workers)
            rows.append({**c.row(), "center": c.center, "threshold": c.b * c.scale,
                         "stated_rate_bound": c.stated_rate_bound})
        return cols, rows
    if cmd == "turan":
        res = lln.turan_check(_spec(config), _grid(config), workers)
        return ("n", "mean", "variance", "ratio", "note"), [r.row() for r in res]
    if cmd == "ek":
        res = clt.erdos_kac_experiment(_spec(config), _grid(config), config.norm, workers)
        return clt.CSV_COLUMNS, [r.row() for r in res]
    if cmd == "moments":
        from .probspace import moments_from_histogram

        spec = _spec(config)
        rows = []
        for n in _grid(config):
            hist = additive.histogram(spec, n, block_size=config.block_size, workers=workers)
            stats = moments_from_histogram(hist, config.K)
            for k in range(2, config.K + 1):
                rows.append({"n": n, "spec": additive.spec_name(spec), "mean": stats.mean,
                             "variance": stats.variance, "k": k, "central_moment": stats.central_moments[k]})
        return ("n", "spec", "mean", "variance", "k", "central_moment"), rows
    if cmd == "model":
        model = models.TwoPointModel(config.model or "")
        res = models.monte_carlo(model, _single_n(config), config.samples, config.seed, config.K, workers)
        rows = [row for rep in res.reports for row in rep.rows()]
        return models.CSV_COLUMNS, rows
    if cmd == "match":
        model = models.TwoPointModel(config.model or "")
        rep = models.match_report(_spec(config), model, _single_n(config), config.K, workers)
        cols = ("spec", "model", "n", "k", "arithmetic", "model_exact", "model_per_prime_sum", "asymptote", "discrepancy")
        return cols, [{"spec": rep.spec, "model": rep.model, "n": rep.n, **r.row()} for r in rep.rows]
    raise UsageError(f"unknown command {cmd!r}")


def render(config: RunConfig, columns: tuple[str, ...], rows: list[dict]) -> str:
    if config.format == "json":
        doc = {"config": config.to_dict(), "columns": list(columns), "rows": rows}
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: "" if row.get(c) is None else row[c] for c in columns})
    return buf.getvalue()


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", help="output file (default: stdout)")
    p.add_argument("--threads", type=int, default=None, help="thread budget (default: $PROBNT_THREADS or 1)")
    p.add_argument("--block-size", type=parse_int, default=DEFAULT_BLOCK_SIZE)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="probnt", description="Probabilistic number theory laboratory.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("density", help="pi(n)/n vs 1/ln n vs the Mertens sieve product")
    p.add_argument("--grid", type=parse_grid, required=True)
    _add_common(p)

    for name, text in (("lln", "Chebyshev / law-of-large-numbers scan"),
                       ("turan", "variance-to-mean ratio along a grid")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--spec", default="omega")
        p.add_argument("--grid", type=parse_grid, default=lln.DEFAULT_GRID)
        p.add_argument("--epsilon", type=float, default=lln.DEFAULT_EPSILON)
        _add_common(p)

    p = sub.add_parser("hr", help="Hardy-Ramanujan deviation check for omega")
    p.add_argument("--grid", type=parse_grid)
    p.add_argument("--n", type=parse_int)
    p.add_argument("--epsilon", type=float, default=lln.DEFAULT_EPSILON)
    _add_common(p)

    p = sub.add_parser("ek", help="KS distance to the normal law")
    p.add_argument("--spec", default="omega")
    p.add_argument("--grid", type=parse_grid, required=True)
    p.add_argument("--norm", choices=(clt.EMPIRICAL, clt.THEORETICAL), default=clt.EMPIRICAL)
    _add_common(p)

    p = sub.add_parser("moments", help="empirical central moments of f on [1, n]")
    p.add_argument("--spec", default="omega")
    p.add_argument("--grid", type=parse_grid)
    p.add_argument("--n", type=parse_int)
    p.add_argument("--K", type=int, default=6)
    _add_common(p)

    p = sub.add_parser("model", help="two-point model moments: exact and Monte Carlo")
    p.add_argument("--model", required=True, help="inv_p | half_inv_p | signed (or full kind names)")
    p.add_argument("--n", type=parse_int, required=True)
    p.add_argument("--K", type=int, default=6)
    p.add_argument("--samples", type=parse_int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("match", help="arithmetic function moments vs its matched model")
    p.add_argument("--spec", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=parse_int, required=True)
    p.add_argument("--K", type=int, default=6)
    _add_common(p)

    p = sub.add_parser("regen-golden", help="recompute the stored large-n golden data")
    p.add_argument("--output", "-o", help="write here instead of the packaged data file")
    p.add_argument("--threads", type=int, default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    kw = {f.name: getattr(args, f.name) for f in fields(RunConfig) if getattr(args, f.name, None) is not None}
    if "grid" in kw:
        kw["grid"] = tuple(kw["grid"])
    if "model" in kw:
        kw["model"] = models.TwoPointModel(kw["model"]).kind
    return RunConfig(**kw)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"probnt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        workers = args.threads if args.threads is not None else default_workers()
        if args.command == "regen-golden":
            from .golden import regenerate

            regenerate(Path(args.output) if args.output else None, workers)
            return EXIT_OK
        config = config_from_args(args)
        columns, rows = run(config, workers)
        text = render(config, columns, rows)
        if config.output:
            Path(config.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except ProbNTError as exc:
        print(f"probnt: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
