"""Command-line tables: correlation checks, moment sweeps, limit-law
convergence, sampling summaries, phase scans, and census dumps.

Every command emits one table (CSV or JSON) with a documented column
set; output is byte-identical across runs for an identical
configuration, including the seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields
from itertools import product

import numpy as np
from scipy import integrate

from . import __version__
from .asymptotics import (
    DegenerateWeightError,
    LaplaceProblem,
    corr_asymptotic,
    laplace_approx,
)
from .combinatorics import census_brute, w0_closed_form
from .core import (
    ModelParams,
    NoPositiveRootError,
    limit_law_for,
    limit_moment,
    spontaneous_magnetization,
)
from .exact import CostGuardError, exact_correlation, exact_scaled_moment
from .sampler import empirical_moment, glauber_chain, sample_exact

__all__ = ["RunConfig", "main", "run"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    """Invalid command-line configuration."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    betas: tuple[float, ...] = ()
    ns: tuple[int, ...] = ()
    ell: int = 0
    k: int = 2
    alpha: float = 0.5
    samples: int = 1000
    seed: int = 0
    method: str = "exact"
    burn_in: int = 100
    m_order: int = 2
    fmt: str = "csv"
    out: str | None = None
    threads: int = 1


def _parse_grid(text: str, kind: str) -> tuple:
    """Expand 'lo:hi:xF' / 'lo:hi:F' (geometric) or 'lo:hi:+d' (additive).

    A bare value is a singleton grid. Endpoints are inclusive up to a
    small relative slack so decimal steps land on the upper bound.
    """
    cast = int if kind == "int" else float
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return (cast(float(parts[0])) if kind == "int" else float(parts[0]),)
        if len(parts) != 3:
            raise ValueError
        lo, hi = float(parts[0]), float(parts[1])
        step = parts[2]
        if hi < lo:
            raise ValueError
        values: list = []
        if step.startswith("+"):
            d = float(step[1:])
            if d <= 0:
                raise ValueError
            count = int(math.floor((hi - lo) / d + 1e-9)) + 1
            values = [lo + i * d for i in range(count)]
        else:
            factor = float(step[1:] if step.startswith("x") else step)
            if factor <= 1:
                raise ValueError
            v = lo
            while v <= hi * (1 + 1e-12):
                values.append(v)
                v *= factor
        if kind == "int":
            values = [int(round(v)) for v in values]
        if not values:
            raise ValueError
        return tuple(values)
    except ValueError:
        raise ConfigError(
            f"bad grid {text!r}; expected a value, 'lo:hi:factor', 'lo:hi:xF', or 'lo:hi:+d'"
        ) from None


def _point_seed(seed: int, index: int) -> int:
    # per-grid-point seed, derived with the same splitting rule the
    # sampler substreams use so rows stay decorrelated but reproducible
    return int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1, np.uint64)[0])


def _thread_count(flag: int | None) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("CWLAB_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"CWLAB_THREADS must be an integer, got {env!r}") from None
        if value < 1:
            raise ConfigError(f"CWLAB_THREADS must be >= 1, got {value}")
        return value
    return os.cpu_count() or 1


def _map_points(config: RunConfig, fn, points: list) -> list:
    if config.threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            return list(pool.map(fn, points))  # map keeps grid order
    return [fn(point) for point in points]


def _table_correlations(config: RunConfig):
    columns = ["beta", "n", "ell", "exact_corr", "asymptotic_corr", "abs_gap"]

    def row(point):
        beta, n = point
        exact = exact_correlation(ModelParams(beta, n), config.ell)
        asym = 0.0 if config.ell % 2 else corr_asymptotic(beta, config.ell, n)
        return {
            "beta": beta,
            "n": n,
            "ell": config.ell,
            "exact_corr": exact,
            "asymptotic_corr": asym,
            "abs_gap": abs(exact - asym),
        }

    return columns, _map_points(config, row, list(product(config.betas, config.ns)))


def _table_moments(config: RunConfig):
    columns = ["beta", "n", "k", "alpha", "moment"]

    def row(point):
        beta, n = point
        moment = exact_scaled_moment(ModelParams(beta, n), config.k, config.alpha)
        return {"beta": beta, "n": n, "k": config.k, "alpha": config.alpha, "moment": moment}

    return columns, _map_points(config, row, list(product(config.betas, config.ns)))


def _table_limit_check(config: RunConfig):
    columns = ["n", "beta", "k", "alpha", "exact_moment", "limit_moment", "abs_gap"]

    def row(point):
        beta, n = point
        law = limit_law_for(beta, config.alpha)
        exact = exact_scaled_moment(ModelParams(beta, n), config.k, config.alpha)
        limit = limit_moment(law, config.k)
        return {
            "n": n,
            "beta": beta,
            "k": config.k,
            "alpha": config.alpha,
            "exact_moment": exact,
            "limit_moment": limit,
            "abs_gap": abs(exact - limit),
        }

    return columns, _map_points(config, row, list(product(config.betas, config.ns)))


def _table_sample(config: RunConfig):
    columns = ["beta", "n", "method", "samples", "seed", "k", "alpha", "estimate", "std_error"]

    def row(indexed_point):
        index, (beta, n) = indexed_point
        params = ModelParams(beta, n)
        seed = _point_seed(config.seed, index)
        if config.method == "exact":
            batch = sample_exact(params, config.samples, seed)
        else:
            batch = glauber_chain(
                params, config.samples + config.burn_in, seed, burn_in=config.burn_in
            )
        estimate, error = empirical_moment(batch, config.k, config.alpha)
        return {
            "beta": beta,
            "n": n,
            "method": config.method,
            "samples": config.samples,
            "seed": seed,
            "k": config.k,
            "alpha": config.alpha,
            "estimate": estimate,
            "std_error": error,
        }

    points = list(enumerate(product(config.betas, config.ns)))
    return columns, _map_points(config, row, points)


def _table_phase(config: RunConfig):
    columns = ["beta", "m", "regime"]

    def row(beta):
        if beta > 1.0:
            return {"beta": beta, "m": spontaneous_magnetization(beta), "regime": "supercritical"}
        return {"beta": beta, "m": 0.0, "regime": "subcritical"}

    return columns, _map_points(config, row, list(config.betas))


def _table_laplace_check(config: RunConfig):
    columns = ["n", "m_order", "ell", "laplace", "quadrature", "rel_gap"]
    m = config.m_order
    m_fact = math.factorial(m)
    problem = LaplaceProblem(
        f=lambda t: t**m / m_fact, t0=0.0, m_order=m, fm_at_t0=1.0, phi=lambda t: 1.0
    )

    def row(n):
        approx = laplace_approx(problem, float(n), config.ell)
        trunc = (m_fact * 45.0 / n) ** (1.0 / m) + 1.0
        value, _ = integrate.quad(
            lambda t: math.exp(-n * t**m / m_fact) * t**config.ell,
            -trunc,
            trunc,
            limit=200,
            epsabs=1e-13,
            epsrel=1e-12,
        )
        return {
            "n": n,
            "m_order": m,
            "ell": config.ell,
            "laplace": approx,
            "quadrature": value,
            "rel_gap": abs(approx / value - 1.0),
        }

    return columns, _map_points(config, row, list(config.ns))


def _table_census(config: RunConfig):
    columns = ["k", "n", "r", "w", "w0", "w_plus", "w0_closed"]
    rows = []
    for n in config.ns:
        census = census_brute(config.k, n)
        for r in range(config.k + 1):
            rows.append(
                {
                    "k": config.k,
                    "n": n,
                    "r": r,
                    "w": census.w[r],
                    "w0": census.w0[r],
                    "w_plus": census.w_plus[r],
                    "w0_closed": w0_closed_form(config.k, n, r),
                }
            )
    return columns, rows


_TABLES = {
    "correlations": _table_correlations,
    "moments": _table_moments,
    "limit-check": _table_limit_check,
    "sample": _table_sample,
    "phase": _table_phase,
    "laplace-check": _table_laplace_check,
    "census": _table_census,
}


def _format_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"  # 17 significant digits round-trip a double
    return str(value)


def _config_echo(config: RunConfig) -> dict:
    echo = {}
    for f in fields(config):
        value = getattr(config, f.name)
        echo[f.name] = list(value) if isinstance(value, tuple) else value
    return echo


def _emit(config: RunConfig, columns: list[str], rows: list[dict]) -> None:
    if config.fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")  # RFC-4180 quoting
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row[c]) for c in columns])
        text = buffer.getvalue()
    else:
        document = {
            "metadata": {
                "command": config.command,
                "version": __version__,
                "config": _config_echo(config),
            },
            "records": [{c: row[c] for c in columns} for row in rows],
        }
        text = json.dumps(document, indent=2)
    if config.out is None or config.out == "-":
        sys.stdout.write(text)
    else:
        with open(config.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def run(config: RunConfig) -> int:
    """Dispatch a validated configuration; 0 on success, 3 on numeric failure."""
    try:
        columns, rows = _TABLES[config.command](config)
    except (NoPositiveRootError, DegenerateWeightError, CostGuardError, ValueError) as exc:
        print(f"cwlab: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(config, columns, rows)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cwlab",
        description="Tables for the mean-field spin ensemble: exact finite-N "
        "values, their limits, and verification reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--threads", type=int, default=None, help="worker pool size (default: CWLAB_THREADS or hardware parallelism)")

    p = sub.add_parser("correlations", help="exact vs asymptotic spin correlations")
    p.add_argument("--beta", required=True, help="value or grid (lo:hi:factor | lo:hi:+d)")
    p.add_argument("--n", required=True, help="value or grid")
    p.add_argument("--ell", type=int, required=True)
    add_common(p)

    p = sub.add_parser("moments", help="exact scaled moments of the spin sum")
    p.add_argument("--beta", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    add_common(p)

    p = sub.add_parser("limit-check", help="exact moments against the limit law")
    p.add_argument("--beta", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True, help="scaling exponent: 0.5, 0.75, or 1")
    add_common(p)

    p = sub.add_parser("sample", help="empirical moments from a sampler")
    p.add_argument("--beta", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("exact", "glauber"), default="exact")
    p.add_argument("--burn-in", type=int, default=100, help="discarded leading sweeps (glauber)")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--alpha", type=float, default=0.5)
    add_common(p)

    p = sub.add_parser("phase", help="spontaneous magnetization across temperatures")
    p.add_argument("--beta", required=True)
    add_common(p)

    p = sub.add_parser("laplace-check", help="minimizer approximation vs quadrature")
    p.add_argument("--n", required=True)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--m-order", type=int, default=2)
    add_common(p)

    p = sub.add_parser("census", help="multiindex tuple counts")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", required=True)
    add_common(p)

    return parser


def _build_config(args: argparse.Namespace) -> RunConfig:
    command = args.command
    betas = _parse_grid(args.beta, "float") if hasattr(args, "beta") else ()
    ns = _parse_grid(args.n, "int") if hasattr(args, "n") else ()
    for beta in betas:
        if not beta >= 0:
            raise ConfigError(f"beta must be >= 0, got {beta}")
    for n in ns:
        if n < 1:
            raise ConfigError(f"n must be >= 1, got {n}")
    kwargs = {
        "command": command,
        "betas": betas,
        "ns": ns,
        "fmt": args.format,
        "out": args.out,
        "threads": _thread_count(args.threads),
    }
    if hasattr(args, "ell"):
        if args.ell < 0:
            raise ConfigError(f"ell must be >= 0, got {args.ell}")
        kwargs["ell"] = args.ell
    if hasattr(args, "k"):
        if args.k < 0:
            raise ConfigError(f"k must be >= 0, got {args.k}")
        kwargs["k"] = args.k
    if hasattr(args, "alpha"):
        kwargs["alpha"] = args.alpha

    if command == "correlations":
        if ns and args.ell > min(ns):
            raise ConfigError(f"ell = {args.ell} exceeds the smallest n = {min(ns)}")
    elif command == "limit-check":
        for beta in betas:
            try:
                limit_law_for(beta, args.alpha)
            except (ValueError, NoPositiveRootError) as exc:
                raise ConfigError(str(exc)) from None
    elif command == "sample":
        if args.samples < 1:
            raise ConfigError(f"samples must be >= 1, got {args.samples}")
        if args.burn_in < 0:
            raise ConfigError(f"burn-in must be >= 0, got {args.burn_in}")
        kwargs.update(samples=args.samples, seed=args.seed, method=args.method, burn_in=args.burn_in)
    elif command == "laplace-check":
        if args.m_order < 2 or args.m_order % 2:
            raise ConfigError(f"m-order must be a positive even integer, got {args.m_order}")
        if args.ell % 2:
            raise ConfigError("laplace-check needs even ell; the odd-order value is exactly 0")
        kwargs["m_order"] = args.m_order
    elif command == "census":
        if args.k < 1:
            raise ConfigError(f"k must be >= 1, got {args.k}")
    return RunConfig(**kwargs)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints usage to stderr itself
        return int(exc.code or 0)
    try:
        config = _build_config(args)
    except ConfigError as exc:
        print(f"cwlab: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
