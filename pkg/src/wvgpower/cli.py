"""Command-line front end."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

import click

from .counting import tally_coalitions
from .dataset import Dataset, DatasetError, load
from .game import QuotaSpec, VectorWeightedGame, WeightedGame
from .indices import (
    BIG_FIVE,
    PowerDistribution,
    banzhaf,
    difference_report,
    players_without_big_five,
    quota_sweep,
    render_percent,
    render_share,
    shapley_shubik,
)
from .oracle import enumerate_indices

THREADS_ENV = "WVGPOWER_THREADS"


class InputError(click.ClickException):
    exit_code = 2


def _dataset(path: str) -> Dataset:
    try:
        return load(path)
    except (OSError, DatasetError) as e:
        raise InputError(str(e)) from None


def _parallel(parallel_primes: bool, threads: int | None) -> bool | int:
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env and env.isdigit() else None
    if threads is not None and threads > 1:
        return threads
    return parallel_primes


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _parse_game(text: str) -> WeightedGame:
    """``"[3; 2,1,1]"`` or ``"3;2,1,1"``."""
    body = text.strip().strip("[]")
    try:
        q, ws = body.split(";")
        return WeightedGame(int(q), tuple(int(w) for w in ws.split(",") if w.strip()))
    except ValueError as e:
        raise InputError(f"cannot parse game {text!r}: {e}") from None


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose: bool) -> None:
    """Exact Banzhaf and Shapley-Shubik indices for weighted voting games."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING, stream=sys.stderr)


quota_opt = click.option("--quota", required=True, help="Absolute integer, percentage (85%) or fraction (17/20).")
tie_opt = click.option(
    "--tie-rule",
    type=click.Choice(["include_equal", "strict"]),
    default="include_equal",
    show_default=True,
    help="Whether w(S) = r*C wins for fractional quotas.",
)
parallel_opts = [
    click.option("--parallel-primes", is_flag=True, help="Run the per-prime passes concurrently."),
    click.option("--threads", type=int, default=None, help=f"Worker threads for per-prime passes (env {THREADS_ENV})."),
]


def _with_parallel(f):
    for opt in reversed(parallel_opts):
        f = opt(f)
    return f


def _resolve(ds: Dataset, quota: str, tie_rule: str) -> tuple[WeightedGame, QuotaSpec]:
    try:
        spec = QuotaSpec.parse(quota, tie_rule)
        return ds.game(spec), spec
    except ValueError as e:
        raise InputError(str(e)) from None


@main.command()
@click.argument("dataset")
@quota_opt
@tie_opt
@click.option("--index", "which", type=click.Choice(["bz", "ssi", "both"]), default="both", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--digits", type=int, default=5, show_default=True, help="Decimals for rendered shares.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_with_parallel
def compute(dataset, quota, tie_rule, which, fmt, digits, out, parallel_primes, threads):
    """Power distribution of DATASET (a CSV/JSON file, or imf2015 / imf2016)."""
    ds = _dataset(dataset)
    game, spec = _resolve(ds, quota, tie_rule)
    par = _parallel(parallel_primes, threads)
    parts: list[PowerDistribution] = []
    if which in ("bz", "both"):
        parts.append(banzhaf(game, parallel_primes=par))
    if which in ("ssi", "both"):
        parts.append(shapley_shubik(game, parallel_primes=par))
    dist = parts[0] if len(parts) == 1 else parts[0].merged(parts[1])
    rows = []
    for i, r in enumerate(ds.records):
        row = {"index": r.index, "name": r.name, "weight": r.weight}
        if dist.banzhaf_raw is not None:
            row["banzhaf_raw"] = str(dist.banzhaf_raw[i])
            row["banzhaf_share"] = render_share(dist.banzhaf_share[i], digits)
        if dist.ssi_raw is not None:
            row["ssi_raw"] = str(dist.ssi_raw[i])
            row["ssi_share"] = render_share(dist.ssi_share[i], digits)
        rows.append(row)
    meta = {
        "quota_rule": spec.describe(),
        "quota": game.quota,
        "total": game.total,
        "n": game.n,
        "primes": [str(p) for p in dist.meta.get("primes", ())],
        "timings": {k: p.meta["seconds"] for k, p in zip(("bz", "ssi") if which == "both" else (which,), parts)},
    }
    if fmt == "json":
        _emit(json.dumps({"meta": meta, "players": rows}, ensure_ascii=False, indent=1) + "\n", out)
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        _emit(buf.getvalue(), out)
        click.echo(json.dumps(meta), err=True)


def _players(spec: str, n: int) -> list[int]:
    if spec == "all":
        return list(range(1, n + 1))
    if spec == "top5":
        return sorted(BIG_FIVE)
    try:
        chosen = [int(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--players expects all, top5 or a comma list of indices, got {spec!r}") from None
    if not chosen or any(not 1 <= i <= n for i in chosen):
        raise InputError(f"player indices must lie in 1..{n}")
    return chosen


def _step(text: str) -> Fraction:
    try:
        return QuotaSpec.parse(text).fraction or Fraction(0)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"invalid step {text!r}") from None


def _pct_digits(step: Fraction) -> int:
    x = step * 100
    for d in range(0, 12):
        if (x * 10**d).denominator == 1:
            return max(d, 1)
    return 12


@main.command()
@click.argument("dataset")
@click.option("--step", default="0.1%", show_default=True, help="Grid step; must divide 100%.")
@click.option("--players", "players_spec", default="top5", show_default=True, help="all, top5 or a comma list of 1-based indices.")
@tie_opt
@click.option("--digits", type=int, default=8, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def sweep(dataset, step, players_spec, tie_rule, digits, out):
    """Banzhaf shares over a grid of quotas, as long-format CSV."""
    ds = _dataset(dataset)
    st = _step(step)
    chosen = _players(players_spec, ds.n)
    try:
        points = quota_sweep(ds.weights, st, tie_rule)
    except ValueError as e:
        raise InputError(str(e)) from None
    pd = _pct_digits(st)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("quota_pct", "player_index", "bz_share"))
    for pt in points:
        pct = render_percent(pt.fraction, pd)
        for i in chosen:
            writer.writerow((pct, i, render_share(pt.shares[i - 1], digits)))
    _emit(buf.getvalue(), out)


@main.command()
@click.argument("first")
@click.argument("second")
@tie_opt
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@_with_parallel
def diff(first, second, tie_rule, fmt, out, parallel_primes, threads):
    """Differences between indices and between two datasets, at 85% and 50%."""
    a, b = _dataset(first), _dataset(second)
    if a.n != b.n:
        raise InputError("datasets must have the same members")
    years = (a.year or 1, b.year or 2)
    if years[0] == years[1]:
        years = (1, 2)
    par = _parallel(parallel_primes, threads)
    dists = {}
    for year, ds in zip(years, (a, b)):
        for q in ("85%", "50%"):
            game, _ = _resolve(ds, q, tie_rule)
            dists[(year, q)] = banzhaf(game, parallel_primes=par).merged(shapley_shubik(game, parallel_primes=par))
    reports = [
        difference_report(dists, None, "N", years),
        difference_report(dists, players_without_big_five(a.n), "N_without_big_five", years),
    ]
    rows = [(r.player_set, key, r.percent(key)) for r in reports for key in r.cells]
    if fmt == "json":
        doc = {r.player_set: {key: r.percent(key) for key in r.cells} for r in reports}
        _emit(json.dumps(doc, indent=1) + "\n", out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("player_set", "metric", "value_pct"))
        writer.writerows(rows)
        _emit(buf.getvalue(), out)


@main.command("oracle-check")
@click.argument("dataset", required=False)
@click.option("--quota", default=None, help="Quota for DATASET.")
@click.option("--game", "games", multiple=True, help='Game literal such as "[3; 2,1,1]"; repeat for an intersection.')
@tie_opt
@click.option("--max-n", type=int, default=20, show_default=True)
def oracle_check(dataset, quota, games, tie_rule, max_n):
    """Compare the counting engine with brute-force enumeration."""
    from .vector import banzhaf_vector, shapley_shubik_vector

    if dataset and games:
        raise click.UsageError("give either DATASET with --quota or --game, not both")
    if dataset:
        if quota is None:
            raise click.UsageError("--quota is required with DATASET")
        game: WeightedGame | VectorWeightedGame = _resolve(_dataset(dataset), quota, tie_rule)[0]
    elif games:
        parsed = [_parse_game(g) for g in games]
        try:
            game = parsed[0] if len(parsed) == 1 else VectorWeightedGame(tuple(parsed))
        except ValueError as e:
            raise InputError(str(e)) from None
    else:
        raise click.UsageError("nothing to check: give DATASET --quota or --game")
    if game.n > max_n:
        raise InputError(f"{game.n} players exceed --max-n {max_n}")
    ref = enumerate_indices(game, max_n)
    if isinstance(game, VectorWeightedGame):
        bz, ssi = banzhaf_vector(game).banzhaf_raw, shapley_shubik_vector(game).ssi_raw
    else:
        bz, ssi = banzhaf(game).banzhaf_raw, shapley_shubik(game).ssi_raw
    bad = [
        (i, bz[i], ref.banzhaf_raw[i], ssi[i], ref.ssi_raw[i])
        for i in range(game.n)
        if bz[i] != ref.banzhaf_raw[i] or ssi[i] != ref.ssi_raw[i]
    ]
    if not bad:
        click.echo(f"OK ({game.n} players)")
        return
    for i, b, rb, s, rs in bad:
        click.echo(f"player {i + 1}: banzhaf {b} vs oracle {rb}; ssi {s} vs oracle {rs}")
    click.echo(f"MISMATCH on {len(bad)} of {game.n} players")
    sys.exit(1)


@main.command()
@click.argument("dataset")
@quota_opt
@tie_opt
def tally(dataset, quota, tie_rule):
    """Exact numbers of losing and winning coalitions."""
    game, _ = _resolve(_dataset(dataset), quota, tie_rule)
    losing, winning = tally_coalitions(game)
    click.echo(f"quota={game.quota} total={game.total}")
    click.echo(f"losing={losing}")
    click.echo(f"winning={winning}")


if __name__ == "__main__":
    main()
