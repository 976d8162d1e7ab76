"""Command line front end.

Four subcommands: `run` executes a named verification recipe, `speed`
measures a walk-speed curve, `spread` reports ball-spread values on a
digraph, and `subword` estimates one subword hit probability.  All
randomness flows from an explicit seed, so every invocation is replayable.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .digraph import EPresentation, ball_spread, cayley_ball, load_edge_list
from .experiments import DEFAULT_MASTER_SEED, RECIPES, run_recipe
from .rewriting import RewriteSystem, VARIANTS
from .sequences import InvalidParameter, parse_sequence
from .subwords import (constant_strategy, last_letter_strategy,
                       mc_hit_probability, pseudorandom_strategy,
                       subword_bound)
from .walk import WalkConfig, estimate_speed


def _parse_config_file(path: str) -> dict[str, str]:
    """key=value lines, '#' comments, blank lines ignored."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.ClickException(
                f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _parse_grid(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise click.ClickException(f"bad grid {text!r}: {exc}") from None


@click.group()
def main():
    """Random walks on two-generator semigroups: simulate and verify."""


@main.command()
@click.argument("recipe", type=click.Choice(sorted(RECIPES)))
@click.option("--seed", type=int, default=None, help="master seed")
@click.option("--trials", type=int, default=None,
              help="override the recipe's trial count")
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="directory for the JSON/CSV report files")
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="key=value defaults (CLI flags win)")
def run(recipe, seed, trials, out, config_path):
    """Run one verification recipe and print its pass/fail lines."""
    cfg = _parse_config_file(config_path) if config_path else {}
    if seed is None:
        seed = int(cfg.get("seed", DEFAULT_MASTER_SEED))
    if trials is None and "trials" in cfg:
        trials = int(cfg["trials"])
    if out is None:
        out = cfg.get("out")
    try:
        report = run_recipe(recipe, seed=seed, trials=trials, out=out)
    except InvalidParameter as exc:
        raise click.ClickException(str(exc)) from None
    for crit in report.criteria:
        click.echo(crit.line())
    click.echo(f"elapsed: {report.elapsed_s:.2f}s")
    if out:
        click.echo(f"report written under {out}")
    sys.exit(0 if report.all_passed else 1)


@main.command()
@click.option("--seq", "seq_spec", required=True,
              help="sequence spec, e.g. identity, beta:0.5, "
                   "explicit:1,3,4:frozen, slow:log2:cap=1000000")
@click.option("--variant", type=click.Choice(VARIANTS), default="strict",
              show_default=True)
@click.option("--grid", default="16,64,256,1024", show_default=True,
              help="comma-separated word lengths")
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_MASTER_SEED, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="write the curve here instead of stdout")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
def speed(seq_spec, variant, grid, trials, seed, out, fmt):
    """Estimate mean reduced length over a grid of word lengths."""
    try:
        seq = parse_sequence(seq_spec)
        cfg = WalkConfig(seq, variant, _parse_grid(grid), trials, seed)
        curve = estimate_speed(cfg)
    except InvalidParameter as exc:
        raise click.ClickException(str(exc)) from None
    text = curve.to_csv() if fmt == "csv" else curve.to_json()
    if out:
        Path(out).write_text(text)
        click.echo(f"wrote {out}")
    else:
        click.echo(text, nl=False)
        if not text.endswith("\n"):
            click.echo()


@main.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True),
              default=None, help="edge-list file (src dst per line)")
@click.option("--cayley", "cayley_spec", default=None,
              help="'e' for the absorbing presentation, or VARIANT:SEQSPEC")
@click.option("--radius", type=int, default=16, show_default=True,
              help="truncation radius for --cayley")
@click.option("--n", "n_values", default="0,1,2,3,4,5,6,7,8",
              show_default=True, help="comma-separated spread arguments")
def spread(graph_path, cayley_spec, radius, n_values):
    """Print ball-spread F(n) for a loaded or generated digraph."""
    if (graph_path is None) == (cayley_spec is None):
        raise click.ClickException("give exactly one of --graph or --cayley")
    if graph_path is not None:
        G = load_edge_list(graph_path)
    elif cayley_spec == "e":
        G = cayley_ball(EPresentation(), radius)
    else:
        if ":" not in cayley_spec:
            raise click.ClickException(
                "--cayley takes 'e' or VARIANT:SEQSPEC, e.g. strict:identity")
        variant, seq_spec = cayley_spec.split(":", 1)
        if variant not in VARIANTS:
            raise click.ClickException(f"unknown variant {variant!r}")
        try:
            G = cayley_ball(RewriteSystem(parse_sequence(seq_spec), variant),
                            radius)
        except InvalidParameter as exc:
            raise click.ClickException(str(exc)) from None
    click.echo(f"# vertices={G.n_vertices} truncated={bool(G.truncated)}")
    click.echo("n,spread,exact")
    for n in _parse_grid(n_values):
        try:
            res = ball_spread(G, n)
        except Exception as exc:
            click.echo(f"{n},error,{type(exc).__name__}: {exc}")
            continue
        click.echo(f"{res.n},{res.value},{str(res.exact).lower()}")


@main.command()
@click.option("--d", "d", type=int, default=2, show_default=True)
@click.option("--n", "n", type=int, required=True, help="word length")
@click.option("--k", "k", type=int, required=True, help="subword length")
@click.option("--strategy", "strategy_spec", default="prf:0", show_default=True,
              help="constant:LETTERS | last:V0,V1,... | prf:SEED")
@click.option("--trials", type=int, default=100000, show_default=True)
@click.option("--seed", type=int, default=DEFAULT_MASTER_SEED, show_default=True)
def subword(d, n, k, strategy_spec, trials, seed):
    """Monte Carlo subword hit probability and the closed-form floor."""
    kind, _, arg = strategy_spec.partition(":")
    try:
        if kind == "constant":
            strat = constant_strategy(arg, d)
            if strat.k != k:
                raise InvalidParameter(
                    f"constant word has length {strat.k}, expected k={k}")
        elif kind == "last":
            table = [int(v) for v in arg.split(",")]
            strat = last_letter_strategy(table, d, k)
        elif kind == "prf":
            strat = pseudorandom_strategy(int(arg), d, k)
        else:
            raise InvalidParameter(f"unknown strategy kind {kind!r}")
        est = mc_hit_probability(d, n, k, strat, trials, seed)
        floor = subword_bound(d, k, n)
    except (InvalidParameter, ValueError) as exc:
        raise click.ClickException(str(exc)) from None
    click.echo(json.dumps({
        "d": d, "n": n, "k": k, "strategy": strategy_spec,
        "p_hat": est.p, "stderr": est.stderr, "trials": trials,
        "lower_bound": floor,
    }, sort_keys=True, indent=2))
