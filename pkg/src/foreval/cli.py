"""Command-line driver for the weekly lifecycle.

    import-registry DIR        validate a registry directory, print cardinalities
    ingest TAPE                load a record tape into the datastore
    generate --week DATE       build the week's task batch (seeded, replayable)
    forecast --batch --models  invoke model adapters under the deadline cutoff
    resolve --as-of TS         run a resolution cycle at a fixed instant
    score [--batch]            score and export the leaderboard
    report                     leaderboard files plus rendered figures
    serve --config FILE        run the HTTP service
    replay LOG                 rebuild state from an event log and re-derive output

Every command exits non-zero on validation failure. `--as-of` pins the
clock, making any run reproducible against the datastore snapshot; with
FOREVAL_REQUIRE_AS_OF=1 set (replay mode), clock-dependent commands
refuse to run without it.
"""
from __future__ import annotations

import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import click

from .config import ConfigError, load_adapter_config, load_config
from .model import parse_ts
from .pipeline import Engine, EngineError, adapters_from_config
from .registry import RegistryError, load_registry
from .reporting import render_figures, write_leaderboard
from .resolver import ScriptedVerifier


def _fail(message: str) -> None:
    raise click.ClickException(message)


def _as_of_option(value: str | None, command: str) -> datetime | None:
    if value:
        return parse_ts(value)
    if os.environ.get("FOREVAL_REQUIRE_AS_OF"):
        _fail(f"{command} is clock-dependent: pass --as-of in replay mode")
    return None


def _load_jsonl(path: str | None, key: str) -> dict[str, dict]:
    if not path:
        return {}
    out = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            row = json.loads(line)
            out[row[key]] = row
    return out


@click.group()
def main():
    """Live financial forecasting benchmark engine."""


@main.command("import-registry")
@click.argument("directory", type=click.Path(exists=False))
def import_registry(directory):
    """Validate registry files and report cardinalities."""
    try:
        registry = load_registry(directory)
    except RegistryError as e:
        _fail(str(e))
    for name, count in registry.cardinalities().items():
        click.echo(f"{name}: {count}")
    click.echo("registry OK")


@main.command()
@click.argument("tape", type=click.Path(exists=True))
@click.option("--data-dir", required=True, type=click.Path())
def ingest(tape, data_dir):
    """Load a line-delimited record tape into the datastore."""
    engine = Engine(data_dir)
    try:
        n = engine.store.import_tape(tape)
    except Exception as e:
        _fail(str(e))
    finally:
        engine.close()
    click.echo(f"ingested {n} records")


@main.command()
@click.option("--week", required=True, help="Thursday batch date, e.g. 2025-10-30")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--reviews", type=click.Path(exists=True), default=None,
              help="JSONL of review decisions keyed by candidate_id")
@click.option("--data-dir", required=True, type=click.Path())
@click.option("--registry-dir", type=click.Path(), default=None)
def generate(week, seed, reviews, data_dir, registry_dir):
    """Generate the weekly batch (recurrent + reviewed non-recurrent)."""
    engine = Engine(data_dir, registry_dir=registry_dir)
    try:
        summary = engine.generate(week, seed=seed, reviews=_load_jsonl(reviews, "candidate_id"))
    except click.ClickException:
        raise
    except Exception as e:
        _fail(str(e))
    finally:
        engine.close()
    click.echo(json.dumps(summary, indent=2))


@main.command()
@click.option("--batch", "batch_id", required=True)
@click.option("--models", required=True, help="comma-separated model ids")
@click.option("--adapters", "adapters_path", required=True, type=click.Path(exists=True))
@click.option("--as-of", default=None, help="RFC-3339 instant for the orchestrator clock")
@click.option("--data-dir", required=True, type=click.Path())
def forecast(batch_id, models, adapters_path, as_of, data_dir):
    """Invoke the configured adapters on a batch under the deadline cutoff."""
    at = _as_of_option(as_of, "forecast")
    model_ids = [m.strip() for m in models.split(",") if m.strip()]
    config, base = load_adapter_config(adapters_path)
    engine = Engine(data_dir)
    try:
        adapters = adapters_from_config(config, base_dir=base, models=model_ids)
        summary = engine.forecast(batch_id, adapters, as_of=at)
    except (EngineError, ConfigError) as e:
        _fail(str(e))
    finally:
        engine.close()
    click.echo(json.dumps(summary, indent=2))


@main.command()
@click.option("--as-of", required=True, help="cycle instant, RFC-3339")
@click.option("--verifications", type=click.Path(exists=True), default=None,
              help="JSONL of expert verifications keyed by task_id")
@click.option("--data-dir", required=True, type=click.Path())
def resolve(as_of, verifications, data_dir):
    """Run one resolution cycle at the given instant."""
    engine = Engine(data_dir)
    try:
        verifier = ScriptedVerifier(_load_jsonl(verifications, "task_id"))
        outcomes = engine.resolve(parse_ts(as_of), verifier)
    except Exception as e:
        _fail(str(e))
    finally:
        engine.close()
    for out in outcomes:
        click.echo(f"{out.task_id}\t{out.outcome}")
    counts: dict[str, int] = {}
    for out in outcomes:
        counts[out.outcome] = counts.get(out.outcome, 0) + 1
    click.echo(json.dumps({"attempted": len(outcomes), **counts}))


@main.command()
@click.option("--batch", "batch_id", default=None, help="restrict to one batch week")
@click.option("--group", default="model", show_default=True)
@click.option("--out", type=click.Path(), default=None, help="write the leaderboard file here")
@click.option("--data-dir", required=True, type=click.Path())
def score(batch_id, group, out, data_dir):
    """Score resolved tasks and print/export the leaderboard."""
    engine = Engine(data_dir)
    grouping = [g.strip() for g in group.split(",") if g.strip()]
    try:
        engine.score_records(week=batch_id, log=True)
        slices = engine.leaderboard(grouping, week=batch_id)
    except click.ClickException:
        raise
    except Exception as e:
        _fail(str(e))
    finally:
        engine.close()
    if not slices:
        click.echo("no data")
        sys.exit(0)
    from .reporting import leaderboard_lines
    text = "\n".join(leaderboard_lines(slices, grouping))
    click.echo(text)
    if out:
        write_leaderboard(slices, grouping, out)
        click.echo(f"wrote {out}")


@main.command()
@click.option("--out", "outdir", required=True, type=click.Path())
@click.option("--week", default=None)
@click.option("--data-dir", required=True, type=click.Path())
def report(outdir, week, data_dir):
    """Export leaderboard slices and render figures alongside them."""
    engine = Engine(data_dir)
    try:
        views = {
            "by_model": ["model"],
            "by_market": ["market"],
            "by_track_level": ["track", "level"],
            "by_model_week": ["model", "week"],
        }
        slices = {}
        for name, grouping in views.items():
            slices[name] = engine.leaderboard(grouping, week=week)
            write_leaderboard(slices[name], grouping, Path(outdir) / f"leaderboard_{name}.tsv")
        figures = render_figures(
            slices["by_market"], slices["by_track_level"], slices["by_model"], outdir,
        )
    except Exception as e:
        _fail(str(e))
    finally:
        engine.close()
    click.echo(f"wrote {len(views)} leaderboard files and {len(figures)} figures to {outdir}")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
def serve(config_path):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    try:
        config = load_config(config_path)
    except ConfigError as e:
        _fail(str(e))
    engine = Engine(config["data_dir"], registry_dir=config.get("registry_dir"))
    app = create_app(engine, tokens=config["auth"]["resolved_tokens"])
    uvicorn.run(app, host=config["host"], port=int(config["port"]), log_level="warning")


@main.command()
@click.argument("log", type=click.Path(exists=True))
@click.option("--group", default="model", show_default=True)
@click.option("--out", type=click.Path(), default=None)
def replay(log, group, out):
    """Rebuild state from an event log and re-derive the leaderboard."""
    grouping = [g.strip() for g in group.split(",") if g.strip()]
    try:
        engine = Engine.from_event_log(log)
        slices = engine.leaderboard(grouping)
    except Exception as e:
        _fail(str(e))
    from .reporting import leaderboard_lines
    text = "\n".join(leaderboard_lines(slices, grouping))
    click.echo(text)
    if out:
        write_leaderboard(slices, grouping, out)


if __name__ == "__main__":
    main()
