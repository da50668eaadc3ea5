"""Command-line entry points: init, serve, run-scenario, verify, export, import, catalog."""

from __future__ import annotations

import json
import os
from pathlib import Path

import click

from .engine import Engine, EngineConfig
from .errors import DaoError
from .scenario import load_bundled_script, load_script, run_scenario
from .service import serve as serve_service

ENV_DATA_DIR = "RELIEFDAO_DATA_DIR"
ENV_PORT = "RELIEFDAO_PORT"
ENV_RUBRIC = "RELIEFDAO_RUBRIC"


def _config(data_dir, rubric) -> EngineConfig:
    return EngineConfig(
        data_dir=data_dir or os.environ.get(ENV_DATA_DIR),
        rubric_path=rubric or os.environ.get(ENV_RUBRIC),
    )


@click.group()
def main():
    """Desk-scale coordination engine for victim-relief casework."""


@main.command()
@click.option("--data-dir", type=click.Path(), help="state directory to create")
def init(data_dir):
    """Create an empty data directory."""
    path = Path(data_dir or os.environ.get(ENV_DATA_DIR) or "./reliefdao-data")
    path.mkdir(parents=True, exist_ok=True)
    (path / "cases").mkdir(exist_ok=True)
    (path / "ledger.jsonl").touch()
    click.echo(f"initialized {path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=None, type=int, help=f"defaults to ${ENV_PORT} or 8710")
@click.option("--data-dir", type=click.Path(), default=None)
@click.option("--rubric", type=click.Path(exists=True), default=None)
@click.option("--seed", type=click.Path(exists=True), default=None, help="scenario file executed before serving")
@click.option("--import", "import_path", type=click.Path(exists=True), default=None, help="snapshot imported before serving")
def serve(host, port, data_dir, rubric, seed, import_path):
    """Run the HTTP gateway."""
    engine = Engine(_config(data_dir, rubric))
    if import_path:
        engine.import_state(import_path)
    if seed:
        transcript = run_scenario(load_script(seed), engine=engine)
        if not transcript.ok:
            click.echo(transcript.to_json(), err=True)
            raise SystemExit(1)
        click.echo(f"seeded from {seed}: {len(transcript.steps)} steps, ledger length {len(engine.ledger)}")
    serve_service(engine, host=host, port=port or int(os.environ.get(ENV_PORT, "8710")))


@main.command("run-scenario")
@click.argument("script", required=True)
@click.option("--data-dir", type=click.Path(), default=None)
@click.option("--rubric", type=click.Path(exists=True), default=None)
@click.option("--export", "export_path", type=click.Path(), default=None, help="write the end-state snapshot here")
def run_scenario_cmd(script, data_dir, rubric, export_path):
    """Execute a scenario script (a path, or a bundled name like running_case)."""
    if Path(script).exists():
        doc = load_script(script)
    else:
        doc = load_bundled_script(script)
    engine = Engine(_config(data_dir, rubric))
    transcript = run_scenario(doc, engine=engine)
    click.echo(transcript.to_json())
    if export_path and transcript.ok:
        engine.export_state(export_path)
    raise SystemExit(0 if transcript.ok else 1)


@main.command()
@click.option("--snapshot", type=click.Path(exists=True), default=None, help="snapshot file to verify")
@click.option("--data-dir", type=click.Path(exists=True), default=None, help="verify a data directory's ledger.jsonl")
def verify(snapshot, data_dir):
    """Verify the hash chain of a snapshot or a persisted ledger file."""
    if (snapshot is None) == (data_dir is None):
        click.echo("pass exactly one of --snapshot or --data-dir", err=True)
        raise SystemExit(2)
    if snapshot is not None:
        engine = Engine(EngineConfig())
        try:
            result = engine.import_state(snapshot)
        except DaoError as err:
            click.echo(json.dumps({"ok": False, "error_code": err.error_code, "message": str(err)}))
            raise SystemExit(1)
        report = engine.verify_chain()
        click.echo(json.dumps({**report, "ledger_len": result["ledger_len"]}))
        raise SystemExit(0 if report["ok"] else 1)

    from .ledger import Catalog, Ledger, record_from_json_obj

    catalog = Catalog.load_default()
    ledger = Ledger(catalog, clock=lambda: 0)
    path = Path(data_dir) / "ledger.jsonl"
    with open(path, encoding="utf-8") as f:
        ledger.records = [record_from_json_obj(json.loads(line), catalog) for line in f if line.strip()]
    report = ledger.verify_chain()
    click.echo(json.dumps({"ok": report.ok, "first_bad_seq": report.first_bad_seq, "ledger_len": len(ledger)}))
    raise SystemExit(0 if report.ok else 1)


@main.command()
@click.argument("path", type=click.Path())
@click.option("--data-dir", type=click.Path(), default=None)
@click.option("--seed", type=click.Path(exists=True), default=None, help="scenario executed before exporting")
def export(path, data_dir, seed):
    """Export an engine snapshot, optionally after seeding with a scenario."""
    engine = Engine(_config(data_dir, None))
    if seed:
        transcript = run_scenario(load_script(seed), engine=engine)
        if not transcript.ok:
            click.echo(transcript.to_json(), err=True)
            raise SystemExit(1)
    engine.export_state(path)
    click.echo(f"exported {len(engine.ledger)} records to {path}")


@main.command("import")
@click.argument("path", type=click.Path(exists=True))
@click.option("--data-dir", type=click.Path(), default=None)
def import_cmd(path, data_dir):
    """Import a snapshot into a fresh data directory."""
    engine = Engine(_config(data_dir, None))
    result = engine.import_state(path)
    click.echo(json.dumps(result))


@main.command()
def catalog():
    """Print the full 77-kind transaction catalog."""
    engine = Engine(EngineConfig())
    for kind in engine.catalog:
        click.echo(
            f"{kind.component.value}\t{kind.local_id}\t{kind.description}\t"
            f"{', '.join(kind.stakeholders)}\t{kind.info_exchanged}"
        )


if __name__ == "__main__":
    main()
