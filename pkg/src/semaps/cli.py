"""Command-line entry points: serve, load-kb, import-csv, export, query."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from semaps.config import load_config, resolve_config_path
from semaps.errors import SemapsError
from semaps.kb import load_kb
from semaps.ontology import Platform
from semaps.rdb2rdf import apply_mapping, parse_mapping, read_csv
from semaps.rdf.terms import triple_key
from semaps.sparql import evaluate, parse_query, results_to_json


def _config_from_option(config_path: str | None):
    return load_config(resolve_config_path(config_path))


def _open_platform(config) -> Platform:
    """Platform over the persisted store; the KB is not needed for store ops."""
    return Platform(data_dir=config.data_dir, base_namespace=config.base_namespace)


@click.group()
def main():
    """semaps: author and serve semantic crowd maps."""


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None, help="Config file")
def serve(config_path):
    """Run the HTTP API server."""
    import uvicorn

    from semaps.server import create_app

    try:
        config = _config_from_option(config_path)
        config.validate_files()
        app = create_app(config)
    except SemapsError as exc:
        raise click.ClickException(str(exc))
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")


@main.command("load-kb")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--concepts", type=click.Path(), default=None, help="Concepts TSV file")
@click.option("--relations", type=click.Path(), default=None, help="Relations TSV file")
def load_kb_command(config_path, concepts, relations):
    """Validate a knowledge base and print its statistics."""
    try:
        if concepts is None or relations is None:
            config = _config_from_option(config_path)
            concepts = concepts or config.kb_concepts
            relations = relations or config.kb_relations
        if not concepts or not relations:
            raise click.ClickException("need --concepts and --relations (or a config)")
        graph = load_kb(concepts, relations)
    except SemapsError as exc:
        raise click.ClickException(str(exc))
    languages = sorted({c.language for c in graph.concepts.values()})
    click.echo(
        f"loaded {len(graph)} concepts ({', '.join(languages)}), "
        f"{len(graph.relations)} relations"
    )


@main.command("import-csv")
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--mapping", "mapping_path", type=click.Path(), required=True)
@click.option("--csv", "csv_paths", type=click.Path(), multiple=True, required=True)
def import_csv(config_path, mapping_path, csv_paths):
    """Map CSV tables to triples and load them into the platform store."""
    try:
        config = _config_from_option(config_path)
        rules = parse_mapping(Path(mapping_path).read_text(encoding="utf-8"))
        tables = [read_csv(p) for p in csv_paths]
        triples = apply_mapping(rules, tables)
        platform = _open_platform(config)
        added = platform.import_triples(sorted(triples, key=triple_key))
    except SemapsError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"imported {added} new triples ({len(triples)} emitted)")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--out", "out_path", type=click.Path(), required=True)
def export(config_path, out_path):
    """Write the persisted platform store as Turtle."""
    try:
        config = _config_from_option(config_path)
        platform = _open_platform(config)
        Path(out_path).write_text(platform.export_turtle(), encoding="utf-8")
    except SemapsError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"exported {len(platform.store)} triples to {out_path}")


@main.command()
@click.option("--config", "config_path", type=click.Path(), default=None)
@click.option("--sparql", "query_text", required=True, help="SELECT query to evaluate")
def query(config_path, query_text):
    """Evaluate a SPARQL SELECT query against the persisted store."""
    try:
        config = _config_from_option(config_path)
        platform = _open_platform(config)
        parsed = parse_query(query_text)
        rows = evaluate(platform.store, parsed)
    except SemapsError as exc:
        raise click.ClickException(str(exc))
    click.echo(json.dumps(results_to_json(parsed, rows), indent=1, sort_keys=True))


if __name__ == "__main__":
    sys.exit(main())
