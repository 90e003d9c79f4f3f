"""Command-line interface.

Graphs are in-memory; the --graph flag gives optional JSON dump
persistence between invocations.  Exit codes: 0 success, 1 user error,
2 internal error.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from .errors import SemgraphError
from .graph import SemanticGraph
from .mapping import export_graph, import_triples, skolemize
from .rdf.ntriples import parse_ntriples, serialize_ntriples
from .rdf.turtle import parse_turtle_subset


class UserError(Exception):
    pass


def _load_graph(path) -> SemanticGraph:
    p = Path(path)
    if not p.exists():
        return SemanticGraph()
    return SemanticGraph.from_dump(json.loads(p.read_text(encoding="utf-8")))


def _require_dump(path) -> SemanticGraph:
    p = Path(path)
    if not p.exists():
        raise UserError(f"no such graph dump: {path}")
    return SemanticGraph.from_dump(json.loads(p.read_text(encoding="utf-8")))


def _save_graph(graph: SemanticGraph, path):
    Path(path).write_text(json.dumps(graph.dump(), indent=2), encoding="utf-8")


def _parse_rdf_file(path: Path):
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".ttl":
        return parse_turtle_subset(text)
    return parse_ntriples(text)


@click.group()
def cli():
    """Semantic-graph integration workbench."""


@cli.command("import")
@click.argument("file", type=click.Path())
@click.option("--graph", "graph_path", default=None,
              help="JSON dump to update (created if missing).")
@click.option("--source", default=None, help="Source tag (default: file name).")
def import_cmd(file, graph_path, source):
    """Import an RDF file (.nt or .ttl) into a graph dump."""
    path = Path(file)
    if not path.exists():
        raise UserError(f"no such file: {file}")
    source = source or path.name
    graph = _load_graph(graph_path) if graph_path else SemanticGraph()
    ts = skolemize(_parse_rdf_file(path), source)
    report = import_triples(graph, ts, source)
    if graph_path:
        _save_graph(graph, graph_path)
    click.echo(json.dumps(report.to_dict(), indent=2))


@cli.command("export")
@click.argument("dump", type=click.Path())
@click.argument("out", type=click.Path())
def export_cmd(dump, out):
    """Export a graph dump as canonical N-Triples."""
    graph = _require_dump(dump)
    Path(out).write_text(serialize_ntriples(export_graph(graph)), encoding="utf-8")
    click.echo(f"wrote {out}")


@cli.command("query")
@click.option("--endpoint", required=True, help="SPARQL endpoint URL.")
@click.option("--file", "query_file", required=True, type=click.Path(),
              help="File containing the query.")
@click.option("--select/--construct", "is_select", default=True)
def query_cmd(endpoint, query_file, is_select):
    """Run a query against a remote SPARQL endpoint."""
    from .client import EndpointConfig, construct_remote, select_remote
    from .rdf.ntriples import serialize_term
    qpath = Path(query_file)
    if not qpath.exists():
        raise UserError(f"no such file: {query_file}")
    query = qpath.read_text(encoding="utf-8")
    ep = EndpointConfig(url=endpoint)
    if is_select:
        sols = select_remote(ep, query)
        click.echo(json.dumps(
            [{var: serialize_term(t) for var, t in sol.items()} for sol in sols],
            indent=2))
    else:
        click.echo(serialize_ntriples(construct_remote(ep, query)), nl=False)


@cli.command("run")
@click.argument("workflow_file", type=click.Path())
@click.option("--graph", "graph_path", default=None,
              help="JSON dump used as the initial graph and updated after.")
def run_cmd(workflow_file, graph_path):
    """Run a workflow file (.wf.json)."""
    from .workflow import parse_workflow, run_workflow, validate_workflow
    path = Path(workflow_file)
    if not path.exists():
        raise UserError(f"no such file: {workflow_file}")
    spec = parse_workflow(path.read_text(encoding="utf-8"))
    violations = validate_workflow(spec)
    if violations:
        raise UserError("invalid workflow: " + "; ".join(violations))
    initial = _load_graph(graph_path) if graph_path else None
    graph, report = run_workflow(spec, initial)
    if graph_path:
        _save_graph(graph, graph_path)
    click.echo(json.dumps(report.to_dict(), indent=2))
    if any(s.status != "ok" for s in report.steps):
        sys.exit(1)


@cli.command("stats")
@click.argument("dump", type=click.Path())
def stats_cmd(dump):
    """Print summary statistics for a graph dump."""
    from .plugins import degree_stats
    graph = _require_dump(dump)
    outcome = degree_stats(graph)
    click.echo(json.dumps({
        "concepts": len(graph.concepts),
        "relations": len(graph.relations),
        "classes": len(graph.classes),
        "degree": outcome.metrics,
    }, indent=2))


@cli.command("serve")
@click.option("--port", default=None, type=int,
              help="Port to bind (default env SGW_PORT or 8080; 0 = ephemeral).")
@click.option("--host", default="127.0.0.1")
def serve_cmd(port, host):
    """Start the HTTP service; prints 'LISTENING <port>' once bound."""
    import os

    import uvicorn

    from .service import create_app
    if port is None:
        port = int(os.environ.get("SGW_PORT", "8080"))
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((host, port))
    sock.listen(128)
    click.echo(f"LISTENING {sock.getsockname()[1]}")
    sys.stdout.flush()
    config = uvicorn.Config(create_app(), log_level="warning")
    uvicorn.Server(config).run(sockets=[sock])


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except SystemExit as e:
        return int(e.code or 0)
    except (UserError, SemgraphError, click.ClickException,
            click.exceptions.Abort) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # internal error
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
