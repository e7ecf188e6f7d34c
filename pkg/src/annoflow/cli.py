"""Command-line interface operating on a project directory.

Exit codes: 0 success, 1 validation error, 2 state error, 3 I/O error.
Every failure prints a one-line diagnostic on standard error.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .agreement import render_report_table, report_to_json
from .core.io import read_annotation_sets, read_documents, write_annotation_sets
from .errors import AnnoflowError, StateError, ValidationError
from .evaluation import evaluate, render_report
from .merge import resolution_from_json
from .predictions import FilePredictionProvider, RemotePredictionProvider
from .sampling import SamplingConfig, STRATEGIES
from .taxonomy import adjustment_from_json
from .workflow.project import Project
from .workflow.store import ProjectStore, init_project_dir


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, ensure_ascii=False, indent=2))


def _store(ctx: click.Context) -> ProjectStore:
    return ProjectStore(ctx.obj["project_dir"])


def _load(ctx: click.Context) -> tuple[ProjectStore, Project]:
    store = _store(ctx)
    return store, store.load()


def _provider(predictions: str | None, provider_url: str | None):
    if predictions and provider_url:
        raise ValidationError("pass either --predictions or --provider-url, not both")
    if predictions:
        return FilePredictionProvider(predictions)
    if provider_url:
        return RemotePredictionProvider(provider_url)
    return None


def _active_iteration(project: Project, index: int | None) -> int:
    if index is not None:
        return index
    for iteration in project.iterations:
        if iteration.stage != "Finalized":
            return iteration.index
    if project.iterations:
        return project.iterations[-1].index
    raise StateError("project has no iterations yet; run sample first")


@click.group()
@click.option(
    "--project",
    "project_dir",
    type=click.Path(path_type=Path),
    default=Path("."),
    help="Project directory (default: current directory).",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["table", "json", "markdown"]),
    default="table",
    help="Output format for reports and summaries.",
)
@click.pass_context
def cli(ctx: click.Context, project_dir: Path, fmt: str) -> None:
    """Dual-annotator NER annotation workflow engine."""
    ctx.obj = {"project_dir": project_dir, "format": fmt}


@cli.command()
@click.option("--name", required=True, help="Project name.")
@click.option("--docs", "docs_path", required=True, type=click.Path(path_type=Path), help="Corpus JSONL file.")
@click.option("--labels", required=True, help="Comma-separated label ids of scheme version 1.")
@click.option("--annotators", required=True, help="Comma-separated annotator ids (at least 2).")
@click.pass_context
def init(ctx: click.Context, name: str, docs_path: Path, labels: str, annotators: str) -> None:
    """Create a new project directory."""
    documents = read_documents(docs_path)
    label_list = [l.strip() for l in labels.split(",") if l.strip()]
    annotator_list = [a.strip() for a in annotators.split(",") if a.strip()]
    project = init_project_dir(ctx.obj["project_dir"], name, documents, label_list, annotator_list)
    click.echo(f"initialized project {project.name!r}: {len(project.documents)} docs, "
               f"{len(project.annotators)} annotators, {len(project.scheme.labels)} labels")


@cli.command()
@click.option("--strategy", type=click.Choice(list(STRATEGIES)), default="random")
@click.option("--batch-size", type=int, required=True)
@click.option("--seed", type=int, default=0)
@click.option("--predictions", type=click.Path(path_type=Path), default=None,
              help="Predictions JSONL (required for uncertainty strategies).")
@click.option("--provider-url", default=None, help="Remote prediction service base URL.")
@click.option("--scores-out", type=click.Path(path_type=Path), default=None,
              help="Write the pool's uncertainty scores to this JSONL file.")
@click.pass_context
def sample(ctx, strategy, batch_size, seed, predictions, provider_url, scores_out) -> None:
    """Draw the next batch from the unlabeled pool."""
    store, project = _load(ctx)
    provider = _provider(str(predictions) if predictions else None, provider_url)
    config = SamplingConfig(strategy=strategy, batch_size=batch_size, seed=seed)
    if scores_out is not None:
        if strategy == "random" or provider is None:
            raise ValidationError("--scores-out needs an uncertainty strategy and a provider")
        from .core.io import write_jsonl
        from .predictions import fetch_predictions
        from .sampling import score_uncertainty, scores_to_json

        pool_docs = [project.documents[d] for d in project.unlabeled_pool]
        probs = fetch_predictions(provider, pool_docs, project.scheme)
        scores = [score_uncertainty(p, strategy) for p in probs]
        write_jsonl(scores_out, scores_to_json(scores, strategy))
    with store.lock():
        iteration = project.sample_iteration(config, provider)
        store.save(project)
    click.echo(f"iteration {iteration.index} sampled: {len(iteration.doc_ids)} docs ({strategy})")
    for doc_id in iteration.doc_ids:
        click.echo(f"  {doc_id}")


@cli.command()
@click.option("--iteration", "index", type=int, default=None, help="Iteration index (default: active).")
@click.option("--predictions", type=click.Path(path_type=Path), default=None)
@click.option("--provider-url", default=None)
@click.option("--min-confidence", type=float, default=0.0, show_default=True,
              help="Drop draft entities below this confidence.")
@click.pass_context
def bootstrap(ctx, index, predictions, provider_url, min_confidence) -> None:
    """Pre-annotate the sampled batch with model predictions."""
    store, project = _load(ctx)
    provider = _provider(str(predictions) if predictions else None, provider_url)
    if provider is None:
        raise ValidationError("bootstrap needs --predictions or --provider-url")
    with store.lock():
        iteration = project.bootstrap_iteration(
            _active_iteration(project, index), provider, min_confidence
        )
        store.save(project)
    spans = sum(len(d.spans) for d in iteration.drafts.values())
    click.echo(f"iteration {iteration.index} bootstrapped: {spans} draft spans from {provider.identity}")


@cli.command()
@click.option("--iteration", "index", type=int, default=None)
@click.option("--export", "export_dir", type=click.Path(path_type=Path), default=None,
              help="Write per-annotator starter files (drafts included) to this directory.")
@click.pass_context
def assign(ctx, index, export_dir) -> None:
    """Publish the duty plan so annotators can start."""
    store, project = _load(ctx)
    with store.lock():
        iteration = project.assign_iteration(_active_iteration(project, index))
        store.save(project)
    for part_index, part in enumerate(iteration.plan.parts):
        pair = iteration.plan.annotators_for_part(part_index)
        click.echo(f"part {part_index}: {len(part)} docs -> {pair[0]}, {pair[1]}")
    if export_dir:
        export_dir.mkdir(parents=True, exist_ok=True)
        for author, sets in project.task_sets(iteration.index).items():
            write_annotation_sets(export_dir / f"{author}.jsonl", sets)
        click.echo(f"task files written to {export_dir}")


@cli.command("import")
@click.argument("file", type=click.Path(path_type=Path))
@click.option("--iteration", "index", type=int, default=None)
@click.pass_context
def import_annotations(ctx, file, index) -> None:
    """Ingest individual annotations from a JSONL file."""
    store, project = _load(ctx)
    sets = read_annotation_sets(file)
    with store.lock():
        iteration = project.ingest_individual_annotations(_active_iteration(project, index), sets)
        store.save(project)
    click.echo(f"ingested {len(sets)} sets; iteration {iteration.index} is at {iteration.stage}")


@cli.command()
@click.option("--iteration", "index", type=int, default=None)
@click.pass_context
def merge(ctx, index) -> None:
    """Merge the two annotations of every document, marking conflicts."""
    store, project = _load(ctx)
    with store.lock():
        summary = project.merge_iteration(_active_iteration(project, index))
        store.save(project)
    if ctx.obj["format"] == "json":
        _echo_json(summary)
    else:
        click.echo(
            f"merged {summary['docs']} docs: {summary['agreed_spans']} agreed spans, "
            f"{summary['conflicts']} conflicts"
        )


@cli.command()
@click.option("--iteration", "index", type=int, default=None)
@click.pass_context
def agreement(ctx, index) -> None:
    """Inter-annotator agreement for an annotated iteration."""
    store, project = _load(ctx)
    reports = project.agreement_reports(_active_iteration(project, index))
    if ctx.obj["format"] == "json":
        _echo_json([report_to_json(r) for r in reports])
    else:
        for i, report in enumerate(reports):
            if i:
                click.echo()
            click.echo(render_report_table(report))


@cli.command()
@click.option("--iteration", "index", type=int, default=None)
@click.option("--resolutions", "resolutions_path", type=click.Path(path_type=Path), default=None,
              help="Resolutions JSONL to apply on top of any buffered ones.")
@click.pass_context
def finalize(ctx, index, resolutions_path) -> None:
    """Apply resolutions and promote the merged data to ground truth."""
    store, project = _load(ctx)
    resolutions = []
    if resolutions_path:
        from .core.io import read_jsonl

        resolutions = [resolution_from_json(obj) for obj in read_jsonl(resolutions_path)]
    with store.lock():
        iteration = project.finalize_iteration(_active_iteration(project, index), resolutions)
        store.save(project)
    spans = sum(len(g.spans) for g in iteration.gold.values())
    click.echo(f"iteration {iteration.index} finalized: {len(iteration.gold)} gold docs, {spans} spans")


@cli.command()
@click.option("--mapping", "mapping_path", required=True, type=click.Path(path_type=Path),
              help='Adjustment JSON file: {"from_version", "to_version", "mapping", "rationale", "timestamp"}.')
@click.pass_context
def remap(ctx, mapping_path) -> None:
    """Apply an irreversible class-system adjustment to all data."""
    store, project = _load(ctx)
    try:
        obj = json.loads(Path(mapping_path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid adjustment file: {exc}") from exc
    adjustment = adjustment_from_json(obj)
    with store.lock():
        new_scheme, _ = project.remap_scheme(
            adjustment.mapping, adjustment.rationale, adjustment.timestamp or None
        )
        store.save(project)
    click.echo(
        f"scheme v{new_scheme.version}: {len(new_scheme.labels)} labels "
        f"({', '.join(new_scheme.labels)})"
    )


@cli.command("evaluate")
@click.option("--pred", "pred_path", required=True, type=click.Path(path_type=Path),
              help="Predicted annotation sets (JSONL).")
@click.option("--split", "split_name", type=click.Choice(["all", "train", "val", "test"]), default="all")
@click.pass_context
def evaluate_cmd(ctx, pred_path, split_name) -> None:
    """Score predictions against the finalized gold data."""
    store, project = _load(ctx)
    gold = project.gold_sets(None if split_name == "all" else split_name)
    if not gold:
        raise StateError("no finalized gold data to evaluate against")
    wanted = {g.doc_id for g in gold}
    pred = [p for p in read_annotation_sets(pred_path) if p.doc_id in wanted]
    report = evaluate(gold, pred, project.scheme, project.documents)
    click.echo(render_report(report, ctx.obj["format"]))


@cli.command()
@click.option("--train", type=int, required=True)
@click.option("--val", type=int, required=True)
@click.option("--test", type=int, required=True)
@click.option("--seed", type=int, default=0)
@click.option("--force", is_flag=True, help="Overwrite an existing split (audited).")
@click.pass_context
def split(ctx, train, val, test, seed, force) -> None:
    """Split the finalized gold documents into train/val/test."""
    store, project = _load(ctx)
    with store.lock():
        splits = project.split_dataset(train, val, test, seed, force=force)
        store.save(project)
    click.echo(
        f"split: {len(splits['train'])} train / {len(splits['val'])} val / {len(splits['test'])} test"
    )


@cli.command()
@click.pass_context
def status(ctx) -> None:
    """Project summary: scheme, pools, iterations, splits."""
    _, project = _load(ctx)
    info = project.status()
    if ctx.obj["format"] == "json":
        _echo_json(info)
        return
    click.echo(f"project {info['name']!r}: {info['documents']} docs, "
               f"{info['unlabeled']} unlabeled, {info['finalized']} finalized")
    click.echo(f"scheme v{info['scheme_version']}: {', '.join(info['labels'])}")
    click.echo(f"annotators: {', '.join(info['annotators'])}")
    for it in info["iterations"]:
        click.echo(
            f"iteration {it['index']}: {it['stage']} ({it['docs']} docs, "
            f"{it['conflicts_open']} open / {it['conflicts_resolved']} resolved conflicts)"
        )
    if info["splits"]:
        click.echo(f"splits: {info['splits']}")


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--ui-dir", type=click.Path(path_type=Path), default=None,
              help="Directory with built review UI assets.")
@click.pass_context
def serve(ctx, host, port, ui_dir) -> None:
    """Run the review server for the collective session."""
    from .server.app import serve as run_server

    run_server(ctx.obj["project_dir"], host=host, port=port, ui_dir=ui_dir)


def main() -> None:
    try:
        cli(standalone_mode=False)
    except AnnoflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(exc.exit_code)
    except click.UsageError as exc:
        print(f"error: {exc.format_message()}", file=sys.stderr)
        sys.exit(1)
    except click.exceptions.Abort:
        print("aborted", file=sys.stderr)
        sys.exit(1)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        sys.exit(3)


if __name__ == "__main__":
    main()
