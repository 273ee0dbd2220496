"""Command-line pipeline: ingest, extract, classify, export, eval, gen, serve."""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path

import click
import uvicorn

from . import classify as classify_mod
from . import export as export_mod
from .evalkit import (
    GeneratorConfig,
    confusion_counts,
    generate_corpus,
    generate_labeled_rows,
    macro_f1,
    prf1,
)
from .hf_filter import (
    DEFAULT_ALLOWLIST,
    DEFAULT_MAX_DEPTH,
    DEFAULT_NUM_TREES,
    HfLabel,
    compute_features,
    filter_units,
    load_allowlist,
    load_model,
    save_model,
    train,
)
from .ingest import SourceMode, read_paged, render_paged, to_units
from .model import ClassLabel, RowKind, TextUnit
from .section_extract import assemble, to_rows
from .serialize import (
    extraction_from_dict,
    extraction_to_dict,
    final_from_dict,
    final_to_dict,
    load_json,
    row_to_dict,
    save_json,
    unit_from_dict,
    unit_to_dict,
)
from .service import create_app


def _resolve_mode(mode: str | None, source: Path) -> SourceMode:
    if mode:
        return SourceMode(mode)
    suffix = source.suffix.lower()
    if suffix in (".md", ".markdown"):
        return SourceMode.MARKDOWN
    if suffix == ".txt":
        return SourceMode.PLAINTEXT
    raise click.UsageError(
        f"cannot infer mode from {source.name!r}; pass --mode md|txt"
    )


def _default_ui_dir() -> Path | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


@click.group()
def main() -> None:
    """Convert requirement documents into reviewable, classified rows."""


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--mode", type=click.Choice(["md", "txt"]), default=None)
@click.option("--doc-id", default=None)
def ingest(source: Path, output: Path, mode: str | None, doc_id: str | None) -> None:
    """Split SOURCE into per-page text units."""
    source_mode = _resolve_mode(mode, source)
    doc_id = doc_id or source.stem
    paged = read_paged(source.read_bytes(), source_mode, doc_id=doc_id)
    units = to_units(paged)
    save_json(
        {
            "doc_id": doc_id,
            "mode": source_mode.value,
            "units": [unit_to_dict(u) for u in units],
        },
        output,
    )
    click.echo(f"{doc_id}: {len(units)} units over {len(paged.pages)} pages -> {output}")


@main.command("train-hf")
@click.option("--corpus", type=click.Path(exists=True, file_okay=False, path_type=Path), required=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--num-trees", type=int, default=DEFAULT_NUM_TREES, show_default=True)
@click.option("--max-depth", type=int, default=DEFAULT_MAX_DEPTH, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def train_hf(corpus: Path, output: Path, num_trees: int, max_depth: int, seed: int) -> None:
    """Train the header/footer forest on a generated corpus directory."""
    samples = []
    truth_files = sorted(corpus.glob("*.truth.json"))
    if not truth_files:
        raise click.UsageError(f"no *.truth.json files under {corpus}")
    for path in truth_files:
        truth = load_json(path)
        units = [unit_from_dict(u) for u in truth["units"]]
        labels = [HfLabel(l) for l in truth["hf_labels"]]
        features = compute_features(units)
        samples.extend(zip(features, labels))
    model = train(samples, num_trees=num_trees, max_depth=max_depth, seed=seed)
    save_model(model, output)
    hf = sum(1 for _, label in samples if label is HfLabel.HEADER_FOOTER)
    click.echo(
        f"trained {num_trees} trees on {len(samples)} units "
        f"({hf} header/footer) -> {output}"
    )


@main.command()
@click.argument("source", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--mode", type=click.Choice(["md", "txt"]), default=None)
@click.option("--doc-id", default=None)
@click.option("--hf-model", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--allowlist", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
def extract(
    source: Path,
    output: Path,
    mode: str | None,
    doc_id: str | None,
    hf_model: Path | None,
    allowlist: Path | None,
) -> None:
    """Extract section tuples from SOURCE, optionally removing headers/footers."""
    source_mode = _resolve_mode(mode, source)
    doc_id = doc_id or source.stem
    paged = read_paged(source.read_bytes(), source_mode, doc_id=doc_id)
    units = to_units(paged)
    removed: tuple[TextUnit, ...] = ()
    if hf_model:
        model = load_model(hf_model)
        phrases = load_allowlist(allowlist) if allowlist else DEFAULT_ALLOWLIST
        kept, dropped = filter_units(units, model, phrases)
        units, removed = kept, tuple(dropped)
    extraction = assemble(units, source_mode, doc_id=doc_id, removed_units=removed)
    save_json(extraction_to_dict(extraction), output)
    click.echo(
        f"{doc_id}: {len(extraction.tuples)} sections, "
        f"{len(removed)} units removed -> {output}"
    )


@main.command("train-baseline")
@click.option("--rows", "rows_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--title-boost", type=float, default=classify_mod.DEFAULT_TITLE_BOOST, show_default=True)
def train_baseline_cmd(rows_path: Path, output: Path, title_boost: float) -> None:
    """Train the built-in classifier from labeled rows JSON."""
    entries = load_json(rows_path)
    triples = [
        (
            classify_mod.preprocess(entry["text"]),
            RowKind(entry["kind"]),
            ClassLabel(entry["label"]),
        )
        for entry in entries["rows"]
    ]
    model = classify_mod.train_baseline(triples, title_boost=title_boost)
    classify_mod.save_model(model, output)
    click.echo(
        f"trained baseline on {len(triples)} rows, "
        f"vocabulary {len(model.vocabulary)} -> {output}"
    )


@main.command()
@click.argument("extraction", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--endpoint", default=None)
@click.option("--timeout-ms", type=int, default=classify_mod.DEFAULT_TIMEOUT_MS, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
def classify(
    extraction: Path,
    model_path: Path | None,
    endpoint: str | None,
    timeout_ms: int,
    output: Path,
) -> None:
    """Label extraction rows via the built-in model or an external endpoint."""
    if bool(model_path) == bool(endpoint):
        raise click.UsageError("pass exactly one of --model or --endpoint")
    result = extraction_from_dict(load_json(extraction))
    rows = to_rows(result)
    if model_path:
        binding: classify_mod.ClassifierBinding = classify_mod.BuiltinBinding(
            classify_mod.load_model(model_path)
        )
    else:
        binding = classify_mod.ExternalBinding(endpoint, timeout_ms=timeout_ms)
    final = classify_mod.classify_rows(binding, list(rows))
    save_json(final_to_dict(final), output)
    click.echo(f"{final.doc_id}: {len(final.rows)} rows classified -> {output}")


@main.command()
@click.argument("final", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "yaml"]), required=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False, path_type=Path), required=True)
def export(final: Path, fmt: str, output: Path) -> None:
    """Write FINAL rows as csv, json, or yaml."""
    result = final_from_dict(load_json(final))
    data = export_mod.write(list(result.rows), export_mod.ExportFormat(fmt))
    output.write_bytes(data)
    click.echo(f"{len(result.rows)} rows -> {output}")


@main.command("eval")
@click.option("--truth", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--pred", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--json", "as_json", is_flag=True, default=False)
def eval_cmd(truth: Path, pred: Path, as_json: bool) -> None:
    """Compare predicted labels against truth, both as final-output JSON."""
    truth_final = final_from_dict(load_json(truth))
    pred_final = final_from_dict(load_json(pred))
    truth_types = {r.object_identifier: r.effective_type for r in truth_final.rows}
    pairs = [
        (truth_types[r.object_identifier].value, (r.effective_type or r.object_type).value)
        for r in pred_final.rows
        if r.object_identifier in truth_types
    ]
    if not pairs:
        raise click.UsageError("no overlapping row identifiers between truth and pred")
    counts = confusion_counts([t for t, _ in pairs], [p for _, p in pairs])
    report = {
        "rows": len(pairs),
        "classes": {},
        "macro_f1": round(macro_f1(list(counts.values())), 3),
    }
    for label in sorted(counts):
        precision, recall, f1 = prf1(*counts[label])
        report["classes"][label] = {
            "precision": round(precision, 3),
            "recall": round(recall, 3),
            "f1": round(f1, 3),
        }
    if as_json:
        click.echo(json.dumps(report, indent=2))
        return
    click.echo(f"{'class':<14} {'precision':>9} {'recall':>7} {'f1':>6}")
    for label, scores in report["classes"].items():
        click.echo(
            f"{label:<14} {scores['precision']:>9.3f} "
            f"{scores['recall']:>7.3f} {scores['f1']:>6.3f}"
        )
    click.echo(f"{'macro-F1':<14} {report['macro_f1']:>9.3f}")
    click.echo(f"{'rows':<14} {report['rows']:>9d}")


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("-o", "--output", "out_dir", type=click.Path(file_okay=False, path_type=Path), required=True)
@click.option("--labeled-rows", type=int, default=0, help="Also emit N standalone labeled rows.")
@click.option("--separation", type=float, default=0.9, show_default=True)
def gen(
    seed: int,
    config_path: Path | None,
    out_dir: Path,
    labeled_rows: int,
    separation: float,
) -> None:
    """Generate a synthetic corpus with ground truth into OUTPUT."""
    config = (
        GeneratorConfig(**load_json(config_path)) if config_path else GeneratorConfig()
    )
    corpus = generate_corpus(seed, config)
    out_dir.mkdir(parents=True, exist_ok=True)
    doc_ids = []
    for doc in corpus:
        doc_id = doc.document.doc_id
        doc_ids.append(doc_id)
        (out_dir / f"{doc_id}.md").write_text(render_paged(doc.document))
        save_json(
            {
                "doc_id": doc_id,
                "units": [unit_to_dict(u) for u in doc.units],
                "hf_labels": [label.value for label in doc.hf_labels],
                "extraction": extraction_to_dict(doc.extraction),
                "rows": [row_to_dict(r) for r in doc.rows],
                "row_labels": [label.value for label in doc.row_labels],
            },
            out_dir / f"{doc_id}.truth.json",
        )
    save_json(
        {"seed": seed, "config": dataclasses.asdict(config), "doc_ids": doc_ids},
        out_dir / "index.json",
    )
    if labeled_rows:
        rows = generate_labeled_rows(seed, labeled_rows, separation)
        save_json(
            {
                "rows": [
                    {"text": text, "kind": kind.value, "label": label.value}
                    for text, kind, label in rows
                ]
            },
            out_dir / "labeled_rows.json",
        )
    click.echo(f"{len(corpus)} documents -> {out_dir}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--data-dir", type=click.Path(file_okay=False, path_type=Path), default=Path("./data"), show_default=True)
@click.option("--ui-dir", type=click.Path(file_okay=False, path_type=Path), default=None)
def serve(host: str, port: int, data_dir: Path, ui_dir: Path | None) -> None:
    """Run the review service (and UI, when built) over HTTP."""
    app = create_app(data_dir, ui_dir=ui_dir or _default_ui_dir())
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
