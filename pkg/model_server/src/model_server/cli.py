"""Command line entry points: adapt, finetune, serve."""

from __future__ import annotations

import json
from pathlib import Path

import click
import uvicorn

from .encoder import HeadConfig, load_checkpoint, save_checkpoint
from .server import create_app
from .training import (
    AdaptParams,
    FinetuneParams,
    adapt,
    finetune,
    macro_f1,
    new_checkpoint,
)


def _load_texts(path: Path) -> list[str]:
    data = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(data, dict) and isinstance(data.get("texts"), list):
        return [str(text) for text in data["texts"]]
    if isinstance(data, dict) and isinstance(data.get("rows"), list):
        return [str(row["text"]) for row in data["rows"]]
    raise click.ClickException(f'{path} must hold a "texts" or "rows" array')


def _load_labeled_rows(path: Path) -> list[tuple[str, str, str]]:
    data = json.loads(path.read_text(encoding="utf-8"))
    rows = data.get("rows") if isinstance(data, dict) else None
    if not isinstance(rows, list):
        raise click.ClickException(f'{path} must hold a "rows" array')
    try:
        return [(str(r["text"]), str(r["kind"]), str(r["label"])) for r in rows]
    except (KeyError, TypeError) as exc:
        raise click.ClickException(f"malformed row in {path}: {exc}") from exc


@click.group()
def main() -> None:
    """Adapt, finetune, and serve the transformer row classifier."""


@main.command("adapt")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--base", "base_dir", type=click.Path(exists=True, file_okay=False, path_type=Path), default=None, help="Start from this checkpoint instead of a fresh one.")
@click.option("--epochs", type=int, default=3, show_default=True)
@click.option("--mask-prob", type=float, default=0.15, show_default=True)
@click.option("--lr", type=float, default=5e-3, show_default=True)
@click.option("--batch-size", type=int, default=32, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", "out_dir", type=click.Path(file_okay=False, path_type=Path), required=True)
def adapt_cmd(
    corpus: Path,
    base_dir: Path | None,
    epochs: int,
    mask_prob: float,
    lr: float,
    batch_size: int,
    seed: int,
    out_dir: Path,
) -> None:
    """Run masked-LM adaptation over CORPUS and save the checkpoint."""
    texts = _load_texts(corpus)
    try:
        base = (
            load_checkpoint(base_dir)
            if base_dir
            else new_checkpoint(texts, seed=seed)
        )
        params = AdaptParams(
            epochs=epochs, mask_prob=mask_prob, lr=lr, batch_size=batch_size
        )
        adapted, metrics = adapt(texts, base, params, seed=seed)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    save_checkpoint(adapted, out_dir)
    click.echo(
        f"held-out MLM loss {metrics['base_loss']:.4f} -> "
        f"{metrics['adapted_loss']:.4f}; saved to {out_dir}"
    )


@main.command("finetune")
@click.option("--rows", "rows_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), required=True)
@click.option("--checkpoint", "checkpoint_dir", type=click.Path(exists=True, file_okay=False, path_type=Path), required=True)
@click.option("--epochs", type=int, default=20, show_default=True)
@click.option("--lr", type=float, default=1e-3, show_default=True)
@click.option("--batch-size", type=int, default=16, show_default=True)
@click.option("--hidden", type=int, default=256, show_default=True, help="Classification head hidden width.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-o", "--output", "out_dir", type=click.Path(file_okay=False, path_type=Path), required=True)
def finetune_cmd(
    rows_path: Path,
    checkpoint_dir: Path,
    epochs: int,
    lr: float,
    batch_size: int,
    hidden: int,
    seed: int,
    out_dir: Path,
) -> None:
    """Train the classification head on labeled rows."""
    rows = _load_labeled_rows(rows_path)
    checkpoint = load_checkpoint(checkpoint_dir)
    try:
        trained = finetune(
            rows,
            checkpoint,
            head_config=HeadConfig(hidden=hidden),
            params=FinetuneParams(epochs=epochs, lr=lr, batch_size=batch_size),
            seed=seed,
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    save_checkpoint(trained, out_dir)
    click.echo(
        f"train macro-F1 {macro_f1(trained, rows):.3f}; saved to {out_dir}"
    )


@main.command("serve")
@click.option("--checkpoint", "checkpoint_dir", type=click.Path(exists=True, file_okay=False, path_type=Path), required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8100, show_default=True)
def serve_cmd(checkpoint_dir: Path, host: str, port: int) -> None:
    """Serve the classification wire protocol over HTTP."""
    checkpoint = load_checkpoint(checkpoint_dir)
    try:
        app = create_app(checkpoint)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
