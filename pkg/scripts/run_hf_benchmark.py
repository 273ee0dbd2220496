"""Benchmark the header/footer forest on a synthetic corpus.

Generates a corpus with page furniture, trains on a stratified split, and
prints per-class precision/recall/F1 plus wall time. Knobs let you probe
how forest size, depth, and noise move the metrics.
"""

import time

import click

from rexcl.evalkit import (
    GeneratorConfig,
    confusion_counts,
    generate_corpus,
    hf_feature_pool,
    prf1,
    stratified_split,
    subsample_exact,
)
from rexcl.hf_filter import HfLabel, predict, train


@click.command()
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--docs", type=int, default=18, show_default=True)
@click.option("--pages", type=int, default=45, show_default=True)
@click.option("--hf-units", type=int, default=1429, show_default=True)
@click.option("--text-units", type=int, default=2344, show_default=True)
@click.option("--num-trees", type=int, default=50, show_default=True)
@click.option("--max-depth", type=int, default=6, show_default=True)
@click.option("--test-fraction", type=float, default=0.25, show_default=True)
@click.option("--hf-dropout", type=float, default=0.05, show_default=True)
@click.option("--dynamic-hf", type=float, default=0.3, show_default=True)
def main(
    seed: int,
    docs: int,
    pages: int,
    hf_units: int,
    text_units: int,
    num_trees: int,
    max_depth: int,
    test_fraction: float,
    hf_dropout: float,
    dynamic_hf: float,
) -> None:
    config = GeneratorConfig(
        docs=docs,
        pages_per_doc=pages,
        sections_per_doc=16,
        texts_per_section=8,
        hf_lines_per_page=2,
        front_matter_texts=3,
        hf_dropout=hf_dropout,
        dynamic_hf_fraction=dynamic_hf,
        repeated_phrase_rate=0.12,
    )
    started = time.monotonic()
    corpus = generate_corpus(seed, config)
    pool = hf_feature_pool(corpus)
    sample = subsample_exact(
        pool,
        {HfLabel.HEADER_FOOTER: hf_units, HfLabel.REQ_TEXT: text_units},
        seed=seed,
    )
    train_pairs, test_pairs = stratified_split(sample, test_fraction, seed=seed)
    model = train(
        train_pairs, num_trees=num_trees, max_depth=max_depth, seed=seed
    )
    truth = [label.value for _, label in test_pairs]
    pred = [predict(model, features)[0].value for features, _ in test_pairs]
    elapsed = time.monotonic() - started

    counts = confusion_counts(truth, pred)
    click.echo(
        f"{len(sample)} units ({hf_units} HF / {text_units} TEXT), "
        f"{len(train_pairs)} train / {len(test_pairs)} test, "
        f"{num_trees} trees depth {max_depth}"
    )
    click.echo(f"{'class':<6} {'precision':>9} {'recall':>7} {'f1':>6} {'support':>8}")
    for label in sorted(counts):
        precision, recall, f1 = prf1(*counts[label])
        support = sum(1 for t in truth if t == label)
        click.echo(
            f"{label:<6} {precision:>9.3f} {recall:>7.3f} {f1:>6.3f} {support:>8d}"
        )
    click.echo(f"wall time {elapsed:.2f}s")


if __name__ == "__main__":
    main()
