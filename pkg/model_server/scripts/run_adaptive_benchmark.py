"""Measures whether masked-LM adaptation before finetuning helps.

Compares finetuning from a fresh encoder against finetuning from a
domain-adapted one. The labeled train rows draw their content words from
a small slice of each class pool; the test rows draw from the remaining
slice, so only a model that learned the unlabeled corpus can place them.
"""

from __future__ import annotations

import click

from model_server import (
    AdaptParams,
    EncoderConfig,
    FinetuneParams,
    adapt,
    finetune,
    macro_f1,
    new_checkpoint,
)
from model_server.synth import make_corpus, make_rows

TEMPLATE = EncoderConfig(
    vocab_size=0, hidden=32, layers=1, heads=2, intermediate=64, max_len=24
)


@click.command()
@click.option("--corpus-size", type=int, default=2400, show_default=True)
@click.option("--train-per-class", type=int, default=12, show_default=True)
@click.option("--test-per-class", type=int, default=25, show_default=True)
@click.option("--train-words", type=int, default=8, show_default=True, help="Content words per class visible to finetuning.")
@click.option("--adapt-epochs", type=int, default=4, show_default=True)
@click.option("--finetune-epochs", type=int, default=25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def main(
    corpus_size: int,
    train_per_class: int,
    test_per_class: int,
    train_words: int,
    adapt_epochs: int,
    finetune_epochs: int,
    seed: int,
) -> None:
    corpus = make_corpus(seed + 100, corpus_size)
    train = make_rows(seed + 200, train_per_class, (0, train_words))
    test = make_rows(seed + 300, test_per_class, (train_words, 24))

    base = new_checkpoint(corpus, seed=seed, template=TEMPLATE)
    params = FinetuneParams(epochs=finetune_epochs)
    vanilla = finetune(train, base, params=params, seed=seed)
    adapted, metrics = adapt(
        corpus, base, AdaptParams(epochs=adapt_epochs), seed=seed
    )
    adaptive = finetune(train, adapted, params=params, seed=seed)

    click.echo(
        f"MLM held-out loss {metrics['base_loss']:.3f} -> "
        f"{metrics['adapted_loss']:.3f}"
    )
    click.echo(f"train rows {len(train)}, test rows {len(test)}")
    click.echo(f"vanilla  macro-F1 {macro_f1(vanilla, test):.4f}")
    click.echo(f"adaptive macro-F1 {macro_f1(adaptive, test):.4f}")


if __name__ == "__main__":
    main()
