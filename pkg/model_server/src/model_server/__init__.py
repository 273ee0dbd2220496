"""Transformer row classifier: domain adaptation, finetuning, serving."""

from .encoder import (
    CLASS_LABELS,
    Checkpoint,
    ClassifierHead,
    Encoder,
    EncoderConfig,
    HeadConfig,
    load_checkpoint,
    save_checkpoint,
)
from .preprocess import preprocess
from .server import create_app
from .training import (
    AdaptParams,
    FinetuneParams,
    adapt,
    classify,
    finetune,
    macro_f1,
    mlm_heldout_loss,
    new_checkpoint,
)
from .vocab import Vocab, build_vocab, load_vocab, save_vocab

__all__ = [
    "AdaptParams",
    "CLASS_LABELS",
    "Checkpoint",
    "ClassifierHead",
    "Encoder",
    "EncoderConfig",
    "FinetuneParams",
    "HeadConfig",
    "Vocab",
    "adapt",
    "build_vocab",
    "classify",
    "create_app",
    "finetune",
    "load_checkpoint",
    "load_vocab",
    "macro_f1",
    "mlm_heldout_loss",
    "new_checkpoint",
    "preprocess",
    "save_checkpoint",
    "save_vocab",
]
