"""Tiny transformer encoder with masked-LM and classification heads."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import torch
from torch import nn

from .vocab import PAD, Vocab, load_vocab, save_vocab

CLASS_LABELS = ("HEADER", "INFO", "FUNC_REQ", "NON_FUNC_REQ")


@dataclass(frozen=True)
class EncoderConfig:
    vocab_size: int
    hidden: int = 64
    layers: int = 2
    heads: int = 2
    intermediate: int = 128
    max_len: int = 48
    dropout: float = 0.1


@dataclass(frozen=True)
class HeadConfig:
    hidden: int = 256
    dropout: float = 0.1


class Encoder(nn.Module):
    def __init__(self, config: EncoderConfig):
        super().__init__()
        self.config = config
        self.token_embedding = nn.Embedding(config.vocab_size, config.hidden)
        self.position_embedding = nn.Embedding(config.max_len, config.hidden)
        self.input_norm = nn.LayerNorm(config.hidden)
        self.input_dropout = nn.Dropout(config.dropout)
        layer = nn.TransformerEncoderLayer(
            d_model=config.hidden,
            nhead=config.heads,
            dim_feedforward=config.intermediate,
            dropout=config.dropout,
            activation="gelu",
            batch_first=True,
        )
        self.layers = nn.TransformerEncoder(
            layer, num_layers=config.layers, enable_nested_tensor=False
        )
        self.mlm_transform = nn.Sequential(
            nn.Linear(config.hidden, config.hidden),
            nn.GELU(),
            nn.LayerNorm(config.hidden),
        )
        # Tied to the input embeddings: masked-LM pressure then keeps token
        # vectors distinguishable instead of letting them collapse.
        self.mlm_bias = nn.Parameter(torch.zeros(config.vocab_size))
        # Small init keeps the random component from drowning out whatever
        # structure training adds; the default N(0, 1) embeddings never
        # recover from their own noise at this scale.
        nn.init.normal_(self.token_embedding.weight, std=0.02)
        nn.init.normal_(self.position_embedding.weight, std=0.02)

    def hidden_states(self, ids: torch.Tensor) -> torch.Tensor:
        positions = torch.arange(ids.shape[1], device=ids.device)
        states = self.token_embedding(ids) + self.position_embedding(positions)
        states = self.input_dropout(self.input_norm(states))
        return self.layers(states, src_key_padding_mask=ids == PAD)

    def mlm_logits(self, ids: torch.Tensor) -> torch.Tensor:
        states = self.mlm_transform(self.hidden_states(ids))
        return nn.functional.linear(
            states, self.token_embedding.weight, self.mlm_bias
        )


class ClassifierHead(nn.Module):
    """MLP over the mean of the non-padding hidden states.

    Mean pooling feeds the adapted token representations straight into the
    classifier; the first position is never a masked-LM target, so pooling
    on it alone would discard most of what adaptation learned.
    """

    def __init__(self, encoder_hidden: int, config: HeadConfig):
        super().__init__()
        self.config = config
        self.mlp = nn.Sequential(
            nn.Dropout(config.dropout),
            nn.Linear(encoder_hidden, config.hidden),
            nn.GELU(),
            nn.Dropout(config.dropout),
            nn.Linear(config.hidden, len(CLASS_LABELS)),
        )

    def forward(self, states: torch.Tensor, ids: torch.Tensor) -> torch.Tensor:
        real = (ids != PAD).unsqueeze(-1).float()
        pooled = (states * real).sum(dim=1) / real.sum(dim=1).clamp(min=1.0)
        return self.mlp(pooled)


@dataclass
class Checkpoint:
    """Encoder weights plus vocabulary; the head is present after finetuning."""

    config: EncoderConfig
    vocab: Vocab
    encoder: Encoder
    head: ClassifierHead | None = None
    head_config: HeadConfig | None = None


def save_checkpoint(checkpoint: Checkpoint, directory: Path) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    meta = {"encoder": dataclasses.asdict(checkpoint.config)}
    if checkpoint.head is not None:
        meta["head"] = dataclasses.asdict(checkpoint.head_config)
    (directory / "config.json").write_text(json.dumps(meta, indent=2) + "\n")
    save_vocab(checkpoint.vocab, directory / "vocab.json")
    weights = {"encoder": checkpoint.encoder.state_dict()}
    if checkpoint.head is not None:
        weights["head"] = checkpoint.head.state_dict()
    torch.save(weights, directory / "weights.pt")


def load_checkpoint(directory: Path) -> Checkpoint:
    meta = json.loads((directory / "config.json").read_text())
    config = EncoderConfig(**meta["encoder"])
    vocab = load_vocab(directory / "vocab.json")
    weights = torch.load(directory / "weights.pt", weights_only=True)
    encoder = Encoder(config)
    encoder.load_state_dict(weights["encoder"])
    head = None
    head_config = None
    if "head" in weights:
        head_config = HeadConfig(**meta["head"])
        head = ClassifierHead(config.hidden, head_config)
        head.load_state_dict(weights["head"])
    return Checkpoint(config, vocab, encoder, head, head_config)
