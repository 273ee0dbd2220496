"""Word-level vocabulary with the special tokens the encoder expects."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

PAD, UNK, CLS, MASK = 0, 1, 2, 3
KIND_TITLE, KIND_TEXT = 4, 5
SPECIAL_TOKENS = ("[PAD]", "[UNK]", "[CLS]", "[MASK]", "[TITLE]", "[TEXT]")
NUM_SPECIALS = len(SPECIAL_TOKENS)


@dataclass(frozen=True)
class Vocab:
    """Token-to-id table; ids below NUM_SPECIALS are reserved."""

    token_ids: dict[str, int]

    def __post_init__(self) -> None:
        for token, special_id in zip(SPECIAL_TOKENS, range(NUM_SPECIALS)):
            if self.token_ids.get(token) != special_id:
                raise ValueError(f"special token {token} must map to {special_id}")

    def __len__(self) -> int:
        return len(self.token_ids)

    def id_of(self, token: str) -> int:
        return self.token_ids.get(token, UNK)

    def encode(self, tokens: list[str], kind: str, max_len: int) -> list[int]:
        """[CLS] + kind marker + token ids, truncated and padded to max_len."""
        kind_id = KIND_TITLE if kind == "TITLE" else KIND_TEXT
        ids = [CLS, kind_id] + [self.id_of(t) for t in tokens]
        ids = ids[:max_len]
        return ids + [PAD] * (max_len - len(ids))


def build_vocab(token_sequences: list[list[str]]) -> Vocab:
    """First-seen ordering keeps the table deterministic for a fixed corpus."""
    token_ids = {token: i for i, token in enumerate(SPECIAL_TOKENS)}
    for tokens in token_sequences:
        for token in tokens:
            if token not in token_ids:
                token_ids[token] = len(token_ids)
    return Vocab(token_ids)


def save_vocab(vocab: Vocab, path: Path) -> None:
    path.write_text(json.dumps(vocab.token_ids, ensure_ascii=False, indent=2) + "\n")


def load_vocab(path: Path) -> Vocab:
    return Vocab(json.loads(path.read_text()))
