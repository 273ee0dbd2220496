"""Header/footer removal: two-feature random forest over frequency and position.

Headers and footers repeat across pages at fixed top/bottom positions, so two
features suffice. Frequency compares digit-folded text ("Page 3 of 10" and
"Page 7 of 10" count as the same line); position is the relative line offset
within the page.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .model import TextUnit

MODEL_SCHEMA_VERSION = 1

DEFAULT_NUM_TREES = 50
DEFAULT_MAX_DEPTH = 6

# Phrases that legitimately repeat across sections and must never be dropped.
DEFAULT_ALLOWLIST = frozenset({"no requirement", "not applicable", "n.a."})

_WHITESPACE = re.compile(r"\s+")


class HfLabel(Enum):
    HEADER_FOOTER = "HF"
    REQ_TEXT = "TEXT"


class UntrainedModelError(RuntimeError):
    """predict() was called on a model that has not been trained."""


@dataclass(frozen=True)
class HfFeatures:
    frequency: float
    position: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.frequency <= 1.0:
            raise ValueError(f"frequency out of [0, 1]: {self.frequency}")
        if not 0.0 <= self.position <= 1.0:
            raise ValueError(f"position out of [0, 1]: {self.position}")

    def as_array(self) -> np.ndarray:
        return np.array([self.frequency, self.position], dtype=float)


@dataclass(frozen=True)
class TreeNode:
    """Axis-aligned split node; a leaf once ``counts`` is set.

    ``counts`` holds (header_footer, req_text) sample counts at the leaf.
    """

    feature: int | None = None
    threshold: float | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    counts: tuple[int, int] | None = None

    @property
    def is_leaf(self) -> bool:
        return self.counts is not None

    def vote(self, x: np.ndarray) -> bool:
        """True when this tree votes HEADER_FOOTER for feature vector x."""
        node = self
        while not node.is_leaf:
            assert node.feature is not None and node.threshold is not None
            node = node.left if x[node.feature] <= node.threshold else node.right
            assert node is not None
        hf, text = node.counts  # type: ignore[misc]
        return hf > text  # leaf ties keep content

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"counts": list(self.counts)}  # type: ignore[arg-type]
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),  # type: ignore[union-attr]
            "right": self.right.to_dict(),  # type: ignore[union-attr]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeNode":
        if "counts" in data:
            hf, text = data["counts"]
            if hf + text < 1:
                raise ValueError("leaf nodes need a total count >= 1")
            return cls(counts=(int(hf), int(text)))
        if data["feature"] not in (0, 1):
            raise ValueError(f"split feature must be 0 or 1, got {data['feature']}")
        return cls(
            feature=int(data["feature"]),
            threshold=float(data["threshold"]),
            left=cls.from_dict(data["left"]),
            right=cls.from_dict(data["right"]),
        )


@dataclass(frozen=True)
class ForestModel:
    trees: tuple[TreeNode, ...]
    num_trees: int
    max_depth: int
    seed: int
    trained: bool = True

    def __post_init__(self) -> None:
        if self.num_trees < 1 or self.max_depth < 1:
            raise ValueError("num_trees and max_depth must be >= 1")


def normalize_text(text: str) -> str:
    """Lowercase, collapse whitespace, and fold every digit to "0"."""
    folded = re.sub(r"\d", "0", text.lower())
    return _WHITESPACE.sub(" ", folded).strip()


def compute_features(units: list[TextUnit]) -> list[HfFeatures]:
    """Frequency and position for every unit, aligned with the input order."""
    if not units:
        raise ValueError("compute_features needs at least one unit")
    normalized = [normalize_text(unit.text) for unit in units]
    pages_by_text: dict[str, set[int]] = {}
    for unit, norm in zip(units, normalized):
        pages_by_text.setdefault(norm, set()).add(unit.page)
    total_pages = len({unit.page for unit in units})
    features = []
    for unit, norm in zip(units, normalized):
        frequency = len(pages_by_text[norm]) / total_pages
        position = unit.line_index / max(1, unit.page_line_count - 1)
        features.append(HfFeatures(frequency=frequency, position=position))
    return features


def _gini_best_split(
    x: np.ndarray, y: np.ndarray
) -> tuple[int, float, float] | None:
    """Best (feature, threshold, impurity) over midpoint candidates, or None."""
    n = len(y)
    best: tuple[int, float, float] | None = None
    for feature in (0, 1):
        order = np.argsort(x[:, feature], kind="stable")
        values = x[order, feature]
        labels = y[order]
        distinct_mask = np.diff(values) > 0
        if not distinct_mask.any():
            continue
        # Cumulative positive-class counts just before each boundary.
        cum_pos = np.cumsum(labels)
        boundaries = np.nonzero(distinct_mask)[0]  # split after index b
        left_n = boundaries + 1
        right_n = n - left_n
        left_pos = cum_pos[boundaries]
        right_pos = cum_pos[-1] - left_pos
        left_p = left_pos / left_n
        right_p = right_pos / right_n
        gini_left = 2 * left_p * (1 - left_p)
        gini_right = 2 * right_p * (1 - right_p)
        impurity = (left_n * gini_left + right_n * gini_right) / n
        idx = int(np.argmin(impurity))
        candidate = (
            feature,
            float((values[boundaries[idx]] + values[boundaries[idx] + 1]) / 2),
            float(impurity[idx]),
        )
        if best is None or candidate[2] < best[2]:
            best = candidate
    return best


def build_tree(x: np.ndarray, y: np.ndarray, max_depth: int, depth: int = 0) -> TreeNode:
    """Fit one decision tree on (n, 2) features and binary labels.

    y uses 1 for HEADER_FOOTER, 0 for REQ_TEXT. Growth stops at max_depth,
    on pure nodes, or when no split reduces the Gini impurity.
    """
    hf = int(y.sum())
    text = len(y) - hf
    if depth >= max_depth or hf == 0 or text == 0:
        return TreeNode(counts=(hf, text))
    p = hf / len(y)
    node_gini = 2 * p * (1 - p)
    split = _gini_best_split(x, y)
    if split is None or split[2] >= node_gini:
        return TreeNode(counts=(hf, text))
    feature, threshold, _ = split
    mask = x[:, feature] <= threshold
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=build_tree(x[mask], y[mask], max_depth, depth + 1),
        right=build_tree(x[~mask], y[~mask], max_depth, depth + 1),
    )


def train(
    samples: list[tuple[HfFeatures, HfLabel]],
    num_trees: int = DEFAULT_NUM_TREES,
    max_depth: int = DEFAULT_MAX_DEPTH,
    seed: int = 0,
) -> ForestModel:
    """Train the forest on bootstrap resamples of the labeled features.

    Deterministic for a given seed. A single-class sample set degenerates to
    pure-leaf trees that always predict that class.
    """
    if not samples:
        raise ValueError("train needs at least one labeled sample")
    x = np.array([[f.frequency, f.position] for f, _ in samples], dtype=float)
    y = np.array([1 if label is HfLabel.HEADER_FOOTER else 0 for _, label in samples])
    rng = np.random.default_rng(seed)
    n = len(samples)
    trees = []
    for _ in range(num_trees):
        idx = rng.integers(0, n, size=n)
        trees.append(build_tree(x[idx], y[idx], max_depth))
    return ForestModel(
        trees=tuple(trees),
        num_trees=num_trees,
        max_depth=max_depth,
        seed=seed,
        trained=True,
    )


def predict(model: ForestModel, features: HfFeatures) -> tuple[HfLabel, float]:
    """Majority vote across trees; the score is the HEADER_FOOTER vote share.

    Exact ties keep the unit (REQ_TEXT): losing content costs more than
    keeping a stray footer.
    """
    if not model.trained:
        raise UntrainedModelError("model must be trained before predicting")
    x = features.as_array()
    hf_votes = sum(1 for tree in model.trees if tree.vote(x))
    score = hf_votes / len(model.trees)
    label = HfLabel.HEADER_FOOTER if score > 0.5 else HfLabel.REQ_TEXT
    return label, score


def filter_units(
    units: list[TextUnit],
    model: ForestModel,
    allowlist: frozenset[str] | set[str] = DEFAULT_ALLOWLIST,
    features: list[HfFeatures] | None = None,
) -> tuple[list[TextUnit], list[TextUnit]]:
    """Split units into (kept, removed), dropping predicted headers/footers.

    Markdown headings and allowlisted phrases are always kept. Pass
    precomputed ``features`` to freeze them across repeated filtering.
    """
    if not units:
        return [], []
    if features is None:
        features = compute_features(units)
    kept: list[TextUnit] = []
    removed: list[TextUnit] = []
    for unit, feats in zip(units, features):
        label, _ = predict(model, feats)
        if (
            label is HfLabel.HEADER_FOOTER
            and unit.md_heading_depth == 0
            and normalize_text(unit.text) not in allowlist
        ):
            removed.append(unit)
        else:
            kept.append(unit)
    return kept, removed


def model_to_dict(model: ForestModel) -> dict:
    return {
        "version": MODEL_SCHEMA_VERSION,
        "params": {
            "num_trees": model.num_trees,
            "max_depth": model.max_depth,
            "seed": model.seed,
        },
        "trees": [tree.to_dict() for tree in model.trees],
    }


def model_from_dict(data: dict) -> ForestModel:
    if data.get("version") != MODEL_SCHEMA_VERSION:
        raise ValueError(f"unsupported model version: {data.get('version')!r}")
    params = data["params"]
    return ForestModel(
        trees=tuple(TreeNode.from_dict(tree) for tree in data["trees"]),
        num_trees=int(params["num_trees"]),
        max_depth=int(params["max_depth"]),
        seed=int(params["seed"]),
        trained=True,
    )


def save_model(model: ForestModel, path: str | Path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2) + "\n")


def load_model(path: str | Path) -> ForestModel:
    return model_from_dict(json.loads(Path(path).read_text()))


def load_allowlist(path: str | Path) -> frozenset[str]:
    """Read one phrase per line, normalized like the frequency feature."""
    phrases = set()
    for line in Path(path).read_text().splitlines():
        normalized = normalize_text(line)
        if normalized:
            phrases.add(normalized)
    return frozenset(phrases)
