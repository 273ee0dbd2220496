"""Tokenization matching the review pipeline's preprocessing rules.

The pipeline and this server must tokenize identically or the learned
vocabulary drifts from what classification requests contain. Parity is
pinned by the shared golden fixtures under the pipeline's test tree.
"""

from importlib import resources

# Negations and modal verbs carry requirement semantics and survive filtering.
RETAIN = frozenset(
    {
        "not", "no", "never",
        "shall", "should", "must", "may", "might",
        "will", "would", "can", "cannot", "could",
        "shouldn't", "mustn't", "won't", "can't", "don't", "doesn't",
    }
)


def _load_stopwords() -> frozenset[str]:
    text = resources.files("model_server.resources").joinpath("stopwords.txt").read_text()
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


STOPWORDS = _load_stopwords()


def _clean_token(token: str) -> str:
    kept = "".join(ch for ch in token if ch.isalnum() or ch in "_'")
    return kept.strip("'")


def preprocess(text: str) -> list[str]:
    """Lowercase, strip punctuation (keeping "_" and internal apostrophes),
    and drop stopwords unless they are retained negations/modals."""
    tokens = []
    for raw in text.lower().split():
        token = _clean_token(raw)
        if not token:
            continue
        if token in STOPWORDS and token not in RETAIN:
            continue
        tokens.append(token)
    return tokens
