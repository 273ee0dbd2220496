"""Freeze shared fixtures: preprocessing goldens and protocol requests.

The external classifier must tokenize exactly like the built-in pipeline
and answer the wire protocol with every request id exactly once. Both
contracts are checked against the files this script writes; regenerate
only when the preprocessing rules deliberately change.
"""

import json
import random
from pathlib import Path

from rexcl.classify import preprocess
from rexcl.model import ClassLabel

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "tests" / "fixtures"

HAND_PICKED = [
    "The system shouldn't fail!",
    "Write to DATA_STORE, then stop.",
    "It shall not be, it must!",
    "The operator's console won't reboot during startup.",
    "Values are read from CONFIG_PATH and cached.",
    "No requirement",
    "Not Applicable",
    "N.A.",
    "1.4 Database Requirements",
    "IV. Security Considerations",
    "A) Appendix material",
    "",
    "   ",
    "!!! ??? ...",
    "'quoted' words and 'edges'",
    "''",
    "don't can't won't mustn't",
    "snake_case_identifier stays whole",
    "MiXeD CaSe LoWeRs",
    "naïve café über straße",
    "需求 文档 编号",
    "tabs\tand odd spaces",
    "hyphen-ated words split apart",
    "trailing apostrophe' leading 'apostrophe",
    "a an the of to in for with on by",
    "shall must will should not never no",
    "100 ms at 99.9 percent uptime",
    "semi;colons and pipes|inside",
    "ends with punctuation.",
    "(parenthetical) [bracketed] {braced}",
]

NOUNS = [
    "system", "service", "operator", "database", "interface", "module",
    "sensor", "report", "gateway", "archive", "controller", "pipeline",
]
VERBS = [
    "process", "validate", "store", "reject", "encrypt", "log", "forward",
    "compress", "monitor", "restart", "notify", "audit",
]
QUALS = [
    "within 200 ms", "at all times", "per ISO 9001", "on every request",
    "under peak load", "without operator action", "in the audit trail",
    "before shutdown", "after each cycle", "unless disabled",
]
MODALS = ["shall", "must", "will", "should"]


def generated_sentences(rng: random.Random, count: int) -> list[str]:
    sentences = []
    for _ in range(count):
        noun = rng.choice(NOUNS)
        verb = rng.choice(VERBS)
        qual = rng.choice(QUALS)
        modal = rng.choice(MODALS)
        style = rng.randrange(4)
        if style == 0:
            sentences.append(f"The {noun} {modal} {verb} the {rng.choice(NOUNS)} {qual}.")
        elif style == 1:
            sentences.append(f"{noun.capitalize()} {verb}s inputs {qual}, then stops.")
        elif style == 2:
            sentences.append(f"{rng.randint(1, 9)}.{rng.randint(1, 9)} {noun.capitalize()} {verb.capitalize()}")
        else:
            sentences.append(f"It {modal} not {verb} anything {qual}!")
    return sentences


def write_preprocess_golden() -> int:
    rng = random.Random(1234)
    texts = HAND_PICKED + generated_sentences(rng, 200 - len(HAND_PICKED))
    entries = [{"text": text, "tokens": preprocess(text)} for text in texts]
    payload = {"entries": entries}
    path = FIXTURE_DIR / "preprocess_golden.json"
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    return len(entries)


def write_protocol_requests() -> int:
    rng = random.Random(5678)
    requests = []
    for size in (1, 7, 200):
        rows = []
        for i in range(size):
            noun = rng.choice(NOUNS)
            rows.append(
                {
                    "id": f"fix-{size:03d}-R{i + 1:05d}",
                    "text": f"The {noun} shall {rng.choice(VERBS)} data {rng.choice(QUALS)}."
                    if i % 3
                    else f"{i + 1} {noun.capitalize()} Overview",
                    "kind": "TEXT" if i % 3 else "TITLE",
                }
            )
        requests.append({"rows": rows})
    payload = {
        "label_set": [label.value for label in ClassLabel],
        "requests": requests,
    }
    path = FIXTURE_DIR / "classify_protocol.json"
    path.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    return len(requests)


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    n_golden = write_preprocess_golden()
    n_requests = write_protocol_requests()
    print(f"wrote {n_golden} preprocessing goldens, {n_requests} protocol requests")


if __name__ == "__main__":
    main()
