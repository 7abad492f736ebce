#!/usr/bin/env python3
"""Regenerates the bundled two-topic corpus (data/toy_topics.jsonl).

200 documents: 100 drawn from a science/mathematics word set and 100 from
a farm/countryside word set, with shared function words mixed in. The two
topical sets are disjoint, so a working pipeline separates them cleanly.
The word lists land in data/toy_topics.words.json for the tests.

Usage: python3 scripts/make_toy_corpus.py
"""

import json
import pathlib
import random

TOPIC_A = [
    "matemáticas", "geometría", "álgebra", "cálculo", "teorema", "ecuación",
    "número", "función", "derivada", "integral", "vector", "matriz",
    "conjunto", "lógica", "axioma", "demostración", "física", "química",
    "energía", "ciencia", "teoría", "hipótesis", "experimento", "fórmula",
    "análisis",
]

TOPIC_B = [
    "vaca", "toro", "caballo", "oveja", "cerdo", "gallina", "granja",
    "campo", "pasto", "establo", "leche", "lana", "cosecha", "trigo",
    "maíz", "semilla", "arado", "tractor", "pastor", "rebaño", "corral",
    "heno", "ordeño", "potro", "ternero",
]

FUNCTION_WORDS = ["el", "la", "los", "las", "un", "una", "de", "en", "y", "que", "con", "por"]

DOCS_PER_TOPIC = 100
TOKENS_PER_DOC = 30
FUNCTION_WORD_RATE = 0.35
SEED = 42


def zipf_weights(n):
    return [1.0 / (rank + 1) for rank in range(n)]


def make_doc(rng, topical):
    tokens = []
    weights = zipf_weights(len(topical))
    for _ in range(TOKENS_PER_DOC):
        if rng.random() < FUNCTION_WORD_RATE:
            tokens.append(rng.choice(FUNCTION_WORDS))
        else:
            tokens.append(rng.choices(topical, weights=weights, k=1)[0])
    return " ".join(tokens)


def main():
    rng = random.Random(SEED)
    data_dir = pathlib.Path(__file__).resolve().parent.parent / "data"

    docs = []
    for i in range(DOCS_PER_TOPIC):
        docs.append(("a%03d" % i, "a", make_doc(rng, TOPIC_A)))
    for i in range(DOCS_PER_TOPIC):
        docs.append(("b%03d" % i, "b", make_doc(rng, TOPIC_B)))

    with open(data_dir / "toy_topics.jsonl", "w", encoding="utf-8") as out:
        for doc_id, topic, text in docs:
            record = {"id": doc_id, "title": topic, "text": text}
            out.write(json.dumps(record, ensure_ascii=False) + "\n")

    with open(data_dir / "toy_topics.words.json", "w", encoding="utf-8") as out:
        json.dump(
            {"topic_a": TOPIC_A, "topic_b": TOPIC_B, "function_words": FUNCTION_WORDS},
            out,
            ensure_ascii=False,
            indent=2,
        )
        out.write("\n")


if __name__ == "__main__":
    main()
