#!/usr/bin/env python3
"""Writes tokenizer golden fixtures using NLTK as the oracle.

NLTK's sentence splitter is loaded with the same parameter tables shipped in
data/punkt, so the C++ tokenizer and the oracle see identical rules.

    python3 tests/oracles/gen_tokenizer_fixtures.py
"""
import os
import random
import shutil
import sys

from nltk.tokenize.destructive import NLTKWordTokenizer
from nltk.tokenize.punkt import PunktParameters, PunktSentenceTokenizer

sys.path.insert(0, os.path.dirname(__file__))
from tokenizer_inputs import FALLBACK, POOLS  # noqa: E402

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
OUT = os.path.join(ROOT, "tests", "fixtures", "tokenizer")
PUNKT = os.path.join(ROOT, "data", "punkt")
ISO = {"en": "english", "fr": "french", "de": "german", "es": "spanish",
       "it": "italian", "pt": "portuguese", "nl": "dutch", "fi": "finnish",
       "da": "danish", "sv": "swedish"}
SEPARATORS = [" ", "  ", "\n", "\n\n", " \n", "\n\n\n", "\t"]
COMBOS_PER_LANGUAGE = 12


def load_params(name):
    d = os.path.join(PUNKT, name)
    p = PunktParameters()
    with open(os.path.join(d, "abbrev_types.txt"), encoding="utf-8") as f:
        p.abbrev_types = {line for line in f.read().split("\n") if line}
    return p


def tokenize(text, sentences, words):
    out = []
    for s in sentences.tokenize(text):
        out.extend(words.tokenize(s))
    return out


def keep(tok):
    return tok.isalpha()


def write_case(lang, name, text, sentences, words):
    d = os.path.join(OUT, lang, name)
    os.makedirs(d, exist_ok=True)
    with open(os.path.join(d, "input.txt"), "w", encoding="utf-8", newline="") as f:
        f.write(text)
    raw = tokenize(text, sentences, words)
    assert all("\n" not in t for t in raw)
    with open(os.path.join(d, "raw_tokens.txt"), "w", encoding="utf-8", newline="") as f:
        f.write("".join(t + "\n" for t in raw))
    with open(os.path.join(d, "expected_tokens.txt"), "w", encoding="utf-8", newline="") as f:
        f.write("".join(t.lower() + "\n" for t in raw if keep(t)))


def main():
    if os.path.isdir(OUT):
        shutil.rmtree(OUT)
    rng = random.Random(20240501)
    words = NLTKWordTokenizer()
    count = 0
    for lang, pool in sorted(POOLS.items()):
        sentences = PunktSentenceTokenizer(load_params(ISO[lang]))
        for i, s in enumerate(pool):
            write_case(lang, f"single_{i:02d}", s, sentences, words)
            count += 1
        for i in range(COMBOS_PER_LANGUAGE):
            k = rng.randint(3, 7)
            picks = [rng.choice(pool) for _ in range(k)]
            text = picks[0]
            for p in picks[1:]:
                text += rng.choice(SEPARATORS) + p
            if rng.random() < 0.3:
                text += "\n"
            write_case(lang, f"para_{i:02d}", text, sentences, words)
            count += 1
    english = PunktSentenceTokenizer(load_params("english"))
    for lang, pool in sorted(FALLBACK.items()):
        for i, s in enumerate(pool):
            write_case(lang, f"single_{i:02d}", s, english, words)
            count += 1
    print(f"wrote {count} cases to {OUT}")


if __name__ == "__main__":
    main()
