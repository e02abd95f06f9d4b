#!/usr/bin/env python3
"""Independent recomputation of the author and time experiments.

Builds a small counts store plus a book table, replays the documented
sampling order with its own MT19937-64, measures distances with scipy, and
freezes the summaries the C++ tests compare against.

    python3 tests/oracles/experiment_oracle.py
"""
import math
import os
import random
import shutil

import numpy as np
from scipy.spatial.distance import jensenshannon

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
OUT = os.path.join(ROOT, "tests", "fixtures", "experiments")
MASK = (1 << 64) - 1


class MT19937_64:
    NN, MM = 312, 156
    A = 0xB5026F5AA96619E9
    UM, LM = 0xFFFFFFFF80000000, 0x7FFFFFFF

    def __init__(self, seed):
        self.mt = [0] * self.NN
        self.mt[0] = seed & MASK
        for i in range(1, self.NN):
            prev = self.mt[i - 1]
            self.mt[i] = (6364136223846793005 * (prev ^ (prev >> 62)) + i) & MASK
        self.i = self.NN

    def _twist(self):
        mt = self.mt
        for k in range(self.NN):
            x = (mt[k] & self.UM) | (mt[(k + 1) % self.NN] & self.LM)
            y = x >> 1
            if x & 1:
                y ^= self.A
            mt[k] = mt[(k + self.MM) % self.NN] ^ y
        self.i = 0

    def next(self):
        if self.i >= self.NN:
            self._twist()
        x = self.mt[self.i]
        self.i += 1
        x ^= (x >> 29) & 0x5555555555555555
        x ^= (x << 17) & 0x71D67FFFEDA60000
        x ^= (x << 37) & 0xFFF7EEE000000000
        x ^= x >> 43
        return x & MASK

    def below(self, n):
        limit = (MASK // n) * n
        while True:
            x = self.next()
            if n == 1 or x < limit:
                return x % n


def check_engine():
    g = MT19937_64(5489)
    for _ in range(9999):
        g.next()
    assert g.next() == 9981545732273789042, "MT19937-64 reference value mismatch"


def jsd(a, b):
    words = sorted(set(a) | set(b))
    p = np.array([a.get(w, 0) for w in words], dtype=float)
    q = np.array([b.get(w, 0) for w in words], dtype=float)
    return float(jensenshannon(p / p.sum(), q / q.sum(), base=2) ** 2)


def make_counts(rng, vocab, bias, n_tokens):
    counts = {}
    for _ in range(n_tokens):
        w = rng.choice(bias) if rng.random() < 0.6 else rng.choice(vocab)
        counts[w] = counts.get(w, 0) + 1
    return counts


def write_counts(store, book, counts):
    d = os.path.join(store, "counts")
    os.makedirs(d, exist_ok=True)
    rows = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0].encode("utf-8")))
    with open(os.path.join(d, f"PG{book}_counts.txt"), "w", encoding="utf-8", newline="") as f:
        f.write("".join(f"{w}\t{n}\n" for w, n in rows))


def fmt(v):
    return repr(float(v))


def main():
    check_engine()
    if os.path.isdir(OUT):
        shutil.rmtree(OUT)
    store = os.path.join(OUT, "store")
    rng = random.Random(4242)
    vocab = ["w%03d" % i for i in range(300)]
    books = []  # (id, author, birth, death)
    counts = {}

    authors = [("Alpha, A.", 1790, 1850), ("Beta, B.", 1900, 1975), ("Gamma, G.", 1800, 1870)]
    next_id = 100
    for name, birth, death in authors:
        bias = rng.sample(vocab, 25)
        for _ in range(3):
            counts[next_id] = make_counts(rng, vocab, bias, rng.randint(300, 900))
            books.append((next_id, name, birth, death))
            next_id += 1
    # An author with a single book is skipped by the experiment.
    counts[next_id] = make_counts(rng, vocab, vocab[:10], 200)
    books.append((next_id, "Solo, S.", 1950, 1990))
    next_id += 1
    for b, c in counts.items():
        write_counts(store, b, c)
    with open(os.path.join(OUT, "books.tsv"), "w", encoding="utf-8") as f:
        f.write("id\tauthor\tbirth\tdeath\n")
        for b in books:
            f.write("\t".join(str(x) for x in b) + "\n")

    # Author experiment.
    seed, n_pairs = 20180718, 50
    groups = {}
    for b, name, _, _ in books:
        groups.setdefault(name, []).append(b)
    order = [a[0] for a in authors] + ["Solo, S."]
    active = [a for a in order if len(groups[a]) >= 2]
    g = MT19937_64(seed)
    levels = [5, 25, 50, 75, 95]
    lines = [f"# seed={seed}\tn_pairs={n_pairs}"]
    draws = {}
    for a in active:
        own = sorted(groups[a])
        others = [x for o in active if o != a for x in sorted(groups[o])]
        same, cross = [], []
        for _ in range(n_pairs):
            i = g.below(len(own))
            j = g.below(len(own) - 1)
            if j >= i:
                j += 1
            same.append((own[i], own[j]))
        for _ in range(n_pairs):
            i = g.below(len(own))
            j = g.below(len(others))
            cross.append((own[i], others[j]))
        draws[a] = (same, cross)
    for a in active:
        same, cross = draws[a]
        ds = [jsd(counts[x], counts[y]) for x, y in same]
        dc = [jsd(counts[x], counts[y]) for x, y in cross]
        row = [a, str(len(groups[a]))]
        row += [fmt(np.percentile(ds, q)) for q in levels]
        row += [fmt(np.percentile(dc, q)) for q in levels]
        lines.append("\t".join(row))
    with open(os.path.join(OUT, "authors_expected.tsv"), "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")

    # Time experiment over two windows.
    windows = [(1820, 1840), (1960, 1980)]
    members = []
    for start, end in windows:
        m = []
        for b, _, birth, death in sorted(books):
            first, last = birth + 21, death - 1
            if first <= last and first < end and last >= start:
                m.append(b)
        members.append(m)
    seed, n_pairs = 7, 10
    g = MT19937_64(seed)
    lines = [f"# seed={seed}\tn_pairs={n_pairs}"]
    for i in range(len(windows)):
        for j in range(i, len(windows)):
            ds = []
            for _ in range(n_pairs):
                a = g.below(len(members[i]))
                b = g.below(len(members[j]))
                ds.append(jsd(counts[members[i][a]], counts[members[j][b]]))
            mean = float(np.mean(ds))
            se = float(np.std(ds, ddof=1) / math.sqrt(n_pairs))
            lines.append("\t".join([str(windows[i][0]), str(windows[j][0]), fmt(mean), fmt(se), str(n_pairs)]))
    with open(os.path.join(OUT, "time_expected.tsv"), "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")

    # Spot values for scalar checks.
    with open(os.path.join(OUT, "pairwise_expected.tsv"), "w", encoding="utf-8") as f:
        ids = sorted(counts)[:5]
        f.write("a\tb\tjsd\n")
        for x in ids:
            for y in ids:
                f.write(f"{x}\t{y}\t{fmt(jsd(counts[x], counts[y]))}\n")
    print("wrote", OUT)


if __name__ == "__main__":
    main()
