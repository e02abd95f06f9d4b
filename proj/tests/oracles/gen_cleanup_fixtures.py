#!/usr/bin/env python3
"""Writes cleanup golden fixtures: raw.txt plus the reference stripper's output.

    python3 tests/oracles/gen_cleanup_fixtures.py
"""
import os
import random
import shutil
import sys

sys.path.insert(0, os.path.dirname(__file__))
from reference_strip_headers import ROOT, strip_headers  # noqa: E402

OUT = os.path.join(ROOT, "tests", "fixtures", "cleanup")

WORDS = ("the of and to a in that was he it his with as had for not but at on by "
         "she which her you from this be all so were they my an one said have "
         "there when him would who what out them been could more into no upon "
         "little time some great now man like any then about only very two").split()

HEADER = [
    "The Project Gutenberg EBook of {title}, by {author}",
    "",
    "This eBook is for the use of anyone anywhere at no cost and with",
    "almost no restrictions whatsoever.  You may copy it, give it away or",
    "re-use it under the terms of the Project Gutenberg License included",
    "with this eBook or online at www.gutenberg.org",
    "",
    "",
    "Title: {title}",
    "",
    "Author: {author}",
    "",
    "Release Date: March 3, 2004 [EBook #{id}]",
    "",
    "Language: English",
    "",
    "Character set encoding: UTF-8",
    "",
]
START = "*** START OF THIS PROJECT GUTENBERG EBOOK {upper} ***"
END = "*** END OF THIS PROJECT GUTENBERG EBOOK {upper} ***"
LICENSE = [
    "",
    "***** This file should be named {id}-0.txt or {id}-0.zip *****",
    "This and all associated files of various formats will be found in:",
    "        http://www.gutenberg.org/{id}/",
    "",
    "Updated editions will replace the previous one--the old editions",
    "will be renamed.",
    "",
    "*** START: FULL LICENSE ***",
    "",
    "THE FULL PROJECT GUTENBERG LICENSE",
    "PLEASE READ THIS BEFORE YOU DISTRIBUTE OR USE THIS WORK",
]


def body(rng, n_lines, unicode_words=False):
    lines = []
    extra = ["café", "Müller", "œuvre", "naïve", "Ελλάδα", "Москва"] if unicode_words else []
    vocab = WORDS + extra
    for _ in range(n_lines):
        if rng.random() < 0.15:
            lines.append("")
            continue
        k = rng.randint(3, 12)
        line = " ".join(rng.choice(vocab) for _ in range(k))
        lines.append(line[0].upper() + line[1:] + rng.choice([".", ",", ";", "", "!"]))
    return lines


def book(rng, book_id, n_body, **kw):
    meta = {"id": book_id, "title": "A Tale of Nothing", "author": "Anonymous",
            "upper": "A TALE OF NOTHING"}
    lines = [h.format(**meta) for h in HEADER]
    lines.append(START.format(**meta))
    lines += ["", "", "A TALE OF NOTHING", ""]
    lines += body(rng, n_body, kw.get("unicode_words", False))
    lines += ["", "", "End of the Project Gutenberg EBook of A Tale of Nothing"]
    lines.append(END.format(**meta))
    lines += [lic.format(**meta) for lic in LICENSE]
    return lines


def cases(rng):
    c = {}
    c["standard_long"] = "\n".join(book(rng, 101, 300)) + "\n"
    c["standard_crlf"] = "\r\n".join(book(rng, 102, 250)) + "\r\n"
    c["short_body_footer_kept"] = "\n".join(book(rng, 103, 50)) + "\n"
    c["body_exactly_100"] = "\n".join(book(rng, 104, 96)) + "\n"
    c["body_99"] = "\n".join(book(rng, 105, 95)) + "\n"
    c["unicode_body"] = "\n".join(book(rng, 106, 200, unicode_words=True)) + "\n"
    c["no_markers"] = "\n".join(body(rng, 150)) + "\n"
    c["empty"] = ""
    c["only_newlines"] = "\n\n\n\n"
    c["start_only"] = "\n".join(["Header line"] * 5 + [START.format(upper="X")] + body(rng, 80))
    c["end_only_early"] = "\n".join(body(rng, 40) + [END.format(upper="X")] + body(rng, 10))
    c["end_only_late"] = "\n".join(body(rng, 140) + [END.format(upper="X")] + body(rng, 10))
    c["start_after_600"] = "\n".join(body(rng, 650) + [START.format(upper="X")] + body(rng, 30))
    c["start_at_601_retained"] = "\n".join(["line %d" % i for i in range(601)] + [START.format(upper="Y")] + ["tail"])
    c["start_at_600_retained"] = "\n".join(["line %d" % i for i in range(600)] + [START.format(upper="Y")] + ["tail"])
    c["multiple_starts"] = "\n".join(
        ["Produced by Somebody", "Intro"] + body(rng, 20) + ["*** START OF THE PROJECT GUTENBERG EBOOK"]
        + ["Produced by Another Team", ""] + body(rng, 200) + [END.format(upper="X")] + ["license"])
    c["legalese_block"] = "\n".join(
        body(rng, 30) + ["<<THIS ELECTRONIC VERSION OF THE COMPLETE WORKS", "legal text", "more legal",
                         "SERVICE THAT CHARGES FOR DOWNLOAD TIME OR FOR MEMBERSHIP.>>"] + body(rng, 30))
    c["legalese_unterminated"] = "\n".join(
        body(rng, 20) + ["<<THIS ELECTRONIC VERSION OF"] + body(rng, 20))
    c["old_small_print"] = "\n".join(
        ["The Project Gutenberg Etext of Something", "*****These eBooks Were Prepared By Thousands of Volunteers!*****",
         "legal"] * 2 + ["*END*THE SMALL PRINT! FOR PUBLIC DOMAIN ETEXTS*Ver.02/11/02*END*", ""]
        + body(rng, 150) + ["End of the Project Gutenberg Etext of Something"] + body(rng, 5))
    c["german_end"] = "\n".join(
        ["Produced by Someone"] + body(rng, 120) + ["Ende dieses Etextes der Bibliothek"] + body(rng, 5))
    c["german_end_no_space"] = "\n".join(
        ["Produced by Someone"] + body(rng, 120) + ["Ende dieses Etextes"] + body(rng, 5))
    c["indented_marker_not_matched"] = "\n".join(
        ["   *** START OF THIS PROJECT GUTENBERG EBOOK X ***"] + body(rng, 30))
    c["leading_space_marker"] = "\n".join(
        ["Header"] + [" *** START OF THIS PROJECT GUTENBERG EBOOK X ***"] + body(rng, 130)
        + [" *** END OF THIS PROJECT GUTENBERG EBOOK X ***", "license"])
    c["lowercase_marker_not_matched"] = "\n".join(
        ["*** start of this project gutenberg ebook x ***"] + body(rng, 20))
    c["mixed_line_endings"] = ("Head\r\n" + START.format(upper="Z") + "\rBody one\r\nBody two\nBody three\x0bfour"
                               "\x0cfive\x1cdiv\x1dgrp\x1erec\u0085nel ls ps\r\n")
    c["bom_start_not_matched"] = "﻿" + "\n".join([START.format(upper="B")] + body(rng, 20))
    c["bom_then_title"] = "﻿The Project Gutenberg EBook of Bom\n" + "\n".join(body(rng, 20))
    c["trailing_whitespace_lines"] = "\n".join(["Produced by X   ", "  body   ", "\t", "end  "]) + "\n\n\n"
    c["no_trailing_newline"] = "\n".join(book(rng, 107, 120))
    c["end_marker_before_start"] = "\n".join(
        [END.format(upper="Q"), "Produced by Z"] + body(rng, 130) + [END.format(upper="Q"), "after"])
    c["website_start_marker"] = "\n".join(
        ["Some header", "http://www.pgdp.net"] + body(rng, 60))
    c["footer_variant_by_pg"] = "\n".join(
        ["Produced by T"] + body(rng, 110) + ["by Project Gutenberg and others"] + ["x"])
    c["many_resets_before_600"] = "\n".join(
        sum(([f"Produced by team {k}"] + body(rng, 30) for k in range(12)), []) + body(rng, 40))
    return c


def main():
    if os.path.isdir(OUT):
        shutil.rmtree(OUT)
    rng = random.Random(1789)
    all_cases = cases(rng)
    for name, raw in sorted(all_cases.items()):
        d = os.path.join(OUT, name)
        os.makedirs(d)
        with open(os.path.join(d, "raw.txt"), "w", encoding="utf-8", newline="") as f:
            f.write(raw)
        with open(os.path.join(d, "expected_text.txt"), "w", encoding="utf-8", newline="") as f:
            f.write(strip_headers(raw))
    print(f"wrote {len(all_cases)} cases to {OUT}")


if __name__ == "__main__":
    main()
