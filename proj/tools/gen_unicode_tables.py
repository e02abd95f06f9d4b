#!/usr/bin/env python3
"""Generate include/spgc/detail/unicode_tables.hpp from Python's unicodedata.

The tokenizer reproduces Python `re`/`str` character semantics, so the tables
are taken from the interpreter rather than from an independent UCD parse.
"""
import sys
import unicodedata

MAX = sys.maxunicode + 1


def ranges(pred):
    out = []
    start = None
    for cp in range(MAX):
        if pred(chr(cp)):
            if start is None:
                start = cp
        elif start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, MAX - 1))
    return out


def emit_ranges(name, rs):
    lines = [f"inline constexpr CodeRange {name}[] = {{"]
    row = []
    for lo, hi in rs:
        row.append(f"{{0x{lo:X},0x{hi:X}}}")
        if len(row) == 6:
            lines.append("    " + ",".join(row) + ",")
            row = []
    if row:
        lines.append("    " + ",".join(row) + ",")
    lines.append("};")
    return "\n".join(lines)


def main(out_path):
    tables = {
        "kAlpha": ranges(lambda c: c.isalpha()),
        "kWord": ranges(lambda c: c.isalnum() or c == "_"),
        "kDecimal": ranges(lambda c: c.isdecimal()),
        "kSpace": ranges(lambda c: c.isspace()),
        "kUpper": ranges(lambda c: c.isupper()),
        "kLower": ranges(lambda c: c.islower()),
    }
    lower_pairs = []
    for cp in range(MAX):
        lo = chr(cp).lower()
        if len(lo) == 1 and ord(lo) != cp:
            lower_pairs.append((cp, ord(lo)))
    # U+0130 has a two-codepoint full lowercase; its simple mapping is U+0069.
    lower_pairs.append((0x130, 0x69))
    lower_pairs.sort()

    parts = [
        "// Generated by tools/gen_unicode_tables.py; do not edit.",
        f"// Unicode {unicodedata.unidata_version}.",
        "#pragma once",
        "",
        "#include <cstdint>",
        "",
        "namespace spgc::unicode::detail {",
        "",
        "struct CodeRange {",
        "  char32_t lo;",
        "  char32_t hi;",
        "};",
        "",
        "struct CaseMapping {",
        "  char32_t from;",
        "  char32_t to;",
        "};",
        "",
    ]
    for name, rs in tables.items():
        parts.append(emit_ranges(name, rs))
        parts.append("")
    parts.append("inline constexpr CaseMapping kLowerMap[] = {")
    row = []
    for a, b in lower_pairs:
        row.append(f"{{0x{a:X},0x{b:X}}}")
        if len(row) == 6:
            parts.append("    " + ",".join(row) + ",")
            row = []
    if row:
        parts.append("    " + ",".join(row) + ",")
    parts.append("};")
    parts.append("")
    parts.append("}  // namespace spgc::unicode::detail")
    parts.append("")
    with open(out_path, "w", encoding="utf-8") as f:
        f.write("\n".join(parts))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "include/spgc/detail/unicode_tables.hpp")
