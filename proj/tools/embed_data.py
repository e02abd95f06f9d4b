#!/usr/bin/env python3
"""Embed data/markers.ini and data/punkt/* into include/spgc/detail/embedded_data.hpp.

The data files stay the normative copy; tests check the embedded strings
against them byte for byte.
"""
import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
PUNKT_FILES = ("abbrev_types.txt", "collocations.tab", "sent_starters.txt", "ortho_context.tab")
DELIM = "spgc"


def literal(text):
    if f'){DELIM}"' in text:
        raise SystemExit("delimiter clash")
    return f'R"{DELIM}({text}){DELIM}"'


def read(path):
    with open(path, encoding="utf-8", newline="") as f:
        return f.read()


def main(out_path):
    parts = [
        "// Generated by tools/embed_data.py; do not edit.",
        "#pragma once",
        "",
        "#include <string_view>",
        "",
        "namespace spgc::detail {",
        "",
        "inline constexpr std::string_view kMarkersIni = " + literal(read(os.path.join(ROOT, "data", "markers.ini"))) + ";",
        "",
        "struct EmbeddedPunktTable {",
        "  std::string_view language;",
        "  std::string_view abbrev_types;",
        "  std::string_view collocations;",
        "  std::string_view sent_starters;",
        "  std::string_view ortho_context;",
        "};",
        "",
        "inline constexpr EmbeddedPunktTable kPunktTables[] = {",
    ]
    punkt_root = os.path.join(ROOT, "data", "punkt")
    for lang in sorted(os.listdir(punkt_root)):
        fields = [literal(read(os.path.join(punkt_root, lang, name))) for name in PUNKT_FILES]
        parts.append(f'    {{"{lang}",')
        for i, field in enumerate(fields):
            parts.append(f"     {field}" + ("}," if i == len(fields) - 1 else ","))
    parts += ["};", "", "}  // namespace spgc::detail", ""]
    with open(out_path, "w", encoding="utf-8", newline="") as f:
        f.write("\n".join(parts))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else os.path.join(ROOT, "include", "spgc", "detail", "embedded_data.hpp"))
