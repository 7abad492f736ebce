#!/usr/bin/env python3
"""Regenerates src/unicode_data.cpp from Python's unicodedata module.

Emits range tables for letter/digit/space classification, the simple
lowercase map, canonical combining classes, full canonical decompositions
and the primary composition pairs used by the NFC normalizer. Hangul
syllables (U+AC00..U+D7A3) are excluded from the decomposition and
composition tables; the C++ side handles them arithmetically.

Usage: python3 scripts/gen_unicode_tables.py > src/unicode_data.cpp
"""

import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_BASE = 0xAC00
HANGUL_END = 0xD7A4  # exclusive


def is_surrogate(cp):
    return 0xD800 <= cp <= 0xDFFF


def ranges_for(pred):
    out = []
    start = None
    for cp in range(MAX_CP):
        ok = (not is_surrogate(cp)) and pred(cp)
        if ok and start is None:
            start = cp
        elif not ok and start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def category(cp):
    return unicodedata.category(chr(cp))


def canonical_decomposition(cp):
    """Full (recursive) canonical decomposition, or None."""
    if HANGUL_BASE <= cp < HANGUL_END:
        return None
    raw = unicodedata.decomposition(chr(cp))
    if not raw or raw.startswith("<"):
        return None
    parts = [int(tok, 16) for tok in raw.split()]
    out = []
    for p in parts:
        sub = canonical_decomposition(p)
        out.extend(sub if sub else [p])
    return out


def main():
    letters = ranges_for(lambda cp: category(cp).startswith("L"))
    digits = ranges_for(lambda cp: category(cp) == "Nd")
    spaces = ranges_for(
        lambda cp: category(cp) == "Zs" or cp in (0x09, 0x0A, 0x0B, 0x0C, 0x0D, 0x85)
    )

    lower_map = []
    for cp in range(MAX_CP):
        if is_surrogate(cp):
            continue
        low = chr(cp).lower()
        if len(low) == 1 and ord(low) != cp:
            lower_map.append((cp, ord(low)))

    ccc = []
    for cp in range(MAX_CP):
        if is_surrogate(cp):
            continue
        c = unicodedata.combining(chr(cp))
        if c:
            ccc.append((cp, c))

    decomp_entries = []
    pool = []
    for cp in range(MAX_CP):
        if is_surrogate(cp):
            continue
        d = canonical_decomposition(cp)
        if d:
            decomp_entries.append((cp, len(pool), len(d)))
            pool.extend(d)

    compose = {}
    for cp in range(MAX_CP):
        if is_surrogate(cp) or HANGUL_BASE <= cp < HANGUL_END:
            continue
        raw = unicodedata.decomposition(chr(cp))
        if not raw or raw.startswith("<"):
            continue
        parts = [int(tok, 16) for tok in raw.split()]
        if len(parts) != 2:
            continue
        a, b = parts
        if unicodedata.normalize("NFC", chr(a) + chr(b)) == chr(cp):
            compose[(a, b)] = cp
    compose_entries = sorted(((a << 21) | b, cp) for (a, b), cp in compose.items())

    w = sys.stdout.write
    w("// Generated by scripts/gen_unicode_tables.py (Unicode %s). Do not edit.\n"
      % unicodedata.unidata_version)
    w('#include "unicode_data.hpp"\n\n')
    w("namespace semspace::unicode::data {\n\n")

    def emit_ranges(name, rs):
        w("const CpRange %s[] = {\n" % name)
        for i in range(0, len(rs), 6):
            row = ", ".join("{0x%X, 0x%X}" % r for r in rs[i : i + 6])
            w("    %s,\n" % row)
        w("};\n")
        w("const std::size_t %sCount = %d;\n\n" % (name, len(rs)))

    emit_ranges("kLetterRanges", letters)
    emit_ranges("kDigitRanges", digits)
    emit_ranges("kSpaceRanges", spaces)

    w("const CaseMap kLowerMap[] = {\n")
    for i in range(0, len(lower_map), 6):
        row = ", ".join("{0x%X, 0x%X}" % m for m in lower_map[i : i + 6])
        w("    %s,\n" % row)
    w("};\n")
    w("const std::size_t kLowerMapCount = %d;\n\n" % len(lower_map))

    w("const CccEntry kCcc[] = {\n")
    for i in range(0, len(ccc), 8):
        row = ", ".join("{0x%X, %d}" % e for e in ccc[i : i + 8])
        w("    %s,\n" % row)
    w("};\n")
    w("const std::size_t kCccCount = %d;\n\n" % len(ccc))

    w("const DecompEntry kDecomp[] = {\n")
    for i in range(0, len(decomp_entries), 5):
        row = ", ".join("{0x%X, %d, %d}" % e for e in decomp_entries[i : i + 5])
        w("    %s,\n" % row)
    w("};\n")
    w("const std::size_t kDecompCount = %d;\n\n" % len(decomp_entries))

    w("const char32_t kDecompPool[] = {\n")
    for i in range(0, len(pool), 10):
        row = ", ".join("0x%X" % c for c in pool[i : i + 10])
        w("    %s,\n" % row)
    w("};\n\n")

    w("const ComposeEntry kCompose[] = {\n")
    for i in range(0, len(compose_entries), 4):
        row = ", ".join("{0x%XULL, 0x%X}" % e for e in compose_entries[i : i + 4])
        w("    %s,\n" % row)
    w("};\n")
    w("const std::size_t kComposeCount = %d;\n\n" % len(compose_entries))

    w("}  // namespace semspace::unicode::data\n")


if __name__ == "__main__":
    main()
