#pragma once

#include <cstddef>
#include <cstdint>

// Table layout shared with the generated unicode_data.cpp.
// See scripts/gen_unicode_tables.py.

namespace semspace::unicode::data {

struct CpRange {
    char32_t lo;
    char32_t hi;
};

struct CaseMap {
    char32_t from;
    char32_t to;
};

struct CccEntry {
    char32_t cp;
    std::uint8_t ccc;
};

struct DecompEntry {
    char32_t cp;
    std::uint32_t offset;
    std::uint32_t len;
};

struct ComposeEntry {
    std::uint64_t key;  // (first << 21) | second
    char32_t composed;
};

extern const CpRange kLetterRanges[];
extern const std::size_t kLetterRangesCount;
extern const CpRange kDigitRanges[];
extern const std::size_t kDigitRangesCount;
extern const CpRange kSpaceRanges[];
extern const std::size_t kSpaceRangesCount;
extern const CaseMap kLowerMap[];
extern const std::size_t kLowerMapCount;
extern const CccEntry kCcc[];
extern const std::size_t kCccCount;
extern const DecompEntry kDecomp[];
extern const std::size_t kDecompCount;
extern const char32_t kDecompPool[];
extern const ComposeEntry kCompose[];
extern const std::size_t kComposeCount;

}  // namespace semspace::unicode::data
