#include "semspace/unicode.hpp"

#include <algorithm>
#include <cstdint>

#include "unicode_data.hpp"

namespace semspace::unicode {
namespace {

using namespace data;

constexpr char32_t kReplacement = 0xFFFD;

// Hangul syllable composition constants (UAX #15 §3.12).
constexpr char32_t kHangulSBase = 0xAC00;
constexpr char32_t kHangulLBase = 0x1100;
constexpr char32_t kHangulVBase = 0x1161;
constexpr char32_t kHangulTBase = 0x11A7;
constexpr int kHangulLCount = 19;
constexpr int kHangulVCount = 21;
constexpr int kHangulTCount = 28;
constexpr int kHangulNCount = kHangulVCount * kHangulTCount;
constexpr int kHangulSCount = kHangulLCount * kHangulNCount;

bool in_ranges(const CpRange* ranges, std::size_t count, char32_t cp) {
    const CpRange* end = ranges + count;
    const CpRange* it = std::upper_bound(
        ranges, end, cp, [](char32_t v, const CpRange& r) { return v < r.lo; });
    return it != ranges && cp <= (it - 1)->hi;
}

std::uint8_t combining_class(char32_t cp) {
    const CccEntry* end = kCcc + kCccCount;
    const CccEntry* it = std::lower_bound(
        kCcc, end, cp, [](const CccEntry& e, char32_t v) { return e.cp < v; });
    return (it != end && it->cp == cp) ? it->ccc : 0;
}

const DecompEntry* find_decomposition(char32_t cp) {
    const DecompEntry* end = kDecomp + kDecompCount;
    const DecompEntry* it = std::lower_bound(
        kDecomp, end, cp, [](const DecompEntry& e, char32_t v) { return e.cp < v; });
    return (it != end && it->cp == cp) ? it : nullptr;
}

char32_t find_composition(char32_t a, char32_t b) {
    // Hangul LV and LVT composition.
    if (a >= kHangulLBase && a < kHangulLBase + kHangulLCount && b >= kHangulVBase &&
        b < kHangulVBase + kHangulVCount) {
        return kHangulSBase + ((a - kHangulLBase) * kHangulVCount + (b - kHangulVBase)) *
                                  kHangulTCount;
    }
    if (a >= kHangulSBase && a < kHangulSBase + kHangulSCount &&
        (a - kHangulSBase) % kHangulTCount == 0 && b > kHangulTBase &&
        b < kHangulTBase + kHangulTCount) {
        return a + (b - kHangulTBase);
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 21) | b;
    const ComposeEntry* end = kCompose + kComposeCount;
    const ComposeEntry* it = std::lower_bound(
        kCompose, end, key, [](const ComposeEntry& e, std::uint64_t v) { return e.key < v; });
    return (it != end && it->key == key) ? it->composed : 0;
}

void append_decomposed(std::vector<char32_t>& out, char32_t cp) {
    if (cp >= kHangulSBase && cp < kHangulSBase + kHangulSCount) {
        const int index = static_cast<int>(cp - kHangulSBase);
        out.push_back(kHangulLBase + index / kHangulNCount);
        out.push_back(kHangulVBase + (index % kHangulNCount) / kHangulTCount);
        if (index % kHangulTCount != 0) {
            out.push_back(kHangulTBase + index % kHangulTCount);
        }
        return;
    }
    if (const DecompEntry* e = find_decomposition(cp)) {
        for (std::uint32_t i = 0; i < e->len; ++i) {
            out.push_back(kDecompPool[e->offset + i]);
        }
        return;
    }
    out.push_back(cp);
}

// Stable exchange of adjacent combining marks until in canonical order.
void canonical_reorder(std::vector<char32_t>& cps) {
    for (std::size_t i = 1; i < cps.size(); ++i) {
        const std::uint8_t ccc = combining_class(cps[i]);
        if (ccc == 0) {
            continue;
        }
        std::size_t j = i;
        while (j > 0) {
            const std::uint8_t prev = combining_class(cps[j - 1]);
            if (prev == 0 || prev <= ccc) {
                break;
            }
            std::swap(cps[j - 1], cps[j]);
            --j;
        }
    }
}

}  // namespace

std::vector<char32_t> decode_utf8(std::string_view text) {
    std::vector<char32_t> out;
    out.reserve(text.size());
    std::size_t i = 0;
    const auto* bytes = reinterpret_cast<const unsigned char*>(text.data());
    while (i < text.size()) {
        const unsigned char b0 = bytes[i];
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        if (i + len > text.size()) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            if ((bytes[i + k] & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (bytes[i + k] & 0x3F);
        }
        // Reject overlong encodings, surrogates and out-of-range values.
        static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (!ok || cp < kMinByLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(kReplacement);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(const std::vector<char32_t>& codepoints) {
    std::string out;
    out.reserve(codepoints.size());
    for (char32_t cp : codepoints) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

void normalize_nfc(std::vector<char32_t>& codepoints) {
    if (codepoints.empty()) {
        return;
    }
    std::vector<char32_t> decomposed;
    decomposed.reserve(codepoints.size() + 8);
    for (char32_t cp : codepoints) {
        append_decomposed(decomposed, cp);
    }
    canonical_reorder(decomposed);

    // Canonical composition (UAX #15 D117): compose each character with the
    // last starter unless a character with an equal or higher combining
    // class sits between them.
    std::vector<char32_t> out;
    out.reserve(decomposed.size());
    std::ptrdiff_t last_starter = -1;
    for (char32_t cp : decomposed) {
        const std::uint8_t ccc = combining_class(cp);
        if (last_starter >= 0) {
            const bool adjacent = static_cast<std::size_t>(last_starter) + 1 == out.size();
            const bool blocked = !adjacent && combining_class(out.back()) >= ccc;
            if (!blocked) {
                if (char32_t composed = find_composition(out[last_starter], cp)) {
                    out[last_starter] = composed;
                    continue;
                }
            }
        }
        out.push_back(cp);
        if (ccc == 0) {
            last_starter = static_cast<std::ptrdiff_t>(out.size()) - 1;
        }
    }
    codepoints = std::move(out);
}

std::string nfc(std::string_view text) {
    std::vector<char32_t> cps = decode_utf8(text);
    normalize_nfc(cps);
    return encode_utf8(cps);
}

char32_t to_lower(char32_t cp) {
    const CaseMap* end = kLowerMap + kLowerMapCount;
    const CaseMap* it = std::lower_bound(
        kLowerMap, end, cp, [](const CaseMap& e, char32_t v) { return e.from < v; });
    return (it != end && it->from == cp) ? it->to : cp;
}

std::string lowercase(std::string_view text) {
    std::vector<char32_t> cps = decode_utf8(text);
    for (char32_t& cp : cps) {
        cp = to_lower(cp);
    }
    return encode_utf8(cps);
}

bool is_letter(char32_t cp) { return in_ranges(kLetterRanges, kLetterRangesCount, cp); }

bool is_digit(char32_t cp) { return in_ranges(kDigitRanges, kDigitRangesCount, cp); }

bool is_space(char32_t cp) { return in_ranges(kSpaceRanges, kSpaceRangesCount, cp); }

}  // namespace semspace::unicode
