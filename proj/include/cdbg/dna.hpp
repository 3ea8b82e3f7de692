#pragma once

#include <array>
#include <cstdint>

namespace cdbg {

// 2-bit nucleotide codes in lexicographic order, so packed comparisons
// order the same way as the underlying strings.
inline constexpr std::array<char, 4> kCodeToBase = {'A', 'C', 'G', 'T'};

inline constexpr std::uint8_t complement_code(std::uint8_t code) {
    return static_cast<std::uint8_t>(3u - code);
}

inline constexpr std::array<std::int8_t, 256> make_base_table() {
    std::array<std::int8_t, 256> t{};
    for (auto& v : t) v = -1;
    t['A'] = 0; t['a'] = 0;
    t['C'] = 1; t['c'] = 1;
    t['G'] = 2; t['g'] = 2;
    t['T'] = 3; t['t'] = 3;
    return t;
}

inline constexpr std::array<std::int8_t, 256> kBaseToCode = make_base_table();

inline bool is_acgt(char c) { return kBaseToCode[static_cast<unsigned char>(c)] >= 0; }

inline char complement_base(char c) {
    return kCodeToBase[complement_code(static_cast<std::uint8_t>(kBaseToCode[static_cast<unsigned char>(c)]))];
}

}  // namespace cdbg
