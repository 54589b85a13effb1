#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

namespace blest::tc {

// Bit-exact emulation of the m8n8k128 bitwise MMA tile: A is 8x128 bits, B is
// 128x8 bits, C is 8x8 integer popcounts over the (AND, +) semiring. Fragments
// are plain value types; lane ownership is an index map, not simulated storage.
//
// Bit significance convention (shared with the slice layout): within every
// sigma-bit field, column offset j sits at bit j (LSB first); fields are
// concatenated low-to-high inside a 32-bit word. Debug formatters print the
// opposite, figure-style MSB-first orientation.

inline constexpr unsigned kLanes = 32;

// One logical row of A or column of B.
struct BitVector128 {
    std::array<std::uint32_t, 4> words{};

    bool bit(unsigned w) const { return (words[w / 32] >> (w % 32)) & 1u; }
    void set_bit(unsigned w) { words[w / 32] |= (1u << (w % 32)); }
};

// 8 rows x 128 bit-columns. Word (i, j) covers bit-columns 32j..32j+31 of row i
// and is owned by lane 4i + j.
struct FragA {
    std::array<std::uint32_t, kLanes> words{};

    static constexpr unsigned lane_of(unsigned row, unsigned chunk) { return 4 * row + chunk; }
    std::uint32_t& word(unsigned row, unsigned chunk) { return words[lane_of(row, chunk)]; }
    std::uint32_t word(unsigned row, unsigned chunk) const { return words[lane_of(row, chunk)]; }

    bool bit(unsigned row, unsigned col) const {
        return (word(row, col / 32) >> (col % 32)) & 1u;
    }
    BitVector128 row(unsigned r) const {
        return {{word(r, 0), word(r, 1), word(r, 2), word(r, 3)}};
    }
};

// 128 bit-rows x 8 columns. Word (r, c) covers bit-rows 32r..32r+31 of column c
// and is owned by lane 4c + r.
struct FragB {
    std::array<std::uint32_t, kLanes> words{};  // flat index 8r + c

    static constexpr unsigned lane_of(unsigned r, unsigned c) { return 4 * c + r; }
    std::uint32_t& word(unsigned r, unsigned c) { return words[8 * r + c]; }
    std::uint32_t word(unsigned r, unsigned c) const { return words[8 * r + c]; }
    std::uint32_t lane_word(unsigned lane) const { return word(lane % 4, lane / 4); }

    bool bit(unsigned row, unsigned col) const {
        return (word(row / 32, col) >> (row % 32)) & 1u;
    }
    BitVector128 column(unsigned c) const {
        return {{word(0, c), word(1, c), word(2, c), word(3, c)}};
    }
};

// 8x8 grid of popcounts; lane t owns entries (i, j) and (i, j+1) with
// i = t/4 and j = 2*(t%4).
struct FragC {
    std::array<std::uint32_t, 64> counts{};  // flat index 8i + j

    std::uint32_t& at(unsigned i, unsigned j) { return counts[8 * i + j]; }
    std::uint32_t at(unsigned i, unsigned j) const { return counts[8 * i + j]; }

    static constexpr unsigned owner_row(unsigned lane) { return lane / 4; }
    static constexpr unsigned owner_col(unsigned lane) { return 2 * (lane % 4); }
};

// C[u][v] = sum over w of A_bit[u][w] AND B_bit[w][v]; exact integer counts.
FragC mma_m8n8k128(const FragA& a, const FragB& b);

// BLEST frontier broadcast: word(r, 2r) = alpha in the low 8 bits, word(r, 2r+1)
// = alpha shifted to bits 8..15, all other words zero. Exactly lanes
// {0,9,18,27} (pattern X||Z) and {4,13,22,31} (pattern Y||Z) can be nonzero.
FragB build_fragB(std::uint8_t alpha);

// Packs one VSS's 32 per-lane mask words: round 0 takes each lane's low 16 bits
// (its column-0/1 masks), round 1 the high 16; the field lands in the low half
// of FragA word (lane/4, lane%4).
FragA pack_fragA_round(std::span<const std::uint32_t, kLanes> vss_mask_words, unsigned round);

// Lane t's two owned outputs: (C[i][j], C[i][j+1]) with i = t/4, j = 2*(t%4).
std::pair<std::uint32_t, std::uint32_t> lane_dot_products(const FragC& c, unsigned lane);

// MSB-first, figure-style renderings for manual cross-checks.
std::string format_fragA(const FragA& a);
std::string format_fragB(const FragB& b);
std::string format_fragC(const FragC& c);

}  // namespace blest::tc
