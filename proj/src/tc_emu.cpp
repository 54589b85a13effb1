#include "blest/tc_emu.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace blest::tc {

FragC mma_m8n8k128(const FragA& a, const FragB& b) {
    FragC c;
    for (unsigned i = 0; i < 8; ++i) {
        for (unsigned j = 0; j < 8; ++j) {
            std::uint32_t acc = 0;
            for (unsigned q = 0; q < 4; ++q)
                acc += static_cast<std::uint32_t>(std::popcount(a.word(i, q) & b.word(q, j)));
            c.at(i, j) = acc;
        }
    }
    return c;
}

FragB build_fragB(std::uint8_t alpha) {
    FragB b;
    for (unsigned r = 0; r < 4; ++r) {
        b.word(r, 2 * r) = alpha;                                      // X||Z: lane 9r
        b.word(r, 2 * r + 1) = static_cast<std::uint32_t>(alpha) << 8;  // Y||Z: lane 9r+4
    }
    return b;
}

FragA pack_fragA_round(std::span<const std::uint32_t, kLanes> vss_mask_words, unsigned round) {
    if (round > 1) throw std::invalid_argument("round must be 0 or 1");
    FragA a;
    const unsigned shift = round == 0 ? 0 : 16;
    for (unsigned lane = 0; lane < kLanes; ++lane)
        a.words[lane] = (vss_mask_words[lane] >> shift) & 0xFFFFu;
    return a;
}

std::pair<std::uint32_t, std::uint32_t> lane_dot_products(const FragC& c, unsigned lane) {
    if (lane >= kLanes) throw std::invalid_argument("lane must be < 32");
    const unsigned i = FragC::owner_row(lane);
    const unsigned j = FragC::owner_col(lane);
    return {c.at(i, j), c.at(i, j + 1)};
}

namespace {

// MSB-first rendering of one 128-bit logical row/column.
std::string bits_msb_first(const BitVector128& v) {
    std::string s;
    s.reserve(128 + 3);
    for (int w = 3; w >= 0; --w) {
        for (int b = 31; b >= 0; --b) s += ((v.words[w] >> b) & 1u) ? '1' : '0';
        if (w) s += ' ';
    }
    return s;
}

}  // namespace

std::string format_fragA(const FragA& a) {
    std::ostringstream out;
    for (unsigned i = 0; i < 8; ++i) out << "row " << i << ": " << bits_msb_first(a.row(i)) << '\n';
    return out.str();
}

std::string format_fragB(const FragB& b) {
    std::ostringstream out;
    for (unsigned c = 0; c < 8; ++c)
        out << "col " << c << ": " << bits_msb_first(b.column(c)) << '\n';
    return out.str();
}

std::string format_fragC(const FragC& c) {
    std::ostringstream out;
    for (unsigned i = 0; i < 8; ++i) {
        for (unsigned j = 0; j < 8; ++j) out << c.at(i, j) << (j == 7 ? '\n' : '\t');
    }
    return out.str();
}

}  // namespace blest::tc
