#include "blest/bvss.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <span>

#include "blest/parallel.hpp"

namespace blest {

void BvssConfig::validate() const {
    if (sigma != 8 || warp_size != 32)
        throw std::invalid_argument("unsupported tile geometry: sigma must be 8, warp size 32");
}

Bvss build_bvss(const Graph& g, const BvssConfig& cfg, unsigned workers) {
    cfg.validate();
    const std::uint32_t sigma = cfg.sigma;
    const std::uint32_t tau = cfg.tau();
    const VertexId n = g.num_vertices();
    const auto num_sets = static_cast<std::uint32_t>((static_cast<std::uint64_t>(n) + sigma - 1) / sigma);

    Bvss b;
    b.config = cfg;
    b.n = n;
    b.m = g.num_edges();
    b.num_slice_sets = num_sets;

    // Pass 1: count slices per set. A slice exists for (set s, row u) iff u has
    // an incoming edge from some column in [sigma*s, sigma*(s+1)). Counting via
    // the outgoing view keeps the scan contiguous per set.
    std::vector<std::uint32_t> slice_count(num_sets, 0);
    std::vector<std::uint32_t> mark(n, std::numeric_limits<std::uint32_t>::max());
    for (std::uint32_t s = 0; s < num_sets; ++s) {
        const VertexId lo = s * sigma;
        const VertexId hi = std::min<std::uint64_t>(static_cast<std::uint64_t>(lo) + sigma, n);
        for (VertexId col = lo; col < hi; ++col)
            for (VertexId u : g.out_neighbors(col))
                if (mark[u] != s) {
                    mark[u] = s;
                    ++slice_count[s];
                }
    }

    b.real_ptrs.assign(num_sets + 1, 0);
    for (std::uint32_t s = 0; s < num_sets; ++s) {
        const std::uint32_t vss_of_set = (slice_count[s] + tau - 1) / tau;
        b.real_ptrs[s + 1] = b.real_ptrs[s] + vss_of_set;
        b.num_unpadded_slices += slice_count[s];
    }
    b.num_vss = b.real_ptrs[num_sets];
    b.virtual_to_real.resize(b.num_vss);
    for (std::uint32_t s = 0; s < num_sets; ++s)
        for (std::uint32_t v = b.real_ptrs[s]; v < b.real_ptrs[s + 1]; ++v)
            b.virtual_to_real[v] = s;

    b.row_ids.assign(static_cast<std::size_t>(b.num_vss) * tau, n);
    b.masks.assign(static_cast<std::size_t>(b.num_vss) * (tau / 4), 0);

    // Pass 2: materialise each set's sorted slices straight into the
    // column-major lane grid. Sets write disjoint ranges, so they parallelise.
    run_workers(workers, [&](unsigned worker) {
        std::vector<std::pair<VertexId, std::uint8_t>> slices;  // (row, mask), built sorted
        for (std::uint32_t s = worker; s < num_sets; s += workers) {
            const VertexId lo = s * sigma;
            const VertexId hi = std::min<std::uint64_t>(static_cast<std::uint64_t>(lo) + sigma, n);
            slices.clear();
            // Merge the sigma sorted in-column lists by ascending row id.
            std::array<std::size_t, 8> cursor{};
            std::array<std::span<const VertexId>, 8> cols;
            const unsigned width = hi - lo;
            for (unsigned j = 0; j < width; ++j) cols[j] = g.out_neighbors(lo + j);
            while (true) {
                VertexId next = n;
                for (unsigned j = 0; j < width; ++j)
                    if (cursor[j] < cols[j].size()) next = std::min(next, cols[j][cursor[j]]);
                if (next == n) break;
                std::uint8_t mask = 0;
                for (unsigned j = 0; j < width; ++j)
                    if (cursor[j] < cols[j].size() && cols[j][cursor[j]] == next) {
                        mask |= static_cast<std::uint8_t>(1u << j);
                        ++cursor[j];
                    }
                slices.emplace_back(next, mask);
            }
            for (std::size_t k = 0; k < slices.size(); ++k) {
                const std::uint32_t v = b.real_ptrs[s] + static_cast<std::uint32_t>(k / tau);
                const unsigned slot = static_cast<unsigned>(k % tau);
                const unsigned lane = slot % 32;
                const unsigned column = slot / 32;
                b.masks[32u * v + lane] |= static_cast<std::uint32_t>(slices[k].second)
                                           << (8 * column);
                b.row_ids[4u * (32u * v + lane) + column] = slices[k].first;
            }
        }
    });
    return b;
}

double compression_ratio(const Bvss& b) {
    if (b.num_unpadded_slices == 0) return 0.0;
    return static_cast<double>(b.m) /
           (static_cast<double>(b.num_unpadded_slices) * b.config.sigma);
}

double update_divergence(const Bvss& b) {
    double sum = 0;
    std::uint64_t counted = 0;
    for (std::uint32_t v = 0; v < b.num_vss; ++v) {
        double col_sum = 0;
        unsigned nonempty = 0;
        for (unsigned c = 0; c < 4; ++c) {
            double mean = 0;
            unsigned count = 0;
            for (unsigned lane = 0; lane < 32; ++lane) {
                const std::uint32_t r = b.row_id(v, lane, c);
                if (r != b.sentinel()) {
                    mean += r;
                    ++count;
                }
            }
            if (count == 0) continue;
            mean /= count;
            double var = 0;
            for (unsigned lane = 0; lane < 32; ++lane) {
                const std::uint32_t r = b.row_id(v, lane, c);
                if (r != b.sentinel()) var += (r - mean) * (r - mean);
            }
            col_sum += std::sqrt(var / count);
            ++nonempty;
        }
        if (nonempty) {
            sum += col_sum / nonempty;
            ++counted;
        }
    }
    return counted ? sum / static_cast<double>(counted) : 0.0;
}

RoundtripReport validate_roundtrip(const Bvss& b, const Graph& g) {
    RoundtripReport rep;
    const std::uint32_t sigma = b.config.sigma;
    std::vector<std::vector<std::pair<VertexId, std::uint8_t>>> decoded(b.num_slice_sets);
    for (std::uint32_t v = 0; v < b.num_vss; ++v) {
        const std::uint32_t s = b.virtual_to_real[v];
        for (unsigned c = 0; c < 4; ++c)
            for (unsigned lane = 0; lane < 32; ++lane) {
                const std::uint32_t r = b.row_id(v, lane, c);
                const std::uint8_t mask = b.slice_mask(v, lane, c);
                if (r == b.sentinel()) {
                    if (mask != 0)
                        rep.discrepancies.push_back("padded slot with nonzero mask at vss " +
                                                    std::to_string(v));
                    continue;
                }
                if (mask == 0)
                    rep.discrepancies.push_back("real slot with zero mask at vss " +
                                                std::to_string(v));
                decoded[s].emplace_back(r, mask);
                ++rep.checked_slices;
            }
    }
    // Compare the decoded edge set against the incoming view, column by column.
    std::vector<std::vector<VertexId>> decoded_in(g.num_vertices());
    for (std::uint32_t s = 0; s < b.num_slice_sets; ++s)
        for (const auto& [row, mask] : decoded[s])
            for (unsigned j = 0; j < sigma; ++j)
                if (mask & (1u << j)) {
                    const std::uint64_t col = static_cast<std::uint64_t>(s) * sigma + j;
                    if (col >= g.num_vertices()) {
                        rep.discrepancies.push_back("mask bit beyond n at slice set " +
                                                    std::to_string(s));
                        continue;
                    }
                    decoded_in[row].push_back(static_cast<VertexId>(col));
                }
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        auto& dec = decoded_in[u];
        std::sort(dec.begin(), dec.end());
        const auto ref = g.in_neighbors(u);
        if (!std::equal(dec.begin(), dec.end(), ref.begin(), ref.end()))
            rep.discrepancies.push_back("incoming list mismatch at row " + std::to_string(u));
    }
    return rep;
}

BvssStats bvss_stats(const Bvss& b) {
    BvssStats s;
    s.compression_ratio = compression_ratio(b);
    s.update_divergence = update_divergence(b);
    s.num_slice_sets = b.num_slice_sets;
    s.num_vss = b.num_vss;
    s.num_slices_padded = static_cast<std::uint64_t>(b.num_vss) * b.config.tau();
    s.num_unpadded_slices = b.num_unpadded_slices;
    s.connectivity_bits = b.num_unpadded_slices * b.config.sigma;
    for (std::uint32_t v = 0; v < b.num_vss; ++v) {
        std::uint32_t count = 0;
        for (unsigned c = 0; c < 4; ++c)
            for (unsigned lane = 0; lane < 32; ++lane)
                if (b.row_id(v, lane, c) != b.sentinel()) ++count;
        ++s.per_vss_slice_histogram[count];
    }
    s.bytes_real_ptrs = b.real_ptrs.size() * sizeof(std::uint32_t);
    s.bytes_virtual_to_real = b.virtual_to_real.size() * sizeof(std::uint32_t);
    s.bytes_row_ids = b.row_ids.size() * sizeof(std::uint32_t);
    s.bytes_masks = b.masks.size() * sizeof(std::uint32_t);
    const std::uint64_t frontier_words = (static_cast<std::uint64_t>(b.n) + 31) / 32;
    // Two frontier + two visited bit-arrays, plus two VSS queues.
    s.bytes_dynamic = 4 * frontier_words * sizeof(std::uint32_t) +
                      2 * static_cast<std::uint64_t>(b.num_vss) * sizeof(std::uint32_t);
    s.bytes_levels = static_cast<std::uint64_t>(b.n) * sizeof(Level);
    return s;
}

namespace {

constexpr std::uint32_t kMagic = 0x53535642u;  // "BVSS" little-endian
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ofstream& out, std::uint32_t v) {
    unsigned char buf[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                            static_cast<unsigned char>(v >> 16),
                            static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t get_u32(std::ifstream& in) {
    unsigned char buf[4];
    if (!in.read(reinterpret_cast<char*>(buf), 4))
        throw std::runtime_error("truncated binary structure file");
    return static_cast<std::uint32_t>(buf[0]) | (static_cast<std::uint32_t>(buf[1]) << 8) |
           (static_cast<std::uint32_t>(buf[2]) << 16) |
           (static_cast<std::uint32_t>(buf[3]) << 24);
}

void put_array(std::ofstream& out, const std::vector<std::uint32_t>& a) {
    for (std::uint32_t v : a) put_u32(out, v);
}

void get_array(std::ifstream& in, std::vector<std::uint32_t>& a, std::size_t count) {
    a.resize(count);
    for (auto& v : a) v = get_u32(in);
}

}  // namespace

void save_bvss(const Bvss& b, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    put_u32(out, kMagic);
    put_u32(out, kVersion);
    put_u32(out, b.config.sigma);
    put_u32(out, b.config.tau());
    put_u32(out, b.n);
    put_u32(out, static_cast<std::uint32_t>(b.m & 0xFFFFFFFFull));
    put_u32(out, static_cast<std::uint32_t>(b.m >> 32));
    put_u32(out, b.num_vss);
    put_array(out, b.real_ptrs);
    put_array(out, b.virtual_to_real);
    put_array(out, b.row_ids);
    put_array(out, b.masks);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Bvss load_bvss(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    if (get_u32(in) != kMagic) throw std::runtime_error("bad magic in " + path);
    if (get_u32(in) != kVersion) throw std::runtime_error("unsupported version in " + path);
    Bvss b;
    b.config.sigma = get_u32(in);
    const std::uint32_t tau = get_u32(in);
    b.config.warp_size = 32;
    b.config.validate();
    if (tau != b.config.tau()) throw std::runtime_error("inconsistent tau in " + path);
    b.n = get_u32(in);
    const std::uint64_t m_lo = get_u32(in);
    const std::uint64_t m_hi = get_u32(in);
    b.m = m_lo | (m_hi << 32);
    b.num_vss = get_u32(in);
    b.num_slice_sets =
        static_cast<std::uint32_t>((static_cast<std::uint64_t>(b.n) + b.config.sigma - 1) /
                                   b.config.sigma);
    get_array(in, b.real_ptrs, b.num_slice_sets + 1);
    get_array(in, b.virtual_to_real, b.num_vss);
    get_array(in, b.row_ids, static_cast<std::size_t>(b.num_vss) * tau);
    get_array(in, b.masks, static_cast<std::size_t>(b.num_vss) * (tau / 4));
    if (b.real_ptrs.back() != b.num_vss) throw std::runtime_error("corrupt realPtrs in " + path);
    for (std::uint64_t slot = 0; slot < static_cast<std::uint64_t>(b.num_vss) * tau; ++slot)
        if (b.row_ids[slot] != b.n) ++b.num_unpadded_slices;
    return b;
}

}  // namespace blest
