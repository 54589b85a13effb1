#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blest/graph.hpp"

namespace blest {

// Fixed tile geometry: 8-bit slices, 32 lanes, 4 slices per lane, 128 slices
// per virtual slice set. sigma is configurable in name only; validate() rejects
// anything but 8 because the fragment builders are specified for 8.
struct BvssConfig {
    std::uint32_t sigma = 8;
    std::uint32_t warp_size = 32;

    std::uint32_t slices_per_thread() const { return warp_size / sigma; }
    std::uint32_t tau() const { return warp_size * slices_per_thread(); }
    void validate() const;
};

// Binarised virtual slice set structure built from the incoming view of a
// graph. Slice set s covers source columns [8s, 8s+8); a slice is (row id,
// 8-bit mask) with mask bit j set iff edge (8s+j) -> row exists. Slices of a
// set are sorted by row id, split into 128-slot VSSs, and distributed
// column-major over a 32-lane x 4-column grid: sorted slice k goes to lane
// k%32, column k/32. masks[32v + t] packs lane t's 4 masks (column c at bits
// [8c, 8c+8)); rowIds[4*(32v + t) + c] is the matching row id, so one lane's 4
// row ids are contiguous (the 128-bit vectorised read). Padded slots have
// all-zero masks and the sentinel row id n.
class Bvss {
public:
    BvssConfig config;
    VertexId n = 0;
    EdgeId m = 0;
    std::uint32_t num_slice_sets = 0;  // ceil(n / sigma)
    std::uint32_t num_vss = 0;
    std::uint64_t num_unpadded_slices = 0;
    std::vector<std::uint32_t> real_ptrs;        // length num_slice_sets + 1
    std::vector<std::uint32_t> virtual_to_real;  // length num_vss
    std::vector<std::uint32_t> row_ids;          // length num_vss * tau
    std::vector<std::uint32_t> masks;            // length num_vss * tau / 4

    // Which permutation produced the graph this was built from (if any), so
    // BFS results can be mapped back; not part of the binary serialisation.
    std::optional<Permutation> producing_permutation;
    std::string ordering_tag;

    VertexId sentinel() const { return n; }

    const std::uint32_t* lane_mask_words(std::uint32_t vss) const {
        return masks.data() + 32u * vss;
    }
    std::uint8_t slice_mask(std::uint32_t vss, unsigned lane, unsigned column) const {
        return static_cast<std::uint8_t>(masks[32u * vss + lane] >> (8 * column));
    }
    std::uint32_t row_id(std::uint32_t vss, unsigned lane, unsigned column) const {
        return row_ids[4u * (32u * vss + lane) + column];
    }
};

Bvss build_bvss(const Graph& g, const BvssConfig& cfg = {}, unsigned workers = 1);

// m / (unpadded slices * sigma); 0 for an edgeless structure.
double compression_ratio(const Bvss& b);

// Per VSS, per grid column: population std-dev of the non-padded row ids; a
// VSS's divergence is the mean over its non-empty columns; the result is the
// mean over VSSs with at least one non-empty column. 0 for an empty structure.
double update_divergence(const Bvss& b);

struct RoundtripReport {
    std::uint64_t checked_slices = 0;
    std::vector<std::string> discrepancies;
    bool ok() const { return discrepancies.empty(); }
};

// Decodes every non-padded slice and compares against g's incoming edge set.
RoundtripReport validate_roundtrip(const Bvss& b, const Graph& g);

struct BvssStats {
    double compression_ratio = 0;
    double update_divergence = 0;
    std::uint32_t num_slice_sets = 0;
    std::uint32_t num_vss = 0;
    std::uint64_t num_slices_padded = 0;    // num_vss * tau
    std::uint64_t num_unpadded_slices = 0;
    std::uint64_t connectivity_bits = 0;    // num_unpadded_slices * sigma
    std::map<std::uint32_t, std::uint32_t> per_vss_slice_histogram;

    std::uint64_t bytes_real_ptrs = 0;
    std::uint64_t bytes_virtual_to_real = 0;
    std::uint64_t bytes_row_ids = 0;
    std::uint64_t bytes_masks = 0;
    std::uint64_t bytes_static() const {
        return bytes_real_ptrs + bytes_virtual_to_real + bytes_row_ids + bytes_masks;
    }
    std::uint64_t bytes_dynamic = 0;  // frontier/visited bit-arrays + two queues
    std::uint64_t bytes_levels = 0;
};

BvssStats bvss_stats(const Bvss& b);

// Binary cache format: little-endian 32-bit words — magic 'BVSS', version,
// sigma, tau, n, m (two words, low then high), numVSS, then realPtrs,
// virtualToReal, rowIds, masks.
void save_bvss(const Bvss& b, const std::string& path);
Bvss load_bvss(const std::string& path);

}  // namespace blest
