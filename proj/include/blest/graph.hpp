#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace blest {

using VertexId = std::uint32_t;
using EdgeId = std::uint64_t;
using Level = std::uint32_t;

// Sentinel level for vertices a BFS never reached.
inline constexpr Level kUnreached = std::numeric_limits<Level>::max();

// Thrown for malformed input files; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Directed graph in compressed sparse form, with both the out-edge (CSR) and
// in-edge (CSC) views materialised. Neighbor lists are sorted ascending and
// duplicate-free; self-loops are dropped at construction.
class Graph {
public:
    Graph() = default;

    // Builds both views from an arc list. If directed is false every arc is
    // mirrored, so the stored arc set is symmetric. Ids must be < n.
    static Graph from_edges(VertexId n, std::vector<std::pair<VertexId, VertexId>> edges,
                            bool directed = true);

    VertexId num_vertices() const { return n_; }
    EdgeId num_edges() const { return m_; }
    bool directed() const { return directed_; }

    std::span<const VertexId> out_neighbors(VertexId u) const {
        return {out_targets_.data() + out_offsets_[u],
                out_targets_.data() + out_offsets_[u + 1]};
    }
    std::span<const VertexId> in_neighbors(VertexId v) const {
        return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
    }
    EdgeId out_degree(VertexId u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
    EdgeId in_degree(VertexId v) const { return in_offsets_[v + 1] - in_offsets_[v]; }

    bool has_edge(VertexId u, VertexId v) const;

    const std::vector<EdgeId>& out_offsets() const { return out_offsets_; }
    const std::vector<VertexId>& out_targets() const { return out_targets_; }
    const std::vector<EdgeId>& in_offsets() const { return in_offsets_; }
    const std::vector<VertexId>& in_sources() const { return in_sources_; }

    // FNV-1a over (n, arc list); used to key on-disk caches.
    std::uint64_t digest() const;

private:
    VertexId n_ = 0;
    EdgeId m_ = 0;
    bool directed_ = true;
    std::vector<EdgeId> out_offsets_{0};
    std::vector<VertexId> out_targets_;
    std::vector<EdgeId> in_offsets_{0};
    std::vector<VertexId> in_sources_;
};

// Bijection on [0, n). forward maps old id -> new id; inverse maps new -> old.
class Permutation {
public:
    Permutation() = default;
    static Permutation identity(VertexId n);
    static Permutation from_forward(std::vector<VertexId> forward);
    static Permutation from_inverse(std::vector<VertexId> inverse);

    VertexId size() const { return static_cast<VertexId>(forward_.size()); }
    VertexId forward(VertexId old_id) const { return forward_[old_id]; }
    VertexId inverse(VertexId new_id) const { return inverse_[new_id]; }
    const std::vector<VertexId>& forward_map() const { return forward_; }
    const std::vector<VertexId>& inverse_map() const { return inverse_; }

    Permutation inverted() const;
    // Returns the permutation applying `first`, then `second` (old -> final).
    static Permutation composed(const Permutation& first, const Permutation& second);

    bool is_identity() const;

private:
    std::vector<VertexId> forward_;
    std::vector<VertexId> inverse_;
};

// Relabels every vertex u as perm.forward(u); both views are rebuilt.
Graph apply_permutation(const Graph& g, const Permutation& perm);

// Reverses every arc; the incoming view of the result is the input's outgoing view.
Graph transpose(const Graph& g);

struct BfsResult {
    VertexId source = 0;
    std::vector<Level> levels;  // kUnreached where not visited
    VertexId visited_count = 0;
    Level num_levels = 0;  // distinct levels including the root's: max finite level + 1
};

// Queue-based BFS over out-edges; the ground truth for engine equivalence checks.
BfsResult reference_bfs(const Graph& g, VertexId source);

struct DegreeStats {
    EdgeId max_degree = 0;
    std::map<EdgeId, VertexId> degree_histogram;  // out-degree -> count of vertices
    // Fraction of all out-edges owned by the ceil-free top floor(n*k/100) vertices
    // (at least one vertex) when ranked by out-degree descending. 0 if the graph
    // has no edges.
    double top_share(double percent) const;

    EdgeId total_edges = 0;
    std::vector<EdgeId> sorted_degrees;       // descending
    std::vector<EdgeId> degree_prefix_sums;   // prefix sums of sorted_degrees
};

DegreeStats degree_stats(const Graph& g);

// ---- File formats ------------------------------------------------------------

// Matrix Market coordinate format (pattern/real/integer; general or symmetric).
// The matrix must be square; entry (i, j) is the 0-based arc i-1 -> j-1. Symmetric
// inputs mirror every off-diagonal entry; diagonal entries are dropped as self-loops.
Graph load_matrix_market(const std::string& path);
void save_matrix_market(const Graph& g, const std::string& path);

// Whitespace-separated "src dst" per line, 0-based ids, '#' comments.
// A comment matching "# nodes: N" (case-insensitive) overrides n = 1 + max id.
Graph load_edge_list(const std::string& path);
void save_edge_list(const Graph& g, const std::string& path);

// Loads by extension: .mtx -> Matrix Market, anything else -> edge list.
Graph load_graph(const std::string& path);

// Permutation text format: line i holds inverse(i), i.e. the old id placed at
// position i. Exactly n lines.
void save_permutation(const Permutation& p, const std::string& path);
Permutation load_permutation(const std::string& path);

}  // namespace blest
