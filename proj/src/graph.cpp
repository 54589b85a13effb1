#include "blest/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

namespace blest {

namespace {

void build_csr(VertexId n, const std::vector<std::pair<VertexId, VertexId>>& arcs,
               bool by_source, std::vector<EdgeId>& offsets, std::vector<VertexId>& adj) {
    offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [u, v] : arcs) ++offsets[(by_source ? u : v) + 1];
    for (VertexId i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    adj.resize(arcs.size());
    std::vector<EdgeId> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : arcs) {
        const VertexId key = by_source ? u : v;
        adj[cursor[key]++] = by_source ? v : u;
    }
    for (VertexId i = 0; i < n; ++i)
        std::sort(adj.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                  adj.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]));
}

}  // namespace

Graph Graph::from_edges(VertexId n, std::vector<std::pair<VertexId, VertexId>> edges,
                        bool directed) {
    if (!directed) {
        const std::size_t k = edges.size();
        edges.reserve(2 * k);
        for (std::size_t i = 0; i < k; ++i) edges.emplace_back(edges[i].second, edges[i].first);
    }
    for (const auto& [u, v] : edges)
        if (u >= n || v >= n)
            throw std::invalid_argument("edge endpoint " + std::to_string(std::max(u, v)) +
                                        " out of range for n=" + std::to_string(n));
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    Graph g;
    g.n_ = n;
    g.m_ = edges.size();
    g.directed_ = directed;
    build_csr(n, edges, true, g.out_offsets_, g.out_targets_);
    build_csr(n, edges, false, g.in_offsets_, g.in_sources_);
    return g;
}

bool Graph::has_edge(VertexId u, VertexId v) const {
    const auto nb = out_neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::uint64_t Graph::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xFF;
            h *= 0x100000001b3ull;
        }
    };
    mix(n_);
    mix(m_);
    for (VertexId u = 0; u < n_; ++u)
        for (VertexId v : out_neighbors(u)) mix((static_cast<std::uint64_t>(u) << 32) | v);
    return h;
}

Permutation Permutation::identity(VertexId n) {
    std::vector<VertexId> fwd(n);
    for (VertexId i = 0; i < n; ++i) fwd[i] = i;
    Permutation p;
    p.inverse_ = fwd;
    p.forward_ = std::move(fwd);
    return p;
}

Permutation Permutation::from_forward(std::vector<VertexId> forward) {
    const auto n = static_cast<VertexId>(forward.size());
    std::vector<VertexId> inverse(n, n);
    for (VertexId old_id = 0; old_id < n; ++old_id) {
        const VertexId to = forward[old_id];
        if (to >= n || inverse[to] != n)
            throw std::invalid_argument("permutation is not a bijection on [0, n)");
        inverse[to] = old_id;
    }
    Permutation p;
    p.forward_ = std::move(forward);
    p.inverse_ = std::move(inverse);
    return p;
}

Permutation Permutation::from_inverse(std::vector<VertexId> inverse) {
    return from_forward(std::move(inverse)).inverted();
}

Permutation Permutation::inverted() const {
    Permutation p;
    p.forward_ = inverse_;
    p.inverse_ = forward_;
    return p;
}

Permutation Permutation::composed(const Permutation& first, const Permutation& second) {
    if (first.size() != second.size())
        throw std::invalid_argument("cannot compose permutations of different sizes");
    std::vector<VertexId> fwd(first.size());
    for (VertexId i = 0; i < first.size(); ++i) fwd[i] = second.forward(first.forward(i));
    return from_forward(std::move(fwd));
}

bool Permutation::is_identity() const {
    for (VertexId i = 0; i < size(); ++i)
        if (forward_[i] != i) return false;
    return true;
}

Graph apply_permutation(const Graph& g, const Permutation& perm) {
    if (perm.size() != g.num_vertices())
        throw std::invalid_argument("permutation size does not match vertex count");
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(g.num_edges());
    for (VertexId u = 0; u < g.num_vertices(); ++u)
        for (VertexId v : g.out_neighbors(u)) edges.emplace_back(perm.forward(u), perm.forward(v));
    return Graph::from_edges(g.num_vertices(), std::move(edges), g.directed());
}

Graph transpose(const Graph& g) {
    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(g.num_edges());
    for (VertexId u = 0; u < g.num_vertices(); ++u)
        for (VertexId v : g.out_neighbors(u)) edges.emplace_back(v, u);
    return Graph::from_edges(g.num_vertices(), std::move(edges), g.directed());
}

BfsResult reference_bfs(const Graph& g, VertexId source) {
    if (source >= g.num_vertices()) throw std::invalid_argument("bfs source out of range");
    BfsResult r;
    r.source = source;
    r.levels.assign(g.num_vertices(), kUnreached);
    r.levels[source] = 0;
    r.visited_count = 1;
    std::deque<VertexId> q{source};
    Level max_level = 0;
    while (!q.empty()) {
        const VertexId u = q.front();
        q.pop_front();
        for (VertexId v : g.out_neighbors(u)) {
            if (r.levels[v] == kUnreached) {
                r.levels[v] = r.levels[u] + 1;
                max_level = std::max(max_level, r.levels[v]);
                ++r.visited_count;
                q.push_back(v);
            }
        }
    }
    r.num_levels = max_level + 1;
    return r;
}

double DegreeStats::top_share(double percent) const {
    if (total_edges == 0) return 0.0;
    const auto n = static_cast<double>(sorted_degrees.size());
    auto count = static_cast<std::size_t>(std::floor(n * percent / 100.0 + 1e-9));
    count = std::clamp<std::size_t>(count, 1, sorted_degrees.size());
    return static_cast<double>(degree_prefix_sums[count - 1]) / static_cast<double>(total_edges);
}

DegreeStats degree_stats(const Graph& g) {
    DegreeStats s;
    s.total_edges = g.num_edges();
    s.sorted_degrees.resize(g.num_vertices());
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        const EdgeId d = g.out_degree(u);
        s.sorted_degrees[u] = d;
        s.max_degree = std::max(s.max_degree, d);
        ++s.degree_histogram[d];
    }
    // Ranking ties are broken by vertex id ascending; stable_sort on a descending
    // key preserves id order within equal degrees.
    std::stable_sort(s.sorted_degrees.begin(), s.sorted_degrees.end(), std::greater<>());
    s.degree_prefix_sums.resize(s.sorted_degrees.size());
    EdgeId acc = 0;
    for (std::size_t i = 0; i < s.sorted_degrees.size(); ++i) {
        acc += s.sorted_degrees[i];
        s.degree_prefix_sums[i] = acc;
    }
    return s;
}

// ---- File formats ------------------------------------------------------------

namespace {

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

std::int64_t parse_int(const std::string& tok, std::size_t line_no) {
    std::int64_t value = 0;
    const auto* begin = tok.data();
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("expected an integer, got '" + tok + "'", line_no);
    return value;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

Graph load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw ParseError("empty file: " + path, 1);
    ++line_no;
    auto header = split_ws(line);
    for (auto& t : header) t = lower(t);
    if (header.size() < 4 || header[0] != "%%matrixmarket" || header[1] != "matrix")
        throw ParseError("not a Matrix Market file: bad banner", line_no);
    if (header[2] != "coordinate")
        throw ParseError("unsupported Matrix Market format '" + header[2] +
                             "' (only coordinate is supported)",
                         line_no);
    const std::string field = header[3];
    if (field != "pattern" && field != "real" && field != "integer")
        throw ParseError("unsupported Matrix Market field '" + field + "'", line_no);
    const std::string symmetry = header.size() > 4 ? header[4] : "general";
    if (symmetry != "general" && symmetry != "symmetric")
        throw ParseError("unsupported Matrix Market symmetry '" + symmetry + "'", line_no);

    std::int64_t rows = -1, cols = -1, nnz = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        if (is_blank(line)) continue;
        const auto toks = split_ws(line);
        if (toks.size() != 3) throw ParseError("expected 'rows cols nnz' size line", line_no);
        rows = parse_int(toks[0], line_no);
        cols = parse_int(toks[1], line_no);
        nnz = parse_int(toks[2], line_no);
        break;
    }
    if (nnz < 0) throw ParseError("missing size line", line_no);
    if (rows != cols)
        throw ParseError("matrix must be square to be a graph (" + std::to_string(rows) + "x" +
                             std::to_string(cols) + ")",
                         line_no);
    if (rows < 0) throw ParseError("negative dimension", line_no);
    const auto n = static_cast<VertexId>(rows);

    std::vector<std::pair<VertexId, VertexId>> edges;
    edges.reserve(static_cast<std::size_t>(nnz) * (symmetry == "symmetric" ? 2 : 1));
    std::int64_t seen = 0;
    const std::size_t expected_tokens = field == "pattern" ? 2 : 3;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        if (is_blank(line)) continue;
        if (seen == nnz)
            throw ParseError("unexpected entry after the " + std::to_string(nnz) +
                                 " promised by the header",
                             line_no);
        const auto toks = split_ws(line);
        if (toks.size() != expected_tokens)
            throw ParseError("expected " + std::to_string(expected_tokens) +
                                 " tokens per entry, got " + std::to_string(toks.size()),
                             line_no);
        const std::int64_t i = parse_int(toks[0], line_no);
        const std::int64_t j = parse_int(toks[1], line_no);
        if (field == "real") {
            // Value is validated as numeric but otherwise discarded (pattern semantics).
            try {
                std::size_t pos = 0;
                (void)std::stod(toks[2], &pos);
                if (pos != toks[2].size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError("expected a numeric value, got '" + toks[2] + "'", line_no);
            }
        } else if (field == "integer") {
            (void)parse_int(toks[2], line_no);
        }
        if (i < 1 || j < 1 || i > rows || j > cols)
            throw ParseError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") out of bounds",
                             line_no);
        ++seen;
        const auto u = static_cast<VertexId>(i - 1);
        const auto v = static_cast<VertexId>(j - 1);
        edges.emplace_back(u, v);
        if (symmetry == "symmetric" && u != v) edges.emplace_back(v, u);
    }
    if (seen != nnz)
        throw ParseError("truncated file: header promised " + std::to_string(nnz) +
                             " entries, found " + std::to_string(seen),
                         line_no);
    return Graph::from_edges(n, std::move(edges), symmetry == "general");
}

void save_matrix_market(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << "%%MatrixMarket matrix coordinate pattern general\n";
    out << g.num_vertices() << ' ' << g.num_vertices() << ' ' << g.num_edges() << '\n';
    for (VertexId u = 0; u < g.num_vertices(); ++u)
        for (VertexId v : g.out_neighbors(u)) out << (u + 1) << ' ' << (v + 1) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::int64_t max_id = -1;
    std::int64_t declared_n = -1;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') {
            // SNAP-style directive: "# Nodes: N" (case-insensitive) pins the vertex count.
            const std::string low = lower(line);
            const auto pos = low.find("nodes");
            if (pos != std::string::npos) {
                std::size_t i = pos + 5;
                while (i < low.size() &&
                       (low[i] == ':' || std::isspace(static_cast<unsigned char>(low[i]))))
                    ++i;
                std::size_t j = i;
                while (j < low.size() && std::isdigit(static_cast<unsigned char>(low[j]))) ++j;
                if (j > i) declared_n = parse_int(low.substr(i, j - i), line_no);
            }
            continue;
        }
        if (is_blank(line)) continue;
        const auto toks = split_ws(line);
        if (toks.size() != 2)
            throw ParseError("expected 'src dst', got " + std::to_string(toks.size()) +
                                 " tokens",
                             line_no);
        const std::int64_t u = parse_int(toks[0], line_no);
        const std::int64_t v = parse_int(toks[1], line_no);
        if (u < 0 || v < 0)
            throw std::invalid_argument("negative vertex id (line " + std::to_string(line_no) +
                                        ")");
        max_id = std::max({max_id, u, v});
        edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    }
    const std::int64_t n = declared_n >= 0 ? declared_n : max_id + 1;
    if (declared_n >= 0 && max_id >= declared_n)
        throw ParseError("vertex id " + std::to_string(max_id) +
                         " exceeds declared node count " + std::to_string(declared_n));
    return Graph::from_edges(static_cast<VertexId>(n), std::move(edges), true);
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << "# nodes: " << g.num_vertices() << '\n';
    for (VertexId u = 0; u < g.num_vertices(); ++u)
        for (VertexId v : g.out_neighbors(u)) out << u << ' ' << v << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

Graph load_graph(const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".mtx")
        return load_matrix_market(path);
    return load_edge_list(path);
}

void save_permutation(const Permutation& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    for (VertexId i = 0; i < p.size(); ++i) out << p.inverse(i) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

Permutation load_permutation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::vector<VertexId> inverse;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) continue;
        const std::int64_t v = parse_int(line, line_no);
        if (v < 0) throw ParseError("negative id in permutation", line_no);
        inverse.push_back(static_cast<VertexId>(v));
    }
    return Permutation::from_inverse(std::move(inverse));
}

}  // namespace blest
