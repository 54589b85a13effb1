#include "blest/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "blest/parallel.hpp"
#include "blest/rng.hpp"

namespace blest {

std::string to_string(OrderingStrategy s) {
    switch (s) {
        case OrderingStrategy::JaccardWindows: return "jaccard-windows";
        case OrderingStrategy::Rcm: return "rcm";
        case OrderingStrategy::Random: return "random";
        case OrderingStrategy::Identity: return "identity";
    }
    return "?";
}

std::string to_string(PrePass p) {
    return p == PrePass::BfsLocality ? "bfs-locality" : "none";
}

OrderingStrategy ordering_strategy_from_string(const std::string& s) {
    if (s == "jaccard-windows") return OrderingStrategy::JaccardWindows;
    if (s == "rcm") return OrderingStrategy::Rcm;
    if (s == "random") return OrderingStrategy::Random;
    if (s == "identity") return OrderingStrategy::Identity;
    throw std::invalid_argument("unknown ordering strategy: " + s);
}

double jaccard(VertexId u, VertexId v, const Graph& g) {
    const auto a = g.out_neighbors(u);
    const auto b = g.out_neighbors(v);
    if (a.empty() && b.empty()) return 0.0;
    std::size_t i = 0, j = 0, inter = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

// One window of the greedy clustering, on vertex ids [begin, end) of g.
// out_pos[v - begin] receives the window-relative position of v.
//
// J(j, U) = |N(j) cap U| / |N(j) cup U| is maintained incrementally: when x
// newly enters the union U, every unpicked in-window in-neighbor j of x gains
// one intersection, so each greedy pick is one ascending scan over the
// window's unpicked ids (which also resolves ties to the smallest id).
class WindowClusterer {
public:
    WindowClusterer(const Graph& g, VertexId n)
        : g_(g), in_union_(n, 0), inter_stamp_(n, 0), inter_(n, 0), picked_(n, false) {}

    void run(VertexId begin, VertexId end, std::uint32_t sigma, std::vector<VertexId>& out_pos) {
        for (VertexId v = begin; v < end; ++v) picked_[v] = false;
        VertexId first_unpicked = begin;
        VertexId pos = 0;
        VertexId remaining = end - begin;
        while (remaining > 0) {
            ++epoch_;
            union_size_ = 0;
            // Seed: smallest remaining id in the window.
            while (picked_[first_unpicked]) ++first_unpicked;
            const VertexId seed = first_unpicked;
            take(seed, begin, end, pos++, out_pos);
            --remaining;
            for (std::uint32_t r = 1; r < sigma && remaining > 0; ++r) {
                const VertexId best = argmax(begin, end);
                take(best, begin, end, pos++, out_pos);
                --remaining;
            }
        }
    }

private:
    void take(VertexId v, VertexId begin, VertexId end, VertexId pos,
              std::vector<VertexId>& out_pos) {
        picked_[v] = true;
        out_pos[v - begin] = pos;
        for (VertexId x : g_.out_neighbors(v)) {
            if (in_union_[x] == epoch_) continue;
            in_union_[x] = epoch_;
            ++union_size_;
            for (VertexId j : g_.in_neighbors(x)) {
                if (j < begin || j >= end || picked_[j]) continue;
                if (inter_stamp_[j] != epoch_) {
                    inter_stamp_[j] = epoch_;
                    inter_[j] = 0;
                }
                ++inter_[j];
            }
        }
    }

    VertexId argmax(VertexId begin, VertexId end) const {
        VertexId best = 0;
        double best_j = -1.0;
        for (VertexId j = begin; j < end; ++j) {
            if (picked_[j]) continue;
            const std::uint32_t inter = inter_stamp_[j] == epoch_ ? inter_[j] : 0;
            const double denom =
                static_cast<double>(g_.out_degree(j)) + union_size_ - inter;
            const double score = denom > 0 ? inter / denom : 0.0;
            if (score > best_j) {
                best_j = score;
                best = j;
            }
        }
        return best;
    }

    const Graph& g_;
    std::vector<std::uint32_t> in_union_;     // epoch stamp: x currently in U
    std::vector<std::uint32_t> inter_stamp_;  // epoch stamp for inter_
    std::vector<std::uint32_t> inter_;        // |N(j) cap U| for the current cluster
    std::vector<char> picked_;
    std::uint32_t epoch_ = 0;
    std::uint32_t union_size_ = 0;
};

}  // namespace

Permutation jaccard_with_windows(const Graph& g, std::uint32_t sigma, std::uint32_t w,
                                 const Permutation* pre_pass, unsigned workers) {
    if (sigma == 0 || w == 0 || w % sigma != 0)
        throw std::invalid_argument("window size must be a positive multiple of sigma");
    const Graph* base = &g;
    Graph permuted;
    if (pre_pass != nullptr && !pre_pass->is_identity()) {
        permuted = apply_permutation(g, *pre_pass);
        base = &permuted;
    }
    const VertexId n = base->num_vertices();
    std::vector<VertexId> forward(n);
    const VertexId num_windows = n == 0 ? 0 : (n + w - 1) / w;
    run_workers(workers, [&](unsigned worker) {
        WindowClusterer clusterer(*base, n);
        std::vector<VertexId> pos;
        for (VertexId k = worker; k < num_windows; k += workers) {
            const VertexId begin = k * w;
            const VertexId end = std::min<std::uint64_t>(static_cast<std::uint64_t>(begin) + w, n);
            pos.assign(end - begin, 0);
            clusterer.run(begin, end, sigma, pos);
            for (VertexId v = begin; v < end; ++v) forward[v] = begin + pos[v - begin];
        }
    });
    Permutation windowed = Permutation::from_forward(std::move(forward));
    if (base == &permuted) return Permutation::composed(*pre_pass, windowed);
    return windowed;
}

namespace {

// Sorted-unique union of out- and in-neighbors: the symmetrised adjacency.
std::vector<std::vector<VertexId>> symmetrised_adjacency(const Graph& g) {
    std::vector<std::vector<VertexId>> adj(g.num_vertices());
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        const auto out = g.out_neighbors(u);
        const auto in = g.in_neighbors(u);
        auto& row = adj[u];
        row.resize(out.size() + in.size());
        std::merge(out.begin(), out.end(), in.begin(), in.end(), row.begin());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return adj;
}

struct SymBfs {
    std::vector<Level> level;
    std::vector<VertexId> order;  // visit order
    Level ecc = 0;
};

SymBfs sym_bfs(const std::vector<std::vector<VertexId>>& adj, VertexId start,
               const std::vector<VertexId>* degree_key) {
    SymBfs r;
    r.level.assign(adj.size(), kUnreached);
    r.level[start] = 0;
    r.order.push_back(start);
    std::deque<VertexId> q{start};
    std::vector<VertexId> children;
    while (!q.empty()) {
        const VertexId u = q.front();
        q.pop_front();
        children.clear();
        for (VertexId v : adj[u])
            if (r.level[v] == kUnreached) {
                r.level[v] = r.level[u] + 1;
                r.ecc = std::max(r.ecc, r.level[v]);
                children.push_back(v);
            }
        if (degree_key)
            std::sort(children.begin(), children.end(), [&](VertexId a, VertexId b) {
                return std::pair((*degree_key)[a], a) < std::pair((*degree_key)[b], b);
            });
        for (VertexId v : children) {
            r.order.push_back(v);
            q.push_back(v);
        }
    }
    return r;
}

VertexId pseudo_peripheral(const std::vector<std::vector<VertexId>>& adj,
                           const std::vector<VertexId>& degree, VertexId seed) {
    VertexId current = seed;
    Level best_ecc = 0;
    for (;;) {
        const SymBfs r = sym_bfs(adj, current, nullptr);
        if (r.ecc <= best_ecc && current != seed) break;
        if (r.ecc == 0) break;  // isolated or single-vertex component
        // Smallest (degree, id) vertex in the last level.
        VertexId next = current;
        std::pair<VertexId, VertexId> best_key{std::numeric_limits<VertexId>::max(),
                                               std::numeric_limits<VertexId>::max()};
        for (VertexId v = 0; v < adj.size(); ++v)
            if (r.level[v] == r.ecc && std::pair(degree[v], v) < best_key) {
                best_key = {degree[v], v};
                next = v;
            }
        if (r.ecc <= best_ecc) break;
        best_ecc = r.ecc;
        current = next;
    }
    return current;
}

}  // namespace

Permutation rcm(const Graph& g) {
    const auto adj = symmetrised_adjacency(g);
    const VertexId n = g.num_vertices();
    std::vector<VertexId> degree(n);
    for (VertexId u = 0; u < n; ++u) degree[u] = static_cast<VertexId>(adj[u].size());

    std::vector<bool> placed(n, false);
    std::vector<VertexId> order;  // Cuthill-McKee order, reversed at the end
    order.reserve(n);
    for (VertexId v = 0; v < n; ++v) {
        if (placed[v]) continue;
        const VertexId start = pseudo_peripheral(adj, degree, v);
        const SymBfs r = sym_bfs(adj, start, &degree);
        for (VertexId u : r.order) {
            placed[u] = true;
            order.push_back(u);
        }
    }
    std::reverse(order.begin(), order.end());
    return Permutation::from_inverse(std::move(order));
}

Permutation random_order(VertexId n, std::uint64_t seed) {
    std::vector<VertexId> forward(n);
    std::iota(forward.begin(), forward.end(), VertexId{0});
    Rng rng(seed);
    for (VertexId i = n; i > 1; --i)
        std::swap(forward[i - 1], forward[rng.next_below(i)]);
    return Permutation::from_forward(std::move(forward));
}

Permutation bfs_locality_prepass(const Graph& g) {
    const auto adj = symmetrised_adjacency(g);
    const VertexId n = g.num_vertices();
    std::vector<bool> placed(n, false);
    std::vector<VertexId> inverse;
    inverse.reserve(n);
    // Components are rooted, in turn, at the unplaced vertex with maximum
    // out-degree (smallest id on ties); children visited in ascending id order.
    std::vector<VertexId> roots(n);
    std::iota(roots.begin(), roots.end(), VertexId{0});
    std::stable_sort(roots.begin(), roots.end(),
                     [&](VertexId a, VertexId b) { return g.out_degree(a) > g.out_degree(b); });
    for (VertexId root : roots) {
        if (placed[root]) continue;
        std::deque<VertexId> q{root};
        placed[root] = true;
        while (!q.empty()) {
            const VertexId u = q.front();
            q.pop_front();
            inverse.push_back(u);
            for (VertexId v : adj[u])
                if (!placed[v]) {
                    placed[v] = true;
                    q.push_back(v);
                }
        }
    }
    return Permutation::from_inverse(std::move(inverse));
}

namespace {

struct Fit {
    double slope = 0;
    double r2 = 0;
    std::size_t points = 0;
};

Fit fit_log_log(const std::map<EdgeId, VertexId>& histogram) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [degree, freq] : histogram)
        if (degree >= 2 && freq >= 1)
            pts.emplace_back(std::log2(static_cast<double>(degree)),
                             std::log2(static_cast<double>(freq)));
    Fit f;
    f.points = pts.size();
    if (pts.size() < 3) return f;
    double sx = 0, sy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
    }
    const double mx = sx / pts.size(), my = sy / pts.size();
    double sxx = 0, sxy = 0, syy = 0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0) return f;
    f.slope = sxy / sxx;
    const double ss_res = syy - f.slope * sxy;
    f.r2 = syy == 0 ? (std::abs(ss_res) < 1e-12 ? 1.0 : 0.0)
                    : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    return f;
}

}  // namespace

SocialLikeReport classify_social_like(const Graph& g, DegreeSide side) {
    const VertexId n = g.num_vertices();
    std::vector<EdgeId> degree(n);
    for (VertexId u = 0; u < n; ++u) {
        switch (side) {
            case DegreeSide::Out: degree[u] = g.out_degree(u); break;
            case DegreeSide::In: degree[u] = g.in_degree(u); break;
            case DegreeSide::Total: degree[u] = g.out_degree(u) + g.in_degree(u); break;
        }
    }
    SocialLikeReport rep;
    std::map<EdgeId, VertexId> histogram;
    EdgeId total = 0;
    for (EdgeId d : degree) {
        ++histogram[d];
        total += d;
    }
    if (n == 0 || total == 0) return rep;

    std::vector<EdgeId> sorted(degree);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    auto share = [&](double percent) {
        auto count = static_cast<std::size_t>(std::floor(n * percent / 100.0 + 1e-9));
        count = std::clamp<std::size_t>(count, 1, n);
        EdgeId acc = 0;
        for (std::size_t i = 0; i < count; ++i) acc += sorted[i];
        return static_cast<double>(acc) / static_cast<double>(total);
    };
    rep.top1_share = share(1.0);
    rep.top10_share = share(10.0);
    if (rep.top1_share > 0.05 && rep.top10_share > 0.40)
        rep.triggered_rules.emplace_back("heavy-tail");

    const Fit fit = fit_log_log(histogram);
    rep.power_law_slope = fit.slope;
    rep.power_law_fit_r2 = fit.r2;
    if (fit.points >= 3 && fit.slope >= -3.5 && fit.slope <= -1.5 && fit.r2 >= 0.8)
        rep.triggered_rules.emplace_back("power-law");

    rep.is_social_like = !rep.triggered_rules.empty();
    return rep;
}

OrderingPlan select_plan(const Graph& g, std::uint32_t sigma, const SelectDefaults& defaults) {
    OrderingPlan plan;
    plan.classification = classify_social_like(g);
    plan.pre_pass = defaults.pre_pass;
    if (defaults.force) {
        plan.strategy = *defaults.force;
    } else {
        plan.strategy = plan.classification.is_social_like ? OrderingStrategy::JaccardWindows
                                                           : OrderingStrategy::Rcm;
    }
    if (plan.strategy == OrderingStrategy::JaccardWindows) {
        plan.window_size = defaults.window_size;
        if (plan.window_size == 0 || plan.window_size % sigma != 0)
            throw std::invalid_argument("window size must be a positive multiple of sigma");
    }
    return plan;
}

Permutation make_permutation(const Graph& g, const OrderingPlan& plan, std::uint32_t sigma,
                             std::uint64_t seed, unsigned workers) {
    switch (plan.strategy) {
        case OrderingStrategy::Identity: return Permutation::identity(g.num_vertices());
        case OrderingStrategy::Random: return random_order(g.num_vertices(), seed);
        case OrderingStrategy::Rcm: return rcm(g);
        case OrderingStrategy::JaccardWindows: {
            if (plan.pre_pass == PrePass::BfsLocality) {
                const Permutation pre = bfs_locality_prepass(g);
                return jaccard_with_windows(g, sigma, plan.window_size, &pre, workers);
            }
            return jaccard_with_windows(g, sigma, plan.window_size, nullptr, workers);
        }
    }
    throw std::logic_error("unhandled ordering strategy");
}

}  // namespace blest
