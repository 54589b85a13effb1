#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blest/graph.hpp"

namespace blest {

enum class OrderingStrategy { JaccardWindows, Rcm, Random, Identity };
enum class PrePass { None, BfsLocality };

std::string to_string(OrderingStrategy s);
std::string to_string(PrePass p);
OrderingStrategy ordering_strategy_from_string(const std::string& s);

enum class DegreeSide { Out, In, Total };

struct SocialLikeReport {
    double top1_share = 0;
    double top10_share = 0;
    double power_law_slope = 0;
    double power_law_fit_r2 = 0;
    bool is_social_like = false;
    std::vector<std::string> triggered_rules;
};

struct OrderingPlan {
    OrderingStrategy strategy = OrderingStrategy::Identity;
    std::uint32_t window_size = 0;  // JaccardWindows only; multiple of sigma
    PrePass pre_pass = PrePass::None;
    SocialLikeReport classification;
};

struct SelectDefaults {
    std::uint32_t window_size = 1u << 16;
    PrePass pre_pass = PrePass::None;
    std::optional<OrderingStrategy> force;  // overrides the classifier outcome
};

// Jaccard similarity of the two outgoing neighbor lists; 0 when both empty.
double jaccard(VertexId u, VertexId v, const Graph& g);

// Greedy per-window clustering: partition [0, n) into windows of w positions;
// inside each window repeatedly pop the smallest remaining id as a cluster
// seed, then append the sigma-1 candidates maximising |N(j) cap U| /
// |N(j) cup U| against the running union U of the cluster's out-neighbor
// lists (ties to the smallest id), assigning window-relative positions. If
// pre_pass is given it is applied first and the result composed, so the
// returned permutation still maps original ids. Windows run concurrently on
// `workers` threads; the result is identical for any worker count.
Permutation jaccard_with_windows(const Graph& g, std::uint32_t sigma, std::uint32_t w,
                                 const Permutation* pre_pass = nullptr, unsigned workers = 1);

// Reverse Cuthill-McKee on the symmetrised graph: pseudo-peripheral start via
// repeated BFS sweeps, children in ascending (degree, id) order, sequence
// reversed; components processed in ascending order of minimum vertex id.
Permutation rcm(const Graph& g);

Permutation random_order(VertexId n, std::uint64_t seed);

// BFS order from the maximum-out-degree vertex (smallest id on ties) on the
// symmetrised graph, remaining components appended the same way.
Permutation bfs_locality_prepass(const Graph& g);

// Rule A (heavy tail): top1Share > 0.05 and top10Share > 0.40.
// Rule B (power law): least-squares fit of log2(degree) vs log2(frequency)
// over degrees >= 2 has slope in [-3.5, -1.5] and R^2 >= 0.8 (needs >= 3
// distinct degrees). Social-like iff A or B fired; edgeless graphs never are.
SocialLikeReport classify_social_like(const Graph& g, DegreeSide side = DegreeSide::Out);

// Social-like -> JaccardWindows with defaults.window_size and pre-pass;
// otherwise RCM. defaults.force short-circuits the choice but the classifier
// evidence is still recorded.
OrderingPlan select_plan(const Graph& g, std::uint32_t sigma, const SelectDefaults& defaults);

// Materialises the plan's permutation. seed feeds the Random strategy.
Permutation make_permutation(const Graph& g, const OrderingPlan& plan, std::uint32_t sigma,
                             std::uint64_t seed = 0, unsigned workers = 1);

}  // namespace blest
