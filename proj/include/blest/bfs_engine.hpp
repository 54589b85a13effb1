#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "blest/bvss.hpp"
#include "blest/graph.hpp"
#include "blest/ordering.hpp"

namespace blest {

enum class EngineMode { Eager, Lazy, Auto };

std::string to_string(EngineMode m);
EngineMode engine_mode_from_string(const std::string& s);

struct EngineConfig {
    unsigned num_warps = 1;
    EngineMode mode = EngineMode::Auto;
    double lazy_divergence_threshold = 25000.0;
    Level max_levels = 0;  // 0 = derive n + 1 at run time; exceeding it throws
    unsigned workers = 1;  // concurrent workers executing the simulated warps
};

struct LevelTrace {
    Level level = 0;
    std::uint64_t queue_size = 0;           // |qCurr| entering the level
    std::uint64_t frontier_population = 0;  // frontier bits readable this level
    std::uint64_t discovered = 0;           // vertices assigned this level
    std::uint64_t full_atomics = 0;
    std::uint64_t stage1_full_atomics = 0;  // measured after the pull stage joins
    std::uint64_t relaxed_atomics = 0;
    std::uint64_t queue_pushes = 0;
    std::vector<std::uint64_t> per_warp_mma;
};

struct EngineCounters {
    std::uint64_t mma_calls = 0;
    std::uint64_t full_atomics = 0;     // ATOMG-class: old value consumed
    std::uint64_t relaxed_atomics = 0;  // REDG-class: no return value use
    std::uint64_t queue_pushes = 0;
    std::uint64_t vss_dequeues = 0;
    // Documented SotA baseline: 16 TC calls per dequeued 128-slice VSS.
    std::uint64_t brs_baseline_mma_calls = 0;
    Level levels_processed = 0;  // levels that discovered at least one vertex
    std::vector<std::vector<std::uint64_t>> per_warp_mma_calls;  // [level][warp]
    std::vector<LevelTrace> trace;
};

// Dynamic BFS state as seeded for level 1. Engines run on an internal atomic
// mirror of this layout; init_state is the public, testable contract.
struct FrontierState {
    std::vector<std::uint32_t> f_curr, f_next;  // n bits; slice set s's word is bits [8s, 8s+8)
    std::vector<std::uint32_t> v_curr, v_next;  // lazy mode only
    std::vector<Level> levels;
    std::vector<std::uint32_t> q_curr, q_next;  // VSS ids
    Level current_level = 0;
};

FrontierState init_state(const Bvss& b, VertexId src, EngineMode mode);

// Eager engine: per level, warp w takes queue positions p with p % numWarps ==
// w; each dequeued VSS costs exactly 2 MMA calls; a nonzero lane popcount with
// level < levels[u] stores the level, fetch-ORs u's bit into fNext (one full
// atomic), and iff the old sigma-bit field of u's slice set was all zero
// reserves qNext space (one more full atomic) and pushes the set's VSS range.
// Barrier, swap frontiers and queues, clear, repeat until the queue is empty.
std::pair<BfsResult, EngineCounters> run_eager(const Bvss& b, VertexId src,
                                               const EngineConfig& cfg);

// Lazy engine: Stage 1 does the same pulls but only relax-ORs marks into vNext
// (no level check, no enqueue); Stage 2 sweeps all words, diff = vCurr XOR
// vNext, writes fCurr in place, assigns levels by iterated least-significant-
// set-bit, and enqueues with one warp-aggregated reservation per warp-batch.
std::pair<BfsResult, EngineCounters> run_lazy(const Bvss& b, VertexId src,
                                              const EngineConfig& cfg);

struct AutoResult {
    BfsResult bfs;  // levels in original vertex ids
    EngineCounters counters;
    OrderingPlan plan;
    BvssStats stats;
    EngineMode chosen_mode = EngineMode::Eager;
};

struct AutoConfig {
    EngineConfig engine;
    SelectDefaults ordering;
    std::uint64_t seed = 0;
};

// classify -> order -> build -> measure divergence -> Lazy iff social-like and
// divergence >= threshold (unless the mode is forced) -> run -> map back.
AutoResult run_auto(const Graph& g, VertexId src, const AutoConfig& cfg);

// Same pipeline with the ordering/build stages precomputed, for callers
// running many sources on one graph.
AutoResult run_auto_prebuilt(const Bvss& b, const OrderingPlan& plan, VertexId src,
                             const AutoConfig& cfg);

}  // namespace blest
