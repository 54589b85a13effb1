#include "blest/bfs_engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <memory>
#include <stdexcept>

#include "blest/parallel.hpp"
#include "blest/tc_emu.hpp"

namespace blest {

std::string to_string(EngineMode m) {
    switch (m) {
        case EngineMode::Eager: return "eager";
        case EngineMode::Lazy: return "lazy";
        case EngineMode::Auto: return "auto";
    }
    return "?";
}

EngineMode engine_mode_from_string(const std::string& s) {
    if (s == "eager") return EngineMode::Eager;
    if (s == "lazy") return EngineMode::Lazy;
    if (s == "auto") return EngineMode::Auto;
    throw std::invalid_argument("unknown engine mode: " + s);
}

FrontierState init_state(const Bvss& b, VertexId src, EngineMode mode) {
    if (src >= b.n) throw std::invalid_argument("bfs source out of range");
    FrontierState st;
    const std::size_t words = (static_cast<std::size_t>(b.n) + 31) / 32;
    st.f_curr.assign(words, 0);
    st.f_next.assign(words, 0);
    st.levels.assign(b.n, kUnreached);
    st.levels[src] = 0;
    st.f_curr[src / 32] |= 1u << (src % 32);
    if (mode == EngineMode::Lazy) {
        st.v_curr.assign(words, 0);
        st.v_next.assign(words, 0);
        st.v_curr[src / 32] |= 1u << (src % 32);
        st.v_next[src / 32] |= 1u << (src % 32);
    }
    const std::uint32_t ss = src / b.config.sigma;
    for (std::uint32_t v = b.real_ptrs[ss]; v < b.real_ptrs[ss + 1]; ++v)
        st.q_curr.push_back(v);
    return st;
}

namespace {

struct WarpScratch {
    std::vector<std::uint32_t> pushes;
    std::uint64_t mma = 0;
    std::uint64_t dequeues = 0;
    std::uint64_t full_atomics = 0;
    std::uint64_t relaxed_atomics = 0;
    std::uint64_t queue_pushes = 0;
    std::uint64_t discovered = 0;

    void reset() {
        pushes.clear();
        mma = dequeues = full_atomics = relaxed_atomics = queue_pushes = discovered = 0;
    }
};

Level level_cap(const EngineConfig& cfg, VertexId n) {
    return cfg.max_levels ? cfg.max_levels : static_cast<Level>(n) + 1;
}

[[noreturn]] void runaway(Level level) {
    throw std::runtime_error("BFS ran past the level safety cap at level " +
                             std::to_string(level) + " — engine invariant broken");
}

void assert_unique_queue(std::vector<std::uint32_t> q) {
    std::sort(q.begin(), q.end());
    if (std::adjacent_find(q.begin(), q.end()) != q.end())
        throw std::logic_error("duplicate VSS enqueued for one level");
}

// Finalises a level: merges warp scratch into counters/trace and the next queue.
void close_level(EngineCounters& counters, std::vector<WarpScratch>& warps, Level level,
                 std::uint64_t queue_size, std::uint64_t frontier_population,
                 std::uint64_t discovered, std::uint64_t stage1_full,
                 std::vector<std::uint32_t>& q_out) {
    LevelTrace t;
    t.level = level;
    t.queue_size = queue_size;
    t.frontier_population = frontier_population;
    t.discovered = discovered;
    t.stage1_full_atomics = stage1_full;
    t.per_warp_mma.reserve(warps.size());
    q_out.clear();
    for (const WarpScratch& w : warps) {
        t.per_warp_mma.push_back(w.mma);
        t.full_atomics += w.full_atomics;
        t.relaxed_atomics += w.relaxed_atomics;
        t.queue_pushes += w.queue_pushes;
        counters.mma_calls += w.mma;
        counters.vss_dequeues += w.dequeues;
        counters.full_atomics += w.full_atomics;
        counters.relaxed_atomics += w.relaxed_atomics;
        counters.queue_pushes += w.queue_pushes;
        q_out.insert(q_out.end(), w.pushes.begin(), w.pushes.end());
    }
    counters.per_warp_mma_calls.push_back(t.per_warp_mma);
    counters.trace.push_back(std::move(t));
}

BfsResult finalise(const Bvss& b, VertexId src, const Level* levels,
                   EngineCounters& counters) {
    BfsResult res;
    res.source = src;
    res.levels.assign(levels, levels + b.n);
    Level max_level = 0;
    for (Level l : res.levels)
        if (l != kUnreached) {
            ++res.visited_count;
            max_level = std::max(max_level, l);
        }
    res.num_levels = max_level + 1;
    counters.levels_processed = max_level;
    counters.brs_baseline_mma_calls = 16 * counters.vss_dequeues;
    return res;
}

// Pulls one VSS: 2 MMA calls, then hands every nonzero (lane, column) popcount
// with its row id to sink(u, popcount).
template <typename Sink>
void pull_vss(const Bvss& b, std::uint32_t vss, std::uint8_t alpha, WarpScratch& warp,
              Sink&& sink) {
    const tc::FragB frag_b = tc::build_fragB(alpha);
    const std::span<const std::uint32_t, 32> mask_words{b.lane_mask_words(vss), 32};
    for (unsigned round = 0; round < 2; ++round) {
        const tc::FragA frag_a = tc::pack_fragA_round(mask_words, round);
        const tc::FragC frag_c = tc::mma_m8n8k128(frag_a, frag_b);
        ++warp.mma;
        for (unsigned lane = 0; lane < 32; ++lane) {
            const auto [even, odd] = tc::lane_dot_products(frag_c, lane);
            if (even) sink(b.row_id(vss, lane, 2 * round), even);
            if (odd) sink(b.row_id(vss, lane, 2 * round + 1), odd);
        }
    }
}

std::uint8_t frontier_byte(const std::atomic<std::uint32_t>* f, std::uint32_t ss) {
    return static_cast<std::uint8_t>(
        f[ss / 4].load(std::memory_order_relaxed) >> (8 * (ss % 4)));
}

}  // namespace

std::pair<BfsResult, EngineCounters> run_eager(const Bvss& b, VertexId src,
                                               const EngineConfig& cfg) {
    if (cfg.num_warps < 1) throw std::invalid_argument("numWarps must be >= 1");
    const FrontierState seed = init_state(b, src, EngineMode::Eager);
    const std::size_t words = seed.f_curr.size();
    const unsigned num_warps = cfg.num_warps;
    const unsigned workers = std::max(1u, cfg.workers);
    const Level cap = level_cap(cfg, b.n);

    auto f_curr = std::make_unique<std::atomic<std::uint32_t>[]>(words);
    auto f_next = std::make_unique<std::atomic<std::uint32_t>[]>(words);
    auto levels = std::make_unique<std::atomic<Level>[]>(b.n);
    for (std::size_t i = 0; i < words; ++i) {
        f_curr[i].store(seed.f_curr[i], std::memory_order_relaxed);
        f_next[i].store(0, std::memory_order_relaxed);
    }
    for (VertexId u = 0; u < b.n; ++u)
        levels[u].store(seed.levels[u], std::memory_order_relaxed);

    std::vector<std::uint32_t> q_curr = seed.q_curr;
    std::vector<std::uint32_t> q_next;
    std::vector<WarpScratch> warps(num_warps);
    EngineCounters counters;

    Level level = 0;
    while (!q_curr.empty()) {
        if (++level > cap) runaway(level);
        for (auto& w : warps) w.reset();
        std::uint64_t frontier_population = 0;
        for (std::size_t i = 0; i < words; ++i)
            frontier_population += std::popcount(f_curr[i].load(std::memory_order_relaxed));

        run_workers(workers, [&](unsigned worker) {
            for (unsigned w = worker; w < num_warps; w += workers) {
                WarpScratch& warp = warps[w];
                for (std::size_t p = w; p < q_curr.size(); p += num_warps) {
                    const std::uint32_t vss = q_curr[p];
                    const std::uint32_t ss = b.virtual_to_real[vss];
                    const std::uint8_t alpha = frontier_byte(f_curr.get(), ss);
                    if (alpha == 0)
                        throw std::logic_error("dequeued VSS with an all-zero frontier word");
                    ++warp.dequeues;
                    pull_vss(b, vss, alpha, warp, [&](VertexId u, std::uint32_t) {
                        const Level prev = levels[u].load(std::memory_order_relaxed);
                        if (level >= prev) return;
                        levels[u].store(level, std::memory_order_relaxed);
                        const std::uint32_t old = f_next[u / 32].fetch_or(
                            1u << (u % 32), std::memory_order_relaxed);
                        ++warp.full_atomics;  // fetch_or: old value consumed below
                        const std::uint32_t ss_out = u / 8;
                        if (((old >> (8 * (ss_out % 4))) & 0xFFu) == 0) {
                            ++warp.full_atomics;  // queue-size reservation
                            const std::uint32_t begin = b.real_ptrs[ss_out];
                            const std::uint32_t end = b.real_ptrs[ss_out + 1];
                            for (std::uint32_t q = begin; q < end; ++q) warp.pushes.push_back(q);
                            warp.queue_pushes += end - begin;
                        }
                    });
                }
            }
        });

        std::uint64_t discovered = 0;
        for (std::size_t i = 0; i < words; ++i)
            discovered += std::popcount(f_next[i].load(std::memory_order_relaxed));
        std::uint64_t stage1_full = 0;
        for (const auto& w : warps) stage1_full += w.full_atomics;
        close_level(counters, warps, level, q_curr.size(), frontier_population, discovered,
                    stage1_full, q_next);
        assert_unique_queue(q_next);

        std::swap(f_curr, f_next);
        for (std::size_t i = 0; i < words; ++i)
            f_next[i].store(0, std::memory_order_relaxed);
        std::swap(q_curr, q_next);
    }

    std::vector<Level> plain(b.n);
    for (VertexId u = 0; u < b.n; ++u) plain[u] = levels[u].load(std::memory_order_relaxed);
    BfsResult res = finalise(b, src, plain.data(), counters);
    return {std::move(res), std::move(counters)};
}

std::pair<BfsResult, EngineCounters> run_lazy(const Bvss& b, VertexId src,
                                              const EngineConfig& cfg) {
    if (cfg.num_warps < 1) throw std::invalid_argument("numWarps must be >= 1");
    const FrontierState seed = init_state(b, src, EngineMode::Lazy);
    const std::size_t words = seed.f_curr.size();
    const unsigned num_warps = cfg.num_warps;
    const unsigned workers = std::max(1u, cfg.workers);
    const Level cap = level_cap(cfg, b.n);
    const std::size_t threads = static_cast<std::size_t>(num_warps) * 32;

    auto v_next = std::make_unique<std::atomic<std::uint32_t>[]>(words);
    for (std::size_t i = 0; i < words; ++i)
        v_next[i].store(seed.v_next[i], std::memory_order_relaxed);
    std::vector<std::uint32_t> v_curr = seed.v_curr;
    std::vector<std::uint32_t> f_curr = seed.f_curr;  // written in place by Stage 2
    std::vector<Level> levels = seed.levels;
    // Level at which Stage 2 last rewrote each word; asserts the stale-frontier
    // contract ("every dequeued VSS reads a word written in the immediately
    // preceding Stage 2").
    std::vector<Level> word_stamp(words, 0);

    std::vector<std::uint32_t> q_curr = seed.q_curr;
    std::vector<std::uint32_t> q_next;
    std::vector<WarpScratch> warps(num_warps);
    EngineCounters counters;

    Level level = 0;
    while (!q_curr.empty()) {
        if (++level > cap) runaway(level);
        for (auto& w : warps) w.reset();
        std::uint64_t frontier_population = 0;
        for (std::size_t i = 0; i < words; ++i)
            if (word_stamp[i] == level - 1) frontier_population += std::popcount(f_curr[i]);

        // Stage 1: lazy marking — pulls write only relaxed ORs into vNext.
        run_workers(workers, [&](unsigned worker) {
            for (unsigned w = worker; w < num_warps; w += workers) {
                WarpScratch& warp = warps[w];
                for (std::size_t p = w; p < q_curr.size(); p += num_warps) {
                    const std::uint32_t vss = q_curr[p];
                    const std::uint32_t ss = b.virtual_to_real[vss];
                    if (word_stamp[ss / 4] != level - 1)
                        throw std::logic_error("dequeued VSS reads a stale frontier word");
                    const auto alpha =
                        static_cast<std::uint8_t>(f_curr[ss / 4] >> (8 * (ss % 4)));
                    if (alpha == 0)
                        throw std::logic_error("dequeued VSS with an all-zero frontier word");
                    ++warp.dequeues;
                    pull_vss(b, vss, alpha, warp, [&](VertexId u, std::uint32_t) {
                        v_next[u / 32].fetch_or(1u << (u % 32), std::memory_order_relaxed);
                        ++warp.relaxed_atomics;  // no return value use
                    });
                }
            }
        });
        std::uint64_t stage1_full = 0;
        for (const auto& w : warps) stage1_full += w.full_atomics;

        // Stage 2: frontier finalisation — single-owner sweep over all words.
        // Thread t owns words t, t+threads, ...; warp w covers threads
        // [32w, 32w+32), so its batch q is the word block 32w + q*threads.
        run_workers(workers, [&](unsigned worker) {
            for (unsigned w = worker; w < num_warps; w += workers) {
                WarpScratch& warp = warps[w];
                for (std::size_t base = 32 * static_cast<std::size_t>(w); base < words;
                     base += threads) {
                    const std::size_t batch_end = std::min(base + 32, words);
                    std::uint64_t pending = 0;
                    for (std::size_t idx = base; idx < batch_end; ++idx) {
                        const std::uint32_t next = v_next[idx].load(std::memory_order_relaxed);
                        const std::uint32_t diff = v_curr[idx] ^ next;
                        if (diff == 0) continue;
                        v_curr[idx] = next;
                        f_curr[idx] = diff;
                        word_stamp[idx] = level;
                        warp.discovered += std::popcount(diff);
                        for (unsigned set = 0; set < 4; ++set) {
                            std::uint32_t field = (diff >> (8 * set)) & 0xFFu;
                            if (field == 0) continue;
                            while (field) {
                                const unsigned bit =
                                    static_cast<unsigned>(std::countr_zero(field));
                                field &= field - 1;
                                levels[32 * idx + 8 * set + bit] = level;
                            }
                            const std::uint32_t ss_out =
                                static_cast<std::uint32_t>(4 * idx + set);
                            const std::uint32_t begin = b.real_ptrs[ss_out];
                            const std::uint32_t end = b.real_ptrs[ss_out + 1];
                            for (std::uint32_t q = begin; q < end; ++q)
                                warp.pushes.push_back(q);
                            pending += end - begin;
                        }
                    }
                    if (pending) {
                        ++warp.full_atomics;  // one warp-aggregated reservation per batch
                        warp.queue_pushes += pending;
                    }
                }
            }
        });

        std::uint64_t discovered = 0;
        for (const auto& w : warps) discovered += w.discovered;
        close_level(counters, warps, level, q_curr.size(), frontier_population, discovered,
                    stage1_full, q_next);
        assert_unique_queue(q_next);
        std::swap(q_curr, q_next);
    }

    BfsResult res = finalise(b, src, levels.data(), counters);
    return {std::move(res), std::move(counters)};
}

AutoResult run_auto_prebuilt(const Bvss& b, const OrderingPlan& plan, VertexId src,
                             const AutoConfig& cfg) {
    AutoResult out;
    out.plan = plan;
    out.stats = bvss_stats(b);
    EngineConfig engine = cfg.engine;
    if (engine.mode == EngineMode::Auto) {
        out.chosen_mode = (plan.classification.is_social_like &&
                           out.stats.update_divergence >= engine.lazy_divergence_threshold)
                              ? EngineMode::Lazy
                              : EngineMode::Eager;
    } else {
        out.chosen_mode = engine.mode;
    }
    engine.mode = out.chosen_mode;

    const bool mapped = b.producing_permutation.has_value() &&
                        !b.producing_permutation->is_identity();
    const VertexId run_src = mapped ? b.producing_permutation->forward(src) : src;
    auto [bfs, counters] = out.chosen_mode == EngineMode::Lazy
                               ? run_lazy(b, run_src, engine)
                               : run_eager(b, run_src, engine);
    out.counters = std::move(counters);
    if (mapped) {
        out.bfs.source = src;
        out.bfs.visited_count = bfs.visited_count;
        out.bfs.num_levels = bfs.num_levels;
        out.bfs.levels.resize(bfs.levels.size());
        for (VertexId v = 0; v < bfs.levels.size(); ++v)
            out.bfs.levels[v] = bfs.levels[b.producing_permutation->forward(v)];
    } else {
        out.bfs = std::move(bfs);
    }
    return out;
}

AutoResult run_auto(const Graph& g, VertexId src, const AutoConfig& cfg) {
    const BvssConfig bcfg;
    const OrderingPlan plan = select_plan(g, bcfg.sigma, cfg.ordering);
    Permutation perm =
        make_permutation(g, plan, bcfg.sigma, cfg.seed, std::max(1u, cfg.engine.workers));
    Bvss b;
    if (perm.is_identity()) {
        b = build_bvss(g, bcfg, std::max(1u, cfg.engine.workers));
    } else {
        b = build_bvss(apply_permutation(g, perm), bcfg, std::max(1u, cfg.engine.workers));
    }
    b.ordering_tag = to_string(plan.strategy);
    b.producing_permutation = std::move(perm);
    return run_auto_prebuilt(b, plan, src, cfg);
}

}  // namespace blest
