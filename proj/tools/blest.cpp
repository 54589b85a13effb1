// blest — batch frontend for the BVSS BFS pipeline.
//
// Subcommands: run | sweep-w | stats | compare | convert. JSON reports are
// deterministic for a fixed seed (timing fields excluded); CSV output follows
// RFC 4180 (CRLF line endings, numeric fields unquoted).

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "blest/bfs_engine.hpp"
#include "blest/bvss.hpp"
#include "blest/graph.hpp"
#include "blest/ordering.hpp"
#include "blest/parallel.hpp"
#include "blest/rng.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

// ---- shared pipeline pieces ---------------------------------------------------

struct OrderingOptions {
    std::string order = "auto";
    std::uint32_t window = 1u << 16;
    std::string pre_pass = "none";
};

blest::SelectDefaults to_defaults(const OrderingOptions& opt) {
    blest::SelectDefaults d;
    d.window_size = opt.window;
    if (opt.pre_pass == "bfs-locality")
        d.pre_pass = blest::PrePass::BfsLocality;
    else if (opt.pre_pass != "none")
        throw CLI::ValidationError("--pre-pass", "must be none or bfs-locality");
    if (opt.order != "auto") d.force = blest::ordering_strategy_from_string(opt.order);
    return d;
}

std::string plan_cache_tag(const blest::OrderingPlan& plan, std::uint64_t seed) {
    std::string tag = to_string(plan.strategy);
    if (plan.strategy == blest::OrderingStrategy::JaccardWindows) {
        tag += "-w" + std::to_string(plan.window_size);
        tag += "-pre_" + to_string(plan.pre_pass);
    }
    if (plan.strategy == blest::OrderingStrategy::Random) tag += "-s" + std::to_string(seed);
    return tag;
}

// Orders the graph per the plan and builds (or loads from cache) the structure.
blest::Bvss obtain_bvss(const blest::Graph& g, const blest::OrderingPlan& plan,
                        std::uint64_t seed, unsigned workers, const std::string& cache_dir,
                        double* order_seconds, double* build_seconds) {
    const std::string tag = plan_cache_tag(plan, seed);
    std::string base;
    if (!cache_dir.empty()) {
        std::filesystem::create_directories(cache_dir);
        base = cache_dir + "/" + hex64(g.digest()) + "-" + tag;
        const std::string bvss_path = base + ".bvss";
        const std::string perm_path = base + ".perm";
        if (std::filesystem::exists(bvss_path) && std::filesystem::exists(perm_path)) {
            blest::Bvss b = blest::load_bvss(bvss_path);
            b.producing_permutation = blest::load_permutation(perm_path);
            b.ordering_tag = tag;
            if (order_seconds) *order_seconds = 0;
            if (build_seconds) *build_seconds = 0;
            return b;
        }
    }
    auto t0 = Clock::now();
    blest::Permutation perm = blest::make_permutation(g, plan, 8, seed, workers);
    if (order_seconds) *order_seconds = seconds_since(t0);
    t0 = Clock::now();
    blest::Bvss b = perm.is_identity()
                        ? blest::build_bvss(g, {}, workers)
                        : blest::build_bvss(blest::apply_permutation(g, perm), {}, workers);
    if (build_seconds) *build_seconds = seconds_since(t0);
    b.ordering_tag = tag;
    b.producing_permutation = std::move(perm);
    if (!base.empty()) {
        blest::save_bvss(b, base + ".bvss");
        blest::save_permutation(*b.producing_permutation, base + ".perm");
    }
    return b;
}

json classification_json(const blest::SocialLikeReport& r) {
    return {{"top1_share", r.top1_share},
            {"top10_share", r.top10_share},
            {"power_law_slope", r.power_law_slope},
            {"power_law_fit_r2", r.power_law_fit_r2},
            {"is_social_like", r.is_social_like},
            {"triggered_rules", r.triggered_rules}};
}

json plan_json(const blest::OrderingPlan& plan) {
    return {{"strategy", to_string(plan.strategy)},
            {"window_size", plan.window_size},
            {"pre_pass", to_string(plan.pre_pass)},
            {"classification", classification_json(plan.classification)}};
}

json stats_json(const blest::BvssStats& s) {
    json hist = json::object();
    for (const auto& [slices, count] : s.per_vss_slice_histogram)
        hist[std::to_string(slices)] = count;
    return {{"compression_ratio", s.compression_ratio},
            {"update_divergence", s.update_divergence},
            {"num_slice_sets", s.num_slice_sets},
            {"num_vss", s.num_vss},
            {"num_slices_padded", s.num_slices_padded},
            {"num_unpadded_slices", s.num_unpadded_slices},
            {"connectivity_bits", s.connectivity_bits},
            {"per_vss_slice_histogram", hist},
            {"bytes_real_ptrs", s.bytes_real_ptrs},
            {"bytes_virtual_to_real", s.bytes_virtual_to_real},
            {"bytes_row_ids", s.bytes_row_ids},
            {"bytes_masks", s.bytes_masks},
            {"bytes_static", s.bytes_static()},
            {"bytes_dynamic", s.bytes_dynamic},
            {"bytes_levels", s.bytes_levels}};
}

json counters_json(const blest::EngineCounters& c, bool with_trace) {
    json j = {{"mma_calls", c.mma_calls},
              {"full_atomics", c.full_atomics},
              {"relaxed_atomics", c.relaxed_atomics},
              {"queue_pushes", c.queue_pushes},
              {"vss_dequeues", c.vss_dequeues},
              {"brs_baseline_mma_calls", c.brs_baseline_mma_calls},
              {"levels_processed", c.levels_processed}};
    if (with_trace) {
        json trace = json::array();
        for (const auto& t : c.trace)
            trace.push_back({{"level", t.level},
                             {"queue_size", t.queue_size},
                             {"frontier_population", t.frontier_population},
                             {"discovered", t.discovered},
                             {"full_atomics", t.full_atomics},
                             {"stage1_full_atomics", t.stage1_full_atomics},
                             {"relaxed_atomics", t.relaxed_atomics},
                             {"queue_pushes", t.queue_pushes},
                             {"per_warp_mma", t.per_warp_mma}});
        j["trace"] = trace;
    }
    return j;
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << content;
}

std::string csv_double(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

std::vector<blest::VertexId> pick_sources(const blest::Graph& g, unsigned count,
                                          const std::vector<std::uint64_t>& explicit_list,
                                          std::uint64_t seed) {
    std::vector<blest::VertexId> sources;
    if (!explicit_list.empty()) {
        for (std::uint64_t s : explicit_list) {
            if (s >= g.num_vertices())
                throw CLI::ValidationError("--source-list", "source id out of range");
            sources.push_back(static_cast<blest::VertexId>(s));
        }
        return sources;
    }
    if (g.num_vertices() == 0) throw std::runtime_error("graph has no vertices");
    blest::Rng rng(seed);
    for (unsigned i = 0; i < count; ++i)
        sources.push_back(static_cast<blest::VertexId>(rng.next_below(g.num_vertices())));
    return sources;
}

// ---- subcommands --------------------------------------------------------------

struct CommonArgs {
    std::string graph_path;
    OrderingOptions ordering;
    std::string mode = "auto";
    unsigned warps = 1;
    unsigned workers = blest::default_workers();
    std::uint64_t seed = 0;
    double threshold = 25000.0;
    std::string cache_dir;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_engine) {
    cmd->add_option("graph", a.graph_path, "graph file (.mtx or edge list)")->required();
    cmd->add_option("--order", a.ordering.order,
                    "ordering strategy: auto|identity|random|rcm|jaccard-windows")
        ->default_val("auto");
    cmd->add_option("--w", a.ordering.window, "window size for jaccard-windows")
        ->default_val(1u << 16);
    cmd->add_option("--pre-pass", a.ordering.pre_pass, "pre-pass: none|bfs-locality")
        ->default_val("none");
    cmd->add_option("--seed", a.seed, "seed for source sampling and random ordering")
        ->default_val(0);
    cmd->add_option("--workers", a.workers, "worker threads (default: BLEST_WORKERS or 1)");
    cmd->add_option("--cache-dir", a.cache_dir, "directory for cached structures");
    if (with_engine) {
        cmd->add_option("--mode", a.mode, "engine: auto|eager|lazy")->default_val("auto");
        cmd->add_option("--warps", a.warps, "simulated warps")->default_val(1);
        cmd->add_option("--threshold", a.threshold,
                        "update-divergence threshold for the lazy engine")
            ->default_val(25000.0);
    }
}

int cmd_run(const CommonArgs& args, unsigned num_sources,
            const std::vector<std::uint64_t>& source_list, bool validate,
            const std::string& out_path) {
    const auto t_load = Clock::now();
    const blest::Graph g = blest::load_graph(args.graph_path);
    const double load_s = seconds_since(t_load);

    const blest::OrderingPlan plan = blest::select_plan(g, 8, to_defaults(args.ordering));
    double order_s = 0, build_s = 0;
    const blest::Bvss b =
        obtain_bvss(g, plan, args.seed, args.workers, args.cache_dir, &order_s, &build_s);

    blest::AutoConfig cfg;
    cfg.engine.mode = blest::engine_mode_from_string(args.mode);
    cfg.engine.num_warps = args.warps;
    cfg.engine.workers = args.workers;
    cfg.engine.lazy_divergence_threshold = args.threshold;
    cfg.seed = args.seed;

    const auto sources = pick_sources(g, num_sources, source_list, args.seed);

    json report;
    report["graph"] = {{"path", args.graph_path},
                       {"n", g.num_vertices()},
                       {"m", g.num_edges()},
                       {"digest", hex64(g.digest())}};
    report["plan"] = plan_json(plan);
    report["engine"] = {{"mode_requested", args.mode},
                        {"num_warps", args.warps},
                        {"workers", args.workers},
                        {"lazy_divergence_threshold", args.threshold}};
    report["seed"] = args.seed;
    report["sources"] = sources;

    bool all_match = true;
    json runs = json::array();
    const auto t_bfs = Clock::now();
    blest::EngineMode chosen = blest::EngineMode::Eager;
    blest::BvssStats stats;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const blest::VertexId src = sources[i];
        const blest::AutoResult r = blest::run_auto_prebuilt(b, plan, src, cfg);
        if (i == 0) {
            stats = r.stats;
            chosen = r.chosen_mode;
        }
        json run = {{"source", src},
                    {"mode", to_string(r.chosen_mode)},
                    {"visited_count", r.bfs.visited_count},
                    {"num_levels", r.bfs.num_levels},
                    {"counters", counters_json(r.counters, true)}};
        if (validate) {
            const blest::BfsResult oracle = blest::reference_bfs(g, src);
            const bool match = oracle.levels == r.bfs.levels;
            all_match = all_match && match;
            run["validated"] = match;
        }
        runs.push_back(std::move(run));
    }
    const double bfs_s = seconds_since(t_bfs);
    if (sources.empty()) stats = blest::bvss_stats(b);

    report["stats"] = stats_json(stats);
    report["engine"]["mode_chosen"] = to_string(chosen);
    report["runs"] = runs;
    report["validation"] = {{"requested", validate}, {"all_match", validate ? all_match : true}};
    report["timings"] = {
        {"load_s", load_s}, {"order_s", order_s}, {"build_s", build_s}, {"bfs_s", bfs_s}};

    write_text(out_path, report.dump(2) + "\n");
    return validate && !all_match ? 1 : 0;
}

int cmd_sweep_w(const CommonArgs& args, const std::vector<std::uint32_t>& w_list,
                unsigned num_sources, const std::string& out_path) {
    const blest::Graph g = blest::load_graph(args.graph_path);
    for (std::uint32_t w : w_list)
        if (w == 0 || w % 8 != 0)
            throw CLI::ValidationError("--w-list", "window sizes must be positive multiples of 8");

    blest::AutoConfig cfg;
    cfg.engine.mode = args.mode == "auto" ? blest::EngineMode::Eager
                                          : blest::engine_mode_from_string(args.mode);
    cfg.engine.num_warps = args.warps;
    cfg.engine.workers = args.workers;
    cfg.engine.lazy_divergence_threshold = args.threshold;
    cfg.seed = args.seed;

    std::ostringstream csv;
    csv << "w,compression_ratio,mma_calls,update_divergence\r\n";
    for (std::uint32_t w : w_list) {
        blest::OrderingPlan plan;
        plan.strategy = blest::OrderingStrategy::JaccardWindows;
        plan.window_size = w;
        plan.pre_pass =
            args.ordering.pre_pass == "bfs-locality" ? blest::PrePass::BfsLocality
                                                     : blest::PrePass::None;
        plan.classification = blest::classify_social_like(g);
        const blest::Bvss b =
            obtain_bvss(g, plan, args.seed, args.workers, args.cache_dir, nullptr, nullptr);
        const auto sources = pick_sources(g, num_sources, {}, args.seed);
        std::uint64_t mma = 0;
        for (const blest::VertexId src : sources)
            mma += blest::run_auto_prebuilt(b, plan, src, cfg).counters.mma_calls;
        csv << w << ',' << csv_double(blest::compression_ratio(b)) << ',' << mma << ','
            << csv_double(blest::update_divergence(b)) << "\r\n";
    }
    write_text(out_path, csv.str());
    return 0;
}

int cmd_stats(const CommonArgs& args, const std::string& json_path) {
    const blest::Graph g = blest::load_graph(args.graph_path);
    OrderingOptions opts = args.ordering;
    if (opts.order == "auto") opts.order = "identity";  // stats default to the raw layout
    blest::SelectDefaults defaults = to_defaults(opts);
    const blest::OrderingPlan plan = blest::select_plan(g, 8, defaults);
    const blest::Bvss b =
        obtain_bvss(g, plan, args.seed, args.workers, args.cache_dir, nullptr, nullptr);
    const blest::BvssStats s = blest::bvss_stats(b);

    std::ostringstream out;
    out << "graph:                " << args.graph_path << "\n"
        << "n:                    " << g.num_vertices() << "\n"
        << "m:                    " << g.num_edges() << "\n"
        << "ordering:             " << b.ordering_tag << "\n"
        << "slice sets:           " << s.num_slice_sets << "\n"
        << "virtual slice sets:   " << s.num_vss << "\n"
        << "slices (padded):      " << s.num_slices_padded << "\n"
        << "slices (unpadded):    " << s.num_unpadded_slices << "\n"
        << "connectivity bits:    " << s.connectivity_bits << "\n"
        << "compression ratio:    " << csv_double(s.compression_ratio) << "\n"
        << "update divergence:    " << csv_double(s.update_divergence) << "\n"
        << "bytes realPtrs:       " << s.bytes_real_ptrs << "\n"
        << "bytes virtualToReal:  " << s.bytes_virtual_to_real << "\n"
        << "bytes rowIds:         " << s.bytes_row_ids << "\n"
        << "bytes masks:          " << s.bytes_masks << "\n"
        << "bytes static total:   " << s.bytes_static() << "\n"
        << "bytes dynamic:        " << s.bytes_dynamic << "\n"
        << "bytes levels:         " << s.bytes_levels << "\n";
    std::cout << out.str();
    if (!json_path.empty()) {
        json j = stats_json(s);
        j["graph"] = {{"path", args.graph_path}, {"n", g.num_vertices()}, {"m", g.num_edges()}};
        j["ordering"] = b.ordering_tag;
        write_text(json_path, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_compare(const CommonArgs& args, const std::vector<std::string>& orders,
                const std::string& out_path) {
    const blest::Graph g = blest::load_graph(args.graph_path);
    std::ostringstream csv;
    csv << "ordering,compression_ratio,update_divergence,order_seconds\r\n";
    std::cout << "ordering              compression   divergence    order_s\n";
    for (const std::string& name : orders) {
        OrderingOptions opts = args.ordering;
        opts.order = name;
        const blest::OrderingPlan plan = blest::select_plan(g, 8, to_defaults(opts));
        double order_s = 0, build_s = 0;
        const blest::Bvss b =
            obtain_bvss(g, plan, args.seed, args.workers, args.cache_dir, &order_s, &build_s);
        const double comp = blest::compression_ratio(b);
        const double div = blest::update_divergence(b);
        csv << name << ',' << csv_double(comp) << ',' << csv_double(div) << ','
            << csv_double(order_s) << "\r\n";
        std::printf("%-20s  %11.6f  %11.3f  %9.3f\n", name.c_str(), comp, div, order_s);
    }
    if (!out_path.empty()) write_text(out_path, csv.str());
    return 0;
}

int cmd_convert(const std::string& in_path, const std::string& out_path, std::string format) {
    const blest::Graph g = blest::load_graph(in_path);
    if (format.empty()) {
        const bool mtx = out_path.size() >= 4 && out_path.substr(out_path.size() - 4) == ".mtx";
        format = mtx ? "mtx" : "edges";
    }
    if (format == "mtx")
        blest::save_matrix_market(g, out_path);
    else if (format == "edges")
        blest::save_edge_list(g, out_path);
    else
        throw CLI::ValidationError("--format", "must be mtx or edges");
    std::cout << "wrote " << out_path << " (n=" << g.num_vertices() << ", m=" << g.num_edges()
              << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BVSS pull-BFS pipeline on an emulated bitwise MMA tile"};
    app.require_subcommand(1);

    CommonArgs run_args, sweep_args, stats_args, compare_args;
    unsigned run_sources = 16, sweep_sources = 4;
    std::vector<std::uint64_t> run_source_list;
    bool run_validate = false;
    std::string run_out, sweep_out, stats_json_path, compare_out;
    std::vector<std::uint32_t> sweep_w_list;
    std::vector<std::string> compare_orders;
    std::string convert_in, convert_out, convert_format;

    CLI::App* run = app.add_subcommand("run", "order, build, and run BFS with a report");
    add_common(run, run_args, true);
    run->add_option("--sources", run_sources, "number of seeded random sources")
        ->default_val(16);
    run->add_option("--source-list", run_source_list, "explicit source ids")->delimiter(',');
    run->add_flag("--validate", run_validate, "check levels against the reference BFS");
    run->add_option("--out", run_out, "report path (default: stdout)");

    CLI::App* sweep = app.add_subcommand("sweep-w", "sweep window sizes, emit CSV");
    add_common(sweep, sweep_args, true);
    sweep->add_option("--w-list", sweep_w_list, "window sizes to sweep")
        ->required()
        ->delimiter(',');
    sweep->add_option("--sources", sweep_sources, "sources per sweep point")->default_val(4);
    sweep->add_option("--out", sweep_out, "CSV path (default: stdout)");

    CLI::App* stats = app.add_subcommand("stats", "print structure statistics");
    add_common(stats, stats_args, false);
    stats->add_option("--json", stats_json_path, "also write stats as JSON");

    CLI::App* compare = app.add_subcommand("compare", "compare ordering strategies");
    add_common(compare, compare_args, false);
    compare->add_option("--orders", compare_orders, "orderings to compare")
        ->required()
        ->delimiter(',');
    compare->add_option("--out", compare_out, "CSV path");

    CLI::App* convert = app.add_subcommand("convert", "convert between graph formats");
    convert->add_option("input", convert_in, "input graph file")->required();
    convert->add_option("output", convert_out, "output graph file")->required();
    convert->add_option("--format", convert_format, "output format: mtx|edges");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(run_args, run_sources, run_source_list, run_validate, run_out);
        if (sweep->parsed()) return cmd_sweep_w(sweep_args, sweep_w_list, sweep_sources, sweep_out);
        if (stats->parsed()) return cmd_stats(stats_args, stats_json_path);
        if (compare->parsed()) return cmd_compare(compare_args, compare_orders, compare_out);
        if (convert->parsed()) return cmd_convert(convert_in, convert_out, convert_format);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
