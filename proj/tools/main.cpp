// pacp: command-line front end for the preferential-attachment changepoint
// library. Every subcommand maps onto one library operation; reports are JSON
// on stdout (or --out), series dumps are CSV. Output carries no timestamps or
// host details, so identical inputs produce byte-identical files.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pacp/common.hpp"
#include "pacp/edgelist.hpp"
#include "pacp/experiment.hpp"
#include "pacp/likelihood.hpp"
#include "pacp/lr_scan.hpp"
#include "pacp/multi_scan.hpp"
#include "pacp/network.hpp"
#include "pacp/nonparam.hpp"
#include "pacp/null_table.hpp"

namespace {

using nlohmann::ordered_json;

// Shared Monte-Carlo table knobs. Every subcommand that thresholds a scan
// against a null table exposes the same flags.
struct TableFlags {
    std::int64_t paths = 10000;
    std::int64_t grid = 5000;
    std::uint64_t seed = 715171u;
    std::string cache_dir;
    bool no_cache = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--table-paths", paths, "Monte-Carlo paths behind the null table")
            ->capture_default_str();
        cmd->add_option("--table-grid", grid, "time steps per simulated path")
            ->capture_default_str();
        cmd->add_option("--table-seed", seed, "seed for the table's path streams")
            ->capture_default_str();
        cmd->add_option("--cache-dir", cache_dir,
                        "table cache directory (default: $PACP_CACHE_DIR or ./pacp_cache)");
        cmd->add_flag("--no-cache", no_cache, "rebuild the table without reading or writing the cache");
    }

    pacp::NullTableOptions options() const {
        pacp::NullTableOptions opt;
        opt.paths = paths;
        opt.grid = grid;
        opt.seed = seed;
        opt.cache_dir = cache_dir;
        opt.use_cache = !no_cache;
        return opt;
    }
};

void emit_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw pacp::InvalidArgsError("cannot open for writing: " + out_path);
    out << text;
    out.flush();
    if (!out) throw pacp::InvalidArgsError("write failed: " + out_path);
}

void emit_report(const ordered_json& report, const std::string& out_path) {
    emit_text(report.dump(2) + "\n", out_path);
}

std::string slurp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pacp::InvalidArgsError("cannot open: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ordered_json hits_json(const std::vector<pacp::ChangepointHit>& hits) {
    ordered_json arr = ordered_json::array();
    for (const pacp::ChangepointHit& h : hits) {
        ordered_json row;
        row["events_before"] = h.events_before;
        row["t"] = h.t;
        row["stat"] = h.stat;
        row["p_value"] = h.p_value;
        row["p_holm"] = h.p_holm;
        row["accepted"] = h.accepted;
        arr.push_back(std::move(row));
    }
    return arr;
}

ordered_json segments_json(const std::vector<pacp::SegmentSummary>& segments) {
    ordered_json arr = ordered_json::array();
    for (const pacp::SegmentSummary& s : segments) {
        ordered_json row;
        row["e_begin"] = s.e_begin;
        row["e_end"] = s.e_end;
        row["valid"] = s.valid;
        if (s.valid) {
            row["delta_hat"] = s.delta_hat;
            row["se"] = s.se;
            row["ci95_lo"] = s.delta_hat - 1.96 * s.se;
            row["ci95_hi"] = s.delta_hat + 1.96 * s.se;
        } else {
            row["delta_hat"] = nullptr;
            row["se"] = nullptr;
            row["ci95_lo"] = nullptr;
            row["ci95_hi"] = nullptr;
        }
        arr.push_back(std::move(row));
    }
    return arr;
}

// Detection summary shared by the window and segment subcommands: surviving
// splits, their fractions, and the per-segment fits between them.
void fill_report_json(ordered_json& j, const pacp::ChangepointReport& rep,
                      const pacp::NetworkTrace& trace) {
    j["changepoints"] = rep.changepoints;
    j["change_fractions"] = rep.change_fractions;
    if (static_cast<std::int64_t>(trace.timestamps.size()) == trace.events() &&
        !trace.timestamps.empty()) {
        // A split after e events begins a new phase at event index e; report
        // that event's timestamp so splits can be placed on the real time axis.
        ordered_json stamps = ordered_json::array();
        for (std::int64_t cp : rep.changepoints)
            stamps.push_back(trace.timestamps[static_cast<std::size_t>(cp)]);
        j["changepoint_timestamps"] = std::move(stamps);
    }
    j["hits"] = hits_json(rep.hits);
    j["segments"] = segments_json(rep.segments);
}

pacp::NetworkTrace load_trace(const std::string& path) { return pacp::read_trace_csv(path); }

const char* error_kind(const pacp::Error& e) {
    if (dynamic_cast<const pacp::ParseError*>(&e)) return "parse";
    if (dynamic_cast<const pacp::EmptyInputError*>(&e)) return "empty_input";
    if (dynamic_cast<const pacp::InvalidArgsError*>(&e)) return "invalid_args";
    if (dynamic_cast<const pacp::TruncationError*>(&e)) return "truncation";
    if (dynamic_cast<const pacp::QuadratureError*>(&e)) return "quadrature";
    if (dynamic_cast<const pacp::DegenerateSegmentError*>(&e)) return "degenerate_segment";
    if (dynamic_cast<const pacp::OutOfRangeError*>(&e)) return "out_of_range";
    return "error";
}

struct SimulateArgs {
    std::int64_t n = 0;
    std::string regime;
    std::uint64_t seed = 1;
    std::string seed_kind = "self-loop";
    std::string out;
};

struct ScanArgs {
    std::string trace;
    double gamma = 0.1;
    double alpha = 0.05;
    std::int64_t stride = 0;
    TableFlags table;
    std::string out;
    std::string series;
};

struct WindowArgs {
    std::string trace;
    std::int64_t h = 0;
    double alpha = 0.05;
    std::string stat = "crossed";
    TableFlags table;
    std::string out;
    std::string series;
};

struct SegmentArgs {
    std::string trace;
    double gamma = 0.1;
    double alpha = 0.05;
    std::int64_t min_len = 1000;
    TableFlags table;
    std::string out;
};

struct NonparamArgs {
    std::string trace;
    double h_n = 0.0;
    double b_n = 0.0;
    std::int64_t max_degree = 64;
    std::int64_t stride = 1;
    std::string out;
    std::string series;
};

struct NullsimArgs {
    std::string kind;
    double param = 0.0;
    TableFlags table;
    std::string out;
};

struct ExperimentArgs {
    std::string config;
    std::string out;
};

struct AnalyzeArgs {
    std::string file;
    std::string format = "auto";
    std::string method = "score";
    double gamma = 0.1;
    double alpha = 0.05;
    std::int64_t h = 0;
    std::int64_t min_len = 1000;
    std::int64_t hd_window = 0;
    std::int64_t hd_min_degree = 5;
    TableFlags table;
    std::string out;
    std::string series;
};

void run_simulate(const SimulateArgs& a) {
    pacp::AttachmentRegime regime = pacp::parse_regime(a.regime);
    pacp::SeedKind kind = a.seed_kind == "two-node" ? pacp::SeedKind::TwoNodesDoubleEdge
                                                    : pacp::SeedKind::SelfLoopNode;
    pacp::NetworkTrace trace = pacp::simulate(a.n, regime, kind, a.seed);
    pacp::write_trace_csv(trace, a.out);
}

void run_scan_lr(const ScanArgs& a) {
    pacp::NetworkTrace trace = load_trace(a.trace);
    pacp::LrScanOptions opt;
    opt.gamma = a.gamma;
    opt.stride = a.stride;
    pacp::LrScanResult res = pacp::lr_scan(trace, opt);
    pacp::NullTable table = pacp::bridge_sup_table(a.gamma, a.table.options());
    const double threshold = table.quantile(1.0 - a.alpha);

    ordered_json j;
    j["command"] = "scan-lr";
    j["input"] = a.trace;
    j["n"] = trace.n;
    j["events"] = trace.events();
    j["gamma"] = a.gamma;
    j["alpha"] = a.alpha;
    j["stride"] = res.stride;
    j["stat"] = res.stat;
    j["threshold"] = threshold;
    j["p_value"] = table.p_value(res.stat);
    j["reject"] = res.stat > threshold;
    j["m_hat"] = res.m_hat;
    j["t_hat"] = res.t_hat;
    j["delta_pre"] = res.delta_pre;
    j["delta_post"] = res.delta_post;
    j["delta_full"] = res.delta_full;

    if (!a.series.empty()) {
        std::string csv = "events_before,stat,delta_pre,delta_post\n";
        for (const pacp::LrScanPoint& p : res.points) {
            csv += std::to_string(p.events_before);
            csv += ',';
            csv += pacp::format_double(p.stat);
            csv += ',';
            csv += pacp::format_double(p.delta_pre);
            csv += ',';
            csv += pacp::format_double(p.delta_post);
            csv += '\n';
        }
        emit_text(csv, a.series);
        j["series"] = a.series;
    }
    emit_report(j, a.out);
}

void run_scan_score(const ScanArgs& a) {
    pacp::NetworkTrace trace = load_trace(a.trace);
    pacp::ScoreScanResult res = pacp::score_scan(trace, 0, trace.events(), a.gamma);
    pacp::NullTable table = pacp::bridge_sup_table(a.gamma, a.table.options());
    const double threshold = table.quantile(1.0 - a.alpha);

    ordered_json j;
    j["command"] = "scan-score";
    j["input"] = a.trace;
    j["n"] = trace.n;
    j["events"] = trace.events();
    j["gamma"] = a.gamma;
    j["alpha"] = a.alpha;
    j["stat"] = res.sup;
    j["threshold"] = threshold;
    j["p_value"] = table.p_value(res.sup);
    j["reject"] = res.sup > threshold;
    j["m_hat"] = res.argmax;
    j["t_hat"] = static_cast<double>(res.argmax + trace.seed_size()) / static_cast<double>(trace.n);
    j["delta_hat"] = res.delta_hat;

    if (!a.series.empty()) {
        std::string csv = "events_before,stat\n";
        for (std::size_t i = 0; i < res.positions.size(); ++i) {
            csv += std::to_string(res.positions[i]);
            csv += ',';
            csv += pacp::format_double(res.stat[i]);
            csv += '\n';
        }
        emit_text(csv, a.series);
        j["series"] = a.series;
    }
    emit_report(j, a.out);
}

void run_scan_window(const WindowArgs& a) {
    pacp::NetworkTrace trace = load_trace(a.trace);
    pacp::WindowOptions opt;
    opt.h = a.h;
    opt.alpha = a.alpha;
    opt.stat = a.stat == "split" ? pacp::WindowStat::SplitVsPooled : pacp::WindowStat::CrossedFit;
    const double s = static_cast<double>(a.h) / static_cast<double>(trace.n);
    pacp::NullTable table = pacp::window_max_table(s, a.table.options());
    pacp::ChangepointReport rep = pacp::sara_detect(trace, opt, table);

    ordered_json j;
    j["command"] = "scan-window";
    j["input"] = a.trace;
    j["n"] = trace.n;
    j["events"] = trace.events();
    j["h"] = a.h;
    j["stat_kind"] = a.stat;
    j["alpha"] = a.alpha;
    j["threshold"] = table.quantile(1.0 - a.alpha);
    fill_report_json(j, rep, trace);

    if (!a.series.empty()) {
        // The detector does not expose its internal sweep, so the series dump
        // rescans the trace once more.
        pacp::WindowScanResult scan = pacp::window_scan(trace, a.h, opt.stat);
        std::string csv = "events_before,stat\n";
        for (std::size_t i = 0; i < scan.positions.size(); ++i) {
            csv += std::to_string(scan.positions[i]);
            csv += ',';
            csv += pacp::format_double(scan.stat[i]);
            csv += '\n';
        }
        emit_text(csv, a.series);
        j["series"] = a.series;
        j["degenerate_windows"] = scan.degenerate;
    }
    emit_report(j, a.out);
}

void run_segment(const SegmentArgs& a) {
    pacp::NetworkTrace trace = load_trace(a.trace);
    pacp::BinsegOptions opt;
    opt.gamma = a.gamma;
    opt.alpha = a.alpha;
    opt.min_len = a.min_len;
    pacp::NullTable table = pacp::bridge_sup_table(a.gamma, a.table.options());
    pacp::BinsegResult res = pacp::binary_segmentation(trace, opt, table);

    ordered_json j;
    j["command"] = "segment";
    j["input"] = a.trace;
    j["n"] = trace.n;
    j["events"] = trace.events();
    j["gamma"] = a.gamma;
    j["alpha"] = a.alpha;
    j["min_len"] = a.min_len;
    j["threshold"] = table.quantile(1.0 - a.alpha);
    fill_report_json(j, res.report, trace);

    ordered_json tree = ordered_json::array();
    for (const pacp::SegNode& node : res.tree.nodes) {
        ordered_json row;
        row["e_begin"] = node.e_begin;
        row["e_end"] = node.e_end;
        row["tested"] = node.tested;
        if (node.tested) {
            row["stat"] = node.stat;
            row["p_value"] = node.p_value;
            row["p_holm"] = node.p_holm;
        }
        row["rejected"] = node.rejected;
        row["split"] = node.split;
        row["left"] = node.left;
        row["right"] = node.right;
        tree.push_back(std::move(row));
    }
    j["tree"] = std::move(tree);
    emit_report(j, a.out);
}

void run_nonparam(const NonparamArgs& a) {
    pacp::NetworkTrace trace = load_trace(a.trace);
    pacp::NPConfig cfg;
    cfg.h_n = a.h_n;
    cfg.b_n = a.b_n;
    cfg.max_degree = a.max_degree;
    cfg.stride = a.stride;
    pacp::NPResult res = pacp::np_estimate(trace, cfg);

    ordered_json j;
    j["command"] = "nonparam";
    j["input"] = a.trace;
    j["n"] = trace.n;
    j["events"] = trace.events();
    j["h_n"] = cfg.resolved_h(trace.n);
    j["b_n"] = cfg.resolved_b(trace.n);
    j["max_degree"] = a.max_degree;
    j["stride"] = a.stride;
    j["t_ref"] = res.t_ref;
    j["threshold"] = res.threshold;
    j["detected"] = res.t_hat.has_value();
    if (res.t_hat.has_value())
        j["t_hat"] = *res.t_hat;
    else
        j["t_hat"] = nullptr;
    j["warnings"] = res.warnings;

    if (!a.series.empty()) {
        std::string csv = "t,distance,threshold\n";
        for (std::size_t i = 0; i < res.t.size(); ++i) {
            csv += pacp::format_double(res.t[i]);
            csv += ',';
            csv += pacp::format_double(res.distance[i]);
            csv += ',';
            csv += pacp::format_double(res.threshold);
            csv += '\n';
        }
        emit_text(csv, a.series);
        j["series"] = a.series;
    }
    emit_report(j, a.out);
}

void run_nullsim(const NullsimArgs& a) {
    pacp::NullTable table = a.kind == "bridge" ? pacp::bridge_sup_table(a.param, a.table.options())
                                               : pacp::window_max_table(a.param, a.table.options());
    ordered_json j;
    j["command"] = "nullsim";
    j["kind"] = table.kind();
    j["param"] = table.param();
    j["samples"] = table.size();
    ordered_json q;
    for (double p : {0.50, 0.80, 0.90, 0.95, 0.975, 0.99}) {
        char key[8];
        std::snprintf(key, sizeof key, "%.3f", p);
        q[key] = table.quantile(p);
    }
    j["quantiles"] = std::move(q);
    if (!a.table.no_cache)
        j["cache_dir"] = pacp::null_cache_dir(a.table.cache_dir);
    else
        j["cache_dir"] = nullptr;
    emit_report(j, a.out);
}

void run_experiment_cmd(const ExperimentArgs& a) {
    pacp::ExperimentSpec spec = pacp::experiment_spec_from_json(slurp_file(a.config));
    pacp::ExperimentResult res = pacp::run_experiment(spec);
    emit_text(pacp::experiment_result_to_json(res), a.out);
}

void run_analyze(const AnalyzeArgs& a) {
    pacp::EdgeFormat fmt = pacp::EdgeFormat::Auto;
    if (a.format == "whitespace") fmt = pacp::EdgeFormat::Whitespace;
    if (a.format == "csv") fmt = pacp::EdgeFormat::Csv;

    std::vector<pacp::TemporalEdge> edges = pacp::read_edgelist(a.file, fmt);
    pacp::PreprocessResult pre = pacp::preprocess_single_action(edges);
    if (pre.edges.empty())
        throw pacp::EmptyInputError("no edges remain after the single-action filter");
    pacp::NetworkTrace trace = pacp::trace_from_edges(pre.edges);

    ordered_json j;
    j["command"] = "analyze-edgelist";
    j["input"] = a.file;
    j["edges_total"] = static_cast<std::int64_t>(edges.size());
    j["sources_total"] = pre.total_sources;
    j["retained_sources"] = pre.retained_sources;
    j["retained_fraction"] = pre.retained_fraction;
    j["events"] = trace.events();
    j["nodes"] = static_cast<std::int64_t>(trace.original_ids.size()) - 1;
    j["method"] = a.method;
    j["alpha"] = a.alpha;

    if (a.method == "lr") {
        pacp::LrScanOptions opt;
        opt.gamma = a.gamma;
        pacp::LrScanResult res = pacp::lr_scan(trace, opt);
        pacp::NullTable table = pacp::bridge_sup_table(a.gamma, a.table.options());
        const double threshold = table.quantile(1.0 - a.alpha);
        const bool reject = res.stat > threshold;
        j["gamma"] = a.gamma;
        j["stat"] = res.stat;
        j["threshold"] = threshold;
        j["p_value"] = table.p_value(res.stat);
        j["reject"] = reject;
        j["t_hat"] = res.t_hat;
        j["delta_pre"] = res.delta_pre;
        j["delta_post"] = res.delta_post;
        j["delta_full"] = res.delta_full;
        ordered_json cps = ordered_json::array();
        if (reject) cps.push_back(res.m_hat);
        j["changepoints"] = std::move(cps);
    } else if (a.method == "window") {
        // Default half-window: a tenth of the event count.
        const std::int64_t h = a.h > 0 ? a.h : std::max<std::int64_t>(trace.events() / 10, 1);
        pacp::WindowOptions opt;
        opt.h = h;
        opt.alpha = a.alpha;
        const double s = static_cast<double>(h) / static_cast<double>(trace.n);
        pacp::NullTable table = pacp::window_max_table(s, a.table.options());
        pacp::ChangepointReport rep = pacp::sara_detect(trace, opt, table);
        j["h"] = h;
        j["threshold"] = table.quantile(1.0 - a.alpha);
        fill_report_json(j, rep, trace);
    } else {
        pacp::BinsegOptions opt;
        opt.gamma = a.gamma;
        opt.alpha = a.alpha;
        opt.min_len = a.min_len;
        pacp::NullTable table = pacp::bridge_sup_table(a.gamma, a.table.options());
        pacp::BinsegResult res = pacp::binary_segmentation(trace, opt, table);
        j["gamma"] = a.gamma;
        j["min_len"] = a.min_len;
        j["threshold"] = table.quantile(1.0 - a.alpha);
        fill_report_json(j, res.report, trace);
    }

    if (!a.series.empty()) {
        const std::int64_t window =
            a.hd_window > 0 ? a.hd_window : std::max<std::int64_t>(trace.events() / 50, 1);
        std::vector<double> share =
            pacp::sliding_high_degree_proportion(trace, window, a.hd_min_degree);
        const bool with_ts =
            static_cast<std::int64_t>(trace.timestamps.size()) == trace.events();
        std::string csv = with_ts ? "event_index,timestamp,high_degree_share\n"
                                  : "event_index,high_degree_share\n";
        for (std::size_t i = 0; i < share.size(); ++i) {
            csv += std::to_string(i);
            if (with_ts) {
                csv += ',';
                csv += pacp::format_double(trace.timestamps[i]);
            }
            csv += ',';
            csv += pacp::format_double(share[i]);
            csv += '\n';
        }
        emit_text(csv, a.series);
        j["series"] = a.series;
        j["series_window"] = window;
        j["series_min_degree"] = a.hd_min_degree;
    }
    emit_report(j, a.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulate preferential-attachment networks and locate attachment changepoints"};
    app.require_subcommand(1);
    bool json_errors = false;
    app.add_flag("--json-errors", json_errors, "report failures as JSON on stdout");

    SimulateArgs sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "grow a network and write its event trace");
    c_sim->add_option("--n", sim.n, "final node count")->required();
    c_sim->add_option("--regime", sim.regime,
                      "attachment rule, e.g. \"1\" or \"0.6:0,0.5\" or \"0.6:1,0^0.5\"")
        ->required();
    c_sim->add_option("--seed", sim.seed, "random seed")->capture_default_str();
    c_sim->add_option("--seed-kind", sim.seed_kind, "initial graph")
        ->check(CLI::IsMember({"self-loop", "two-node"}))
        ->capture_default_str();
    c_sim->add_option("--out", sim.out, "trace CSV path")->required();
    c_sim->callback([&] { run_simulate(sim); });

    ScanArgs lr;
    CLI::App* c_lr = app.add_subcommand("scan-lr", "likelihood-ratio scan for one changepoint");
    c_lr->add_option("trace", lr.trace, "trace CSV from simulate")->required();
    c_lr->add_option("--gamma", lr.gamma, "interior fraction scanned")->capture_default_str();
    c_lr->add_option("--alpha", lr.alpha, "test level")->capture_default_str();
    c_lr->add_option("--stride", lr.stride, "events between scan positions (0 = auto)")
        ->capture_default_str();
    lr.table.attach(c_lr);
    c_lr->add_option("--out", lr.out, "report path (default stdout)");
    c_lr->add_option("--series", lr.series, "write the per-position scan as CSV");
    c_lr->callback([&] { run_scan_lr(lr); });

    ScanArgs score;
    CLI::App* c_score = app.add_subcommand("scan-score", "score-statistic scan for one changepoint");
    c_score->add_option("trace", score.trace, "trace CSV from simulate")->required();
    c_score->add_option("--gamma", score.gamma, "interior fraction scanned")->capture_default_str();
    c_score->add_option("--alpha", score.alpha, "test level")->capture_default_str();
    score.table.attach(c_score);
    c_score->add_option("--out", score.out, "report path (default stdout)");
    c_score->add_option("--series", score.series, "write the per-position scan as CSV");
    c_score->callback([&] { run_scan_score(score); });

    WindowArgs win;
    CLI::App* c_win = app.add_subcommand("scan-window", "rolling-window scan for multiple changepoints");
    c_win->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
    c_win->add_option("trace", win.trace, "trace CSV from simulate")->required();
    c_win->add_option("--h", win.h, "half-window length in events")->required();
    c_win->add_option("--alpha", win.alpha, "per-candidate test level")->capture_default_str();
    c_win->add_option("--stat", win.stat, "window statistic")
        ->check(CLI::IsMember({"crossed", "split"}))
        ->capture_default_str();
    win.table.attach(c_win);
    c_win->add_option("--out", win.out, "report path (default stdout)");
    c_win->add_option("--series", win.series, "write the rolling statistic as CSV");
    c_win->callback([&] { run_scan_window(win); });

    SegmentArgs seg;
    CLI::App* c_seg = app.add_subcommand("segment", "recursive segmentation into constant-rule pieces");
    c_seg->add_option("trace", seg.trace, "trace CSV from simulate")->required();
    c_seg->add_option("--gamma", seg.gamma, "interior fraction per segment")->capture_default_str();
    c_seg->add_option("--alpha", seg.alpha, "per-test level")->capture_default_str();
    c_seg->add_option("--min-len", seg.min_len, "segments shorter than this stay untested")
        ->capture_default_str();
    seg.table.attach(c_seg);
    c_seg->add_option("--out", seg.out, "report path (default stdout)");
    c_seg->callback([&] { run_segment(seg); });

    NonparamArgs np;
    CLI::App* c_np = app.add_subcommand("nonparam", "model-free changepoint estimate from degree drift");
    c_np->add_option("trace", np.trace, "trace CSV from simulate")->required();
    c_np->add_option("--h-n", np.h_n, "reference-fraction parameter (0 = log log n)")
        ->capture_default_str();
    c_np->add_option("--b-n", np.b_n, "threshold parameter (0 = n^(1/log log n))")
        ->capture_default_str();
    c_np->add_option("--max-degree", np.max_degree, "degrees entering the distance")
        ->capture_default_str();
    c_np->add_option("--stride", np.stride, "events between scanned fractions")
        ->capture_default_str();
    c_np->add_option("--out", np.out, "report path (default stdout)");
    c_np->add_option("--series", np.series, "write the distance series as CSV");
    c_np->callback([&] { run_nonparam(np); });

    NullsimArgs nullsim;
    CLI::App* c_null = app.add_subcommand("nullsim", "build or inspect a Monte-Carlo null table");
    c_null->add_option("--kind", nullsim.kind, "bridge: sup-statistic law; window: rolling-max law")
        ->check(CLI::IsMember({"bridge", "window"}))
        ->required();
    c_null->add_option("--param", nullsim.param,
                       "gamma for bridge tables, h/n for window tables")
        ->required();
    nullsim.table.attach(c_null);
    c_null->add_option("--out", nullsim.out, "report path (default stdout)");
    c_null->callback([&] { run_nullsim(nullsim); });

    ExperimentArgs exp;
    CLI::App* c_exp = app.add_subcommand("experiment", "run a replicated study from a JSON config");
    c_exp->add_option("config", exp.config, "experiment config JSON")->required();
    c_exp->add_option("--out", exp.out, "result path (default stdout)");
    c_exp->callback([&] { run_experiment_cmd(exp); });

    AnalyzeArgs an;
    CLI::App* c_an = app.add_subcommand("analyze-edgelist", "changepoint analysis of a temporal edge list");
    c_an->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
    c_an->add_option("file", an.file, "edge list (source, target, timestamp)")->required();
    c_an->add_option("--format", an.format, "input format")
        ->check(CLI::IsMember({"auto", "whitespace", "csv"}))
        ->capture_default_str();
    c_an->add_option("--method", an.method, "detector to run")
        ->check(CLI::IsMember({"score", "window", "lr"}))
        ->capture_default_str();
    c_an->add_option("--gamma", an.gamma, "interior fraction (score, lr)")->capture_default_str();
    c_an->add_option("--alpha", an.alpha, "test level")->capture_default_str();
    c_an->add_option("--h", an.h, "half-window length for --method window (0 = events/10)")
        ->capture_default_str();
    c_an->add_option("--min-len", an.min_len, "minimum tested segment for --method score")
        ->capture_default_str();
    c_an->add_option("--hd-window", an.hd_window,
                     "window for the high-degree share series (0 = events/50)")
        ->capture_default_str();
    c_an->add_option("--hd-min-degree", an.hd_min_degree,
                     "degree counted as high in the share series")
        ->capture_default_str();
    an.table.attach(c_an);
    c_an->add_option("--out", an.out, "report path (default stdout)");
    c_an->add_option("--series", an.series, "write the high-degree share series as CSV");
    c_an->callback([&] { run_analyze(an); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const pacp::Error& e) {
        if (json_errors) {
            ordered_json j;
            ordered_json detail;
            detail["kind"] = error_kind(e);
            detail["message"] = e.what();
            if (const auto* pe = dynamic_cast<const pacp::ParseError*>(&e)) {
                detail["bad_count"] = pe->bad_count;
                detail["bad_samples"] = pe->bad_samples;
            }
            j["error"] = std::move(detail);
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return 1;
    } catch (const std::exception& e) {
        if (json_errors) {
            ordered_json j;
            j["error"] = {{"kind", "internal"}, {"message", e.what()}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return 2;
    }
    return 0;
}
