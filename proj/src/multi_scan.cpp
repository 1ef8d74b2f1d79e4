#include "pacp/multi_scan.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

namespace pacp {

namespace {

constexpr double kCurvatureFloor = -1e-12;  // treat flatter prefixes as uninformative

// max of the h entries strictly before each index (-inf when there are none)
std::vector<double> preceding_maxima(const std::vector<double>& s, std::int64_t h) {
    const std::int64_t n = static_cast<std::int64_t>(s.size());
    std::vector<double> out(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
    std::deque<std::int64_t> dq;  // indices with decreasing values, front is the window max
    for (std::int64_t i = 0; i < n; ++i) {
        while (!dq.empty() && dq.front() < i - h) dq.pop_front();
        if (!dq.empty()) out[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(dq.front())];
        while (!dq.empty() && s[static_cast<std::size_t>(dq.back())] <= s[static_cast<std::size_t>(i)]) {
            dq.pop_back();
        }
        dq.push_back(i);
    }
    return out;
}

void neighbor_maxima(const std::vector<double>& s, std::int64_t h, std::vector<double>* before,
                     std::vector<double>* after) {
    *before = preceding_maxima(s, h);
    std::vector<double> rev(s.rbegin(), s.rend());
    std::vector<double> rev_before = preceding_maxima(rev, h);
    after->assign(rev_before.rbegin(), rev_before.rend());
}

void require_table(const NullTable& table, const char* kind, double param) {
    if (table.kind() != kind || std::abs(table.param() - param) > 1e-12 + 1e-9 * std::abs(param)) {
        throw InvalidArgsError("null table mismatch: need " + std::string(kind) + " at parameter " +
                               format_double(param) + ", got " + table.kind() + " at " +
                               format_double(table.param()));
    }
}

SegmentSummary summarize_segment(const NetworkTrace& trace, std::int64_t a, std::int64_t b,
                                 const FitOptions& fit) {
    SegmentSummary s;
    s.e_begin = a;
    s.e_end = b;
    try {
        SegmentFit f = fit_segment(transition_histogram(trace, a, b), fit);
        s.delta_hat = f.delta_hat;
        s.se = f.se();
        s.valid = f.converged;
    } catch (const Error&) {
        s.valid = false;
    }
    return s;
}

void fill_segments(const NetworkTrace& trace, const std::vector<std::int64_t>& cps,
                   const FitOptions& fit, ChangepointReport* report) {
    std::int64_t prev = 0;
    for (std::int64_t cp : cps) {
        report->segments.push_back(summarize_segment(trace, prev, cp, fit));
        prev = cp;
    }
    report->segments.push_back(summarize_segment(trace, prev, trace.events(), fit));
}

double fraction_of(const NetworkTrace& trace, std::int64_t events_before) {
    return static_cast<double>(events_before + trace.seed_size()) / static_cast<double>(trace.n);
}

}  // namespace

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
    const std::size_t m = p_values.size();
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgsError("p-values must lie in [0, 1]");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    std::vector<double> out(m, 0.0);
    double running = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        double scaled = static_cast<double>(m - r) * p_values[order[r]];
        running = std::max(running, std::min(1.0, scaled));
        out[order[r]] = running;
    }
    return out;
}

std::vector<std::int64_t> local_maximizers(const std::vector<double>& series, std::int64_t h) {
    if (h < 1) throw InvalidArgsError("local maximizer radius must be >= 1");
    std::vector<std::int64_t> out;
    if (series.empty()) return out;
    std::vector<double> before, after;
    neighbor_maxima(series, h, &before, &after);
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i] > before[i] && series[i] >= after[i]) {
            out.push_back(static_cast<std::int64_t>(i));
        }
    }
    return out;
}

WindowScanResult window_scan(const NetworkTrace& trace, std::int64_t h, WindowStat kind,
                             const FitOptions& fit) {
    const std::int64_t M = trace.events();
    if (h < 1 || 2 * h > M) throw InvalidArgsError("window must satisfy 1 <= h and 2h <= events");
    if (h < fit.min_events) throw InvalidArgsError("window shorter than min_events");

    WindowScanResult res;
    res.h = h;
    res.positions.reserve(static_cast<std::size_t>(M - 2 * h + 1));
    res.stat.reserve(static_cast<std::size_t>(M - 2 * h + 1));

    TransitionHistogram left = transition_histogram(trace, 0, h);
    TransitionHistogram right = transition_histogram(trace, h, 2 * h);
    TransitionHistogram pooled;
    if (kind == WindowStat::SplitVsPooled) pooled = transition_histogram(trace, 0, 2 * h);

    FitOptions lopt = fit;
    FitOptions ropt = fit;
    FitOptions popt = fit;
    for (std::int64_t k = h;; ++k) {
        double stat = 0.0;
        try {
            SegmentFit fl = fit_segment(left, lopt);
            SegmentFit fr = fit_segment(right, ropt);
            lopt.init = fl.delta_hat;
            ropt.init = fr.delta_hat;
            if (kind == WindowStat::CrossedFit) {
                stat = 2.0 * (fl.loglik + fr.loglik - segment_loglik(left, fr.delta_hat) -
                              segment_loglik(right, fl.delta_hat));
            } else {
                SegmentFit fp = fit_segment(pooled, popt);
                popt.init = fp.delta_hat;
                stat = 2.0 * (fl.loglik + fr.loglik - fp.loglik);
            }
            stat = std::max(0.0, stat);
        } catch (const DegenerateSegmentError&) {
            stat = 0.0;
            res.degenerate += 1;
        }
        res.positions.push_back(k);
        res.stat.push_back(stat);
        if (k == M - h) break;
        // slide both half-windows one event to the right
        std::int64_t out_l = trace.pre_degree[static_cast<std::size_t>(k - h)];
        std::int64_t mid = trace.pre_degree[static_cast<std::size_t>(k)];
        std::int64_t in_r = trace.pre_degree[static_cast<std::size_t>(k + h)];
        left.add(mid, trace.nodes_before(k));
        left.remove(out_l, trace.nodes_before(k - h));
        right.add(in_r, trace.nodes_before(k + h));
        right.remove(mid, trace.nodes_before(k));
        if (kind == WindowStat::SplitVsPooled) {
            pooled.add(in_r, trace.nodes_before(k + h));
            pooled.remove(out_l, trace.nodes_before(k - h));
        }
    }
    return res;
}

ChangepointReport sara_detect(const NetworkTrace& trace, const WindowOptions& opt,
                              const NullTable& table) {
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw InvalidArgsError("alpha must lie in (0, 1)");
    const double s = static_cast<double>(opt.h) / static_cast<double>(trace.n);
    require_table(table, "window_max", s);

    WindowScanResult scan = window_scan(trace, opt.h, opt.stat, opt.fit);
    std::vector<std::int64_t> maxima = local_maximizers(scan.stat, opt.h);
    const double threshold = table.quantile(1.0 - opt.alpha);

    ChangepointReport report;
    std::vector<double> raw_p;
    for (std::int64_t idx : maxima) {
        ChangepointHit hit;
        hit.events_before = scan.positions[static_cast<std::size_t>(idx)];
        hit.t = fraction_of(trace, hit.events_before);
        hit.stat = scan.stat[static_cast<std::size_t>(idx)];
        hit.p_value = table.p_value(hit.stat);
        hit.accepted = hit.stat > threshold;
        report.hits.push_back(hit);
        raw_p.push_back(hit.p_value);
    }
    std::vector<double> adj = holm_adjust(raw_p);
    for (std::size_t i = 0; i < adj.size(); ++i) report.hits[i].p_holm = adj[i];

    // accepted records the raw threshold decision (the per-test positive);
    // the reported changepoint set keeps only hits surviving Holm at level alpha
    for (const ChangepointHit& hit : report.hits) {
        if (hit.accepted && hit.p_holm <= opt.alpha) {
            report.changepoints.push_back(hit.events_before);
            report.change_fractions.push_back(hit.t);
        }
    }
    fill_segments(trace, report.changepoints, opt.fit, &report);
    return report;
}

ScoreScanResult score_scan(const NetworkTrace& trace, std::int64_t e_begin, std::int64_t e_end,
                           double gamma, const FitOptions& fit) {
    if (e_begin < 0 || e_end > trace.events() || e_begin >= e_end) {
        throw InvalidArgsError("score scan range out of bounds");
    }
    if (!(gamma > 0.0 && gamma < 0.5)) throw InvalidArgsError("gamma must lie in (0, 0.5)");
    const std::int64_t L = e_end - e_begin;
    std::int64_t lo = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::ceil(gamma * static_cast<double>(L))));
    std::int64_t hi = std::min<std::int64_t>(
        L - 1, static_cast<std::int64_t>(std::floor((1.0 - gamma) * static_cast<double>(L))));
    if (lo > hi) throw InvalidArgsError("segment too short for this gamma");

    TransitionHistogram hist = transition_histogram(trace, e_begin, e_end);
    SegmentFit fitted = fit_segment(hist, fit);
    const double lam = fitted.delta_hat;
    const double inv2 = 1.0 / (2.0 + lam);

    double total_curv = segment_hessian(hist, lam);
    ScoreScanResult res;
    res.delta_hat = lam;
    res.positions.reserve(static_cast<std::size_t>(hi - lo + 1));
    res.stat.reserve(static_cast<std::size_t>(hi - lo + 1));

    double u_pre = 0.0;
    double c_pre = 0.0;
    res.sup = -1.0;
    for (std::int64_t m = 1; m <= hi; ++m) {
        double d = static_cast<double>(trace.pre_degree[static_cast<std::size_t>(e_begin + m - 1)]);
        double inv = 1.0 / (d + lam);
        u_pre += inv - inv2;
        c_pre += inv2 * inv2 - inv * inv;
        if (m < lo) continue;
        double c_suf = total_curv - c_pre;
        double stat = 0.0;
        if (c_pre < kCurvatureFloor && c_suf < kCurvatureFloor) {
            stat = -(u_pre * u_pre) * (1.0 / c_pre + 1.0 / c_suf);
        }
        res.positions.push_back(e_begin + m);
        res.stat.push_back(stat);
        if (stat > res.sup) {
            res.sup = stat;
            res.argmax = e_begin + m;
        }
    }
    return res;
}

namespace {

int binseg_recurse(const NetworkTrace& trace, const BinsegOptions& opt, const NullTable& table,
                   double threshold, std::int64_t a, std::int64_t b, SegTree* tree) {
    int idx = static_cast<int>(tree->nodes.size());
    tree->nodes.push_back(SegNode{});
    tree->nodes[static_cast<std::size_t>(idx)].e_begin = a;
    tree->nodes[static_cast<std::size_t>(idx)].e_end = b;
    if (b - a < opt.min_len) return idx;

    ScoreScanResult scan = score_scan(trace, a, b, opt.gamma, opt.fit);
    {
        SegNode& node = tree->nodes[static_cast<std::size_t>(idx)];
        node.tested = true;
        node.stat = scan.sup;
        node.p_value = table.p_value(scan.sup);
        node.split = scan.argmax;
        node.rejected = scan.sup > threshold;
    }
    if (tree->nodes[static_cast<std::size_t>(idx)].rejected) {
        int l = binseg_recurse(trace, opt, table, threshold, a, scan.argmax, tree);
        int r = binseg_recurse(trace, opt, table, threshold, scan.argmax, b, tree);
        tree->nodes[static_cast<std::size_t>(idx)].left = l;
        tree->nodes[static_cast<std::size_t>(idx)].right = r;
    }
    return idx;
}

}  // namespace

BinsegResult binary_segmentation(const NetworkTrace& trace, const BinsegOptions& opt,
                                 const NullTable& table) {
    if (!(opt.alpha > 0.0 && opt.alpha < 1.0)) throw InvalidArgsError("alpha must lie in (0, 1)");
    if (opt.min_len < 2) throw InvalidArgsError("min_len must be at least 2");
    require_table(table, "bridge_sup", opt.gamma);

    BinsegResult res;
    const double threshold = table.quantile(1.0 - opt.alpha);
    binseg_recurse(trace, opt, table, threshold, 0, trace.events(), &res.tree);

    std::vector<std::size_t> tested;
    std::vector<double> raw_p;
    for (std::size_t i = 0; i < res.tree.nodes.size(); ++i) {
        if (res.tree.nodes[i].tested) {
            tested.push_back(i);
            raw_p.push_back(res.tree.nodes[i].p_value);
        }
    }
    std::vector<double> adj = holm_adjust(raw_p);
    for (std::size_t j = 0; j < tested.size(); ++j) res.tree.nodes[tested[j]].p_holm = adj[j];

    for (std::size_t i : tested) {
        const SegNode& node = res.tree.nodes[i];
        ChangepointHit hit;
        hit.events_before = node.split;
        hit.t = fraction_of(trace, node.split);
        hit.stat = node.stat;
        hit.p_value = node.p_value;
        hit.p_holm = node.p_holm;
        hit.accepted = node.rejected;
        res.report.hits.push_back(hit);
        // recursion is driven by the raw threshold; the reported set keeps the
        // splits whose adjusted p-values survive at level alpha
        if (node.rejected && node.p_holm <= opt.alpha) {
            res.report.changepoints.push_back(node.split);
        }
    }
    std::sort(res.report.changepoints.begin(), res.report.changepoints.end());
    for (std::int64_t cp : res.report.changepoints) {
        res.report.change_fractions.push_back(fraction_of(trace, cp));
    }
    fill_segments(trace, res.report.changepoints, opt.fit, &res.report);
    return res;
}

}  // namespace pacp
