#pragma once
// Multiple-changepoint machinery: sliding-window likelihood scans with
// h-local maximizers thresholded against the window null table, and the
// score-statistic scan with recursive binary segmentation against the
// bridge-sup table. Holm correction is applied across whatever family of
// tests a procedure actually ran.

#include <cstdint>
#include <vector>

#include "pacp/likelihood.hpp"
#include "pacp/network.hpp"
#include "pacp/null_table.hpp"

namespace pacp {

// Standard step-down adjustment; input order is preserved.
std::vector<double> holm_adjust(const std::vector<double>& p_values);

// Indices l with series[l] strictly above everything in (l-h, l) and at least
// everything in (l, l+h]; a flat plateau yields only its first index.
std::vector<std::int64_t> local_maximizers(const std::vector<double>& series, std::int64_t h);

enum class WindowStat {
    CrossedFit,     // each half-window likelihood evaluated at the other's MLE
    SplitVsPooled,  // classic split-vs-pooled ratio over the full window
};

struct WindowScanResult {
    std::vector<std::int64_t> positions;  // events before the split, stride 1
    std::vector<double> stat;
    std::int64_t h = 0;
    std::int64_t degenerate = 0;  // window pairs skipped as uninformative
};

WindowScanResult window_scan(const NetworkTrace& trace, std::int64_t h,
                             WindowStat kind = WindowStat::CrossedFit,
                             const FitOptions& fit = {});

struct ChangepointHit {
    std::int64_t events_before = 0;
    double t = 0.0;  // (events_before + seed_size)/n
    double stat = 0.0;
    double p_value = 1.0;
    double p_holm = 1.0;
    bool accepted = false;  // raw threshold decision, before any adjustment
};

struct SegmentSummary {
    std::int64_t e_begin = 0;
    std::int64_t e_end = 0;
    double delta_hat = 0.0;
    double se = 0.0;
    bool valid = false;  // false when the fit degenerated or had too few events
};

struct ChangepointReport {
    std::vector<ChangepointHit> hits;        // every candidate that was tested
    std::vector<std::int64_t> changepoints;  // splits surviving Holm, ascending
    std::vector<double> change_fractions;
    std::vector<SegmentSummary> segments;  // fits between the surviving splits
};

struct WindowOptions {
    std::int64_t h = 0;  // half-window length in events; required
    double alpha = 0.05;
    WindowStat stat = WindowStat::CrossedFit;
    FitOptions fit;
};

// Window scan + h-local maximizers, each compared to the (1-alpha) quantile
// of `table` (a window_max table whose fraction matches h/n).
ChangepointReport sara_detect(const NetworkTrace& trace, const WindowOptions& opt,
                              const NullTable& table);

struct ScoreScanResult {
    std::vector<std::int64_t> positions;  // absolute events-before values
    std::vector<double> stat;
    double delta_hat = 0.0;  // global fit over the scanned segment
    double sup = 0.0;
    std::int64_t argmax = 0;  // earliest position attaining sup
};

// Score statistic over the interior [gamma, 1-gamma] of the event segment
// [e_begin, e_end): one fit, then an O(length) sweep of prefix scores and
// prefix/suffix curvatures evaluated at the segment MLE.
ScoreScanResult score_scan(const NetworkTrace& trace, std::int64_t e_begin, std::int64_t e_end,
                           double gamma, const FitOptions& fit = {});

struct BinsegOptions {
    double gamma = 0.1;  // interior fraction of each segment under test
    double alpha = 0.05;
    std::int64_t min_len = 1000;  // shorter segments become leaves untested
    FitOptions fit;
};

struct SegNode {
    std::int64_t e_begin = 0;
    std::int64_t e_end = 0;
    bool tested = false;
    double stat = 0.0;
    double p_value = 1.0;
    double p_holm = 1.0;
    bool rejected = false;
    std::int64_t split = -1;  // absolute events-before when rejected
    int left = -1;            // indices into SegTree::nodes
    int right = -1;
};

struct SegTree {
    std::vector<SegNode> nodes;  // preorder; nodes[0] is the whole trace
};

struct BinsegResult {
    SegTree tree;
    ChangepointReport report;
};

BinsegResult binary_segmentation(const NetworkTrace& trace, const BinsegOptions& opt,
                                 const NullTable& table);

}  // namespace pacp
