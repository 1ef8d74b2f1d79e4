#include "pacp/lr_scan.hpp"

#include <algorithm>
#include <cmath>

namespace pacp {

LrScanResult lr_scan(const NetworkTrace& trace, const LrScanOptions& opt) {
    if (!(opt.gamma > 0.0 && opt.gamma < 0.5)) {
        throw InvalidArgsError("scan gamma must lie in (0, 0.5)");
    }
    if (opt.stride < 0) throw InvalidArgsError("stride must be nonnegative");
    const std::int64_t M = trace.events();
    const std::int64_t s0 = trace.seed_size();
    const std::int64_t n = trace.n;

    // candidate range in event counts, clipped so both sides stay fittable
    std::int64_t lo = static_cast<std::int64_t>(std::floor(opt.gamma * static_cast<double>(n))) - s0;
    std::int64_t hi =
        static_cast<std::int64_t>(std::floor((1.0 - opt.gamma) * static_cast<double>(n))) - s0;
    lo = std::max(lo, opt.fit.min_events);
    hi = std::min(hi, M - opt.fit.min_events);
    if (lo > hi) throw InvalidArgsError("trace too short for this gamma and min_events");

    std::int64_t stride = opt.stride;
    if (stride == 0) stride = std::max<std::int64_t>(1, (hi - lo) / 4000);

    TransitionHistogram full = transition_histogram(trace, 0, M);
    SegmentFit full_fit = fit_segment(full, opt.fit);

    LrScanResult res;
    res.stride = stride;
    res.delta_full = full_fit.delta_hat;
    res.full_loglik = full_fit.loglik;
    res.points.reserve(static_cast<std::size_t>((hi - lo) / stride + 1));

    TransitionHistogram pre;
    TransitionHistogram suf = full;
    std::int64_t cursor = 0;  // events currently inside pre
    FitOptions pre_opt = opt.fit;
    FitOptions suf_opt = opt.fit;
    pre_opt.init = full_fit.delta_hat;
    suf_opt.init = full_fit.delta_hat;

    for (std::int64_t m = lo; m <= hi; m += stride) {
        for (; cursor < m; ++cursor) {
            std::int64_t d = trace.pre_degree[static_cast<std::size_t>(cursor)];
            std::int64_t nb = trace.nodes_before(cursor);
            pre.add(d, nb);
            suf.remove(d, nb);
        }
        SegmentFit fp = fit_segment(pre, pre_opt);
        SegmentFit fs = fit_segment(suf, suf_opt);
        pre_opt.init = fp.delta_hat;
        suf_opt.init = fs.delta_hat;
        double stat = 2.0 * (fp.loglik + fs.loglik - full_fit.loglik);
        res.points.push_back(LrScanPoint{m, stat, fp.delta_hat, fs.delta_hat});
    }

    const LrScanPoint* best = &res.points.front();
    for (const LrScanPoint& p : res.points) {
        if (p.stat > best->stat) best = &p;  // ties keep the earliest split
    }
    res.stat = best->stat;
    res.m_hat = best->events_before;
    res.t_hat = static_cast<double>(best->events_before + s0) / static_cast<double>(n);
    res.delta_pre = best->delta_pre;
    res.delta_post = best->delta_post;
    return res;
}

}  // namespace pacp
