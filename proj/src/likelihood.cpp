#include "pacp/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pacp {

namespace {

void check_options(const FitOptions& opt) {
    if (!(opt.lo > -1.0) || !(opt.hi > opt.lo)) {
        throw InvalidArgsError("fit box must satisfy -1 < lo < hi");
    }
    if (!(opt.tol > 0.0) || opt.max_iter < 1) {
        throw InvalidArgsError("fit tolerance and iteration cap must be positive");
    }
}

}  // namespace

std::int64_t TransitionHistogram::at(std::int64_t d) const {
    if (d < 0 || d > max_degree()) return 0;
    return count[static_cast<std::size_t>(d)];
}

void TransitionHistogram::add(std::int64_t pre_degree, std::int64_t nodes_before) {
    if (pre_degree < 1) throw InvalidArgsError("transition degree must be >= 1");
    if (pre_degree > max_degree()) count.resize(static_cast<std::size_t>(pre_degree) + 1, 0);
    count[static_cast<std::size_t>(pre_degree)] += 1;
    m += 1;
    log_denom += std::log(static_cast<double>(std::max<std::int64_t>(1, nodes_before)));
}

void TransitionHistogram::remove(std::int64_t pre_degree, std::int64_t nodes_before) {
    if (pre_degree < 1 || pre_degree > max_degree() ||
        count[static_cast<std::size_t>(pre_degree)] == 0 || m == 0) {
        throw InvalidArgsError("removing a transition that was never added");
    }
    count[static_cast<std::size_t>(pre_degree)] -= 1;
    m -= 1;
    log_denom -= std::log(static_cast<double>(std::max<std::int64_t>(1, nodes_before)));
}

TransitionHistogram transition_histogram(const NetworkTrace& trace, std::int64_t e_begin,
                                         std::int64_t e_end) {
    if (e_begin < 0 || e_end > trace.events() || e_begin > e_end) {
        throw InvalidArgsError("event range out of bounds");
    }
    TransitionHistogram h;
    for (std::int64_t e = e_begin; e < e_end; ++e) {
        h.add(trace.pre_degree[static_cast<std::size_t>(e)], trace.nodes_before(e));
    }
    return h;
}

double segment_loglik(const TransitionHistogram& h, double lambda) {
    double s = 0.0;
    for (std::int64_t d = 1; d <= h.max_degree(); ++d) {
        std::int64_t c = h.count[static_cast<std::size_t>(d)];
        if (c == 0) continue;
        double arg = static_cast<double>(d) + lambda;
        if (arg <= 0.0) return -std::numeric_limits<double>::infinity();
        s += static_cast<double>(c) * std::log(arg);
    }
    return s - static_cast<double>(h.m) * std::log(2.0 + lambda) - h.log_denom;
}

double segment_score(const TransitionHistogram& h, double lambda) {
    // sum_d c_d (2 - d) / ((d + lambda)(2 + lambda)); exact cancellation at a
    // pure degree-2 segment instead of a difference of large sums
    double s = 0.0;
    for (std::int64_t d = 1; d <= h.max_degree(); ++d) {
        std::int64_t c = h.count[static_cast<std::size_t>(d)];
        if (c == 0) continue;
        s += static_cast<double>(c) * (2.0 - static_cast<double>(d)) /
             (static_cast<double>(d) + lambda);
    }
    return s / (2.0 + lambda);
}

double segment_hessian(const TransitionHistogram& h, double lambda) {
    double s = 0.0;
    for (std::int64_t d = 1; d <= h.max_degree(); ++d) {
        std::int64_t c = h.count[static_cast<std::size_t>(d)];
        if (c == 0) continue;
        double a = static_cast<double>(d) + lambda;
        s += static_cast<double>(c) / (a * a);
    }
    double b = 2.0 + lambda;
    return static_cast<double>(h.m) / (b * b) - s;
}

double SegmentFit::se() const {
    if (hessian >= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / std::sqrt(-hessian);
}

SegmentFit fit_segment(const TransitionHistogram& h, const FitOptions& opt) {
    check_options(opt);
    if (h.m < opt.min_events) {
        throw InvalidArgsError("segment has " + std::to_string(h.m) + " events, need at least " +
                               std::to_string(opt.min_events));
    }
    bool informative = false;
    for (std::int64_t d = 1; d <= h.max_degree() && !informative; ++d) {
        if (d != 2 && h.count[static_cast<std::size_t>(d)] > 0) informative = true;
    }
    if (!informative) {
        throw DegenerateSegmentError("segment contains only degree-2 transitions");
    }

    SegmentFit fit;
    auto finish = [&](double x, bool at_bound, int iters, bool ok) {
        fit.delta_hat = x;
        fit.loglik = segment_loglik(h, x);
        fit.score = segment_score(h, x);
        fit.hessian = segment_hessian(h, x);
        fit.iterations = iters;
        fit.bounds_hit = at_bound;
        fit.converged = ok;
        return fit;
    };

    const double tol = opt.tol * static_cast<double>(h.m);
    double ulo = segment_score(h, opt.lo);
    if (ulo <= 0.0) return finish(opt.lo, true, 0, true);
    double uhi = segment_score(h, opt.hi);
    if (uhi >= 0.0) return finish(opt.hi, true, 0, true);

    // bracketed downward crossing: a keeps score > 0, b keeps score < 0
    double a = opt.lo;
    double b = opt.hi;
    double x = std::clamp(opt.init, opt.lo + 1e-12, opt.hi - 1e-12);
    int iter = 0;
    while (iter < opt.max_iter) {
        ++iter;
        double ux = segment_score(h, x);
        if (std::abs(ux) <= tol) return finish(x, false, iter, true);
        if (ux > 0.0) {
            a = x;
        } else {
            b = x;
        }
        if (b - a < 1e-15 * (1.0 + std::abs(a))) return finish(0.5 * (a + b), false, iter, true);
        double hx = segment_hessian(h, x);
        double next = (hx < 0.0) ? x - ux / hx : std::numeric_limits<double>::quiet_NaN();
        x = (std::isfinite(next) && next > a && next < b) ? next : 0.5 * (a + b);
    }
    return finish(x, false, iter, false);
}

std::vector<SegmentFit> prefix_fits(const NetworkTrace& trace,
                                    const std::vector<std::int64_t>& event_counts,
                                    const FitOptions& opt) {
    std::vector<SegmentFit> out;
    out.reserve(event_counts.size());
    TransitionHistogram h;
    std::int64_t done = 0;
    FitOptions cur = opt;
    for (std::int64_t target : event_counts) {
        if (target < done || target > trace.events()) {
            throw InvalidArgsError("prefix event counts must be nondecreasing and within range");
        }
        for (; done < target; ++done) {
            h.add(trace.pre_degree[static_cast<std::size_t>(done)], trace.nodes_before(done));
        }
        out.push_back(fit_segment(h, cur));
        cur.init = out.back().delta_hat;
    }
    return out;
}

}  // namespace pacp
