#pragma once
// Segment likelihood for the affine attachment rule and its maximizer.
//
// An event whose target already has degree i, among N existing nodes,
// contributes log(i + lambda) - log(2 + lambda) - log N to the segment
// log-likelihood. Only the per-degree event counts and the event count enter
// the lambda-dependent part, so segments are summarized by a histogram that
// supports O(1) add/remove for rolling windows.

#include <cstdint>
#include <vector>

#include "pacp/common.hpp"
#include "pacp/network.hpp"

namespace pacp {

struct TransitionHistogram {
    std::vector<std::int64_t> count;  // count[d] = events whose target had degree d
    std::int64_t m = 0;               // total events
    double log_denom = 0.0;           // sum of log(nodes existing before each event)

    std::int64_t max_degree() const { return static_cast<std::int64_t>(count.size()) - 1; }
    std::int64_t at(std::int64_t d) const;
    void add(std::int64_t pre_degree, std::int64_t nodes_before);
    void remove(std::int64_t pre_degree, std::int64_t nodes_before);
};

// Histogram over the half-open event range [e_begin, e_end).
TransitionHistogram transition_histogram(const NetworkTrace& trace, std::int64_t e_begin,
                                         std::int64_t e_end);

double segment_loglik(const TransitionHistogram& h, double lambda);
double segment_score(const TransitionHistogram& h, double lambda);    // d/dlambda loglik
double segment_hessian(const TransitionHistogram& h, double lambda);  // second derivative

struct FitOptions {
    double lo = -0.95;  // search box; must stay above -1
    double hi = 25.0;
    double tol = 1e-10;  // stop when |score| <= tol * m
    int max_iter = 200;
    std::int64_t min_events = 50;
    double init = 0.0;  // starting point, clamped into (lo, hi)
};

struct SegmentFit {
    double delta_hat = 0.0;
    double loglik = 0.0;
    double score = 0.0;    // at delta_hat
    double hessian = 0.0;  // at delta_hat
    int iterations = 0;
    bool converged = false;
    bool bounds_hit = false;
    double se() const;  // 1/sqrt(-hessian); infinity when curvature is not negative
};

// Maximizes the segment log-likelihood over [lo, hi]. The score has at most
// one zero and crosses downward there, so a sign bracket pins the maximizer;
// when the score does not change sign the box edge is the argmax and
// bounds_hit is set. Throws DegenerateSegmentError when every event moves a
// degree-2 node (the likelihood is then constant in lambda).
SegmentFit fit_segment(const TransitionHistogram& h, const FitOptions& opt = {});

// Fits on the prefixes (0, m] for each requested event count, warm-starting
// each fit at the previous estimate.
std::vector<SegmentFit> prefix_fits(const NetworkTrace& trace,
                                    const std::vector<std::int64_t>& event_counts,
                                    const FitOptions& opt = {});

}  // namespace pacp
