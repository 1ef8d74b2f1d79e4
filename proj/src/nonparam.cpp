#include "pacp/nonparam.hpp"

#include <cmath>

#include "pacp/common.hpp"

namespace pacp {

namespace {

// Incremental degree bookkeeping for one forward replay. Only degrees in
// [1, cap] are counted; a node passing beyond cap simply leaves the counted
// range, which is exactly what the truncated distance needs.
class DegreeCounter {
  public:
    DegreeCounter(const NetworkTrace& trace, std::int64_t cap)
        : trace_(trace), cap_(cap) {
        // data traces can hold more node ids than steps (two endpoints per edge)
        std::int64_t id_cap = trace.n;
        if (trace.from_data()) {
            id_cap = std::max<std::int64_t>(
                id_cap, static_cast<std::int64_t>(trace.original_ids.size()));
        }
        deg_.assign(static_cast<std::size_t>(id_cap) + 1, 0);
        count_.assign(static_cast<std::size_t>(cap) + 1, 0);
        if (!trace.from_data()) {
            enter(1);
            bump(1);
            if (trace.seed == SeedKind::TwoNodesDoubleEdge) {
                enter(2);
                bump(2);
            }
        }
    }

    void apply(std::int64_t e) {
        std::size_t ei = static_cast<std::size_t>(e);
        if (!trace_.from_data()) {
            bump(trace_.chosen[ei]);
            enter(trace_.step_of(e));
        } else {
            std::int64_t src = trace_.data_sources[ei];
            std::int64_t dst = trace_.chosen[ei];
            if (deg_[static_cast<std::size_t>(src)] == 0) enter(src);
            if (deg_[static_cast<std::size_t>(dst)] == 0) enter(dst);
            bump(dst);
        }
    }

    // count of nodes with degree d, for d in [1, cap]
    std::int64_t at(std::int64_t d) const { return count_[static_cast<std::size_t>(d)]; }

  private:
    void enter(std::int64_t v) {
        deg_[static_cast<std::size_t>(v)] = 1;
        count_[1] += 1;
    }

    void bump(std::int64_t v) {
        std::int64_t d = deg_[static_cast<std::size_t>(v)];
        if (d <= cap_) count_[static_cast<std::size_t>(d)] -= 1;
        if (d + 1 <= cap_) count_[static_cast<std::size_t>(d + 1)] += 1;
        deg_[static_cast<std::size_t>(v)] = d + 1;
    }

    const NetworkTrace& trace_;
    std::int64_t cap_;
    std::vector<std::int64_t> deg_;
    std::vector<std::int64_t> count_;
};

std::vector<double> degree_weights(std::int64_t cap) {
    std::vector<double> w(static_cast<std::size_t>(cap) + 1, 0.0);
    double v = 1.0;  // degree 1 carries weight 2^0
    for (std::int64_t d = 1; d <= cap; ++d, v *= 0.5) w[static_cast<std::size_t>(d)] = v;
    return w;
}

}  // namespace

double NPConfig::resolved_h(std::int64_t n) const {
    if (h_n > 0.0) return h_n;
    return std::log(std::log(static_cast<double>(n)));
}

double NPConfig::resolved_b(std::int64_t n) const {
    if (b_n > 0.0) return b_n;
    double ll = std::log(std::log(static_cast<double>(n)));
    return std::pow(static_cast<double>(n), 1.0 / ll);
}

void NPConfig::validate(std::int64_t n) const {
    if (n < 10) throw InvalidArgsError("trace too short for the nonparametric scan");
    if (max_degree < 1) throw InvalidArgsError("max_degree must be at least 1");
    if (stride < 1) throw InvalidArgsError("stride must be at least 1");
    if (!(resolved_h(n) > 1.0)) {
        throw InvalidArgsError("h_n must exceed 1 so the scan window is non-empty");
    }
    if (!(resolved_b(n) > 1.0)) throw InvalidArgsError("b_n must exceed 1");
}

double np_distance(const NetworkTrace& trace, double t, double t_ref, std::int64_t max_degree) {
    if (max_degree < 1) throw InvalidArgsError("max_degree must be at least 1");
    const std::int64_t n = trace.n;
    const std::int64_t seed = trace.seed_size();
    auto step_at = [&](double frac) {
        if (!(frac > 0.0) || frac > 1.0) throw OutOfRangeError("time fraction outside (0, 1]");
        std::int64_t k = static_cast<std::int64_t>(std::floor(frac * static_cast<double>(n)));
        if (k < seed || k - seed > trace.events()) {
            throw OutOfRangeError("time fraction before the seed state");
        }
        if (k == 0) throw OutOfRangeError("time fraction before the first node");
        return k;
    };
    std::int64_t k_a = step_at(t);
    std::int64_t k_b = step_at(t_ref);
    DegreeHistogram a = degree_histogram_at(trace, k_a - seed);
    DegreeHistogram b = degree_histogram_at(trace, k_b - seed);
    std::vector<double> w = degree_weights(max_degree);
    double norm_a = static_cast<double>(n) * t;
    double norm_b = static_cast<double>(n) * t_ref;
    double dist = 0.0;
    for (std::int64_t d = 1; d <= max_degree; ++d) {
        double fa = static_cast<double>(a.at(d)) / norm_a;
        double fb = static_cast<double>(b.at(d)) / norm_b;
        dist += w[static_cast<std::size_t>(d)] * std::abs(fa - fb);
    }
    return dist;
}

NPResult np_estimate(const NetworkTrace& trace, const NPConfig& config) {
    const std::int64_t n = trace.n;
    config.validate(n);
    const double h = config.resolved_h(n);
    const double b = config.resolved_b(n);
    const std::int64_t seed = trace.seed_size();

    NPResult res;
    res.t_ref = 1.0 / h;
    res.threshold = 1.0 / b;

    if (h > static_cast<double>(n) / 10.0) {
        res.warnings.push_back("h_n is large relative to n; the reference time n/h_n is very early");
    }
    if (b > static_cast<double>(n) / 10.0) {
        res.warnings.push_back("b_n is large relative to n; the threshold 1/b_n may sit below sampling noise");
    }
    if (b < 2.0) res.warnings.push_back("b_n is small; the threshold 1/b_n may never be reached");

    const double ref_norm = static_cast<double>(n) / h;
    const std::int64_t k_ref = static_cast<std::int64_t>(std::floor(ref_norm));
    const std::int64_t k_start = static_cast<std::int64_t>(std::ceil(ref_norm));
    if (k_ref <= seed) throw InvalidArgsError("reference time n/h_n falls inside the seed");
    if (k_start > n) throw InvalidArgsError("scan window is empty: n/h_n exceeds n");

    const std::int64_t cap = config.max_degree;
    std::vector<double> w = degree_weights(cap);
    std::vector<double> ref(static_cast<std::size_t>(cap) + 1, 0.0);

    DegreeCounter counter(trace, cap);
    bool have_ref = false;
    for (std::int64_t e = 0; e < trace.events(); ++e) {
        counter.apply(e);
        std::int64_t k = trace.step_of(e);
        if (!have_ref && k == k_ref) {
            for (std::int64_t d = 1; d <= cap; ++d) {
                ref[static_cast<std::size_t>(d)] = static_cast<double>(counter.at(d)) / ref_norm;
            }
            have_ref = true;
        }
        if (k < k_start || (k - k_start) % config.stride != 0) continue;
        double dist = 0.0;
        for (std::int64_t d = 1; d <= cap; ++d) {
            double fd = static_cast<double>(counter.at(d)) / static_cast<double>(k);
            dist += w[static_cast<std::size_t>(d)] * std::abs(fd - ref[static_cast<std::size_t>(d)]);
        }
        res.t.push_back(static_cast<double>(k) / static_cast<double>(n));
        res.distance.push_back(dist);
        if (!res.t_hat && dist > res.threshold) res.t_hat = res.t.back();
    }
    return res;
}

}  // namespace pacp
