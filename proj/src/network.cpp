#include "pacp/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace pacp {

double RegimePhase::weight(std::int64_t degree) const {
    if (exponent == 1.0) return static_cast<double>(degree) + delta;
    return std::pow(static_cast<double>(degree) + 1.0, exponent);
}

void RegimePhase::validate() const {
    if (!std::isfinite(delta) || !std::isfinite(exponent)) {
        throw InvalidArgsError("attachment phase has non-finite parameters");
    }
    if (exponent <= 0.0) {
        throw InvalidArgsError("attachment exponent must be positive, got " +
                               format_double(exponent));
    }
    if (exponent == 1.0 && delta <= -1.0) {
        throw InvalidArgsError("affine attachment needs delta > -1, got " +
                               format_double(delta));
    }
}

AttachmentRegime AttachmentRegime::single(double delta) {
    AttachmentRegime r;
    r.phases.push_back(RegimePhase{delta, 1.0});
    return r;
}

AttachmentRegime AttachmentRegime::affine_changes(const std::vector<double>& fractions,
                                                  const std::vector<double>& deltas) {
    if (deltas.size() != fractions.size() + 1) {
        throw InvalidArgsError("need one more delta than change fractions");
    }
    AttachmentRegime r;
    r.change_fractions = fractions;
    r.phases.reserve(deltas.size());
    for (double d : deltas) r.phases.push_back(RegimePhase{d, 1.0});
    return r;
}

std::int64_t AttachmentRegime::boundary_step(std::size_t j, std::int64_t n) const {
    return static_cast<std::int64_t>(std::floor(static_cast<double>(n) * change_fractions[j])) + 1;
}

void AttachmentRegime::validate(std::int64_t n, std::int64_t seed_size) const {
    if (phases.empty()) throw InvalidArgsError("attachment regime has no phases");
    if (phases.size() != change_fractions.size() + 1) {
        throw InvalidArgsError("attachment regime needs one more phase than change fractions");
    }
    for (const RegimePhase& p : phases) p.validate();
    double prev = 0.0;
    std::int64_t prev_step = 0;
    for (std::size_t j = 0; j < change_fractions.size(); ++j) {
        double f = change_fractions[j];
        if (!(f > 0.0 && f < 1.0)) {
            throw InvalidArgsError("change fraction must lie in (0, 1), got " + format_double(f));
        }
        if (f <= prev) throw InvalidArgsError("change fractions must be strictly increasing");
        prev = f;
        std::int64_t step = boundary_step(j, n);
        if (step <= seed_size) {
            throw InvalidArgsError("change fraction " + format_double(f) +
                                   " lands inside the seed for n = " + std::to_string(n));
        }
        if (step <= prev_step) {
            throw InvalidArgsError("change fractions collide at n = " + std::to_string(n));
        }
        prev_step = step;
    }
}

std::size_t AttachmentRegime::phase_at(std::int64_t step, std::int64_t n) const {
    std::size_t idx = 0;
    while (idx < change_fractions.size() && step >= boundary_step(idx, n)) ++idx;
    return idx;
}

std::int64_t NetworkTrace::seed_size() const {
    switch (seed) {
        case SeedKind::SelfLoopNode: return 1;
        case SeedKind::TwoNodesDoubleEdge: return 2;
        case SeedKind::FromData: return 0;
    }
    return 0;
}

std::int64_t NetworkTrace::nodes_before(std::int64_t e) const {
    if (e < 0 || e >= events()) throw InvalidArgsError("event index out of range");
    if (from_data()) return present_before.at(static_cast<std::size_t>(e));
    return seed_size() + e;
}

WeightedSampler::WeightedSampler(std::int64_t capacity) : cap_(capacity) {
    if (capacity <= 0) throw InvalidArgsError("sampler capacity must be positive");
    highbit_ = 1;
    while ((highbit_ << 1) <= cap_) highbit_ <<= 1;
    tree_.assign(static_cast<std::size_t>(cap_) + 1, 0.0);
    values_.assign(static_cast<std::size_t>(cap_), 0.0);
}

void WeightedSampler::set(std::int64_t idx, double w) {
    if (idx < 0 || idx >= cap_) throw InvalidArgsError("sampler index out of range");
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgsError("sampler weight must be finite and >= 0");
    double delta = w - values_[static_cast<std::size_t>(idx)];
    values_[static_cast<std::size_t>(idx)] = w;
    for (std::int64_t i = idx + 1; i <= cap_; i += i & -i) {
        tree_[static_cast<std::size_t>(i)] += delta;
    }
    total_ += delta;
    active_ = std::max(active_, idx + 1);
}

std::int64_t WeightedSampler::sample(double u) const {
    if (active_ <= 0 || total_ <= 0.0) throw InvalidArgsError("sampling from an empty sampler");
    double target = u * total_;
    std::int64_t pos = 0;
    double acc = 0.0;
    for (std::int64_t step = highbit_; step > 0; step >>= 1) {
        std::int64_t nxt = pos + step;
        if (nxt <= cap_ && acc + tree_[static_cast<std::size_t>(nxt)] <= target) {
            pos = nxt;
            acc += tree_[static_cast<std::size_t>(nxt)];
        }
    }
    // pos counts entries whose cumulative weight is <= target, so it is the
    // 0-based pick; rounding can push it past the last live entry.
    if (pos >= active_) pos = active_ - 1;
    while (pos > 0 && values_[static_cast<std::size_t>(pos)] == 0.0) --pos;
    return pos;
}

void WeightedSampler::rebuild(const std::vector<double>& weights) {
    if (static_cast<std::int64_t>(weights.size()) > cap_) {
        throw InvalidArgsError("sampler rebuild exceeds capacity");
    }
    std::fill(values_.begin(), values_.end(), 0.0);
    std::copy(weights.begin(), weights.end(), values_.begin());
    std::fill(tree_.begin(), tree_.end(), 0.0);
    total_ = 0.0;
    for (std::int64_t i = 1; i <= cap_; ++i) {
        tree_[static_cast<std::size_t>(i)] += values_[static_cast<std::size_t>(i - 1)];
        std::int64_t parent = i + (i & -i);
        if (parent <= cap_) tree_[static_cast<std::size_t>(parent)] += tree_[static_cast<std::size_t>(i)];
        total_ += values_[static_cast<std::size_t>(i - 1)];
    }
    active_ = std::max(active_, static_cast<std::int64_t>(weights.size()));
}

NetworkTrace simulate(std::int64_t n, const AttachmentRegime& regime, SeedKind seed,
                      std::uint64_t rng_seed) {
    if (seed == SeedKind::FromData) {
        throw InvalidArgsError("simulate needs a synthetic seed, not FromData");
    }
    const std::int64_t s0 = (seed == SeedKind::SelfLoopNode) ? 1 : 2;
    if (n < s0) throw InvalidArgsError("n must be at least the seed size");
    regime.validate(n, s0);

    NetworkTrace tr;
    tr.seed = seed;
    tr.regime = regime;
    tr.rng_seed = rng_seed;
    tr.n = n;
    tr.chosen.reserve(static_cast<std::size_t>(n - s0));
    tr.pre_degree.reserve(static_cast<std::size_t>(n - s0));

    std::vector<std::int64_t> deg(static_cast<std::size_t>(n) + 1, 0);
    deg[1] = 2;
    if (s0 == 2) deg[2] = 2;

    WeightedSampler sampler(n);
    Rng rng(rng_seed);
    std::size_t cur = regime.phase_at(s0 + 1, n);
    for (std::int64_t v = 1; v <= s0; ++v) {
        sampler.set(v - 1, regime.phases[cur].weight(deg[static_cast<std::size_t>(v)]));
    }

    std::vector<double> fresh;  // scratch for boundary rebuilds
    for (std::int64_t k = s0 + 1; k <= n; ++k) {
        std::size_t want = regime.phase_at(k, n);
        if (want != cur) {
            cur = want;
            fresh.resize(static_cast<std::size_t>(k - 1));
            for (std::int64_t v = 1; v < k; ++v) {
                fresh[static_cast<std::size_t>(v - 1)] =
                    regime.phases[cur].weight(deg[static_cast<std::size_t>(v)]);
            }
            sampler.rebuild(fresh);
        }
        const RegimePhase& ph = regime.phases[cur];
        std::int64_t target = sampler.sample(rng.uniform()) + 1;
        tr.chosen.push_back(target);
        tr.pre_degree.push_back(deg[static_cast<std::size_t>(target)]);
        deg[static_cast<std::size_t>(target)] += 1;
        sampler.set(target - 1, ph.weight(deg[static_cast<std::size_t>(target)]));
        // the newcomer only becomes a valid target from the next step on
        deg[static_cast<std::size_t>(k)] = 1;
        sampler.set(k - 1, ph.weight(1));
    }
    return tr;
}

std::int64_t DegreeHistogram::at(std::int64_t d) const {
    if (d < 0 || d > max_degree()) return 0;
    return count[static_cast<std::size_t>(d)];
}

std::int64_t DegreeHistogram::tail(std::int64_t d) const {
    if (d < 0) return nodes;
    if (d > max_degree()) return 0;
    return tail_count[static_cast<std::size_t>(d)];
}

DegreeHistogram degree_histogram_at(const NetworkTrace& trace, std::int64_t events_done) {
    if (events_done < 0 || events_done > trace.events()) {
        throw InvalidArgsError("events_done out of range");
    }
    // data traces can hold more node ids than steps (two endpoints per edge)
    std::int64_t id_cap = trace.seed_size() + events_done;
    if (trace.from_data()) {
        id_cap = std::max<std::int64_t>(
            trace.n, static_cast<std::int64_t>(trace.original_ids.size()));
    }
    std::vector<std::int64_t> deg(static_cast<std::size_t>(id_cap) + 1, 0);
    if (!trace.from_data()) {
        deg[1] = 2;
        if (trace.seed == SeedKind::TwoNodesDoubleEdge) deg[2] = 2;
        for (std::int64_t e = 0; e < events_done; ++e) {
            deg[static_cast<std::size_t>(trace.chosen[static_cast<std::size_t>(e)])] += 1;
            deg[static_cast<std::size_t>(trace.step_of(e))] = 1;
        }
    } else {
        // replay convention: a node enters at degree 1 the first time it is
        // seen on either side of an edge
        for (std::int64_t e = 0; e < events_done; ++e) {
            std::size_t src = static_cast<std::size_t>(trace.data_sources[static_cast<std::size_t>(e)]);
            std::size_t dst = static_cast<std::size_t>(trace.chosen[static_cast<std::size_t>(e)]);
            if (deg[src] == 0) deg[src] = 1;
            if (deg[dst] == 0) deg[dst] = 1;
            deg[dst] += 1;
        }
    }

    DegreeHistogram h;
    std::int64_t maxdeg = 0;
    for (std::int64_t v = 1; v <= id_cap; ++v) maxdeg = std::max(maxdeg, deg[static_cast<std::size_t>(v)]);
    h.count.assign(static_cast<std::size_t>(maxdeg) + 1, 0);
    for (std::int64_t v = 1; v <= id_cap; ++v) {
        std::int64_t d = deg[static_cast<std::size_t>(v)];
        if (d > 0) {
            h.count[static_cast<std::size_t>(d)] += 1;
            h.nodes += 1;
        }
    }
    h.tail_count.assign(h.count.size(), 0);
    std::int64_t suffix = 0;
    for (std::int64_t d = maxdeg; d >= 0; --d) {
        h.tail_count[static_cast<std::size_t>(d)] = suffix;  // nodes with degree > d
        suffix += h.count[static_cast<std::size_t>(d)];
    }
    return h;
}

std::vector<double> sliding_high_degree_proportion(const NetworkTrace& trace,
                                                   std::int64_t window,
                                                   std::int64_t min_degree) {
    if (window <= 0) throw InvalidArgsError("window must be positive");
    const std::int64_t m = trace.events();
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    if (m == 0) return out;
    std::vector<std::int64_t> prefix(static_cast<std::size_t>(m) + 1, 0);
    for (std::int64_t e = 0; e < m; ++e) {
        bool high = trace.pre_degree[static_cast<std::size_t>(e)] + 1 > min_degree;
        prefix[static_cast<std::size_t>(e) + 1] = prefix[static_cast<std::size_t>(e)] + (high ? 1 : 0);
    }
    const std::int64_t half = window / 2;
    for (std::int64_t e = 0; e < m; ++e) {
        std::int64_t lo = std::max<std::int64_t>(0, e - half);
        std::int64_t hi = std::min<std::int64_t>(m - 1, e + half);
        out[static_cast<std::size_t>(e)] =
            static_cast<double>(prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)]) /
            static_cast<double>(hi - lo + 1);
    }
    return out;
}

}  // namespace pacp
