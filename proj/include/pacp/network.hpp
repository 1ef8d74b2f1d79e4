#pragma once
// Growing-network simulation with degree-based attachment, possibly switching
// attachment rules at fixed fractions of the final size, plus the degree
// bookkeeping used by the estimators.

#include <cstdint>
#include <string>
#include <vector>

#include "pacp/common.hpp"

namespace pacp {

// One attachment rule. With exponent == 1 the node weight is degree + delta
// (delta > -1); otherwise it is (degree + 1)^exponent.
struct RegimePhase {
    double delta = 0.0;
    double exponent = 1.0;
    bool affine() const { return exponent == 1.0; }
    double weight(std::int64_t degree) const;
    void validate() const;
};

// Piecewise rule: phase boundaries sit at steps floor(n * change_fractions[j]) + 1,
// so a trace of final size n follows phases[j] for steps in
// (floor(n f_{j-1}), floor(n f_j)].
struct AttachmentRegime {
    std::vector<double> change_fractions;  // strictly increasing, in (0, 1)
    std::vector<RegimePhase> phases;       // exactly change_fractions.size() + 1

    static AttachmentRegime single(double delta);
    static AttachmentRegime affine_changes(const std::vector<double>& fractions,
                                           const std::vector<double>& deltas);

    void validate(std::int64_t n, std::int64_t seed_size) const;
    std::size_t phase_at(std::int64_t step, std::int64_t n) const;
    std::int64_t boundary_step(std::size_t j, std::int64_t n) const;
};

enum class SeedKind {
    SelfLoopNode,        // one node with a self-loop (degree 2)
    TwoNodesDoubleEdge,  // two nodes joined by a double edge (degrees 2, 2)
    FromData,            // replayed from an observed edge list
};

// One growth history. Simulated traces create node k at step k, which attaches
// to chosen[e] (pre-attachment degree pre_degree[e]) at event e, step
// seed_size()+1+e. Data traces carry one event per observed edge instead, with
// dense node ids assigned in first-seen order.
struct NetworkTrace {
    SeedKind seed = SeedKind::SelfLoopNode;
    AttachmentRegime regime;  // simulated traces only
    std::uint64_t rng_seed = 0;
    std::int64_t n = 0;  // final node count
    std::vector<std::int64_t> chosen;
    std::vector<std::int64_t> pre_degree;

    // FromData extras (empty otherwise)
    std::vector<std::int64_t> data_sources;    // attaching node per event
    std::vector<std::int64_t> present_before;  // nodes existing before each event
    std::vector<std::string> original_ids;     // dense id -> original label; [0] unused
    std::vector<double> timestamps;            // per event, optional

    bool from_data() const { return seed == SeedKind::FromData; }
    std::int64_t seed_size() const;
    std::int64_t events() const { return static_cast<std::int64_t>(chosen.size()); }
    std::int64_t step_of(std::int64_t e) const { return seed_size() + 1 + e; }
    std::int64_t nodes_before(std::int64_t e) const;
};

NetworkTrace simulate(std::int64_t n, const AttachmentRegime& regime, SeedKind seed,
                      std::uint64_t rng_seed);

struct DegreeHistogram {
    std::vector<std::int64_t> count;       // count[d] = nodes of degree d
    std::vector<std::int64_t> tail_count;  // tail_count[d] = nodes of degree > d
    std::int64_t nodes = 0;
    std::int64_t max_degree() const { return static_cast<std::int64_t>(count.size()) - 1; }
    std::int64_t at(std::int64_t d) const;
    std::int64_t tail(std::int64_t d) const;  // 0 beyond max_degree
};

// State after the first `events_done` events (0 = seed only).
DegreeHistogram degree_histogram_at(const NetworkTrace& trace, std::int64_t events_done);

// Per event, the fraction of events in a centered window of `window` events
// (truncated at the ends) whose target reaches degree > min_degree by that
// attachment.
std::vector<double> sliding_high_degree_proportion(const NetworkTrace& trace,
                                                   std::int64_t window,
                                                   std::int64_t min_degree);

// Fenwick tree over nonnegative weights with cumulative inverse sampling.
class WeightedSampler {
  public:
    explicit WeightedSampler(std::int64_t capacity);
    std::int64_t capacity() const { return cap_; }
    double total() const { return total_; }
    double value(std::int64_t idx) const { return values_.at(static_cast<std::size_t>(idx)); }
    void set(std::int64_t idx, double w);
    // index with smallest cumulative weight exceeding u * total(); u in [0, 1)
    std::int64_t sample(double u) const;
    void rebuild(const std::vector<double>& weights);

  private:
    std::int64_t cap_ = 0;
    std::int64_t highbit_ = 0;
    std::int64_t active_ = 0;  // indices >= active_ have never been set
    double total_ = 0.0;
    std::vector<double> tree_;  // 1-based
    std::vector<double> values_;
};

}  // namespace pacp
