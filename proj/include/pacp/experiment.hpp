#pragma once
// Replicated simulation studies driven by a declarative spec: simulate the
// named regime, run the requested detectors on every replicate, aggregate
// positive rates with Bernoulli standard errors, location MAE, a
// changepoint-count histogram, and the mean Rand index against the
// generating segmentation. Replicates run in parallel on seeds derived from
// rng_seed, so results are a pure function of the ExperimentSpec fields.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pacp/multi_scan.hpp"
#include "pacp/nonparam.hpp"

namespace pacp {

// Pairwise-agreement similarity in [0,1] between the interval partitions of
// {1..n} obtained by cutting after element floor(n*f) for each fraction f.
// Fraction lists must be strictly increasing within (0,1).
double rand_index(const std::vector<double>& true_fracs, const std::vector<double>& est_fracs,
                  std::int64_t n);

struct ExperimentSpec {
    std::string name;      // label echoed into the report
    std::string scenario;  // null | single-cp | multi-cp | sublinear
    std::int64_t n = 0;
    std::int64_t replicates = 0;
    AttachmentRegime regime;
    std::vector<std::string> methods;  // lr | score | window | segment | nonparam
    double gamma = 0.1;                // scan interior for lr, score, segment
    double alpha = 0.05;
    std::int64_t h = 0;            // window half-width in events; 0 picks n/10
    std::int64_t min_len = 1000;   // segments shorter than this are not split further
    double np_h = 0.0;             // h_n override for nonparam; 0 keeps log log n
    double np_b = 0.0;             // b_n override for nonparam; 0 keeps n^(1/log log n)
    std::uint64_t rng_seed = 1;
    std::int64_t table_paths = 10000;  // Monte-Carlo paths behind the null tables
    std::string cache_dir;             // forwarded to the table builders
    bool use_cache = true;

    std::int64_t effective_h() const { return h > 0 ? h : n / 10; }
    void validate() const;
};

ExperimentSpec experiment_spec_from_json(const std::string& text);
std::string experiment_spec_to_json(const ExperimentSpec& spec);

struct MethodSummary {
    std::string method;
    std::int64_t completed = 0;  // replicates that produced a result
    std::int64_t tests = 0;      // individual threshold decisions across replicates
    std::int64_t positives = 0;  // raw exceedances among those tests
    double positive_rate = 0.0;
    double bernoulli_se = 0.0;                // sqrt(r(1-r)/tests)
    std::vector<std::int64_t> cp_count_hist;  // [k] = replicates reporting k changepoints
    double mean_rand = 0.0;
    std::optional<double> mae;  // |estimate - true change|, single-change scenarios only
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<MethodSummary> methods;  // in spec order
    std::vector<std::string> failures;   // "replicate 12, score: <message>"
};

ExperimentResult run_experiment(const ExperimentSpec& spec);
std::string experiment_result_to_json(const ExperimentResult& res);

}  // namespace pacp
