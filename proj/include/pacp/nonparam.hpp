#pragma once
// Non-parametric changepoint estimator tracking drift of the empirical degree
// distribution. The running distribution at time fraction t is compared to a
// frozen early-reference snapshot through a geometrically weighted l1 distance
//
//   dist(t) = sum_{i >= 0} 2^{-i} | N_{i+1}(floor(nt))/(nt) - ref_i |,
//
// and the estimate is the first scanned t at which dist(t) exceeds 1/b_n.
// No likelihood model enters anywhere: this is the model-free baseline the
// parametric scans are compared against.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pacp/common.hpp"
#include "pacp/network.hpp"

namespace pacp {

struct NPConfig {
    // 0 means automatic: h_n = log log n, b_n = n^(1/log log n).
    double h_n = 0.0;
    double b_n = 0.0;
    // degrees 1..max_degree enter the distance; the 2^-i weights bound the
    // truncated mass by 2^(1-max_degree)
    std::int64_t max_degree = 64;
    std::int64_t stride = 1;

    double resolved_h(std::int64_t n) const;
    double resolved_b(std::int64_t n) const;
    void validate(std::int64_t n) const;
};

struct NPResult {
    double t_ref = 0.0;      // reference fraction, 1/h_n
    double threshold = 0.0;  // 1/b_n
    std::optional<double> t_hat;  // empty = scan exhausted without a crossing
    // scanned grid and its distance series, for plotting and for the CSV dump
    std::vector<double> t;
    std::vector<double> distance;
    std::vector<std::string> warnings;
};

// Distance between the degree distributions observed at fractions t and t_ref.
double np_distance(const NetworkTrace& trace, double t, double t_ref,
                   std::int64_t max_degree = 64);

NPResult np_estimate(const NetworkTrace& trace, const NPConfig& config = {});

}  // namespace pacp
