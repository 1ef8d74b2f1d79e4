#pragma once
// Likelihood-ratio scan for a single switch in the affine attachment offset.
// Candidate splits put m events before the switch; the statistic at m is
// twice the gain from fitting the two sides separately over one global fit.

#include <cstdint>
#include <vector>

#include "pacp/likelihood.hpp"
#include "pacp/network.hpp"

namespace pacp {

struct LrScanOptions {
    double gamma = 0.1;      // scan the central (gamma, 1-gamma) span of events
    std::int64_t stride = 0;  // distance between candidate splits; 0 picks ~4000 positions
    FitOptions fit;
};

struct LrScanPoint {
    std::int64_t events_before = 0;
    double stat = 0.0;
    double delta_pre = 0.0;
    double delta_post = 0.0;
};

struct LrScanResult {
    std::vector<LrScanPoint> points;
    double stat = 0.0;          // max over points
    std::int64_t m_hat = 0;     // events before the split at the (earliest) argmax
    double t_hat = 0.0;         // (m_hat + seed_size) / n
    double delta_pre = 0.0;     // refit on the two sides of the argmax
    double delta_post = 0.0;
    double delta_full = 0.0;
    double full_loglik = 0.0;
    std::int64_t stride = 0;
};

LrScanResult lr_scan(const NetworkTrace& trace, const LrScanOptions& opt = {});

}  // namespace pacp
