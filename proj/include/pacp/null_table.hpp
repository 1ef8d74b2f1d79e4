#pragma once
// Monte-Carlo tables for the limiting null laws of the scan statistics:
//   bridge_sup:  sup of B(t)^2/(t(1-t)) over t in [gamma, 1-gamma]
//   window_max:  s-local maxima of X(t) = (2/s)(W(t+s)+W(t-s)-2W(t))^2,
//                t in [s, 1-s], pooled across paths
// Tables are cached as versioned text files keyed by all generation
// parameters, with a content checksum; a bad or stale file is regenerated.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pacp/common.hpp"

namespace pacp {

struct NullTableOptions {
    std::int64_t paths = 10000;
    std::int64_t grid = 5000;      // time resolution of each simulated path
    std::uint64_t seed = 715171u;  // per-path streams are derived from this
    std::string cache_dir;         // empty: $PACP_CACHE_DIR, else "pacp_cache"
    bool use_cache = true;
};

class NullTable {
  public:
    NullTable(std::string kind, double param, NullTableOptions opt, std::vector<double> samples);

    const std::string& kind() const { return kind_; }
    double param() const { return param_; }
    std::int64_t size() const { return static_cast<std::int64_t>(samples_.size()); }
    const std::vector<double>& samples() const { return samples_; }  // ascending

    double quantile(double p) const;     // interpolated empirical quantile, p in [0,1]
    double p_value(double stat) const;   // upper-tail (count >= stat + 1)/(N + 1)

  private:
    std::string kind_;
    double param_ = 0.0;
    NullTableOptions opt_;
    std::vector<double> samples_;
};

NullTable bridge_sup_table(double gamma, const NullTableOptions& opt = {});
NullTable window_max_table(double s, const NullTableOptions& opt = {});

// cache_dir resolution used by the table builders
std::string null_cache_dir(const std::string& override_dir);

std::uint64_t fnv1a64(const void* data, std::size_t len);

// Kolmogorov-Smirnov helpers for two-sample comparisons against a table.
double ks_critical(double alpha);  // c(alpha) = sqrt(-log(alpha/2)/2)
double ks_two_sample_stat(std::vector<double> a, std::vector<double> b);

}  // namespace pacp
