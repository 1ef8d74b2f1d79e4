#include "pacp/null_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pacp {

namespace {

constexpr const char* kVersion = "pacp-null-table v1";

std::string table_file_name(const std::string& kind, double param, const NullTableOptions& opt) {
    std::ostringstream os;
    os << "v1_" << kind << "_p";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", param);
    os << buf << "_n" << opt.paths << "_g" << opt.grid << "_s" << opt.seed << ".txt";
    return os.str();
}

std::uint64_t samples_checksum(const std::vector<std::string>& lines) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const std::string& line : lines) {
        h = fnv1a64(line.data(), line.size()) ^ (h * 1099511628211ULL);
    }
    return h;
}

bool load_table(const std::filesystem::path& path, const std::string& kind, double param,
                const NullTableOptions& opt, std::vector<double>* out) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    if (!std::getline(in, line) || line != kVersion) return false;

    auto expect = [&](const std::string& key, std::string* value) {
        if (!std::getline(in, line)) return false;
        if (line.rfind(key + " ", 0) != 0) return false;
        *value = line.substr(key.size() + 1);
        return true;
    };
    std::string v;
    if (!expect("kind", &v) || v != kind) return false;
    if (!expect("param", &v) || std::strtod(v.c_str(), nullptr) != param) return false;
    if (!expect("paths", &v) || std::strtoll(v.c_str(), nullptr, 10) != opt.paths) return false;
    if (!expect("grid", &v) || std::strtoll(v.c_str(), nullptr, 10) != opt.grid) return false;
    if (!expect("seed", &v) || std::strtoull(v.c_str(), nullptr, 10) != opt.seed) return false;
    std::string count_s;
    if (!expect("count", &count_s)) return false;
    std::string checksum_s;
    if (!expect("checksum", &checksum_s)) return false;
    long long count = std::strtoll(count_s.c_str(), nullptr, 10);
    if (count <= 0) return false;

    std::vector<std::string> lines;
    lines.reserve(static_cast<std::size_t>(count));
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(line);
    }
    if (static_cast<long long>(lines.size()) != count) return false;
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(samples_checksum(lines)));
    if (checksum_s != hex) return false;

    out->clear();
    out->reserve(lines.size());
    for (const std::string& s : lines) out->push_back(std::strtod(s.c_str(), nullptr));
    return true;
}

void store_table(const std::filesystem::path& path, const std::string& kind, double param,
                 const NullTableOptions& opt, const std::vector<double>& samples) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::vector<std::string> lines;
    lines.reserve(samples.size());
    for (double x : samples) lines.push_back(format_double(x));
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(samples_checksum(lines)));

    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) return;  // cache is an optimization; computation already succeeded
        out << kVersion << "\n";
        out << "kind " << kind << "\n";
        out << "param " << format_double(param) << "\n";
        out << "paths " << opt.paths << "\n";
        out << "grid " << opt.grid << "\n";
        out << "seed " << opt.seed << "\n";
        out << "count " << samples.size() << "\n";
        out << "checksum " << hex << "\n";
        for (const std::string& s : lines) out << s << "\n";
    }
    std::filesystem::rename(tmp, path, ec);
}

void check_options(const NullTableOptions& opt) {
    if (opt.paths < 1 || opt.grid < 100) {
        throw InvalidArgsError("null table needs paths >= 1 and grid >= 100");
    }
}

std::vector<double> simulate_bridge_sup(double gamma, const NullTableOptions& opt) {
    const std::int64_t g = opt.grid;
    const double scale = 1.0 / std::sqrt(static_cast<double>(g));
    std::int64_t j_lo = static_cast<std::int64_t>(std::ceil(gamma * static_cast<double>(g)));
    std::int64_t j_hi = static_cast<std::int64_t>(std::floor((1.0 - gamma) * static_cast<double>(g)));
    j_lo = std::max<std::int64_t>(j_lo, 1);
    j_hi = std::min<std::int64_t>(j_hi, g - 1);
    if (j_lo > j_hi) throw InvalidArgsError("gamma leaves no interior grid points");

    std::vector<double> out(static_cast<std::size_t>(opt.paths));
    std::vector<double> w(static_cast<std::size_t>(g) + 1);
    for (std::int64_t p = 0; p < opt.paths; ++p) {
        Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(p)));
        w[0] = 0.0;
        for (std::int64_t j = 1; j <= g; ++j) {
            w[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j - 1)] + scale * rng.normal();
        }
        const double w1 = w[static_cast<std::size_t>(g)];
        double sup = 0.0;
        for (std::int64_t j = j_lo; j <= j_hi; ++j) {
            double t = static_cast<double>(j) / static_cast<double>(g);
            double b = w[static_cast<std::size_t>(j)] - t * w1;
            double x = b * b / (t * (1.0 - t));
            if (x > sup) sup = x;
        }
        out[static_cast<std::size_t>(p)] = sup;
    }
    return out;
}

std::vector<double> simulate_window_max(double s, const NullTableOptions& opt) {
    const std::int64_t g = opt.grid;
    const std::int64_t half = static_cast<std::int64_t>(std::llround(s * static_cast<double>(g)));
    if (half < 1 || 2 * half >= g) {
        throw InvalidArgsError("window fraction s out of range for this grid");
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(g));
    const std::int64_t lo = half;
    const std::int64_t hi = g - half;

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(opt.paths) * 4);
    std::vector<double> w(static_cast<std::size_t>(g) + 1);
    std::vector<double> x(static_cast<std::size_t>(g) + 1, 0.0);
    for (std::int64_t p = 0; p < opt.paths; ++p) {
        Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(p)));
        w[0] = 0.0;
        for (std::int64_t j = 1; j <= g; ++j) {
            w[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(j - 1)] + scale * rng.normal();
        }
        for (std::int64_t j = lo; j <= hi; ++j) {
            double d = w[static_cast<std::size_t>(j + half)] + w[static_cast<std::size_t>(j - half)] -
                       2.0 * w[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(j)] = (2.0 / s) * d * d;
        }
        // s-local maxima via a monotone deque over the +-half neighborhood
        std::deque<std::int64_t> dq;
        std::int64_t ingest = lo;
        for (std::int64_t j = lo; j <= hi; ++j) {
            for (; ingest <= std::min<std::int64_t>(hi, j + half); ++ingest) {
                while (!dq.empty() && x[static_cast<std::size_t>(dq.back())] <=
                                          x[static_cast<std::size_t>(ingest)]) {
                    dq.pop_back();
                }
                dq.push_back(ingest);
            }
            while (dq.front() < j - half) dq.pop_front();
            if (x[static_cast<std::size_t>(j)] >= x[static_cast<std::size_t>(dq.front())]) {
                out.push_back(x[static_cast<std::size_t>(j)]);
            }
        }
    }
    return out;
}

NullTable build(const std::string& kind, double param, const NullTableOptions& opt,
                std::vector<double> (*sim)(double, const NullTableOptions&)) {
    check_options(opt);
    if (!opt.use_cache) return NullTable(kind, param, opt, sim(param, opt));
    std::filesystem::path file =
        std::filesystem::path(null_cache_dir(opt.cache_dir)) / table_file_name(kind, param, opt);
    std::vector<double> samples;
    if (load_table(file, kind, param, opt, &samples)) {
        return NullTable(kind, param, opt, std::move(samples));
    }
    samples = sim(param, opt);
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    store_table(file, kind, param, opt, sorted);
    return NullTable(kind, param, opt, std::move(sorted));
}

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ULL;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::string null_cache_dir(const std::string& override_dir) {
    if (!override_dir.empty()) return override_dir;
    const char* env = std::getenv("PACP_CACHE_DIR");
    if (env != nullptr && env[0] != '\0') return env;
    return "pacp_cache";
}

NullTable::NullTable(std::string kind, double param, NullTableOptions opt,
                     std::vector<double> samples)
    : kind_(std::move(kind)), param_(param), opt_(std::move(opt)), samples_(std::move(samples)) {
    if (samples_.empty()) throw InvalidArgsError("null table has no samples");
    std::sort(samples_.begin(), samples_.end());
}

double NullTable::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgsError("quantile level must be in [0, 1]");
    const std::size_t n = samples_.size();
    if (n == 1) return samples_[0];
    double idx = p * static_cast<double>(n - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    if (lo >= n - 1) return samples_[n - 1];
    double frac = idx - static_cast<double>(lo);
    return samples_[lo] * (1.0 - frac) + samples_[lo + 1] * frac;
}

double NullTable::p_value(double stat) const {
    auto it = std::lower_bound(samples_.begin(), samples_.end(), stat);
    std::size_t ge = static_cast<std::size_t>(samples_.end() - it);
    return static_cast<double>(ge + 1) / static_cast<double>(samples_.size() + 1);
}

NullTable bridge_sup_table(double gamma, const NullTableOptions& opt) {
    if (!(gamma > 0.0 && gamma < 0.5)) throw InvalidArgsError("gamma must lie in (0, 0.5)");
    return build("bridge_sup", gamma, opt, &simulate_bridge_sup);
}

NullTable window_max_table(double s, const NullTableOptions& opt) {
    if (!(s > 0.0 && s < 0.5)) throw InvalidArgsError("window fraction must lie in (0, 0.5)");
    return build("window_max", s, opt, &simulate_window_max);
}

double ks_critical(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgsError("alpha must lie in (0, 1)");
    return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

double ks_two_sample_stat(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InvalidArgsError("KS needs nonempty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        double fa = static_cast<double>(i) / static_cast<double>(a.size());
        double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    double fa = static_cast<double>(i) / static_cast<double>(a.size());
    double fb = static_cast<double>(j) / static_cast<double>(b.size());
    return std::max(d, std::abs(fa - fb));
}

}  // namespace pacp
