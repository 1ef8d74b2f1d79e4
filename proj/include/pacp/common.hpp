#pragma once
// Shared plumbing: error taxonomy, a reproducible RNG, derived seeds for
// replicate streams, a chunked parallel-for, and number formatting.

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pacp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgsError : Error {
    using Error::Error;
};

// A truncated infinite series could not reach the requested certified
// tolerance within the iteration cap.
struct TruncationError : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    using Error::Error;
};

// Segment carries no information about the offset (all transitions at degree 2).
struct DegenerateSegmentError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::int64_t bad, std::vector<std::string> samples)
        : Error(msg), bad_count(bad), bad_samples(std::move(samples)) {}
    std::int64_t bad_count = 0;
    std::vector<std::string> bad_samples;  // "line 17: <content>", at most a handful
};

struct EmptyInputError : Error {
    using Error::Error;
};

// A time or index argument lies outside the range the trace can answer for.
struct OutOfRangeError : Error {
    using Error::Error;
};

// mt19937_64 core with hand-rolled conversions. The standard pins the mt19937_64
// stream but not the distribution adaptors, so uniforms and normals are derived
// here explicitly: the draw sequence is part of the reproducibility contract.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform on [0,1) with 53 random bits
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // standard normal via the polar method; consumes a data-dependent number
    // of uniforms and caches the spare deviate
    double normal();

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stateless splitmix64 mix of (base, index): replicate/path i gets its own
// stream regardless of how work is scheduled across threads.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Number of worker threads: PACP_THREADS env var if set, else
// hardware_concurrency, at least 1.
int default_thread_count();

// Runs fn(0..count-1), chunked over threads. fn must only touch its own slot
// of any shared output. threads <= 0 means default_thread_count().
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)>& fn,
                  int threads = 0);

// 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double x);

}  // namespace pacp
