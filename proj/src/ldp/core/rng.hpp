#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace ldp {

// Deterministic, platform-independent random stream (xoshiro256++ seeded via
// splitmix64). Streams are keyed by (seed, label): identical keys reproduce
// identical draws across processes and compilers; distinct labels derived from
// the same seed are statistically independent. One stream per owner -- never
// share a stream across threads.
class RngStream {
public:
    RngStream() : RngStream(0, "") {}
    RngStream(std::uint64_t seed, std::string_view label);

    std::uint64_t next_u64();

    // [0,1) with 53 bits of mantissa.
    double uniform01();

    // Uniform in [lo, hi].
    double uniform(double lo, double hi);

    // Unbiased integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    // Integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // Standard normal, Box-Muller with cached spare.
    double normal();
    double normal(double mu, double sigma) { return mu + sigma * normal(); }

    std::vector<double> normal_vec(std::size_t n);

    template <class T>
    void shuffle(std::vector<T>& v) {
        if (v.size() < 2) return;
        for (std::size_t i = v.size() - 1; i > 0; --i) {
            std::size_t j = static_cast<std::size_t>(below(i + 1));
            std::swap(v[i], v[j]);
        }
    }

    // Child stream with an extra label component; deterministic in
    // (this stream's key, label). Does not consume draws from the parent.
    RngStream fork(std::string_view label) const;

private:
    std::uint64_t state_[4];
    std::uint64_t seed_key_;  // mixed (seed, label) key, used by fork()
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Stream factory: identical (seed, label) pairs yield identical streams.
RngStream seeded_rng(std::uint64_t seed, std::string_view stream_label);

// FNV-1a over bytes; used for label hashing and content checksums.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull);
std::uint64_t fnv1a(std::string_view s);

}  // namespace ldp
