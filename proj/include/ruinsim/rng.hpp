#ifndef RUINSIM_RNG_HPP
#define RUINSIM_RNG_HPP

#include <cstdint>

namespace ruinsim {

// SplitMix64 finalizer (Stafford mix 13). The generator below is the
// counter-based form: output k of a stream is mix64(base + k * GOLDEN),
// so any draw is a pure function of (seed, stream id, counter) and the
// sequence is identical no matter how work is split across threads.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// Disjoint stream-id spaces for the different consumers of randomness,
// so adding a new sampler never shifts the draws of an existing one.
enum class StreamPurpose : uint64_t {
    cycles = 1,
    perpetuity = 2,
    direct = 3,
    terminal = 4,
    fixed_point = 5,
    shifted = 6,
    degenerate = 7,
    bootstrap = 8,
    test = 15,
};

inline uint64_t stream_id(StreamPurpose p, uint64_t index) {
    return (static_cast<uint64_t>(p) << 48) | (index & 0xFFFFFFFFFFFFull);
}

// One logical stream of randomness. Value-like: cheap to construct per path.
// Normal variates are produced by Box-Muller in batches of 16 (vectorized
// through libmvec when available); everything else is inverse-CDF or
// rejection on top of u01().
class RngStream {
  public:
    RngStream(uint64_t seed, uint64_t sid)
        : base_(mix64(seed + kGolden) + mix64(mix64(sid) + 0x632BE59BD9B4E019ull)) {}

    RngStream(uint64_t seed, StreamPurpose p, uint64_t index)
        : RngStream(seed, stream_id(p, index)) {}

    uint64_t next_u64() { return mix64(base_ + (++ctr_) * kGolden); }

    // uniform on (0,1), strictly: never returns 0 or 1
    double u01() { return ((next_u64() >> 11) + 0.5) * 0x1p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    double exponential(double rate);   // mean 1/rate
    double normal() {
        if (npos_ == 16) refill_normals();
        return nbuf_[npos_++];
    }
    void normals(double* out, int n);  // same sequence as repeated normal()

    // exact Poisson count (Knuth product method, split for large means)
    long poisson(double mean);

    // Gamma(shape, rate), Marsaglia-Tsang
    double gamma(double shape, double rate);

    uint64_t counter() const { return ctr_; }

  private:
    void refill_normals();

    uint64_t base_;
    uint64_t ctr_ = 0;
    alignas(64) double nbuf_[16];
    int npos_ = 16;
};

} // namespace ruinsim

#endif
