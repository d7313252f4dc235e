#include "ruinsim/rng.hpp"

#include <cmath>

#if defined(RUINSIM_USE_MVEC) && defined(__AVX512F__) && defined(__AVX512DQ__)
#define RUINSIM_MVEC_ACTIVE 1
#include <immintrin.h>
extern "C" {
__m512d _ZGVeN8v_log(__m512d);
__m512d _ZGVeN8v_sin(__m512d);
__m512d _ZGVeN8v_cos(__m512d);
__m512d _ZGVeN8v_exp(__m512d);
}
#endif

namespace ruinsim {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

#ifdef RUINSIM_MVEC_ACTIVE

namespace {
// eight consecutive counter outputs of a stream, vectorized
inline __m512i mix64x8(uint64_t base, uint64_t c0) {
    const __m512i gamma = _mm512_set1_epi64(static_cast<long long>(kGolden));
    __m512i idx = _mm512_add_epi64(_mm512_set1_epi64(static_cast<long long>(c0)),
                                   _mm512_setr_epi64(1, 2, 3, 4, 5, 6, 7, 8));
    __m512i z = _mm512_add_epi64(_mm512_set1_epi64(static_cast<long long>(base)),
                                 _mm512_mullo_epi64(idx, gamma));
    z = _mm512_mullo_epi64(_mm512_xor_si512(z, _mm512_srli_epi64(z, 30)),
                           _mm512_set1_epi64(static_cast<long long>(0xBF58476D1CE4E5B9ull)));
    z = _mm512_mullo_epi64(_mm512_xor_si512(z, _mm512_srli_epi64(z, 27)),
                           _mm512_set1_epi64(static_cast<long long>(0x94D049BB133111EBull)));
    return _mm512_xor_si512(z, _mm512_srli_epi64(z, 31));
}

inline __m512d u01x8(__m512i bits) {
    __m512d d = _mm512_cvtepu64_pd(_mm512_srli_epi64(bits, 11));
    return _mm512_fmadd_pd(d, _mm512_set1_pd(0x1p-53), _mm512_set1_pd(0x1p-54));
}

// 16 standard normals from counters c0+1..c0+16
inline void box_muller16(uint64_t base, uint64_t c0, double* out) {
    __m512d u1 = u01x8(mix64x8(base, c0));
    __m512d u2 = u01x8(mix64x8(base, c0 + 8));
    __m512d r = _mm512_sqrt_pd(_mm512_mul_pd(_mm512_set1_pd(-2.0), _ZGVeN8v_log(u1)));
    __m512d th = _mm512_mul_pd(_mm512_set1_pd(kTwoPi), u2);
    _mm512_storeu_pd(out, _mm512_mul_pd(r, _ZGVeN8v_cos(th)));
    _mm512_storeu_pd(out + 8, _mm512_mul_pd(r, _ZGVeN8v_sin(th)));
}
} // namespace

#else

namespace {
// scalar fallback: identical draw layout, libm transcendentals
inline void box_muller16(uint64_t base, uint64_t c0, double* out) {
    double u1[8], u2[8];
    for (int i = 0; i < 8; ++i)
        u1[i] = ((mix64(base + (c0 + 1 + i) * kGolden) >> 11) + 0.5) * 0x1p-53;
    for (int i = 0; i < 8; ++i)
        u2[i] = ((mix64(base + (c0 + 9 + i) * kGolden) >> 11) + 0.5) * 0x1p-53;
    for (int i = 0; i < 8; ++i) {
        double r = std::sqrt(-2.0 * std::log(u1[i]));
        out[i] = r * std::cos(kTwoPi * u2[i]);
        out[i + 8] = r * std::sin(kTwoPi * u2[i]);
    }
}
} // namespace

#endif

void RngStream::refill_normals() {
    box_muller16(base_, ctr_, nbuf_);
    ctr_ += 16;
    npos_ = 0;
}

void RngStream::normals(double* out, int n) {
    int i = 0;
    while (npos_ < 16 && i < n) out[i++] = nbuf_[npos_++];
    while (n - i >= 16) {
        box_muller16(base_, ctr_, out + i);
        ctr_ += 16;
        i += 16;
    }
    while (i < n) out[i++] = normal();
}

double RngStream::exponential(double rate) { return -std::log(u01()) / rate; }

long RngStream::poisson(double mean) {
    long total = 0;
    // product method degrades for large means; split into chunks of <= 16
    while (mean > 16.0) {
        double chunk = 16.0;
        double limit = std::exp(-chunk);
        long k = 0;
        double prod = u01();
        while (prod > limit) {
            ++k;
            prod *= u01();
        }
        total += k;
        mean -= chunk;
    }
    double limit = std::exp(-mean);
    long k = 0;
    double prod = u01();
    while (prod > limit) {
        ++k;
        prod *= u01();
    }
    return total + k;
}

double RngStream::gamma(double shape, double rate) {
    // Marsaglia-Tsang squeeze; shape < 1 boosted via the U^{1/shape} trick
    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(u01(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double cc = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + cc * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = u01();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v / rate;
    }
}

} // namespace ruinsim
