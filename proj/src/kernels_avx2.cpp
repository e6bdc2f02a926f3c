// AVX2 kernel variants. Compiled with -mavx2 when the compiler supports it;
// callers go through active_table(), which checks CPU support at runtime.
//
// Bit-compatibility with the scalar reference relies on two properties:
// per-element operations (sub/mul/div/min/max/compare) are IEEE
// correctly-rounded in both paths, and horizontal sums drain vector lanes in
// ascending t order so the accumulation sequence is unchanged.

#include "memnet/kernels.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace memnet::kernels {

namespace {

void zscore_avx2(const double* x, std::size_t n, double mean, double sigma, double* out) {
    const __m256d vmean = _mm256_set1_pd(mean);
    const __m256d vsigma = _mm256_set1_pd(sigma);
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
        const __m256d v = _mm256_loadu_pd(x + t);
        _mm256_storeu_pd(out + t, _mm256_div_pd(_mm256_sub_pd(v, vmean), vsigma));
    }
    for (; t < n; ++t) out[t] = (x[t] - mean) / sigma;
}

void burst_mask_avx2(const double* scores, std::size_t n, double c0, std::uint8_t* out) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    const __m256d vc0 = _mm256_set1_pd(c0);
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
        const __m256d v = _mm256_and_pd(_mm256_loadu_pd(scores + t), abs_mask);
        const int bits = _mm256_movemask_pd(_mm256_cmp_pd(v, vc0, _CMP_GT_OQ));
        out[t + 0] = (bits >> 0) & 1;
        out[t + 1] = (bits >> 1) & 1;
        out[t + 2] = (bits >> 2) & 1;
        out[t + 3] = (bits >> 3) & 1;
    }
    for (; t < n; ++t) out[t] = __builtin_fabs(scores[t]) > c0 ? 1 : 0;
}

inline double drain_lanes(__m256d vdelta, double acc) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vdelta);
    acc += lanes[0];
    acc += lanes[1];
    acc += lanes[2];
    acc += lanes[3];
    return acc;
}

inline double hebb_delta_ratio_tail(double a, double b, double lambda, double alpha) {
    double sim;
    if (a == 0.0 && b == 0.0) {
        sim = 0.0;
    } else {
        const double lo = b < a ? b : a;
        const double hi = a < b ? b : a;
        sim = lo / hi;
    }
    return sim > lambda ? sim : -(alpha * sim);
}

double hebb_ratio_avx2(const double* yi, const double* yj, std::size_t n, double lambda,
                       double alpha) {
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d vlambda = _mm256_set1_pd(lambda);
    const __m256d valpha = _mm256_set1_pd(alpha);
    const __m256d sign_bit = _mm256_castsi256_pd(_mm256_set1_epi64x(0x8000000000000000ULL));
    double acc = 0.0;
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
        const __m256d a = _mm256_loadu_pd(yi + t);
        const __m256d b = _mm256_loadu_pd(yj + t);
        const __m256d lo = _mm256_min_pd(a, b);
        const __m256d hi = _mm256_max_pd(a, b);
        const __m256d ratio = _mm256_div_pd(lo, hi);
        const __m256d both_zero = _mm256_and_pd(_mm256_cmp_pd(a, vzero, _CMP_EQ_OQ),
                                                _mm256_cmp_pd(b, vzero, _CMP_EQ_OQ));
        const __m256d sim = _mm256_andnot_pd(both_zero, ratio);
        const __m256d reinforce = _mm256_cmp_pd(sim, vlambda, _CMP_GT_OQ);
        const __m256d decay = _mm256_xor_pd(_mm256_mul_pd(valpha, sim), sign_bit);
        acc = drain_lanes(_mm256_blendv_pd(decay, sim, reinforce), acc);
    }
    for (; t < n; ++t) acc += hebb_delta_ratio_tail(yi[t], yj[t], lambda, alpha);
    return acc;
}

double hebb_product_avx2(const double* yi, const double* yj, std::size_t n, double lambda,
                         double alpha) {
    const __m256d vzero = _mm256_setzero_pd();
    const __m256d vlambda = _mm256_set1_pd(lambda);
    const __m256d valpha = _mm256_set1_pd(alpha);
    const __m256d sign_bit = _mm256_castsi256_pd(_mm256_set1_epi64x(0x8000000000000000ULL));
    double acc = 0.0;
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
        const __m256d a = _mm256_loadu_pd(yi + t);
        const __m256d b = _mm256_loadu_pd(yj + t);
        const __m256d prod = _mm256_mul_pd(a, b);
        const __m256d both_zero = _mm256_and_pd(_mm256_cmp_pd(a, vzero, _CMP_EQ_OQ),
                                                _mm256_cmp_pd(b, vzero, _CMP_EQ_OQ));
        const __m256d sim = _mm256_andnot_pd(both_zero, prod);
        const __m256d reinforce = _mm256_cmp_pd(sim, vlambda, _CMP_GT_OQ);
        const __m256d decay = _mm256_xor_pd(_mm256_mul_pd(valpha, sim), sign_bit);
        acc = drain_lanes(_mm256_blendv_pd(decay, sim, reinforce), acc);
    }
    for (; t < n; ++t) {
        const double a = yi[t];
        const double b = yj[t];
        const double sim = (a == 0.0 && b == 0.0) ? 0.0 : a * b;
        acc += sim > lambda ? sim : -(alpha * sim);
    }
    return acc;
}

void weighted_accumulate_avx2(double w, const double* row, std::size_t n, double* acc) {
    const __m256d vw = _mm256_set1_pd(w);
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
        const __m256d sum = _mm256_add_pd(_mm256_loadu_pd(acc + t),
                                          _mm256_mul_pd(vw, _mm256_loadu_pd(row + t)));
        _mm256_storeu_pd(acc + t, sum);
    }
    for (; t < n; ++t) acc[t] += w * row[t];
}

void sign_threshold_avx2(const double* acc, std::size_t n, double theta, double* out) {
    const __m256d vtheta = _mm256_set1_pd(theta);
    const __m256d pos = _mm256_set1_pd(1.0);
    const __m256d neg = _mm256_set1_pd(-1.0);
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
        const __m256d active = _mm256_cmp_pd(_mm256_loadu_pd(acc + t), vtheta, _CMP_GT_OQ);
        _mm256_storeu_pd(out + t, _mm256_blendv_pd(neg, pos, active));
    }
    for (; t < n; ++t) out[t] = acc[t] > theta ? 1.0 : -1.0;
}

} // namespace

const kernel_table* avx2_compiled_table() {
    static const kernel_table table = {
        "avx2",
        zscore_avx2,
        burst_mask_avx2,
        hebb_ratio_avx2,
        hebb_product_avx2,
        scalar_table().hebb_gaussian, // libm exp; no exact SIMD counterpart
        weighted_accumulate_avx2,
        sign_threshold_avx2,
    };
    return &table;
}

} // namespace memnet::kernels

#else // !__AVX2__

namespace memnet::kernels {
const kernel_table* avx2_compiled_table() { return nullptr; }
} // namespace memnet::kernels

#endif
