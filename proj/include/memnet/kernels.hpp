#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace memnet::kernels {

enum class similarity_kind { ratio, product, gaussian };

const char* similarity_name(similarity_kind k);
bool parse_similarity(const std::string& name, similarity_kind& out);

// Inner-loop kernels. Every entry has a scalar reference implementation and,
// where profitable, an AVX2 variant. Variants must be bit-identical to the
// reference: same per-element IEEE operations, same accumulation order.
// Equivalence is enforced by tests, which is why the build disables FP
// contraction.
struct kernel_table {
    const char* name;

    // out[t] = (x[t] - mean) / sigma. Caller handles the sigma == 0 case.
    void (*zscore)(const double* x, std::size_t n, double mean, double sigma, double* out);

    // out[t] = |scores[t]| > c0 ? 1 : 0 (strict).
    void (*burst_mask)(const double* scores, std::size_t n, double c0, std::uint8_t* out);

    // Sum over t of the Hebbian delta for one edge:
    //   sim  = 0 when yi[t] == yj[t] == 0, else the similarity measure
    //   delta = sim > lambda ? sim : -(alpha * sim)
    // Accumulated in ascending t order.
    double (*hebb_ratio)(const double* yi, const double* yj, std::size_t n, double lambda,
                         double alpha);
    double (*hebb_product)(const double* yi, const double* yj, std::size_t n, double lambda,
                           double alpha);
    double (*hebb_gaussian)(const double* yi, const double* yj, std::size_t n, double lambda,
                            double alpha);

    // acc[t] += w * row[t]  (plain multiply-add, no fused contraction)
    void (*weighted_accumulate)(double w, const double* row, std::size_t n, double* acc);

    // out[t] = acc[t] > theta ? +1.0 : -1.0 (strict)
    void (*sign_threshold)(const double* acc, std::size_t n, double theta, double* out);
};

// Reference implementation; always available.
const kernel_table& scalar_table();

// AVX2 variant, or nullptr when unsupported (at build or run time).
const kernel_table* avx2_table();

// Table selected at startup: best supported variant, overridable with
// MEMNET_KERNELS=scalar|avx2.
const kernel_table& active_table();

double hebb_accumulate(const kernel_table& k, similarity_kind kind, const double* yi,
                       const double* yj, std::size_t n, double lambda, double alpha);

// One-value similarity with the shared zero convention (reference path).
double similarity_value(similarity_kind kind, double a, double b);

} // namespace memnet::kernels
