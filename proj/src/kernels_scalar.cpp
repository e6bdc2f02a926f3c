#include <algorithm>
#include <cmath>

#include "memnet/kernels.hpp"

namespace memnet::kernels {

namespace {

void zscore_scalar(const double* x, std::size_t n, double mean, double sigma, double* out) {
    for (std::size_t t = 0; t < n; ++t) out[t] = (x[t] - mean) / sigma;
}

void burst_mask_scalar(const double* scores, std::size_t n, double c0, std::uint8_t* out) {
    for (std::size_t t = 0; t < n; ++t) out[t] = std::fabs(scores[t]) > c0 ? 1 : 0;
}

inline double hebb_delta_ratio(double a, double b, double lambda, double alpha) {
    double sim;
    if (a == 0.0 && b == 0.0) {
        sim = 0.0;
    } else {
        sim = std::min(a, b) / std::max(a, b);
    }
    return sim > lambda ? sim : -(alpha * sim);
}

inline double hebb_delta_product(double a, double b, double lambda, double alpha) {
    const double sim = (a == 0.0 && b == 0.0) ? 0.0 : a * b;
    return sim > lambda ? sim : -(alpha * sim);
}

inline double hebb_delta_gaussian(double a, double b, double lambda, double alpha) {
    double sim;
    if (a == 0.0 && b == 0.0) {
        sim = 0.0;
    } else {
        const double d = a - b;
        sim = std::exp(-(d * d));
    }
    return sim > lambda ? sim : -(alpha * sim);
}

double hebb_ratio_scalar(const double* yi, const double* yj, std::size_t n, double lambda,
                         double alpha) {
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) acc += hebb_delta_ratio(yi[t], yj[t], lambda, alpha);
    return acc;
}

double hebb_product_scalar(const double* yi, const double* yj, std::size_t n, double lambda,
                           double alpha) {
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) acc += hebb_delta_product(yi[t], yj[t], lambda, alpha);
    return acc;
}

double hebb_gaussian_scalar(const double* yi, const double* yj, std::size_t n, double lambda,
                            double alpha) {
    double acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) acc += hebb_delta_gaussian(yi[t], yj[t], lambda, alpha);
    return acc;
}

void weighted_accumulate_scalar(double w, const double* row, std::size_t n, double* acc) {
    for (std::size_t t = 0; t < n; ++t) acc[t] += w * row[t];
}

void sign_threshold_scalar(const double* acc, std::size_t n, double theta, double* out) {
    for (std::size_t t = 0; t < n; ++t) out[t] = acc[t] > theta ? 1.0 : -1.0;
}

} // namespace

const kernel_table& scalar_table() {
    static const kernel_table table = {
        "scalar",
        zscore_scalar,
        burst_mask_scalar,
        hebb_ratio_scalar,
        hebb_product_scalar,
        hebb_gaussian_scalar,
        weighted_accumulate_scalar,
        sign_threshold_scalar,
    };
    return table;
}

} // namespace memnet::kernels
