#include "memnet/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "memnet/error.hpp"
#include "memnet/log.hpp"

namespace memnet::kernels {

// Defined in kernels_avx2.cpp; nullptr when the build lacks AVX2 support.
const kernel_table* avx2_compiled_table();

const char* similarity_name(similarity_kind k) {
    switch (k) {
    case similarity_kind::ratio: return "ratio";
    case similarity_kind::product: return "product";
    case similarity_kind::gaussian: return "gaussian";
    }
    return "?";
}

bool parse_similarity(const std::string& name, similarity_kind& out) {
    if (name == "ratio") {
        out = similarity_kind::ratio;
    } else if (name == "product") {
        out = similarity_kind::product;
    } else if (name == "gaussian") {
        out = similarity_kind::gaussian;
    } else {
        return false;
    }
    return true;
}

const kernel_table* avx2_table() {
#if defined(__x86_64__) || defined(__i386__)
    if (!__builtin_cpu_supports("avx2")) return nullptr;
    return avx2_compiled_table();
#else
    return nullptr;
#endif
}

namespace {

const kernel_table& select_table() {
    const char* env = std::getenv("MEMNET_KERNELS");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return scalar_table();
        if (std::strcmp(env, "avx2") == 0) {
            if (const kernel_table* t = avx2_table()) return *t;
            MEMNET_LOG_WARN("MEMNET_KERNELS=avx2 requested but AVX2 is unavailable; "
                            "using scalar kernels");
            return scalar_table();
        }
        MEMNET_LOG_WARN("unknown MEMNET_KERNELS value '%s'; using default selection", env);
    }
    if (const kernel_table* t = avx2_table()) return *t;
    return scalar_table();
}

} // namespace

const kernel_table& active_table() {
    static const kernel_table& table = select_table();
    return table;
}

double hebb_accumulate(const kernel_table& k, similarity_kind kind, const double* yi,
                       const double* yj, std::size_t n, double lambda, double alpha) {
    switch (kind) {
    case similarity_kind::ratio: return k.hebb_ratio(yi, yj, n, lambda, alpha);
    case similarity_kind::product: return k.hebb_product(yi, yj, n, lambda, alpha);
    case similarity_kind::gaussian: return k.hebb_gaussian(yi, yj, n, lambda, alpha);
    }
    return 0.0;
}

double similarity_value(similarity_kind kind, double a, double b) {
    if ((a < 0.0 || b < 0.0) && kind == similarity_kind::ratio)
        fail(errc::invalid_activity, "ratio similarity requires nonnegative activity");
    if (a == 0.0 && b == 0.0) return 0.0;
    switch (kind) {
    case similarity_kind::ratio: return std::min(a, b) / std::max(a, b);
    case similarity_kind::product: return a * b;
    case similarity_kind::gaussian: {
        const double d = a - b;
        return std::exp(-(d * d));
    }
    }
    return 0.0;
}

} // namespace memnet::kernels
