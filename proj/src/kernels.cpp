#include "chebmark/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace chebmark::kernels {

namespace scalar_impl {

void poly_eval(std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out) {
    if (coeffs.empty()) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = 0.0;
        return;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        double acc = coeffs[0];
        for (std::size_t j = 1; j < coeffs.size(); ++j) acc = acc * x + coeffs[j];
        out[i] = acc;
    }
}

void abs_poly_eval(std::span<const double> coeffs, std::span<const double> xs,
                   std::span<double> out) {
    poly_eval(coeffs, xs, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::fabs(out[i]);
}

void linear_factor_product(std::span<const double> roots, std::span<const double> xs,
                           std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        double acc = 1.0;
        for (double r : roots) acc *= x - r;
        out[i] = acc;
    }
}

void rsqrt_abs(std::span<const double> xs, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = 1.0 / std::sqrt(std::fabs(xs[i]));
}

void abs_poly_over_linear(std::span<const double> coeffs, double pole,
                          std::span<const double> xs, std::span<double> out) {
    abs_poly_eval(coeffs, xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] /= std::fabs(xs[i] - pole);
}

void abs_poly_over_quadratic(std::span<const double> coeffs, double center, double im2,
                             std::span<const double> xs, std::span<double> out) {
    abs_poly_eval(coeffs, xs, out);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - center;
        out[i] /= d * d + im2;
    }
}

void pole_factors_eval(std::span<const double> real_poles, std::span<const double> quad_centers,
                       std::span<const double> quad_im2, std::span<const double> xs,
                       std::span<double> rho, std::span<double> logderiv) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        double prod = 1.0;
        double ld = 0.0;
        for (double p : real_poles) {
            const double d = x - p;
            prod *= d;
            ld += 1.0 / d;
        }
        for (std::size_t j = 0; j < quad_centers.size(); ++j) {
            const double d = x - quad_centers[j];
            const double f = d * d + quad_im2[j];
            prod *= f;
            ld += 2.0 * d / f;
        }
        rho[i] = prod;
        logderiv[i] = ld;
    }
}

void rational_combine(std::span<const double> p, std::span<const double> dp,
                      std::span<const double> rho, std::span<const double> logderiv,
                      std::span<double> r, std::span<double> dr) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double inv = 1.0 / std::sqrt(rho[i]);
        r[i] = p[i] * inv;
        dr[i] = (dp[i] - 0.5 * p[i] * logderiv[i]) * inv;
    }
}

void add_scaled(std::span<const double> src, double c, std::span<double> inout) {
    for (std::size_t i = 0; i < src.size(); ++i) inout[i] += c * src[i];
}

void scaled_product(std::span<const double> a, std::span<const double> b, double c,
                    std::span<double> out) {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i] * c;
}

}  // namespace scalar_impl

const Backend& scalar() {
    static const Backend backend = {
        "scalar",
        scalar_impl::poly_eval,
        scalar_impl::abs_poly_eval,
        scalar_impl::linear_factor_product,
        scalar_impl::rsqrt_abs,
        scalar_impl::abs_poly_over_linear,
        scalar_impl::abs_poly_over_quadratic,
        scalar_impl::pole_factors_eval,
        scalar_impl::rational_combine,
        scalar_impl::add_scaled,
        scalar_impl::scaled_product,
    };
    return backend;
}

#ifdef CHEBMARK_HAVE_AVX2_BUILD
namespace avx2_impl {
extern const Backend backend;
bool runtime_supported();
}  // namespace avx2_impl
#endif

const Backend* avx2() {
#ifdef CHEBMARK_HAVE_AVX2_BUILD
    if (avx2_impl::runtime_supported()) return &avx2_impl::backend;
#endif
    return nullptr;
}

const Backend& active() {
    static const Backend* selected = [] {
        const char* forced = std::getenv("CHEBMARK_KERNELS");
        if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &scalar();
        const Backend* vec = avx2();
        return vec != nullptr ? vec : &scalar();
    }();
    return *selected;
}

std::string active_name() { return active().name; }

}  // namespace chebmark::kernels
