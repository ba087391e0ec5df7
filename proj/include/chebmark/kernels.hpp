#pragma once

#include <span>
#include <string>

// Batch arithmetic kernels used by the evaluation hot paths (density grids,
// rational values/derivatives, quadrature nodes). Every kernel is a pure
// elementwise map: out[i] depends only on inputs at index i, and every
// backend performs the identical sequence of IEEE-754 operations per element,
// so scalar and SIMD variants produce bit-identical results. Reductions are
// deliberately excluded; callers sum in fixed index order.

namespace chebmark::kernels {

struct Backend {
    const char* name;

    // out[i] = c[0]*x^d + c[1]*x^(d-1) + ... + c[d]   (Horner, descending coeffs)
    void (*poly_eval)(std::span<const double> coeffs, std::span<const double> xs,
                      std::span<double> out);

    // out[i] = |poly(x_i)|
    void (*abs_poly_eval)(std::span<const double> coeffs, std::span<const double> xs,
                          std::span<double> out);

    // out[i] = prod_j (x_i - roots[j]); empty product = 1
    void (*linear_factor_product)(std::span<const double> roots, std::span<const double> xs,
                                  std::span<double> out);

    // out[i] = 1 / sqrt(|x_i|)
    void (*rsqrt_abs)(std::span<const double> xs, std::span<double> out);

    // out[i] = |poly(x_i)| / |x_i - pole|
    void (*abs_poly_over_linear)(std::span<const double> coeffs, double pole,
                                 std::span<const double> xs, std::span<double> out);

    // out[i] = |poly(x_i)| / ((x_i - center)^2 + im2)
    void (*abs_poly_over_quadratic)(std::span<const double> coeffs, double center, double im2,
                                    std::span<const double> xs, std::span<double> out);

    // rho[i]      = prod_j (x_i - rp[j]) * prod_j ((x_i - qc[j])^2 + qi2[j])
    // logderiv[i] = sum_j 1/(x_i - rp[j]) + sum_j 2(x_i - qc[j])/((x_i - qc[j])^2 + qi2[j])
    void (*pole_factors_eval)(std::span<const double> real_poles,
                              std::span<const double> quad_centers,
                              std::span<const double> quad_im2, std::span<const double> xs,
                              std::span<double> rho, std::span<double> logderiv);

    // r[i]  = p[i] / sqrt(rho[i])
    // dr[i] = (dp[i] - 0.5 * p[i] * logderiv[i]) / sqrt(rho[i])
    void (*rational_combine)(std::span<const double> p, std::span<const double> dp,
                             std::span<const double> rho, std::span<const double> logderiv,
                             std::span<double> r, std::span<double> dr);

    // inout[i] += c * src[i]
    void (*add_scaled)(std::span<const double> src, double c, std::span<double> inout);

    // out[i] = a[i] * b[i] * c
    void (*scaled_product)(std::span<const double> a, std::span<const double> b, double c,
                           std::span<double> out);
};

// Reference implementation; always available.
const Backend& scalar();

// AVX2 implementation, or nullptr when the build or the CPU lacks it.
const Backend* avx2();

// Backend selected at startup: AVX2 when supported, unless the environment
// variable CHEBMARK_KERNELS forces "scalar" (or "avx2").
const Backend& active();

// Name of the backend active() resolves to.
std::string active_name();

}  // namespace chebmark::kernels
