// AVX2 variants of the batch kernels. Each vector lane performs the same
// operation sequence as the scalar reference (mul/add kept separate, no FMA),
// so results are bit-identical to the scalar backend; the equivalence tests
// assert exactly that. Tails shorter than one vector fall through to the
// scalar code.

#include "chebmark/kernels.hpp"

#ifdef CHEBMARK_HAVE_AVX2_BUILD

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace chebmark::kernels {

namespace scalar_ref {
// Scalar backend entry points, reused for tails.
inline const Backend& b() { return scalar(); }
}  // namespace scalar_ref

namespace avx2_impl {

namespace {

const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

inline __m256d abs_pd(__m256d v) { return _mm256_and_pd(v, kAbsMask); }

inline __m256d horner(std::span<const double> coeffs, __m256d x) {
    __m256d acc = _mm256_set1_pd(coeffs[0]);
    for (std::size_t j = 1; j < coeffs.size(); ++j) {
        acc = _mm256_add_pd(_mm256_mul_pd(acc, x), _mm256_set1_pd(coeffs[j]));
    }
    return acc;
}

}  // namespace

void poly_eval(std::span<const double> coeffs, std::span<const double> xs,
               std::span<double> out) {
    if (coeffs.empty()) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = 0.0;
        return;
    }
    std::size_t i = 0;
    for (; i + 4 <= xs.size(); i += 4) {
        __m256d x = _mm256_loadu_pd(xs.data() + i);
        _mm256_storeu_pd(out.data() + i, horner(coeffs, x));
    }
    if (i < xs.size())
        scalar_ref::b().poly_eval(coeffs, xs.subspan(i), out.subspan(i));
}

void abs_poly_eval(std::span<const double> coeffs, std::span<const double> xs,
                   std::span<double> out) {
    if (coeffs.empty()) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = 0.0;
        return;
    }
    std::size_t i = 0;
    for (; i + 4 <= xs.size(); i += 4) {
        __m256d x = _mm256_loadu_pd(xs.data() + i);
        _mm256_storeu_pd(out.data() + i, abs_pd(horner(coeffs, x)));
    }
    if (i < xs.size())
        scalar_ref::b().abs_poly_eval(coeffs, xs.subspan(i), out.subspan(i));
}

void linear_factor_product(std::span<const double> roots, std::span<const double> xs,
                           std::span<double> out) {
    std::size_t i = 0;
    for (; i + 4 <= xs.size(); i += 4) {
        __m256d x = _mm256_loadu_pd(xs.data() + i);
        __m256d acc = _mm256_set1_pd(1.0);
        for (double r : roots) acc = _mm256_mul_pd(acc, _mm256_sub_pd(x, _mm256_set1_pd(r)));
        _mm256_storeu_pd(out.data() + i, acc);
    }
    if (i < xs.size())
        scalar_ref::b().linear_factor_product(roots, xs.subspan(i), out.subspan(i));
}

void rsqrt_abs(std::span<const double> xs, std::span<double> out) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= xs.size(); i += 4) {
        __m256d x = abs_pd(_mm256_loadu_pd(xs.data() + i));
        _mm256_storeu_pd(out.data() + i, _mm256_div_pd(one, _mm256_sqrt_pd(x)));
    }
    if (i < xs.size()) scalar_ref::b().rsqrt_abs(xs.subspan(i), out.subspan(i));
}

void abs_poly_over_linear(std::span<const double> coeffs, double pole,
                          std::span<const double> xs, std::span<double> out) {
    const __m256d p = _mm256_set1_pd(pole);
    std::size_t i = 0;
    for (; i + 4 <= xs.size(); i += 4) {
        __m256d x = _mm256_loadu_pd(xs.data() + i);
        __m256d num = abs_pd(horner(coeffs, x));
        __m256d den = abs_pd(_mm256_sub_pd(x, p));
        _mm256_storeu_pd(out.data() + i, _mm256_div_pd(num, den));
    }
    if (i < xs.size())
        scalar_ref::b().abs_poly_over_linear(coeffs, pole, xs.subspan(i), out.subspan(i));
}

void abs_poly_over_quadratic(std::span<const double> coeffs, double center, double im2,
                             std::span<const double> xs, std::span<double> out) {
    const __m256d c = _mm256_set1_pd(center);
    const __m256d s = _mm256_set1_pd(im2);
    std::size_t i = 0;
    for (; i + 4 <= xs.size(); i += 4) {
        __m256d x = _mm256_loadu_pd(xs.data() + i);
        __m256d num = abs_pd(horner(coeffs, x));
        __m256d d = _mm256_sub_pd(x, c);
        __m256d den = _mm256_add_pd(_mm256_mul_pd(d, d), s);
        _mm256_storeu_pd(out.data() + i, _mm256_div_pd(num, den));
    }
    if (i < xs.size())
        scalar_ref::b().abs_poly_over_quadratic(coeffs, center, im2, xs.subspan(i),
                                                out.subspan(i));
}

void pole_factors_eval(std::span<const double> real_poles, std::span<const double> quad_centers,
                       std::span<const double> quad_im2, std::span<const double> xs,
                       std::span<double> rho, std::span<double> logderiv) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= xs.size(); i += 4) {
        __m256d x = _mm256_loadu_pd(xs.data() + i);
        __m256d prod = one;
        __m256d ld = _mm256_setzero_pd();
        for (double p : real_poles) {
            __m256d d = _mm256_sub_pd(x, _mm256_set1_pd(p));
            prod = _mm256_mul_pd(prod, d);
            ld = _mm256_add_pd(ld, _mm256_div_pd(one, d));
        }
        for (std::size_t j = 0; j < quad_centers.size(); ++j) {
            __m256d d = _mm256_sub_pd(x, _mm256_set1_pd(quad_centers[j]));
            __m256d f = _mm256_add_pd(_mm256_mul_pd(d, d), _mm256_set1_pd(quad_im2[j]));
            prod = _mm256_mul_pd(prod, f);
            ld = _mm256_add_pd(ld, _mm256_div_pd(_mm256_mul_pd(two, d), f));
        }
        _mm256_storeu_pd(rho.data() + i, prod);
        _mm256_storeu_pd(logderiv.data() + i, ld);
    }
    if (i < xs.size())
        scalar_ref::b().pole_factors_eval(real_poles, quad_centers, quad_im2, xs.subspan(i),
                                          rho.subspan(i), logderiv.subspan(i));
}

void rational_combine(std::span<const double> p, std::span<const double> dp,
                      std::span<const double> rho, std::span<const double> logderiv,
                      std::span<double> r, std::span<double> dr) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t i = 0;
    for (; i + 4 <= p.size(); i += 4) {
        __m256d pv = _mm256_loadu_pd(p.data() + i);
        __m256d dpv = _mm256_loadu_pd(dp.data() + i);
        __m256d inv = _mm256_div_pd(one, _mm256_sqrt_pd(_mm256_loadu_pd(rho.data() + i)));
        __m256d ld = _mm256_loadu_pd(logderiv.data() + i);
        __m256d halfp = _mm256_mul_pd(half, pv);
        __m256d corr = _mm256_mul_pd(halfp, ld);
        _mm256_storeu_pd(r.data() + i, _mm256_mul_pd(pv, inv));
        _mm256_storeu_pd(dr.data() + i, _mm256_mul_pd(_mm256_sub_pd(dpv, corr), inv));
    }
    if (i < p.size())
        scalar_ref::b().rational_combine(p.subspan(i), dp.subspan(i), rho.subspan(i),
                                         logderiv.subspan(i), r.subspan(i), dr.subspan(i));
}

void add_scaled(std::span<const double> src, double c, std::span<double> inout) {
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= src.size(); i += 4) {
        __m256d s = _mm256_loadu_pd(src.data() + i);
        __m256d d = _mm256_loadu_pd(inout.data() + i);
        _mm256_storeu_pd(inout.data() + i, _mm256_add_pd(d, _mm256_mul_pd(cv, s)));
    }
    if (i < src.size()) scalar_ref::b().add_scaled(src.subspan(i), c, inout.subspan(i));
}

void scaled_product(std::span<const double> a, std::span<const double> b, double c,
                    std::span<double> out) {
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= a.size(); i += 4) {
        __m256d av = _mm256_loadu_pd(a.data() + i);
        __m256d bv = _mm256_loadu_pd(b.data() + i);
        _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_mul_pd(av, bv), cv));
    }
    if (i < a.size()) scalar_ref::b().scaled_product(a.subspan(i), b.subspan(i), c, out.subspan(i));
}

bool runtime_supported() { return __builtin_cpu_supports("avx2") != 0; }

extern const Backend backend;
const Backend backend = {
    "avx2",
    poly_eval,
    abs_poly_eval,
    linear_factor_product,
    rsqrt_abs,
    abs_poly_over_linear,
    abs_poly_over_quadratic,
    pole_factors_eval,
    rational_combine,
    add_scaled,
    scaled_product,
};

}  // namespace avx2_impl

}  // namespace chebmark::kernels

#endif  // CHEBMARK_HAVE_AVX2_BUILD
