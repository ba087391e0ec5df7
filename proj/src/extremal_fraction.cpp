#include "chebmark/extremal_fraction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "chebmark/kernels.hpp"
#include "chebmark/numerics.hpp"

namespace chebmark {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> derivative_coeffs(const std::vector<double>& desc) {
    const std::size_t n = desc.size();
    if (n <= 1) return {0.0};
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
        d[i] = desc[i] * static_cast<double>(n - 1 - i);
    return d;
}

// Householder QR least squares for small dense systems (rows >= cols).
std::vector<double> least_squares(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t rows = a.size();
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t k = 0; k < cols; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < rows; ++i) norm += a[i][k] * a[i][k];
        norm = std::sqrt(norm);
        if (norm == 0.0) raise(errc::singular_period_system, "rank-deficient least squares");
        if (a[k][k] > 0.0) norm = -norm;
        std::vector<double> v(rows, 0.0);
        for (std::size_t i = k; i < rows; ++i) v[i] = a[i][k];
        v[k] -= norm;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < rows; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = k; j < cols; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < rows; ++i) dot += v[i] * a[i][j];
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < rows; ++i) a[i][j] -= f * v[i];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < rows; ++i) dot += v[i] * b[i];
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t i = k; i < rows; ++i) b[i] -= f * v[i];
    }
    std::vector<double> x(cols, 0.0);
    for (std::size_t row = cols; row-- > 0;) {
        double acc = b[row];
        for (std::size_t c = row + 1; c < cols; ++c) acc -= a[row][c] * x[c];
        x[row] = acc / a[row][row];
    }
    return x;
}

std::vector<double> poly_mul_linear(const std::vector<double>& desc, double s, double c) {
    // (s x + c) * p(x), descending coefficients.
    std::vector<double> out(desc.size() + 1, 0.0);
    for (std::size_t i = 0; i < desc.size(); ++i) {
        out[i] += s * desc[i];
        out[i + 1] += c * desc[i];
    }
    return out;
}

}  // namespace

PoleConfiguration PoleConfiguration::from_poles(std::vector<PolePoint> poles) {
    if (poles.size() < 2 || poles.size() % 2 != 0)
        raise(errc::invalid_parameters,
              "a pole configuration needs an even number (>= 2) of poles");
    PoleConfiguration cfg;
    // Conjugate closure: pair each Im>0 pole with a matching Im<0 pole.
    std::vector<PolePoint> lower;
    for (const auto& p : poles) {
        if (p.infinite) continue;
        if (!(p.abs() > 1.0))
            raise(errc::invalid_parameters,
                  "finite poles must satisfy |xi| > 1, got " + format_pole(p));
        if (p.im < 0.0) lower.push_back(p);
    }
    for (const auto& p : poles) {
        if (p.infinite || p.im <= 0.0) continue;
        auto it = std::find_if(lower.begin(), lower.end(), [&](const PolePoint& q) {
            return std::fabs(q.re - p.re) <= 1e-12 && std::fabs(q.im + p.im) <= 1e-12;
        });
        if (it == lower.end())
            raise(errc::invalid_parameters,
                  "complex poles must appear in conjugate pairs; unmatched " + format_pole(p));
        lower.erase(it);
        cfg.quad_centers_.push_back(p.re);
        cfg.quad_im2_.push_back(p.im * p.im);
    }
    if (!lower.empty())
        raise(errc::invalid_parameters,
              "complex poles must appear in conjugate pairs; unmatched " +
                  format_pole(lower.front()));
    for (const auto& p : poles)
        if (p.is_real()) cfg.real_poles_.push_back(p.re);
    std::sort(cfg.real_poles_.begin(), cfg.real_poles_.end());
    cfg.poles_ = std::move(poles);
    return cfg;
}

int PoleConfiguration::finite_degree() const {
    return static_cast<int>(real_poles_.size() + 2 * quad_centers_.size());
}

void PoleConfiguration::rho_many(std::span<const double> xs, std::span<double> rho,
                                 std::span<double> logderiv) const {
    kernels::active().pole_factors_eval(real_poles_, quad_centers_, quad_im2_, xs, rho,
                                        logderiv);
}

double PoleConfiguration::rho(double x) const {
    double r = 0.0, ld = 0.0;
    kernels::active().pole_factors_eval(real_poles_, quad_centers_, quad_im2_, {&x, 1}, {&r, 1},
                                        {&ld, 1});
    return r;
}

double PoleConfiguration::rho_log_deriv(double x) const {
    double r = 0.0, ld = 0.0;
    kernels::active().pole_factors_eval(real_poles_, quad_centers_, quad_im2_, {&x, 1}, {&r, 1},
                                        {&ld, 1});
    return ld;
}

namespace {

struct GroupedDensities {
    std::vector<DensityEvaluator> evaluators;
    std::vector<double> weights;  // pole multiplicities
};

GroupedDensities group_densities(const IntervalSystem& e, const PoleConfiguration& cfg) {
    // Conjugate partners share one evaluator (the per-pole density of a pair
    // member); the multiplicity weight restores the full sum over all 2n
    // poles.
    std::map<std::tuple<bool, double, double>, int> counts;
    for (const auto& p : cfg.poles()) {
        const std::tuple<bool, double, double> key{p.infinite, p.infinite ? 0.0 : p.re,
                                                   p.infinite ? 0.0 : std::fabs(p.im)};
        ++counts[key];
    }
    GroupedDensities out;
    for (const auto& [key, count] : counts) {
        const auto& [inf, re, im] = key;
        const PolePoint pole = inf ? PolePoint::infinity()
                                   : (im == 0.0 ? PolePoint::real(re)
                                                : PolePoint::complex_point(re, im));
        out.evaluators.push_back(pole_density(e, pole));
        out.weights.push_back(static_cast<double>(count));
    }
    return out;
}

QuantizationSignature signature_from_measures(const IntervalSystem& e,
                                              const GroupedDensities& dens, int n, double tol) {
    const int l = e.band_count();
    QuantizationSignature sig;
    sig.q.resize(static_cast<std::size_t>(l));
    sig.residuals.resize(static_cast<std::size_t>(l));
    int worst_band = 0;
    double worst = 0.0;
    int total = 0;
    for (int k = 0; k < l; ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j < dens.evaluators.size(); ++j)
            sum += dens.weights[j] * dens.evaluators[j].band_integral(k);
        const int q = static_cast<int>(std::llround(0.5 * sum));
        const double residual = std::fabs(sum - 2.0 * q);
        sig.q[static_cast<std::size_t>(k)] = q;
        sig.residuals[static_cast<std::size_t>(k)] = residual;
        if (residual > worst) {
            worst = residual;
            worst_band = k;
        }
        if (q < 1)
            raise(errc::quantization_violated,
                  "band " + std::to_string(k) + " carries measure " + std::to_string(sum) +
                      ", below the minimum 2");
        total += q;
    }
    if (worst > tol)
        raise(errc::quantization_violated,
              "worst band " + std::to_string(worst_band) + " residual " + std::to_string(worst) +
                  " exceeds tol " + std::to_string(tol));
    if (total != n)
        raise(errc::quantization_violated,
              "band quanta sum to " + std::to_string(total) + ", expected n = " +
                  std::to_string(n));
    return sig;
}

}  // namespace

QuantizationSignature quantization_check(const IntervalSystem& e, const PoleConfiguration& poles,
                                         double tol) {
    const GroupedDensities dens = group_densities(e, poles);
    return signature_from_measures(e, dens, poles.n(), tol);
}

struct ExtremalFraction::Impl {
    IntervalSystem system;
    PoleConfiguration config;
    QuantizationSignature signature;
    GroupedDensities densities;
    std::vector<double> gamma_start;  // per band, then one extra entry n*pi
    std::vector<double> zeros;
    std::vector<int> zeros_per_band;
    std::vector<std::pair<double, double>> e_tilde;
    std::vector<double> osc_nodes;
    std::vector<double> numerator;        // descending
    std::vector<double> numerator_deriv;  // descending

    Impl(IntervalSystem e, PoleConfiguration cfg)
        : system(std::move(e)), config(std::move(cfg)) {}

    void density_sum_many(std::span<const double> ts, std::span<double> out) const {
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t j = 0; j < densities.evaluators.size(); ++j)
            densities.evaluators[j].accumulate_many(ts, densities.weights[j], out);
    }

    // Smooth integrand of the phase on band k: with t = mid + half*cos(phi),
    //   d gamma = (pi/2) * sum_j density_j(t) dt = (pi/2) * G(phi) dphi,
    //   G(phi) = [sum_j |P_j|/(pi D_j)](t) / sqrt(prod of other |t - a_j|).
    void band_smooth_sum(int band, std::span<const double> phis, std::span<double> out) const {
        auto [lo, hi] = system.band(band);
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        std::vector<double> ts(phis.size());
        for (std::size_t i = 0; i < phis.size(); ++i) ts[i] = mid + half * std::cos(phis[i]);
        std::fill(out.begin(), out.end(), 0.0);
        for (std::size_t j = 0; j < densities.evaluators.size(); ++j)
            densities.evaluators[j].accumulate_smooth_factor_many(ts, densities.weights[j], out);
        std::vector<double> rest;
        for (double a : system.endpoints())
            if (a != lo && a != hi) rest.push_back(a);
        const auto& k = kernels::active();
        std::vector<double> prod(ts.size());
        std::vector<double> w(ts.size());
        k.linear_factor_product(rest, ts, prod);
        k.rsqrt_abs(prod, w);
        k.scaled_product(out, w, 1.0, out);
    }

    // Phase increase from the left endpoint of the band up to x inside it.
    double gamma_in_band(int band, double x) const {
        auto [lo, hi] = system.band(band);
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        const double arg = std::clamp((x - mid) / half, -1.0, 1.0);
        const double phi = std::acos(arg);
        if (phi >= kPi) return 0.0;
        const BatchFunction g = [&](std::span<const double> phis, std::span<double> out) {
            band_smooth_sum(band, phis, out);
        };
        return 0.5 * kPi * integrate_smooth(g, phi, kPi, 1e-12);
    }

    double gamma(double x) const {
        const auto& ep = system.endpoints();
        if (x <= ep.front()) return 0.0;
        if (x >= ep.back()) return gamma_start.back();
        for (int k = 0; k < system.band_count(); ++k) {
            auto [lo, hi] = system.band(k);
            if (x < lo) return gamma_start[static_cast<std::size_t>(k)];  // in the gap before
            if (x <= hi) {
                if (x == lo) return gamma_start[static_cast<std::size_t>(k)];
                if (x == hi) return gamma_start[static_cast<std::size_t>(k) + 1];
                return gamma_start[static_cast<std::size_t>(k)] + gamma_in_band(k, x);
            }
        }
        return gamma_start.back();
    }

    double gamma_prime(double x) const {
        const int band = system.band_index_of(x);
        if (band < 0) raise(errc::outside_bands, "gamma' needs a band interior point");
        auto [lo, hi] = system.band(band);
        if (x == lo || x == hi)
            raise(errc::outside_bands, "gamma' is singular at band endpoints");
        double out = 0.0;
        density_sum_many({&x, 1}, {&out, 1});
        return 0.5 * kPi * out;
    }

    void m_many_numerator(std::span<const double> xs, std::span<double> value,
                          std::span<double> deriv) const {
        std::vector<double> p(xs.size()), dp(xs.size()), rho(xs.size()), ld(xs.size());
        const auto& k = kernels::active();
        k.poly_eval(numerator, xs, p);
        k.poly_eval(numerator_deriv, xs, dp);
        config.rho_many(xs, rho, ld);
        k.rational_combine(p, dp, rho, ld, value, deriv);
    }

    double m_eval(double x) const {
        if (system.contains(x)) return std::cos(gamma(x));
        double v = 0.0, d = 0.0;
        m_many_numerator({&x, 1}, {&v, 1}, {&d, 1});
        return v;
    }

    double m_prime(double x) const {
        const int band = system.band_index_of(x);
        if (band >= 0) {
            auto [lo, hi] = system.band(band);
            const double edge = 1e-9 * (hi - lo);
            if (x - lo > edge && hi - x > edge)
                return -std::sin(gamma(x)) * gamma_prime(x);
        }
        double v = 0.0, d = 0.0;
        m_many_numerator({&x, 1}, {&v, 1}, {&d, 1});
        return d;
    }

    bool in_e_tilde(double x) const {
        for (const auto& [lo, hi] : e_tilde)
            if (x >= lo && x <= hi) return true;
        return false;
    }

    double bound_profile(double x) const {
        if (!system.contains(x)) raise(errc::outside_e, "bound profile is defined on E only");
        if (in_e_tilde(x)) return gamma_prime(x);
        return std::fabs(m_prime(x));
    }

    double markov_constant() const {
        double best = 0.0;
        for (double z : zeros) best = std::max(best, gamma_prime(z));
        // Outer segments carry the |m'| branch; the numerator form is smooth
        // through the band endpoints.
        const auto abs_deriv = [&](double x) {
            double v = 0.0, d = 0.0;
            m_many_numerator({&x, 1}, {&v, 1}, {&d, 1});
            return std::fabs(d);
        };
        std::size_t zi = 0;
        for (int k = 0; k < system.band_count(); ++k) {
            auto [lo, hi] = system.band(k);
            const int count = zeros_per_band[static_cast<std::size_t>(k)];
            const double first = zeros[zi];
            const double last = zeros[zi + static_cast<std::size_t>(count) - 1];
            zi += static_cast<std::size_t>(count);
            best = std::max(best, maximize_on_interval(abs_deriv, lo, first, 512, 1e-11).second);
            best = std::max(best, maximize_on_interval(abs_deriv, last, hi, 512, 1e-11).second);
        }
        return best;
    }

    ConvexityReport convexity_report(int grid) const {
        ConvexityReport report;
        report.min_second_difference = std::numeric_limits<double>::infinity();
        for (int k = 0; k < system.band_count(); ++k) {
            auto [lo, hi] = system.band(k);
            const double trim = 0.005 * (hi - lo);
            const double a = lo + trim, b = hi - trim;
            std::vector<double> xs(static_cast<std::size_t>(grid));
            for (int i = 0; i < grid; ++i)
                xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (grid - 1);
            std::vector<double> g(xs.size());
            density_sum_many(xs, g);
            for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
                const double second =
                    0.5 * kPi * (g[i - 1] - 2.0 * g[i] + g[i + 1]);
                if (second < report.min_second_difference) {
                    report.min_second_difference = second;
                    report.worst_point = xs[i];
                }
            }
        }
        report.ok = report.min_second_difference >= -1e-8;
        return report;
    }
};

namespace {

void recover_numerator(ExtremalFraction::Impl& impl) {
    const IntervalSystem& e = impl.system;
    const int n = impl.config.n();
    auto [hull_lo, hull_hi] = e.hull();
    const double s = 2.0 / (hull_hi - hull_lo);
    const double c = -(hull_hi + hull_lo) / (hull_hi - hull_lo);

    // Chebyshev basis in the hull variable, expressed in x monomials.
    std::vector<std::vector<double>> basis;
    basis.push_back({1.0});
    basis.push_back({s, c});
    for (int d = 2; d <= n; ++d) {
        std::vector<double> next = poly_mul_linear(basis.back(), 2.0 * s, 2.0 * c);
        const auto& prev = basis[static_cast<std::size_t>(d) - 2];
        for (std::size_t i = 0; i < prev.size(); ++i)
            next[next.size() - prev.size() + i] -= prev[i];
        basis.push_back(std::move(next));
    }

    // Fit nodes: Chebyshev extrema per band, values cos(gamma) * sqrt(rho).
    std::vector<double> nodes;
    std::vector<double> hold_out;
    for (int k = 0; k < e.band_count(); ++k) {
        auto [lo, hi] = e.band(k);
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        const int count = std::max(impl.signature.q[static_cast<std::size_t>(k)] + 4, 6);
        for (int i = 0; i < count; ++i) {
            const double t = mid + half * std::cos(kPi * i / (count - 1));
            nodes.push_back(t);
            if (i > 0)
                hold_out.push_back(mid + half * std::cos(kPi * (i - 0.5) / (count - 1)));
        }
    }
    std::sort(nodes.begin(), nodes.end());

    std::vector<std::vector<double>> a(nodes.size(),
                                       std::vector<double>(static_cast<std::size_t>(n) + 1));
    std::vector<double> b(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double u = s * nodes[i] + c;
        double t_prev = 1.0, t_curr = u;
        a[i][0] = 1.0;
        if (n >= 1) a[i][1] = u;
        for (int d = 2; d <= n; ++d) {
            const double t_next = 2.0 * u * t_curr - t_prev;
            t_prev = t_curr;
            t_curr = t_next;
            a[i][static_cast<std::size_t>(d)] = t_curr;
        }
        b[i] = std::cos(impl.gamma(nodes[i])) * std::sqrt(impl.config.rho(nodes[i]));
    }
    const std::vector<double> alpha = least_squares(std::move(a), std::move(b));

    // Assemble descending monomial coefficients b_0..b_n.
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
    for (int d = 0; d <= n; ++d) {
        const auto& poly = basis[static_cast<std::size_t>(d)];
        for (std::size_t i = 0; i < poly.size(); ++i)
            coeffs[coeffs.size() - poly.size() + i] += alpha[static_cast<std::size_t>(d)] * poly[i];
    }
    impl.numerator = coeffs;
    impl.numerator_deriv = derivative_coeffs(coeffs);

    // Residual check at held-out nodes.
    double worst = 0.0;
    for (double t : hold_out) {
        double v = 0.0, d = 0.0;
        impl.m_many_numerator({&t, 1}, {&v, 1}, {&d, 1});
        worst = std::max(worst, std::fabs(v - std::cos(impl.gamma(t))));
    }
    if (worst > 1e-8)
        raise(errc::numerator_residual_too_large,
              "held-out numerator residual " + std::to_string(worst));
}

}  // namespace

ExtremalFraction build_extremal(const IntervalSystem& e, const PoleConfiguration& poles) {
    auto impl = std::make_shared<ExtremalFraction::Impl>(e, poles);

    // rho must stay positive across the hull for the class to make sense.
    {
        auto [lo, hi] = e.hull();
        for (int i = 0; i <= 256; ++i) {
            const double x = lo + (hi - lo) * i / 256.0;
            if (!(impl->config.rho(x) > 0.0))
                raise(errc::invalid_parameters, "rho is not positive on conv(E)");
        }
    }

    impl->densities = group_densities(e, impl->config);
    impl->signature = signature_from_measures(e, impl->densities, impl->config.n(), 1e-6);

    const int l = e.band_count();
    impl->gamma_start.assign(static_cast<std::size_t>(l) + 1, 0.0);
    for (int k = 0; k < l; ++k)
        impl->gamma_start[static_cast<std::size_t>(k) + 1] =
            impl->gamma_start[static_cast<std::size_t>(k)] +
            kPi * impl->signature.q[static_cast<std::size_t>(k)];

    // Zeros: gamma crosses the half-integer levels once per band zero; the
    // phase is strictly increasing inside bands, so plain bracketing works.
    std::size_t cumulative = 0;
    for (int k = 0; k < l; ++k) {
        auto [lo, hi] = e.band(k);
        const int q = impl->signature.q[static_cast<std::size_t>(k)];
        const double start = impl->gamma_start[static_cast<std::size_t>(k)];
        const double full = impl->gamma_in_band(k, hi);
        double left = lo;
        for (int j = 1; j <= q; ++j) {
            const double level = (2.0 * (static_cast<double>(cumulative) + j) - 1.0) * kPi / 2.0;
            const double local = level - start;
            if (local >= full)
                raise(errc::zero_count_mismatch,
                      "band " + std::to_string(k) + " does not reach zero level " +
                          std::to_string(j));
            const auto g = [&](double x) { return impl->gamma_in_band(k, x) - local; };
            const double z = find_root_bracketed(g, left, hi, 1e-13);
            impl->zeros.push_back(z);
            left = z;
        }
        cumulative += static_cast<std::size_t>(q);
        impl->zeros_per_band.push_back(q);
        impl->e_tilde.emplace_back(impl->zeros[impl->zeros.size() - static_cast<std::size_t>(q)],
                                   impl->zeros.back());
    }

    // Equioscillation nodes: band endpoints plus the interior integer-pi
    // levels.
    for (int k = 0; k < l; ++k) {
        auto [lo, hi] = e.band(k);
        const int q = impl->signature.q[static_cast<std::size_t>(k)];
        impl->osc_nodes.push_back(lo);
        double left = lo;
        for (int j = 1; j < q; ++j) {
            const double local = kPi * j;
            const auto g = [&](double x) { return impl->gamma_in_band(k, x) - local; };
            const double y = find_root_bracketed(g, left, hi, 1e-13);
            impl->osc_nodes.push_back(y);
            left = y;
        }
        impl->osc_nodes.push_back(hi);
    }

    recover_numerator(*impl);
    return ExtremalFraction(impl);
}

const IntervalSystem& ExtremalFraction::system() const { return impl_->system; }
const PoleConfiguration& ExtremalFraction::poles() const { return impl_->config; }
const QuantizationSignature& ExtremalFraction::quantization() const { return impl_->signature; }
double ExtremalFraction::gamma(double x) const { return impl_->gamma(x); }
double ExtremalFraction::gamma_prime(double x) const { return impl_->gamma_prime(x); }

void ExtremalFraction::gamma_prime_many(std::span<const double> xs, std::span<double> out) const {
    impl_->density_sum_many(xs, out);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= 0.5 * kPi;
}

double ExtremalFraction::m_eval(double x) const { return impl_->m_eval(x); }
double ExtremalFraction::m_prime(double x) const { return impl_->m_prime(x); }

void ExtremalFraction::m_many_numerator(std::span<const double> xs, std::span<double> value,
                                        std::span<double> deriv) const {
    impl_->m_many_numerator(xs, value, deriv);
}

double ExtremalFraction::bound_profile(double x) const { return impl_->bound_profile(x); }
double ExtremalFraction::markov_constant() const { return impl_->markov_constant(); }
ConvexityReport ExtremalFraction::convexity_report(int grid) const {
    return impl_->convexity_report(grid);
}
const std::vector<double>& ExtremalFraction::zeros() const { return impl_->zeros; }
const std::vector<int>& ExtremalFraction::zeros_per_band() const { return impl_->zeros_per_band; }
const std::vector<std::pair<double, double>>& ExtremalFraction::e_tilde() const {
    return impl_->e_tilde;
}
bool ExtremalFraction::in_e_tilde(double x) const { return impl_->in_e_tilde(x); }
const std::vector<double>& ExtremalFraction::osc_nodes() const { return impl_->osc_nodes; }
const std::vector<double>& ExtremalFraction::numerator() const { return impl_->numerator; }

RusakClosedForm::RusakClosedForm(std::vector<std::complex<double>> a_params) : a_(std::move(a_params)) {
    if (a_.empty() || a_.size() % 2 != 0)
        raise(errc::parameter_out_of_range,
              "Rusak parameters come in an even count (2n values)");
    std::vector<std::complex<double>> lower;
    for (const auto& a : a_) {
        if (!(std::abs(a) < 1.0))
            raise(errc::parameter_out_of_range, "Rusak parameters need |a| < 1");
        if (a.imag() < 0.0) lower.push_back(a);
    }
    for (const auto& a : a_) {
        if (a.imag() <= 0.0) continue;
        auto it = std::find_if(lower.begin(), lower.end(), [&](const std::complex<double>& q) {
            return std::fabs(q.real() - a.real()) <= 1e-12 &&
                   std::fabs(q.imag() + a.imag()) <= 1e-12;
        });
        if (it == lower.end())
            raise(errc::parameter_out_of_range,
                  "complex Rusak parameters must be conjugate-closed");
        lower.erase(it);
    }
    if (!lower.empty())
        raise(errc::parameter_out_of_range, "complex Rusak parameters must be conjugate-closed");
}

double RusakClosedForm::phase(double x) const {
    double sum = 0.0;
    for (const auto& a : a_) {
        const std::complex<double> u = (x + a) / (1.0 + a * x);
        sum += std::acos(u).real();
    }
    return 0.5 * sum;
}

double RusakClosedForm::m(double x) const { return std::cos(phase(x)); }

double RusakClosedForm::lambda(double x) const {
    double sum = 0.0;
    for (const auto& a : a_) sum += (std::sqrt(1.0 - a * a) / (1.0 + a * x)).real();
    return 0.5 * sum;
}

double RusakClosedForm::m_prime(double x) const {
    // m = cos(Phi), Phi' = -lambda/sqrt(1-x^2).
    return std::sin(phase(x)) * lambda(x) / std::sqrt(1.0 - x * x);
}

}  // namespace chebmark
