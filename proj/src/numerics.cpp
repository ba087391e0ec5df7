#include "chebmark/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace chebmark {

namespace {

constexpr double kPi = std::numbers::pi;

// 16-point Gauss-Legendre rule on [-1,1].
constexpr double kGl16Nodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGl16Weights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

BatchFunction wrap(const RealFunction& f) {
    return [&f](std::span<const double> xs, std::span<double> out) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
    };
}

struct Estimate {
    double value;
    double l1;
};

Estimate singular_estimate(const BatchFunction& f, double mid, double half, int n,
                           std::vector<double>& nodes, std::vector<double>& vals) {
    nodes.resize(static_cast<std::size_t>(n));
    vals.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        nodes[static_cast<std::size_t>(i)] = mid + half * std::cos((2.0 * i + 1.0) * kPi / (2.0 * n));
    f(nodes, vals);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += vals[static_cast<std::size_t>(i)];
        abs_sum += std::fabs(vals[static_cast<std::size_t>(i)]);
    }
    const double w = kPi / n;
    return {w * sum, w * abs_sum};
}

Estimate smooth_estimate(const BatchFunction& f, double a, double b, int panels,
                         std::vector<double>& nodes, std::vector<double>& vals) {
    const std::size_t total = static_cast<std::size_t>(panels) * 16;
    nodes.resize(total);
    vals.resize(total);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double c = lo + 0.5 * width;
        const double h = 0.5 * width;
        for (int i = 0; i < 16; ++i)
            nodes[static_cast<std::size_t>(p) * 16 + static_cast<std::size_t>(i)] =
                c + h * kGl16Nodes[i];
    }
    f(nodes, vals);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double h = 0.5 * width;
        for (int i = 0; i < 16; ++i) {
            const double v = kGl16Weights[i] * vals[static_cast<std::size_t>(p) * 16 +
                                                    static_cast<std::size_t>(i)];
            sum += h * v;
            abs_sum += h * std::fabs(v);
        }
    }
    return {sum, abs_sum};
}

bool converged(const Estimate& coarse, const Estimate& fine, double rel_tol) {
    const double err = std::fabs(fine.value - coarse.value);
    const double scale = std::max(std::fabs(fine.value), fine.l1);
    return err <= rel_tol * scale || scale == 0.0;
}

}  // namespace

double integrate_singular(const BatchFunction& f, double alpha, double beta,
                          const QuadratureSpec& spec) {
    if (!(alpha < beta)) raise(errc::invalid_parameters, "integrate_singular needs alpha < beta");
    if (spec.node_count < 8 || spec.target_rel_tol <= 0.0 || spec.max_refinements < 1)
        raise(errc::invalid_parameters, "bad quadrature spec");
    const double mid = 0.5 * (alpha + beta);
    const double half = 0.5 * (beta - alpha);
    std::vector<double> nodes;
    std::vector<double> vals;
    int n = spec.node_count;
    Estimate prev = singular_estimate(f, mid, half, n, nodes, vals);
    for (int r = 0; r < spec.max_refinements; ++r) {
        n *= 2;
        Estimate next = singular_estimate(f, mid, half, n, nodes, vals);
        if (converged(prev, next, spec.target_rel_tol)) return next.value;
        prev = next;
    }
    raise(errc::no_convergence,
          "integrate_singular did not converge after " + std::to_string(spec.max_refinements) +
              " refinements");
}

double integrate_singular(const RealFunction& f, double alpha, double beta,
                          const QuadratureSpec& spec) {
    return integrate_singular(wrap(f), alpha, beta, spec);
}

double integrate_smooth(const BatchFunction& f, double a, double b, double rel_tol,
                        int max_refinements) {
    if (a == b) return 0.0;
    if (!(a < b)) return -integrate_smooth(f, b, a, rel_tol, max_refinements);
    std::vector<double> nodes;
    std::vector<double> vals;
    int panels = 1;
    Estimate prev = smooth_estimate(f, a, b, panels, nodes, vals);
    for (int r = 0; r < max_refinements; ++r) {
        panels *= 2;
        Estimate next = smooth_estimate(f, a, b, panels, nodes, vals);
        if (converged(prev, next, rel_tol)) return next.value;
        prev = next;
    }
    raise(errc::no_convergence, "integrate_smooth did not converge");
}

double integrate_smooth(const RealFunction& f, double a, double b, double rel_tol,
                        int max_refinements) {
    return integrate_smooth(wrap(f), a, b, rel_tol, max_refinements);
}

double principal_value_singular(const RealFunction& g, double pole, double alpha, double beta,
                                double rel_tol) {
    if (!(alpha < pole && pole < beta))
        raise(errc::invalid_parameters, "principal value pole must lie inside the interval");

    // Both excised pieces keep one inverse-sqrt endpoint; substitute the
    // singular end away (s = end -/+ u^2) and integrate the smooth remainder.
    const auto excised = [&](double eps) {
        const double left_len = (pole - eps) - alpha;
        const double right_len = beta - (pole + eps);
        const auto left = [&](double u) {
            const double s = alpha + left_len * u * u;
            return 2.0 * std::sqrt(left_len) * g(s) / ((s - pole) * std::sqrt(beta - s));
        };
        const auto right = [&](double u) {
            const double s = beta - right_len * u * u;
            return 2.0 * std::sqrt(right_len) * g(s) / ((s - pole) * std::sqrt(s - alpha));
        };
        return integrate_smooth(left, 0.0, 1.0, rel_tol) +
               integrate_smooth(right, 0.0, 1.0, rel_tol);
    };

    // The symmetric excision error is odd in eps: I(eps) = PV - c1 eps -
    // c3 eps^3 - c5 eps^5 - ...; three Richardson levels cancel through eps^5.
    const double eps0 = 0.05 * std::min(pole - alpha, beta - pole);
    double level[4];
    for (int j = 0; j < 4; ++j) level[j] = excised(eps0 / (1 << j));
    for (int j = 0; j < 3; ++j) level[j] = 2.0 * level[j + 1] - level[j];
    for (int j = 0; j < 2; ++j) level[j] = (8.0 * level[j + 1] - level[j]) / 7.0;
    return (32.0 * level[1] - level[0]) / 31.0;
}

double find_root_bracketed(const RealFunction& g, double lo, double hi, double tol) {
    if (!(lo < hi)) raise(errc::invalid_parameters, "find_root_bracketed needs lo < hi");
    double fa = g(lo);
    double fb = g(hi);
    if (fa == 0.0) return lo;
    if (fb == 0.0) return hi;
    if (fa * fb > 0.0)
        raise(errc::no_sign_change, "no sign change on [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]");
    double a = lo, b = hi;
    // Bisection with an inverse-quadratic/secant step when it stays inside
    // the bracket (Brent-style).
    double c = a, fc = fa;
    for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
        const double m = 0.5 * (a + b);
        double x = m;
        if (fa != fc && fb != fc) {
            // inverse quadratic interpolation
            const double q = fa / fc, r = fb / fc, s = fb / fa;
            const double num = s * (r * (q - r) * (b - a) - (1.0 - r) * (b - c));
            const double den = (q - 1.0) * (r - 1.0) * (s - 1.0);
            if (den != 0.0) x = b + num / den;
        } else if (fa != fb) {
            x = b - fb * (b - a) / (fb - fa);
        }
        // Occasional forced bisection keeps the bracket shrinking geometrically
        // even when interpolation steps cluster at one end.
        if (iter % 3 == 2 || !(x > a && x < b)) x = m;
        const double fx = g(x);
        if (fx == 0.0) return x;
        c = b;
        fc = fb;
        if (fa * fx < 0.0) {
            b = x;
            fb = fx;
        } else {
            a = x;
            fa = fx;
        }
    }
    return 0.5 * (a + b);
}

std::pair<double, double> maximize_on_interval(const RealFunction& f, double lo, double hi,
                                               int grid, double tol) {
    if (!(lo <= hi) || grid < 2) raise(errc::invalid_parameters, "bad maximize_on_interval input");
    if (lo == hi) return {lo, f(lo)};
    double best_x = lo;
    double best_f = f(lo);
    int best_i = 0;
    for (int i = 1; i <= grid; ++i) {
        const double x = lo + (hi - lo) * i / grid;
        const double v = f(x);
        if (v > best_f) {
            best_f = v;
            best_x = x;
            best_i = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best_i - 1) / grid;
    double b = lo + (hi - lo) * std::min(grid, best_i + 1) / grid;
    // Golden-section on the bracketing cell pair.
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while ((b - a) > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
        }
    }
    double xm = 0.5 * (a + b);
    double fm = f(xm);
    if (best_f > fm) {
        fm = best_f;
        xm = best_x;
    }
    return {xm, fm};
}

}  // namespace chebmark
