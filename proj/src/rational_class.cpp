#include "chebmark/rational_class.hpp"

#include <algorithm>
#include <cmath>

#include "chebmark/detail/splitmix64.hpp"
#include "chebmark/kernels.hpp"
#include "chebmark/numerics.hpp"
#include "json.hpp"

namespace chebmark {

std::vector<double> RationalFraction::deriv_coeffs() const {
    const std::size_t n = coeffs.size();
    if (n <= 1) return {0.0};
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = coeffs[i] * static_cast<double>(n - 1 - i);
    return d;
}

void r_many(const RationalFraction& r, std::span<const double> xs, std::span<double> value,
            std::span<double> deriv) {
    const auto& k = kernels::active();
    std::vector<double> p(xs.size()), dp(xs.size()), rho(xs.size()), ld(xs.size());
    k.poly_eval(r.coeffs, xs, p);
    k.poly_eval(r.deriv_coeffs(), xs, dp);
    r.poles.rho_many(xs, rho, ld);
    k.rational_combine(p, dp, rho, ld, value, deriv);
}

double r_eval(const RationalFraction& r, double x) {
    double v = 0.0, d = 0.0;
    r_many(r, {&x, 1}, {&v, 1}, {&d, 1});
    return v;
}

double r_prime(const RationalFraction& r, double x) {
    double v = 0.0, d = 0.0;
    r_many(r, {&x, 1}, {&v, 1}, {&d, 1});
    return d;
}

std::pair<double, double> sup_norm_on_E(const RationalFraction& r, const IntervalSystem& e,
                                        int grid, double tol) {
    double norm = 0.0;
    double argmax = e.endpoints().front();
    for (int k = 0; k < e.band_count(); ++k) {
        auto [lo, hi] = e.band(k);
        const auto [x, v] = maximize_on_interval(
            [&](double t) { return std::fabs(r_eval(r, t)); }, lo, hi, grid, tol);
        if (v > norm) {
            norm = v;
            argmax = x;
        }
    }
    return {norm, argmax};
}

StarMembershipReport star_membership(const RationalFraction& r, const IntervalSystem& e,
                                     int grid, double delta) {
    StarMembershipReport report;
    report.norm = sup_norm_on_E(r, e).first;
    report.min_gap_margin = std::numeric_limits<double>::infinity();
    if (e.band_count() == 1) {
        // No gaps: membership is vacuous.
        report.is_member = true;
        report.min_gap_margin = 0.0;
        report.worst_point = e.endpoints().front();
        return report;
    }
    for (int g = 0; g + 1 < e.band_count(); ++g) {
        auto [lo, hi] = e.gap(g);
        const double d = delta > 0.0 ? delta : 0.01 * (hi - lo);
        const double a = lo + d, b = hi - d;
        std::vector<double> xs(static_cast<std::size_t>(grid));
        for (int i = 0; i < grid; ++i)
            xs[static_cast<std::size_t>(i)] = a + (b - a) * i / (grid - 1);
        std::vector<double> v(xs.size()), dv(xs.size());
        r_many(r, xs, v, dv);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double margin = std::fabs(v[i]) - report.norm;
            if (margin < report.min_gap_margin) {
                report.min_gap_margin = margin;
                report.worst_point = xs[i];
            }
        }
    }
    report.is_member = report.min_gap_margin > 0.0;
    return report;
}

RationalFraction sample_star(const ExtremalFraction& ef, double eps, std::uint64_t seed) {
    if (!(eps >= 0.0 && eps < 1.0))
        raise(errc::invalid_parameters, "sample_star needs 0 <= eps < 1");
    const std::vector<double>& base = ef.numerator();
    double scale = 0.0;
    for (double c : base) scale = std::max(scale, std::fabs(c));
    detail::SplitMix64 rng(seed);
    // Star membership rejects the bulk of draws at moderate eps; the loop
    // screens candidates with a coarse norm and only pays for the exact
    // normalization when the certificate is within reach.
    constexpr int kBudget = 4096;
    for (int attempt = 0; attempt < kBudget; ++attempt) {
        RationalFraction r{base, ef.poles()};
        if (eps > 0.0)
            for (double& c : r.coeffs) c += eps * scale * rng.symmetric();
        const double coarse = sup_norm_on_E(r, ef.system(), 256, 1e-6).first;
        if (!(coarse > 0.0)) continue;
        {
            RationalFraction screened = r;
            for (double& c : screened.coeffs) c /= coarse;
            if (!star_membership(screened, ef.system()).is_member) {
                if (eps == 0.0) break;
                continue;
            }
        }
        const double norm = sup_norm_on_E(r, ef.system()).first;
        for (double& c : r.coeffs) c /= norm;
        if (star_membership(r, ef.system()).is_member) return r;
        if (eps == 0.0) break;
    }
    raise(errc::sampling_exhausted,
          "no star-class member found in " + std::to_string(kBudget) + " attempts (eps=" +
              std::to_string(eps) + ")");
}

std::string rational_to_json(const RationalFraction& r) {
    nlohmann::json j;
    j["coeffs"] = r.coeffs;
    std::vector<std::string> poles;
    poles.reserve(r.poles.poles().size());
    for (const auto& p : r.poles.poles()) poles.push_back(format_pole(p));
    j["poles"] = poles;
    return j.dump();
}

RationalFraction rational_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::vector<double> coeffs = j.at("coeffs").get<std::vector<double>>();
    std::vector<PolePoint> poles;
    for (const auto& entry : j.at("poles")) poles.push_back(parse_pole(entry.get<std::string>()));
    return RationalFraction{std::move(coeffs), PoleConfiguration::from_poles(std::move(poles))};
}

}  // namespace chebmark
