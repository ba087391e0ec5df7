#include "chebmark/interval_system.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "chebmark/kernels.hpp"

namespace chebmark {

IntervalSystem IntervalSystem::from_endpoints(std::vector<double> endpoints) {
    if (endpoints.size() < 2 || endpoints.size() % 2 != 0)
        raise(errc::odd_endpoint_count,
              "need an even number (>= 2) of endpoints, got " + std::to_string(endpoints.size()));
    for (double a : endpoints)
        if (!std::isfinite(a))
            raise(errc::non_monotone_endpoints, "endpoints must be finite");
    for (std::size_t i = 1; i < endpoints.size(); ++i)
        if (!(endpoints[i - 1] < endpoints[i]))
            raise(errc::non_monotone_endpoints,
                  "endpoints must be strictly increasing at position " + std::to_string(i));
    return IntervalSystem(std::move(endpoints));
}

std::pair<double, double> IntervalSystem::gap(int k) const {
    if (k < 0 || k >= band_count() - 1)
        raise(errc::gap_index_out_of_range,
              "gap index " + std::to_string(k) + " for " + std::to_string(band_count()) +
                  " bands");
    return {endpoints_[2 * static_cast<std::size_t>(k) + 1],
            endpoints_[2 * static_cast<std::size_t>(k) + 2]};
}

bool IntervalSystem::contains(double x) const { return band_index_of(x) >= 0; }

int IntervalSystem::band_index_of(double x) const {
    for (int k = 0; k < band_count(); ++k) {
        auto [lo, hi] = band(k);
        if (x >= lo && x <= hi) return k;
    }
    return -1;
}

double IntervalSystem::h_eval(double x) const {
    double out = 0.0;
    kernels::active().linear_factor_product(endpoints_, {&x, 1}, {&out, 1});
    return out;
}

double IntervalSystem::total_band_length() const {
    double len = 0.0;
    for (int k = 0; k < band_count(); ++k) {
        auto [lo, hi] = band(k);
        len += hi - lo;
    }
    return len;
}

UnitHullMap IntervalSystem::normalize_to_unit_hull() const {
    auto [lo, hi] = hull();
    const double scale = 2.0 / (hi - lo);
    const double shift = -(hi + lo) / (hi - lo);
    std::vector<double> mapped(endpoints_.size());
    for (std::size_t i = 0; i < endpoints_.size(); ++i) mapped[i] = scale * endpoints_[i] + shift;
    mapped.front() = -1.0;
    mapped.back() = 1.0;
    return {IntervalSystem::from_endpoints(std::move(mapped)), scale, shift};
}

IntervalSystem quadratic_inverse_image(double a, double b) {
    if (!(a > 0.0) || !(a < b) || !std::isfinite(b))
        raise(errc::invalid_parameters,
              "quadratic inverse image needs 0 < a < b, got a=" + std::to_string(a) +
                  " b=" + std::to_string(b));
    IntervalSystem system = IntervalSystem::from_endpoints({-b, -a, a, b});
    // u maps both bands onto [-1,1]; spot-check the construction.
    const double denom = b * b - a * a;
    for (int k = 0; k < 2; ++k) {
        auto [lo, hi] = system.band(k);
        for (int i = 0; i <= 16; ++i) {
            const double x = lo + (hi - lo) * i / 16.0;
            const double u = (2.0 * x * x - b * b - a * a) / denom;
            if (std::fabs(u) > 1.0 + 1e-12)
                raise(errc::invalid_parameters, "inverse image sanity check failed");
        }
    }
    return system;
}

std::vector<double> parse_endpoint_list(const std::string& text) {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string token = text.substr(pos, comma - pos);
        const std::size_t first = token.find_first_not_of(" \t");
        const std::size_t last = token.find_last_not_of(" \t");
        if (first == std::string::npos)
            raise(errc::invalid_parameters, "empty endpoint in list '" + text + "'");
        token = token.substr(first, last - first + 1);
        double value = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
        if (res.ec != std::errc() || res.ptr != token.data() + token.size())
            raise(errc::invalid_parameters, "bad endpoint literal '" + token + "'");
        values.push_back(value);
        if (comma == text.size()) break;
        pos = comma + 1;
    }
    return values;
}

}  // namespace chebmark
