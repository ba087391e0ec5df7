#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chebmark/error.hpp"

namespace chebmark {

struct UnitHullMap;

// The compact set E = [a_1,a_2] u ... u [a_{2l-1},a_{2l}] with strictly
// increasing endpoints. Bands are closed, gaps open. Immutable once built.
class IntervalSystem {
  public:
    static IntervalSystem from_endpoints(std::vector<double> endpoints);

    int band_count() const { return static_cast<int>(endpoints_.size() / 2); }
    const std::vector<double>& endpoints() const { return endpoints_; }

    // 0-based band index.
    std::pair<double, double> band(int k) const {
        return {endpoints_[2 * static_cast<std::size_t>(k)],
                endpoints_[2 * static_cast<std::size_t>(k) + 1]};
    }

    // Open gap between band k and band k+1, 0-based, k in [0, l-2].
    std::pair<double, double> gap(int k) const;

    std::pair<double, double> hull() const { return {endpoints_.front(), endpoints_.back()}; }

    bool contains(double x) const;

    // -1 if x is not in any band.
    int band_index_of(double x) const;

    // H(x) = prod_j (x - a_j); <= 0 on E, >= 0 on gaps.
    double h_eval(double x) const;

    double total_band_length() const;

    // Affine image s(x) = scale*x + shift with s(hull) = [-1,1].
    UnitHullMap normalize_to_unit_hull() const;

  private:
    explicit IntervalSystem(std::vector<double> endpoints) : endpoints_(std::move(endpoints)) {}
    std::vector<double> endpoints_;
};

struct UnitHullMap {
    IntervalSystem system;
    double scale;
    double shift;
};

inline IntervalSystem make_interval_system(std::vector<double> endpoints) {
    return IntervalSystem::from_endpoints(std::move(endpoints));
}

inline double h_eval(const IntervalSystem& e, double x) { return e.h_eval(x); }
inline bool contains(const IntervalSystem& e, double x) { return e.contains(x); }
inline std::pair<double, double> gap(const IntervalSystem& e, int k) { return e.gap(k); }
inline std::pair<double, double> hull(const IntervalSystem& e) { return e.hull(); }

// E = [-b,-a] u [a,b], the preimage of [-1,1] under u(x) = (2x^2-b^2-a^2)/(b^2-a^2).
IntervalSystem quadratic_inverse_image(double a, double b);

// Endpoint list from a comma-separated decimal string, e.g. "-1,-0.5,0.5,1".
std::vector<double> parse_endpoint_list(const std::string& text);

}  // namespace chebmark
