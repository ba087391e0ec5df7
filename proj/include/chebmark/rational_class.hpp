#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chebmark/extremal_fraction.hpp"
#include "chebmark/interval_system.hpp"

namespace chebmark {

// A member of the class R(xi_1,...,xi_2n): real numerator coefficients
// b_0..b_n (descending) over sqrt(rho).
struct RationalFraction {
    std::vector<double> coeffs;
    PoleConfiguration poles;

    std::vector<double> deriv_coeffs() const;
};

double r_eval(const RationalFraction& r, double x);
double r_prime(const RationalFraction& r, double x);
void r_many(const RationalFraction& r, std::span<const double> xs, std::span<double> value,
            std::span<double> deriv);

// (norm, argmax) of |r| over the bands of E.
std::pair<double, double> sup_norm_on_E(const RationalFraction& r, const IntervalSystem& e,
                                        int grid = 2048, double tol = 1e-10);

struct StarMembershipReport {
    bool is_member = true;
    double min_gap_margin = 0.0;  // min over gap grids of |r(x)| - ||r||_E
    double worst_point = 0.0;
    double norm = 0.0;
};

// Grid certificate for |r| > ||r||_E on the open gaps. The grid stays delta
// away from the gap endpoints, where continuity forces |r| down to
// |r(a_j)| <= ||r||_E; pass delta = 0 (or negative) to use 1% of each gap
// width.
StarMembershipReport star_membership(const RationalFraction& r, const IntervalSystem& e,
                                     int grid = 512, double delta = -1.0);

// Random star-class member near the extremal fraction: the extremal
// numerator plus an eps-scaled uniform coefficient perturbation, renormalized
// to unit norm and rejection-sampled until the star certificate passes.
// Deterministic for a given seed.
RationalFraction sample_star(const ExtremalFraction& ef, double eps, std::uint64_t seed);

// JSON round trip: {"coeffs": [...], "poles": ["inf", "2", "1.5+0.5i", ...]}.
std::string rational_to_json(const RationalFraction& r);
RationalFraction rational_from_json(const std::string& text);

}  // namespace chebmark
