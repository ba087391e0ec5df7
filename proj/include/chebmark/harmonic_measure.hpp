#pragma once

#include <memory>
#include <span>
#include <vector>

#include "chebmark/interval_system.hpp"
#include "chebmark/numerics.hpp"
#include "chebmark/pole.hpp"

namespace chebmark {

// Band measures omega_k = omega(pole, band_k, C\E); entries in [0,1], sum 1.
struct BandMeasureVector {
    std::vector<double> values;
};

// Density of the harmonic measure of E seen from one pole (the equilibrium
// measure when the pole is at infinity). Constructed once (a small linear
// solve for the correction polynomial), then immutable and safe to share.
//
// On band interiors the density is |P(t)| / (pi * D(t) * sqrt(|H(t)|)) where
// P is a short polynomial and D is 1, |t - xi|, or the conjugate-pair
// quadratic. For a complex pole the stored density is half the conjugate-pair
// density, which is the per-pole harmonic measure density.
class DensityEvaluator {
  public:
    double operator()(double t) const;
    void eval_many(std::span<const double> ts, std::span<double> out) const;

    // Accumulates weight * density onto acc, batched.
    void accumulate_many(std::span<const double> ts, double weight, std::span<double> acc) const;

    // density(t) * sqrt(|H(t)|) = |P(t)| / (pi D(t)); smooth across closed
    // bands, used by quadratures that account for the weight analytically.
    void smooth_factor_many(std::span<const double> ts, std::span<double> out) const;
    void accumulate_smooth_factor_many(std::span<const double> ts, double weight,
                                       std::span<double> acc) const;

    const IntervalSystem& system() const;
    const PolePoint& pole() const;

    // Coefficients of the degree-(l-1) correction polynomial, ascending;
    // always length l (leading entry 1 for the equilibrium case, 0 for
    // finite poles).
    const std::vector<double>& correction_coeffs() const;

    // omega_k for every band, by singular quadrature of the density.
    BandMeasureVector band_measures(const QuadratureSpec& spec = {}) const;

    double band_integral(int band, const QuadratureSpec& spec = {}) const;

    struct Impl;
    explicit DensityEvaluator(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    const Impl& impl() const { return *impl_; }

  private:
    std::shared_ptr<const Impl> impl_;
};

// Density of the equilibrium measure of E (harmonic measure at infinity).
DensityEvaluator equilibrium_density(const IntervalSystem& e);

// Density of harmonic measure with respect to the given pole. Finite poles
// must keep |xi| > 1 and stay a guard distance away from E.
DensityEvaluator pole_density(const IntervalSystem& e, const PolePoint& pole);

BandMeasureVector band_measures(const IntervalSystem& e, const PolePoint& pole);

// Independent finite-difference oracle: solves the Dirichlet problem for the
// harmonic function with boundary data 1 on band k and 0 on the rest of E on
// a truncated box, and evaluates it at the (finite) pole. Accuracy target is
// about 2e-2.
double laplace_fd_oracle(const IntervalSystem& e, const PolePoint& pole, int band,
                         double grid_step);

}  // namespace chebmark
